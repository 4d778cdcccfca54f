#include <doctest.h>

#include <cmath>

#include "freehardy/colligation.hpp"
#include "freehardy/error.hpp"
#include "freehardy/fixtures.hpp"
#include "freehardy/parse.hpp"

using namespace freehardy;

namespace {

Mat s(cplx c) { return Mat::Constant(1, 1, c); }

Colligation shift_realization() {
  Colligation U;
  U.d = 1;
  U.state_dim = 1;
  U.A = {s(0.0)};
  U.B = {s(1.0)};
  U.C = s(1.0);
  U.D = s(0.0);
  return U;
}

// A random colligation scaled to norm 0.95.
Colligation random_colligation(int d, int state, int in, int out, Rng& rng) {
  const Mat u = random_gaussian(d * state + out, state + in, rng);
  const Mat c = 0.95 * u / op_norm(u);
  Colligation U;
  U.d = d;
  U.state_dim = state;
  U.in_dim = in;
  U.out_dim = out;
  for (int k = 0; k < d; ++k) {
    U.A.push_back(c.block(k * state, 0, state, state));
    U.B.push_back(c.block(k * state, state, state, in));
  }
  U.C = c.block(d * state, 0, out, state);
  U.D = c.block(d * state, state, out, in);
  return U;
}

}  // namespace

TEST_CASE("transfer function evaluation") {
  const Colligation shift = shift_realization();
  CHECK(shift.isometry_defect() < 1e-15);
  CHECK(shift.coisometry_defect() < 1e-15);
  CHECK(std::abs(transfer_eval(shift, MatrixPoint(1, {s(0.3)}))(0, 0) - 0.3) < 1e-15);

  Rng rng(1);
  Colligation U = random_colligation(2, 3, 2, 2, rng);
  for (auto& a : U.A) a.setZero();
  const MatrixPoint z = random_point(2, 2, 0.5, rng);
  Mat affine = kron(Mat::Identity(2, 2), U.D);
  for (int k = 0; k < 2; ++k) affine += kron(Mat::Identity(2, 2), U.C) * kron(z.mats[k], U.B[k]);
  CHECK((transfer_eval(U, z) - affine).norm() < 1e-14);

  const Colligation V = random_colligation(2, 3, 2, 1, rng);
  CHECK((transfer_eval(V, MatrixPoint::zero(2, 3)) - kron(Mat::Identity(3, 3), V.D)).norm() == 0.0);

  Colligation bad = shift_realization();
  bad.A = {s(1.0)};
  try {
    transfer_eval(bad, MatrixPoint(1, {s(1.0)}));
    FAIL("singular resolvent accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericalSingularity);
  }
}

TEST_CASE("transfer series") {
  CHECK(max_coeff_diff(transfer_series(shift_realization(), 4), parse("z1", 1, 4)) < 1e-15);

  Rng rng(2);
  for (int t = 0; t < 3; ++t) {
    const Colligation U = random_colligation(2, 3, 2, 2, rng);
    const FreeSeries f = transfer_series(U, 4);
    for (int i = 0; i < 10; ++i) {
      const MatrixPoint z = random_nilpotent_point(2, 1 + i % 5, 0.9, rng);
      CHECK((evaluate(f, z) - transfer_eval(U, z)).norm() < 1e-10);
    }
  }

  // Strictly upper-triangular A: the Neumann sum stops after the state dimension.
  Colligation U = random_colligation(2, 3, 1, 1, rng);
  for (auto& a : U.A) a = a.triangularView<Eigen::StrictlyUpper>().toDenseMatrix();
  const MatrixPoint z = random_point(2, 2, 0.5, rng);
  CHECK((evaluate(transfer_series(U, 4), z) - transfer_eval(U, z)).norm() < 1e-14);
}

TEST_CASE("canonical colligation of classical symbols") {
  const Colligation z = canonical_colligation(parse("z1", 1, 1), 6);
  CHECK(z.state_dim == 1);
  const Mat expect = (Mat(2, 2) << 0, 1, 1, 0).finished();
  CHECK((z.block().cwiseAbs() - expect).norm() < 1e-10);
  CHECK(z.isometry_defect() < 1e-10);
  CHECK(max_coeff_diff(transfer_series(z, 6), parse("z1", 1, 6)) < 1e-10);

  const Colligation zero = canonical_colligation(FreeSeries(2, 2, 1, 1), 4);
  CHECK(zero.state_dim == static_cast<int>(word_count(2, 4)));
  CHECK(zero.D.norm() == 0.0);
  CHECK(transfer_series(zero, 4).terms().empty());
  CHECK(std::abs(zero.C.norm() - 1.0) < 1e-12);

  const FreeSeries b = parse("0.8*z1*z2", 2, 2);
  const Colligation u = canonical_colligation(b, 8);
  CHECK(max_coeff_diff(transfer_series(u, 5), b.with_degree(5)) <= 1e-6);
  CHECK(u.norm() <= 1.0 + 1e-8);
  CHECK(canonical_coisometry_defect(b, u, 8, 3) <= 1e-8);
}

TEST_CASE("canonical colligation of random Schur symbols") {
  Rng rng(3);
  const int N = 6;
  for (auto [p, q] : {std::pair{1, 1}, {2, 2}, {1, 2}, {2, 1}}) {
    CAPTURE(p);
    CAPTURE(q);
    const FreeSeries B = normalize_schur(random_series(2, 2, p, q, rng), 0.9, N);
    const Colligation U = canonical_colligation(B, N);
    CHECK(canonical_coisometry_defect(B, U, N, 3) <= 1e-8);
    CHECK(max_coeff_diff(transfer_series(U, N - 3), B.with_degree(N - 3)) <= 1e-6);
  }
  CHECK_THROWS_AS(canonical_colligation(parse("1.2*z1", 1, 1), 4), Error);
}

TEST_CASE("column completion") {
  for (double r : {0.0, 0.5, 0.8}) {
    const FreeSeries a = FreeSeries::constant(1, 0, s(r));
    const ColumnCompletion c = complete_column(a, 4, 1e-8);
    CHECK(std::abs(c.a_empty(0, 0) - std::sqrt(1 - r * r)) < 1e-12);
    CHECK(max_coeff_diff(c.a, FreeSeries::constant(1, 4, s(std::sqrt(1 - r * r)))) < 1e-12);
    CHECK(c.column_gram_min_eig >= -1e-10);
  }

  const ColumnCompletion rz = complete_column(parse("0.6*z1", 1, 1), 10, 1e-8);
  CHECK(rz.a.terms().size() >= 1);
  CHECK(rz.column_norm <= 1.0 + 1e-8);
  CHECK(rz.column_gram_min_eig >= -1e-8);
  CHECK(max_coeff_diff(rz.a, parse("0.8", 1, 10)) < 1e-10);

  const ColumnCompletion two = complete_column(parse("0.6*z1", 2, 1), 6, 1e-8);
  CHECK(two.isometry_defect <= 1e-6);
  CHECK(two.column_gram_min_eig >= -1e-8);

  Rng rng(4);
  // The Gram residual of a generic completion decays with N (about -7e-6 at
  // N = 6, -1.2e-6 at N = 7); the interior isometry is exact throughout.
  const FreeSeries A = normalize_schur(random_series(2, 2, 2, 2, rng), 0.8, 6);
  const ColumnCompletion m = complete_column(A, 7, 1e-8);
  CHECK(m.isometry_defect <= 1e-10);
  CHECK(m.column_gram_min_eig >= -2e-6);
  CHECK(m.a.p() == 2);

  try {
    complete_column(parse("z1", 1, 1), 8, 1e-8);
    FAIL("extreme column completed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CeObstruction);
  }
}

TEST_CASE("colligation JSON") {
  Rng rng(5);
  const Colligation U = random_colligation(2, 3, 2, 1, rng);
  const Colligation back = colligation_from_json(nlohmann::json::parse(to_json(U).dump()));
  CHECK((back.block() - U.block()).norm() == 0.0);
  nlohmann::json broken = to_json(U);
  broken["state_dim"] = 4;
  CHECK_THROWS_AS(colligation_from_json(broken), Error);
}

#include "freehardy/colligation.hpp"

#include <algorithm>

#include "freehardy/error.hpp"
#include "freehardy/gleason.hpp"

namespace freehardy {

void Colligation::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, "colligation: " + what); };
  if (static_cast<int>(A.size()) != d || static_cast<int>(B.size()) != d) bad("need d blocks A_k and B_k");
  for (int k = 0; k < d; ++k) {
    if (A[k].rows() != state_dim || A[k].cols() != state_dim) bad("A_k must be state x state");
    if (B[k].rows() != state_dim || B[k].cols() != in_dim) bad("B_k must be state x in");
  }
  if (C.rows() != out_dim || C.cols() != state_dim) bad("C must be out x state");
  if (D.rows() != out_dim || D.cols() != in_dim) bad("D must be out x in");
}

Mat Colligation::block() const {
  validate();
  Mat u(static_cast<Eigen::Index>(d) * state_dim + out_dim, state_dim + in_dim);
  for (int k = 0; k < d; ++k) {
    u.block(static_cast<Eigen::Index>(k) * state_dim, 0, state_dim, state_dim) = A[k];
    u.block(static_cast<Eigen::Index>(k) * state_dim, state_dim, state_dim, in_dim) = B[k];
  }
  u.bottomLeftCorner(out_dim, state_dim) = C;
  u.bottomRightCorner(out_dim, in_dim) = D;
  return u;
}

double Colligation::isometry_defect() const {
  const Mat u = block();
  return op_norm(u.adjoint() * u - Mat::Identity(u.cols(), u.cols()));
}

double Colligation::coisometry_defect() const {
  const Mat u = block();
  return op_norm(u * u.adjoint() - Mat::Identity(u.rows(), u.rows()));
}

Mat transfer_eval(const Colligation& U, const MatrixPoint& Z) {
  U.validate();
  if (Z.d != U.d) throw Error(ErrorKind::InvalidInput, "point and colligation have different d");
  const int n = Z.n;
  const Mat In = Mat::Identity(n, n);
  Mat out = kron(In, U.D);
  if (U.state_dim == 0) return out;
  Mat za = Mat::Zero(static_cast<Eigen::Index>(n) * U.state_dim, static_cast<Eigen::Index>(n) * U.state_dim);
  Mat zb = Mat::Zero(static_cast<Eigen::Index>(n) * U.state_dim, static_cast<Eigen::Index>(n) * U.in_dim);
  for (int k = 0; k < U.d; ++k) {
    za += kron(Z.mats[k], U.A[k]);
    zb += kron(Z.mats[k], U.B[k]);
  }
  const Mat resolvent = Mat::Identity(za.rows(), za.cols()) - za;
  Eigen::PartialPivLU<Mat> lu(resolvent);
  if (!(lu.rcond() > 1e-13)) throw Error(ErrorKind::NumericalSingularity, "I - ZA is singular");
  return out + kron(In, U.C) * lu.solve(zb);
}

FreeSeries transfer_series(const Colligation& U, int deg) {
  U.validate();
  FreeSeries f(U.d, deg, U.out_dim, U.in_dim);
  if (!U.D.isZero(0.0)) f.set(Word::unit(U.d), U.D);
  if (U.state_dim == 0) return f;
  // prefix[w] = C A_{w_1} ... A_{w_k}; coefficient at w j is prefix[w] B_j.
  std::vector<std::pair<Word, Mat>> level{{Word::unit(U.d), U.C}};
  for (int len = 0; len < deg; ++len) {
    std::vector<std::pair<Word, Mat>> next;
    for (const auto& [w, pre] : level)
      for (int j = 1; j <= U.d; ++j) {
        std::vector<int> l = w.letters();
        l.push_back(j);
        const Word wj(U.d, l);
        const Mat c = pre * U.B[j - 1];
        if (!c.isZero(0.0)) f.set(wj, c);
        next.emplace_back(wj, pre * U.A[j - 1]);
      }
    level = std::move(next);
  }
  return f;
}

Colligation canonical_colligation(const FreeSeries& B, int N, double rank_tol) {
  const DbrModel m = dbr_model(dagger_series(B), N, rank_tol);
  const GleasonData gs = gleason_data(m);
  Colligation U;
  U.d = B.d();
  U.state_dim = m.rank();
  U.in_dim = B.q();
  U.out_dim = B.p();
  U.A = gs.X;
  U.B = gs.Bvec;
  U.C = m.k0_adj();
  U.D = B.coeff(Word::unit(B.d()));
  return U;
}

double canonical_coisometry_defect(const FreeSeries& B, const Colligation& U, int N, int margin,
                                   double rank_tol) {
  const DbrModel m = dbr_model(dagger_series(B), N, rank_tol);
  if (m.rank() != U.state_dim) throw Error(ErrorKind::InvalidInput, "colligation does not match the model");
  const Mat Q = m.interior(N - margin);
  const Mat u = U.block();
  const Eigen::Index r = m.rank(), k = Q.cols();
  Mat P = Mat::Zero(u.rows(), U.d * k + U.out_dim);
  for (int j = 0; j < U.d; ++j) P.block(j * r, j * k, r, k) = Q;
  P.bottomRightCorner(U.out_dim, U.out_dim) = Mat::Identity(U.out_dim, U.out_dim);
  return op_norm(P.adjoint() * (u * u.adjoint() - Mat::Identity(u.rows(), u.rows())) * P);
}

ColumnCompletion complete_column(const FreeSeries& A, int N, double tol, double rank_tol) {
  const DbrModel m = dbr_model(dagger_series(A), N, rank_tol);
  const GleasonData gs = gleason_data(m);
  if (min_eig(gs.gap) < -tol)
    throw Error(ErrorKind::Inconsistency, "I - A(0)^*A(0) - A^*A is indefinite; the truncation is too coarse");
  ColumnCompletion out;
  out.a_empty = psd_sqrt(gs.gap);
  if (op_norm(out.a_empty) <= std::sqrt(tol))
    throw Error(ErrorKind::CeObstruction, "a(0) vanishes: the column is extreme and admits no completion");
  const int q = A.q(), p = A.p();
  const Mat ahat_a0 = m.coords(m.symbol() * out.a_empty);

  Colligation& U = out.U;
  U.d = A.d();
  U.state_dim = m.rank();
  U.in_dim = q;
  U.out_dim = p + q;
  U.A = gs.X;
  U.B = gs.Bvec;
  U.C.resize(p + q, m.rank());
  U.C << m.k0_adj(), -ahat_a0.adjoint();
  U.D.resize(p + q, q);
  U.D << A.coeff(Word::unit(A.d())), out.a_empty;

  const FreeSeries column = transfer_series(U, N);
  out.a = FreeSeries(A.d(), N, q, q);
  for (const auto& [w, c] : column.terms()) {
    const Mat bottom = c.bottomRows(q);
    if (!bottom.isZero(0.0)) out.a.set(w, bottom);
  }
  const FreeSeries stacked = vstack(A.with_degree(N), out.a);
  const Mat M = multiplier_matrix(stacked, Side::Left, N).dense();
  out.column_norm = op_norm(M);
  out.column_gram_min_eig = min_eig(Mat::Identity(M.cols(), M.cols()) - M.adjoint() * M);

  const Mat Q = m.interior(N - (A.deg() + 1));
  Mat P = Mat::Zero(m.rank() + q, Q.cols() + q);
  P.topLeftCorner(m.rank(), Q.cols()) = Q;
  P.bottomRightCorner(q, q) = Mat::Identity(q, q);
  const Mat u = U.block();
  out.isometry_defect = op_norm(P.adjoint() * (u.adjoint() * u - Mat::Identity(u.cols(), u.cols())) * P);
  return out;
}

nlohmann::json to_json(const Colligation& U) {
  nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
  for (int k = 0; k < U.d; ++k) {
    a.push_back(matrix_to_json(U.A[k]));
    b.push_back(matrix_to_json(U.B[k]));
  }
  return {{"d", U.d},     {"state_dim", U.state_dim}, {"in_dim", U.in_dim}, {"out_dim", U.out_dim},
          {"A", a},       {"B", b},                   {"C", matrix_to_json(U.C)},
          {"D", matrix_to_json(U.D)}};
}

Colligation colligation_from_json(const nlohmann::json& j) {
  Colligation U;
  U.d = j.at("d").get<int>();
  U.state_dim = j.at("state_dim").get<int>();
  U.in_dim = j.at("in_dim").get<int>();
  U.out_dim = j.at("out_dim").get<int>();
  auto mat = [](const nlohmann::json& m) { return matrix_from_json(m.at("re"), m.value("im", nlohmann::json())); };
  for (const auto& m : j.at("A")) U.A.push_back(mat(m));
  for (const auto& m : j.at("B")) U.B.push_back(mat(m));
  U.C = mat(j.at("C"));
  U.D = mat(j.at("D"));
  U.validate();
  return U;
}

}  // namespace freehardy

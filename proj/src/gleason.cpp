#include "freehardy/gleason.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freehardy/error.hpp"

namespace freehardy {

namespace {

Mat lstar(int k, int d, int N, int p) {
  return kron(Mat(creation(Side::Left, k, d, N).matrix.adjoint()), Mat::Identity(p, p));
}

Mat clip_psd(const Mat& h) {
  auto e = hermitian_eig(h);
  return e.vectors * e.values.cwiseMax(0.0).asDiagonal() * e.vectors.adjoint();
}

}  // namespace

Mat DbrModel::onb() const { return V * lambda.cwiseSqrt().asDiagonal(); }

Mat DbrModel::coords(const Mat& f) const {
  return lambda.cwiseSqrt().cwiseInverse().asDiagonal() * (V.adjoint() * f);
}

double DbrModel::membership_residual(const Mat& f) const { return op_norm(f - V * (V.adjoint() * f)); }

Mat DbrModel::k0_adj() const { return onb().topRows(p); }

Mat DbrModel::interior(int len) const {
  if (len < 0) return Mat(rank(), 0);
  const auto cols = static_cast<Eigen::Index>(word_count(B.d(), std::min(len, N))) * p;
  const Mat span = lambda.cwiseSqrt().asDiagonal() * V.adjoint().leftCols(cols);
  return range_basis(span, 1e-8);
}

Mat DbrModel::symbol() const { return coefficient_stack(B, N); }

DbrModel dbr_model(const FreeSeries& B, int N, double rank_tol, double tol) {
  if (B.deg() > N) throw Error(ErrorKind::InvalidInput, "truncation N must be at least deg(B)");
  DbrModel m;
  m.B = B;
  m.N = N;
  m.p = B.p();
  m.q = B.q();
  m.T = multiplier_matrix(B, Side::Right, N).dense();
  const double norm = op_norm(m.T);
  if (norm > 1.0 + tol)
    throw Error(ErrorKind::NotSchur, "multiplier norm estimate " + std::to_string(norm) + " exceeds 1");
  m.D = Mat::Identity(m.T.rows(), m.T.rows()) - m.T * m.T.adjoint();
  const auto eig = hermitian_eig(m.D);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i)
    if (eig.values(i) > rank_tol) keep.push_back(i);
  m.lambda.resize(static_cast<Eigen::Index>(keep.size()));
  m.V.resize(m.D.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    m.lambda(static_cast<Eigen::Index>(c)) = eig.values(keep[c]);
    m.V.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(keep[c]);
  }
  fix_column_phases(m.V);
  return m;
}

std::vector<FreeSeries> gleason_vector(const FreeSeries& B) {
  std::vector<FreeSeries> out;
  const int deg = std::max(B.deg() - 1, 0);
  for (int j = 1; j <= B.d(); ++j) {
    FreeSeries g(B.d(), deg, B.p(), B.q());
    for (const auto& [w, c] : B.terms())
      if (!w.empty() && w[0] == j)
        g.set(Word(B.d(), std::vector<int>(w.letters().begin() + 1, w.letters().end())), c);
    out.push_back(std::move(g));
  }
  return out;
}

GleasonData gleason_data(const DbrModel& m) {
  GleasonData gs;
  const Mat b = m.symbol();
  const Mat onb = m.onb();
  const Mat b0 = m.B.coeff(Word::unit(m.B.d()));
  gs.gap = Mat::Identity(m.q, m.q) - b0.adjoint() * b0;
  for (int j = 1; j <= m.B.d(); ++j) {
    const Mat L = lstar(j, m.B.d(), m.N, m.p);
    gs.Bvec.push_back(m.coords(L * b));
    const Mat lv = L * onb;
    gs.X.push_back(m.coords(lv));
    gs.compression_residual = std::max(gs.compression_residual, op_norm(lv - m.V * (m.V.adjoint() * lv)));
    gs.gap -= gs.Bvec.back().adjoint() * gs.Bvec.back();
  }
  gs.gap = hermitian_part(gs.gap);
  return gs;
}

GapLadder extremality_gap(const FreeSeries& B, int N, double tol, double rank_tol) {
  GapLadder out;
  for (int n = N; n >= std::max(N - 2, std::max(B.deg(), 1)); --n) {
    const DbrModel m = dbr_model(B, n, rank_tol);
    const GleasonData gs = gleason_data(m);
    if (n == N) out.gap = gs.gap;
    out.N.push_back(n);
    out.gap_norm.push_back(op_norm(gs.gap));
  }
  out.extremal = out.gap_norm.front() <= tol;
  bool shrinking = out.gap_norm.size() >= 2;
  for (std::size_t i = 0; i + 1 < out.gap_norm.size(); ++i)
    shrinking = shrinking && out.gap_norm[i] < 0.9 * out.gap_norm[i + 1];
  out.trend = out.extremal ? "extremal" : (shrinking ? "CE (trend)" : "not extremal");
  return out;
}

FreeSeries square_completion(const FreeSeries& B) {
  const int n = std::max(B.p(), B.q());
  FreeSeries out(B.d(), B.deg(), n, n);
  for (const auto& [w, c] : B.terms()) {
    Mat m = Mat::Zero(n, n);
    m.topLeftCorner(B.p(), B.q()) = c;
    out.set(w, m);
  }
  return out;
}

Mat support(const FreeSeries& A) {
  if (A.terms().empty()) return Mat(A.q(), 0);
  Mat cols(A.q(), static_cast<Eigen::Index>(A.terms().size()) * A.p());
  Eigen::Index off = 0;
  for (const auto& [w, c] : A.terms()) {
    cols.middleCols(off, A.p()) = c.adjoint();
    off += A.p();
  }
  return range_basis(cols, 1e-12);
}

AEmptySq a_empty_sq(const FreeSeries& A, int N, double tol, double rank_tol) {
  const DbrModel m = dbr_model(A, N, rank_tol);
  const GleasonData gs = gleason_data(m);
  if (min_eig(gs.gap) < -tol)
    throw Error(ErrorKind::Inconsistency,
                "I - A(0)^*A(0) - A^*A is indefinite; the truncation is too coarse");
  AEmptySq out;
  out.value = clip_psd(gs.gap);
  const Mat b = m.symbol();
  out.membership_residual = m.membership_residual(b);
  if (out.membership_residual <= 1e-6) {
    const Mat ahat = m.coords(b);
    out.via_hat = Mat((Mat::Identity(m.q, m.q) + ahat.adjoint() * ahat).inverse());
    out.cross_check_error = op_norm(out.value - *out.via_hat);
  }
  return out;
}

LInvariance l_invariance_test(const FreeSeries& A, int N, double tol, double rank_tol) {
  const DbrModel m = dbr_model(A, N, rank_tol);
  const GleasonData gs = gleason_data(m);
  const Mat a0 = A.coeff(Word::unit(A.d()));
  const Mat W = Mat::Identity(m.q, m.q) - a0.adjoint() * a0;
  Mat G = Mat::Zero(m.q, m.q);
  for (const Mat& bv : gs.Bvec) G += bv.adjoint() * bv;
  const auto e = hermitian_eig(W);
  std::vector<Eigen::Index> ker, ran;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) (e.values(i) > tol ? ran : ker).push_back(i);
  LInvariance out;
  if (!ker.empty()) {
    Mat K(m.q, static_cast<Eigen::Index>(ker.size()));
    for (std::size_t c = 0; c < ker.size(); ++c) K.col(static_cast<Eigen::Index>(c)) = e.vectors.col(ker[c]);
    if (op_norm(K.adjoint() * G * K) > tol) {
      out.rho = std::numeric_limits<double>::infinity();
      out.invariant = false;
      return out;
    }
  }
  if (!ran.empty()) {
    Mat R(m.q, static_cast<Eigen::Index>(ran.size()));
    RVec s(static_cast<Eigen::Index>(ran.size()));
    for (std::size_t c = 0; c < ran.size(); ++c) {
      R.col(static_cast<Eigen::Index>(c)) = e.vectors.col(ran[c]);
      s(static_cast<Eigen::Index>(c)) = 1.0 / std::sqrt(e.values(ran[c]));
    }
    const Mat S = s.asDiagonal();
    out.rho = std::max(0.0, max_eig(S * R.adjoint() * G * R * S));
  }
  out.invariant = out.rho < 1.0 - tol;
  return out;
}

double exact_gs_residual(const DbrModel& m, const GleasonData& gs, int margin, double tol) {
  if (min_eig(gs.gap) < -tol) throw Error(ErrorKind::Inconsistency, "gap is indefinite");
  const Mat a0 = psd_sqrt(gs.gap);
  const Mat ahat_a0 = m.coords(m.symbol() * a0);
  const Mat k0 = m.k0_adj().adjoint();
  Mat R = Mat::Identity(m.rank(), m.rank()) - k0 * k0.adjoint() - ahat_a0 * ahat_a0.adjoint();
  for (const Mat& x : gs.X) R -= x.adjoint() * x;
  const Mat Q = m.interior(m.N - margin);
  return op_norm(Q.adjoint() * R * Q);
}

double clark_intertwining_residual(const FreeSeries& B, int N, int margin, double rank_tol) {
  if (B.p() != B.q()) throw Error(ErrorKind::InvalidInput, "intertwining check needs a square symbol");
  const DbrModel m = dbr_model(B, N, rank_tol);
  const GleasonData gs = gleason_data(m);
  // The right model of B pairs with the Clark functional of B^dag.
  const GnsModel g = gns_build(clark_moments(dagger_series(B), N), N, rank_tol);
  const Mat I = Mat::Identity(m.T.rows(), m.T.rows());
  // Weighted Cauchy transform: GNS coordinates -> Fock coordinates -> H(B).
  const Mat phi = m.coords((I - m.T) * g.E.adjoint());
  const Mat b0 = B.coeff(Word::unit(B.d()));
  const Mat w = (Mat::Identity(m.q, m.q) - b0).inverse();
  const Mat k0s = m.k0_adj();
  const Mat Q = m.interior(N - margin);
  double worst = 0.0;
  for (int k = 0; k < B.d(); ++k) {
    const Mat lhs = phi * g.pi[k].adjoint() * phi.adjoint();
    const Mat rhs = gs.X[k] + gs.Bvec[k] * w * k0s;
    worst = std::max(worst, op_norm(Q.adjoint() * (lhs - rhs) * Q));
  }
  return worst;
}

CeReport ce_test(const FreeSeries& B, int N, double tol, const std::vector<Pinning>& pins, double rank_tol) {
  CeReport r;
  r.gleason = extremality_gap(B, N, tol, rank_tol);
  r.verdict_ce = r.gleason.extremal;

  const FreeSeries sq = square_completion(B);
  const GnsModel g = gns_build(clark_moments(dagger_series(sq), N), N, rank_tol);
  const int n = sq.p();
  const Mat b0 = sq.coeff(Word::unit(sq.d()));
  const Mat vac = g.embedding() * (Mat::Identity(n, n) - b0);
  const Mat rest = range_basis(g.E.rightCols(g.E.cols() - n), 1e-7);
  r.szego_distance = op_norm(vac - rest * (rest.adjoint() * vac));
  r.szego_ce = r.szego_distance <= std::sqrt(tol);
  if (r.szego_ce != r.verdict_ce) r.flags.push_back("szego-disagrees");

  if (!pins.empty()) {
    KernelSpec spec{KernelKind::DbrRight, dagger_series(B), std::max(B.deg(), N)};
    r.membership_ce = true;
    for (int k = 0; k < B.q(); ++k) {
      const FreeSeries f = right_scale(B, Mat::Identity(B.q(), B.q()).col(k));
      r.membership.push_back(membership_norm(spec, f, pins, tol));
      r.membership_ce = r.membership_ce && r.membership.back().infinite;
    }
    if (r.membership_ce != r.verdict_ce) r.flags.push_back("membership-disagrees");
  }

  if (B.p() == B.q()) {
    r.cuntz = cuntz_check(g, tol);
    if (r.cuntz->is_cuntz != r.verdict_ce) r.flags.push_back("cuntz-disagrees");
  }
  return r;
}

}  // namespace freehardy

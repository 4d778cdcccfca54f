#include "freehardy/clark.hpp"

#include <algorithm>
#include <cmath>

#include "freehardy/error.hpp"

namespace freehardy {

namespace {

Mat kron_identity(const SpMat& s, int p) { return kron(Mat(s), Mat::Identity(p, p)); }

}  // namespace

Mat MomentFunctional::at(const Word& w) const {
  if (static_cast<int>(w.size()) > deg) throw Error(ErrorKind::InvalidMoments, "moment " + w.str() + " not stored");
  auto it = moments.find(w);
  return it == moments.end() ? Mat(Mat::Zero(p, p)) : it->second;
}

Mat MomentFunctional::pair(const Word& alpha, const Word& beta) const {
  if (auto g = left_quotient(alpha, beta)) return at(*g);
  if (auto g = left_quotient(beta, alpha)) return at(*g).adjoint();
  return Mat::Zero(p, p);
}

MomentFunctional clark_moments(const FreeSeries& B, int deg) {
  if (B.p() != B.q()) throw Error(ErrorKind::InvalidInput, "Clark moments need a square symbol");
  FreeSeries b = B.with_degree(deg);
  const FreeSeries H = cayley(b, CayleyDirection::SchurToHerglotz);
  MomentFunctional mu{B.d(), B.p(), deg, {}, Mat()};
  const Mat h0 = H.coeff(Word::unit(B.d()));
  mu.moments.emplace(Word::unit(B.d()), hermitian_part(h0));
  mu.im_h0 = (h0 - h0.adjoint()) / cplx(0.0, 2.0);
  for (const auto& [w, c] : H.terms())
    if (!w.empty()) mu.moments.emplace(dagger(w), 0.5 * c.adjoint());
  return mu;
}

Mat herglotz_from_moments(const MomentFunctional& mu, const MatrixPoint& Z, int N) {
  if (Z.d != mu.d) throw Error(ErrorKind::InvalidInput, "point and functional have different d");
  if (N > mu.deg) throw Error(ErrorKind::InvalidInput, "truncation exceeds stored moments");
  if (Z.row_norm() >= 1.0) throw Error(ErrorKind::InvalidInput, "point is not a strict row contraction");
  Mat out = kron(Mat::Identity(Z.n, Z.n), cplx(0.0, 1.0) * mu.im_h0);
  out += kron(Mat::Identity(Z.n, Z.n), mu.at(Word::unit(mu.d)));
  // Grade-by-grade Z^alpha; the word order matches evaluate.
  std::vector<std::pair<Word, Mat>> level{{Word::unit(mu.d), Mat::Identity(Z.n, Z.n)}};
  for (int len = 1; len <= N; ++len) {
    std::vector<std::pair<Word, Mat>> next;
    for (const auto& [w, zw] : level)
      for (int k = 1; k <= mu.d; ++k) {
        std::vector<int> l = w.letters();
        l.push_back(k);
        Word a(mu.d, l);
        Mat za = zw * Z.mats[k - 1];
        const Mat c = 2.0 * mu.at(dagger(a)).adjoint();
        if (!c.isZero(0.0)) out += kron(za, c);
        next.emplace_back(std::move(a), std::move(za));
      }
    level = std::move(next);
  }
  return out;
}

Mat moment_matrix(const MomentFunctional& mu, int N) {
  if (N > mu.deg) throw Error(ErrorKind::InvalidMoments, "moment matrix over words <= N needs moments up to N");
  const auto words = enumerate(mu.d, N);
  const auto n = static_cast<Eigen::Index>(words.size());
  Mat M(n * mu.p, n * mu.p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const Mat blk = mu.pair(words[i], words[j]);
      M.block(i * mu.p, j * mu.p, mu.p, mu.p) = blk;
      if (i != j) M.block(j * mu.p, i * mu.p, mu.p, mu.p) = blk.adjoint();
    }
  return M;
}

Mat GnsModel::word_block(const Word& w) const {
  return E.middleCols(static_cast<Eigen::Index>(word_index(w)) * p, p);
}

Mat GnsModel::span_of_words(int len) const {
  const auto cols = static_cast<Eigen::Index>(word_count(d, std::max(len, 0))) * p;
  if (len < 0) return Mat(rank, 0);
  return range_basis(E.leftCols(cols), 1e-7);
}

GnsModel gns_build(const MomentFunctional& mu, int N, double rank_tol) {
  GnsModel g;
  g.d = mu.d;
  g.p = mu.p;
  g.N = N;
  g.moment = moment_matrix(mu, N);
  const auto eig = hermitian_eig(g.moment);
  const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  if (eig.values(0) < -1e-8 * std::max(1.0, norm))
    throw Error(ErrorKind::InvalidMoments,
                "moment matrix is indefinite (min eigenvalue " + std::to_string(eig.values(0)) + ")");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i)
    if (eig.values(i) > rank_tol * norm) keep.push_back(i);
  g.rank = static_cast<int>(keep.size());
  const Eigen::Index D = g.moment.rows();
  Mat Vr(D, g.rank);
  RVec lam(g.rank);
  for (int c = 0; c < g.rank; ++c) {
    Vr.col(c) = eig.vectors.col(keep[c]);
    lam(c) = eig.values(keep[c]);
  }
  fix_column_phases(Vr);
  g.E = lam.cwiseSqrt().asDiagonal() * Vr.adjoint();
  g.e_pinv = Vr * lam.cwiseSqrt().cwiseInverse().asDiagonal();

  // Pi_k sends the class of e_alpha to the class of e_{k alpha}; it is fixed
  // on the span of words <= N - 1 and set to zero on its complement.
  const Eigen::Index inner = N >= 1 ? static_cast<Eigen::Index>(word_count(mu.d, N - 1)) * mu.p : 0;
  const Mat e_int = g.E.leftCols(inner);
  const Mat e_int_pinv = pinv(e_int, std::sqrt(rank_tol));
  g.interior = range_basis(e_int, std::sqrt(rank_tol));
  for (int k = 1; k <= mu.d; ++k) {
    const Mat S = kron_identity(creation(Side::Left, k, mu.d, N).matrix, mu.p);
    g.pi.push_back(g.E * S.leftCols(inner) * e_int_pinv);
  }
  return g;
}

double gns_isometry_defect(const GnsModel& model) {
  const Mat& W = model.interior;
  const Mat I = Mat::Identity(W.cols(), W.cols());
  double worst = 0.0;
  for (int k = 0; k < model.d; ++k)
    for (int j = 0; j < model.d; ++j) {
      Mat blk = W.adjoint() * model.pi[k].adjoint() * model.pi[j] * W;
      if (k == j) blk -= I;
      worst = std::max(worst, op_norm(blk));
    }
  return worst;
}

CuntzCheck cuntz_check(const GnsModel& model, double tol) {
  Mat defect = Mat::Identity(model.rank, model.rank);
  for (const Mat& pk : model.pi) defect -= pk * pk.adjoint();
  const Mat& W = model.interior;
  CuntzCheck c;
  c.defect = op_norm(W.adjoint() * defect * W);
  c.is_cuntz = c.defect <= tol;
  return c;
}

CauchyTransform cauchy_transform_matrix(const GnsModel& gns, const FreeSeries& B, Side side, double rank_tol) {
  KernelSpec spec{KernelKind::Herglotz, B, gns.N};
  const Mat kl = coefficient_kernel_matrix(spec, gns.d, gns.N);
  const Mat U = kron_identity(transpose_unitary(gns.d, gns.N).matrix, gns.p);
  CauchyTransform c;
  c.side = side;
  if (side == Side::Left) {
    c.kmat = kl;
    c.word_columns = kl * U;  // column alpha is column alpha^dag of K^L
  } else {
    c.kmat = U * kl * U;  // K^R_{alpha,beta} = K^L_{alpha^dag,beta^dag}
    c.word_columns = c.kmat;
  }
  c.map = c.word_columns * gns.e_pinv;
  c.map_pinv = pinv(c.map, std::sqrt(rank_tol));
  const Mat kpinv = pinv(c.kmat, rank_tol);
  c.isometry_residual = op_norm(c.map.adjoint() * kpinv * c.map - Mat::Identity(gns.rank, gns.rank));
  return c;
}

VbModel vb_build(const MomentFunctional& mu, const FreeSeries& B, int N, double rank_tol) {
  VbModel vb{gns_build(mu, N, rank_tol), {}, {}, {}, {}};
  vb.cauchy = cauchy_transform_matrix(vb.gns, B, Side::Left, rank_tol);
  for (const Mat& pk : vb.gns.pi) {
    vb.V.push_back(vb.cauchy.map * pk * vb.cauchy.map_pinv);
    vb.V_adj.push_back(vb.cauchy.map * pk.adjoint() * vb.cauchy.map_pinv);
  }
  // Columns K_alpha, alpha != 0, of the coefficient kernel.
  const Eigen::Index p = mu.p;
  vb.range_basis = range_basis(vb.cauchy.kmat.rightCols(vb.cauchy.kmat.cols() - p), std::sqrt(rank_tol));
  return vb;
}

double vb_adjoint_residual(const VbModel& vb, const Pinning& pin, int j) {
  if (j < 1 || j > vb.gns.d) throw Error(ErrorKind::InvalidInput, "letter out of range");
  const int N = vb.gns.N;
  const Vec x = kernel_vector(pin, N).coords;
  Pinning zero = pin;
  zero.Z = MatrixPoint::zero(pin.Z.d, pin.Z.n);
  const Vec x0 = kernel_vector(zero, N).coords;
  Pinning shifted = pin;
  shifted.v = pin.Z.mats[j - 1] * pin.v;
  const Vec xj = kernel_vector(shifted, N).coords;
  const Mat& K = vb.cauchy.kmat;
  const Vec f1 = K * (x - x0);
  const Vec f2 = K * xj;
  const Vec diff = vb.V_adj[j - 1] * f1 - f2;
  return (vb.cauchy.map_pinv * diff).norm();
}

nlohmann::json to_json(const MomentFunctional& mu) {
  nlohmann::json m = nlohmann::json::array();
  for (const auto& [w, c] : mu.moments) {
    nlohmann::json t = matrix_to_json(c);
    t["word"] = to_json(w);
    m.push_back(t);
  }
  return {{"d", mu.d}, {"p", mu.p}, {"deg", mu.deg}, {"moments", m}, {"im_h0", matrix_to_json(mu.im_h0)}};
}

nlohmann::json to_json(const GnsModel& model) {
  nlohmann::json pis = nlohmann::json::array();
  for (const Mat& pk : model.pi) pis.push_back(matrix_to_json(pk));
  return {{"d", model.d},         {"p", model.p},   {"N", model.N},
          {"rank", model.rank},   {"moment_matrix", matrix_to_json(model.moment)},
          {"pi", pis},            {"embedding", matrix_to_json(model.embedding())}};
}

}  // namespace freehardy

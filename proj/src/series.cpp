#include "freehardy/series.hpp"

#include <algorithm>
#include <cmath>

#include "freehardy/error.hpp"

namespace freehardy {

namespace {

// Memoized Z^alpha built from the prefix Z^{alpha without last letter}.
class PowerCache {
 public:
  explicit PowerCache(const MatrixPoint& z) : z_(z) {}

  const Mat& get(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    Mat val;
    if (w.empty()) {
      val = Mat::Identity(z_.n, z_.n);
    } else {
      std::vector<int> pre(w.letters().begin(), w.letters().end() - 1);
      val = get(Word(w.d(), pre)) * z_.mats[w.letters().back() - 1];
    }
    return cache_.emplace(w, std::move(val)).first->second;
  }

 private:
  const MatrixPoint& z_;
  std::map<Word, Mat> cache_;
};

void require_same_d(const FreeSeries& f, const FreeSeries& g) {
  if (f.d() != g.d()) throw Error(ErrorKind::InvalidInput, "series alphabet mismatch");
}

}  // namespace

MatrixPoint::MatrixPoint(int d_, std::vector<Mat> mats_) : d(d_), mats(std::move(mats_)) {
  if (d < 1 || static_cast<int>(mats.size()) != d)
    throw Error(ErrorKind::InvalidInput, "matrix point needs exactly d matrices");
  n = static_cast<int>(mats[0].rows());
  for (const Mat& m : mats)
    if (m.rows() != n || m.cols() != n)
      throw Error(ErrorKind::InvalidInput, "matrix point entries must share a square size");
}

MatrixPoint MatrixPoint::zero(int d, int n) {
  return MatrixPoint(d, std::vector<Mat>(static_cast<std::size_t>(d), Mat::Zero(n, n)));
}

Mat MatrixPoint::power(const Word& w) const {
  if (w.d() != d) throw Error(ErrorKind::InvalidInput, "word alphabet does not match point");
  Mat out = Mat::Identity(n, n);
  for (int l : w.letters()) out = out * mats[l - 1];
  return out;
}

double MatrixPoint::row_norm() const {
  Mat row(n, static_cast<Eigen::Index>(n) * d);
  for (int k = 0; k < d; ++k) row.middleCols(static_cast<Eigen::Index>(k) * n, n) = mats[k];
  return op_norm(row);
}

MatrixPoint MatrixPoint::scaled(cplx c) const {
  MatrixPoint out = *this;
  for (Mat& m : out.mats) m *= c;
  return out;
}

MatrixPoint direct_sum(const MatrixPoint& a, const MatrixPoint& b) {
  if (a.d != b.d) throw Error(ErrorKind::InvalidInput, "direct sum of points with different d");
  std::vector<Mat> mats;
  for (int k = 0; k < a.d; ++k) {
    Mat m = Mat::Zero(a.n + b.n, a.n + b.n);
    m.topLeftCorner(a.n, a.n) = a.mats[k];
    m.bottomRightCorner(b.n, b.n) = b.mats[k];
    mats.push_back(m);
  }
  return MatrixPoint(a.d, mats);
}

MatrixPoint similar(const MatrixPoint& z, const Mat& s) {
  Mat sinv = s.inverse();
  std::vector<Mat> mats;
  for (const Mat& m : z.mats) mats.push_back(s * m * sinv);
  return MatrixPoint(z.d, mats);
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

Mat matrix_from_json(const nlohmann::json& re, const nlohmann::json& im) {
  if (!re.is_array() || re.empty() || !re[0].is_array())
    throw Error(ErrorKind::InvalidInput, "matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = static_cast<Eigen::Index>(re[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(re[i].size()) != cols)
      throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
    for (Eigen::Index j = 0; j < cols; ++j) {
      double imag = im.is_null() ? 0.0 : im.at(i).at(j).get<double>();
      m(i, j) = cplx(re[i][j].get<double>(), imag);
    }
  }
  return m;
}

nlohmann::json to_json(const MatrixPoint& z) {
  nlohmann::json mats = nlohmann::json::array();
  for (const Mat& m : z.mats) mats.push_back(matrix_to_json(m));
  return {{"d", z.d}, {"n", z.n}, {"mats", mats}};
}

MatrixPoint matrix_point_from_json(const nlohmann::json& j) {
  std::vector<Mat> mats;
  for (const auto& m : j.at("mats")) mats.push_back(matrix_from_json(m.at("re"), m.value("im", nlohmann::json())));
  return MatrixPoint(j.at("d").get<int>(), mats);
}

FreeSeries::FreeSeries(int d, int deg, int p, int q) : d_(d), deg_(deg), p_(p), q_(q) {
  if (d < 1 || deg < 0 || p < 1 || q < 1)
    throw Error(ErrorKind::InvalidInput, "series needs d >= 1, deg >= 0, p, q >= 1");
}

FreeSeries FreeSeries::constant(int d, int deg, const Mat& c) {
  FreeSeries f(d, deg, static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  f.set(Word::unit(d), c);
  return f;
}

FreeSeries FreeSeries::identity(int d, int deg, int p) { return constant(d, deg, Mat::Identity(p, p)); }

FreeSeries FreeSeries::monomial(const Word& w, int deg, const Mat& c) {
  FreeSeries f(w.d(), deg, static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  f.set(w, c);
  return f;
}

void FreeSeries::check_word(const Word& w) const {
  if (w.d() != d_) throw Error(ErrorKind::InvalidInput, "word alphabet does not match series");
  if (static_cast<int>(w.size()) > deg_)
    throw Error(ErrorKind::InvalidInput, "word " + w.str() + " exceeds series degree");
}

Mat FreeSeries::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Mat::Zero(p_, q_) : it->second;
}

void FreeSeries::set(const Word& w, const Mat& c) {
  check_word(w);
  if (c.rows() != p_ || c.cols() != q_) throw Error(ErrorKind::InvalidInput, "coefficient shape mismatch");
  terms_[w] = c;
}

void FreeSeries::add(const Word& w, const Mat& c) {
  check_word(w);
  if (c.rows() != p_ || c.cols() != q_) throw Error(ErrorKind::InvalidInput, "coefficient shape mismatch");
  auto it = terms_.find(w);
  if (it == terms_.end())
    terms_.emplace(w, c);
  else
    it->second += c;
}

void FreeSeries::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.isZero(0.0))
      it = terms_.erase(it);
    else
      ++it;
  }
}

FreeSeries FreeSeries::with_degree(int deg) const {
  FreeSeries out(d_, deg, p_, q_);
  for (const auto& [w, c] : terms_)
    if (static_cast<int>(w.size()) <= deg) out.terms_.emplace(w, c);
  return out;
}

FreeSeries FreeSeries::adjoint_coeffs() const {
  FreeSeries out(d_, deg_, q_, p_);
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, c.adjoint());
  return out;
}

FreeSeries& FreeSeries::operator+=(const FreeSeries& o) {
  if (o.d_ != d_ || o.p_ != p_ || o.q_ != q_) throw Error(ErrorKind::InvalidInput, "series shape mismatch");
  deg_ = std::min(deg_, o.deg_);
  *this = with_degree(deg_);
  for (const auto& [w, c] : o.terms_)
    if (static_cast<int>(w.size()) <= deg_) add(w, c);
  return *this;
}

FreeSeries& FreeSeries::operator-=(const FreeSeries& o) {
  FreeSeries neg = o;
  neg *= -1.0;
  return *this += neg;
}

FreeSeries& FreeSeries::operator*=(cplx c) {
  for (auto& [w, m] : terms_) m *= c;
  return *this;
}

FreeSeries operator+(FreeSeries a, const FreeSeries& b) { return a += b; }
FreeSeries operator-(FreeSeries a, const FreeSeries& b) { return a -= b; }
FreeSeries operator*(cplx c, FreeSeries a) { return a *= c; }

double max_coeff_diff(const FreeSeries& f, const FreeSeries& g) {
  if (f.p() != g.p() || f.q() != g.q()) throw Error(ErrorKind::InvalidInput, "series shape mismatch");
  double err = 0.0;
  for (const auto& [w, c] : f.terms()) err = std::max(err, (c - g.coeff(w)).cwiseAbs().maxCoeff());
  for (const auto& [w, c] : g.terms())
    if (!f.terms().count(w)) err = std::max(err, c.cwiseAbs().maxCoeff());
  return err;
}

FreeSeries vstack(const FreeSeries& f, const FreeSeries& g) {
  require_same_d(f, g);
  if (f.q() != g.q()) throw Error(ErrorKind::InvalidInput, "vstack needs equal column counts");
  FreeSeries out(f.d(), std::min(f.deg(), g.deg()), f.p() + g.p(), f.q());
  auto words = f.terms();
  for (const auto& [w, c] : g.terms()) words.emplace(w, c);
  for (const auto& [w, unused] : words) {
    (void)unused;
    if (static_cast<int>(w.size()) > out.deg()) continue;
    Mat c(out.p(), out.q());
    c << f.coeff(w), g.coeff(w);
    out.set(w, c);
  }
  return out;
}

FreeSeries right_scale(const FreeSeries& f, const Mat& c) {
  if (c.rows() != f.q()) throw Error(ErrorKind::InvalidInput, "right_scale shape mismatch");
  FreeSeries out(f.d(), f.deg(), f.p(), static_cast<int>(c.cols()));
  for (const auto& [w, m] : f.terms()) out.set(w, m * c);
  return out;
}

Mat evaluate(const FreeSeries& f, const MatrixPoint& z) {
  if (f.d() != z.d) throw Error(ErrorKind::InvalidInput, "series and point have different d");
  Mat out = Mat::Zero(static_cast<Eigen::Index>(z.n) * f.p(), static_cast<Eigen::Index>(z.n) * f.q());
  PowerCache powers(z);
  for (const auto& [w, c] : f.terms()) out += kron(powers.get(w), c);
  return out;
}

FreeSeries multiply(const FreeSeries& f, const FreeSeries& g) {
  require_same_d(f, g);
  if (f.q() != g.p()) throw Error(ErrorKind::InvalidInput, "multiply: inner coefficient shapes differ");
  FreeSeries out(f.d(), std::min(f.deg(), g.deg()), f.p(), g.q());
  for (const auto& [b, fb] : f.terms())
    for (const auto& [c, gc] : g.terms())
      if (static_cast<int>(b.size() + c.size()) <= out.deg()) out.add(concat(b, c), fb * gc);
  return out;
}

FreeSeries right_product(const FreeSeries& f, const FreeSeries& g) {
  require_same_d(f, g);
  if (f.q() != g.p()) throw Error(ErrorKind::InvalidInput, "right_product: inner coefficient shapes differ");
  const int deg = std::min(f.deg(), g.deg());
  // H is the symbol of M^R_F M^R_G, read off from its action on the vacuum.
  const Mat mf = multiplier_matrix(f, Side::Right, deg).dense();
  const Mat mg = multiplier_matrix(g, Side::Right, deg).dense();
  const Mat vac = mf * mg.leftCols(g.q());
  FreeSeries h = series_from_stack(vac, f.d(), deg, f.p());
  h.prune();
  return h;
}

FreeSeries dagger_series(const FreeSeries& f) {
  FreeSeries out(f.d(), f.deg(), f.p(), f.q());
  for (const auto& [w, c] : f.terms()) out.set(dagger(w), c);
  return out;
}

FreeSeries invert_series(const FreeSeries& f) {
  if (f.p() != f.q()) throw Error(ErrorKind::NotInvertible, "only square series can be inverted");
  const Mat f0 = f.coeff(Word::unit(f.d()));
  Eigen::FullPivLU<Mat> lu(f0);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw Error(ErrorKind::NotInvertible, "constant term is singular");
  const Mat f0inv = lu.inverse();
  FreeSeries g(f.d(), f.deg(), f.p(), f.p());
  g.set(Word::unit(f.d()), f0inv);
  // Grade recursion: G_alpha = -F_0^{-1} sum_{beta gamma = alpha, beta != 0} F_beta G_gamma.
  for (const Word& a : enumerate(f.d(), f.deg())) {
    if (a.empty()) continue;
    Mat acc = Mat::Zero(f.p(), f.p());
    bool any = false;
    for (std::size_t k = 1; k <= a.size(); ++k) {
      Word beta(a.d(), std::vector<int>(a.letters().begin(), a.letters().begin() + k));
      auto it = f.terms().find(beta);
      if (it == f.terms().end()) continue;
      Word gamma(a.d(), std::vector<int>(a.letters().begin() + k, a.letters().end()));
      auto jt = g.terms().find(gamma);
      if (jt == g.terms().end()) continue;
      acc += it->second * jt->second;
      any = true;
    }
    if (any) g.set(a, -f0inv * acc);
  }
  return g;
}

FreeSeries cayley(const FreeSeries& f, CayleyDirection dir) {
  if (f.p() != f.q()) throw Error(ErrorKind::NotInvertible, "Cayley transform needs square coefficients");
  const FreeSeries id = FreeSeries::identity(f.d(), f.deg(), f.p());
  const Mat f0 = f.coeff(Word::unit(f.d()));
  if (dir == CayleyDirection::SchurToHerglotz) {
    if (op_norm(f0) >= 1.0) throw Error(ErrorKind::NotInvertible, "||B(0)|| must be < 1");
    return multiply(id + f, invert_series(id - f));
  }
  return multiply(f - id, invert_series(f + id));
}

FockOperator multiplier_matrix(const FreeSeries& f, Side side, int N) {
  const auto words = enumerate(f.d(), N);
  const auto n = static_cast<Eigen::Index>(words.size());
  const int p = f.p(), q = f.q();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const Word& g : words) {
    const auto col = static_cast<Eigen::Index>(word_index(g)) * q;
    for (const auto& [b, c] : f.terms()) {
      if (static_cast<int>(g.size() + b.size()) > N) continue;
      const Word img = side == Side::Left ? concat(b, g) : concat(g, b);
      const auto row = static_cast<Eigen::Index>(word_index(img)) * p;
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j)
          if (c(i, j) != cplx(0.0)) trip.emplace_back(row + i, col + j, c(i, j));
    }
  }
  FockOperator op{f.d(), N, p, q, SpMat(n * p, n * q), side == Side::Left ? "M^L" : "M^R"};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

double schur_norm_estimate(const FreeSeries& f, int N) {
  const FockOperator m = multiplier_matrix(f, Side::Left, N);
  if (std::min(m.matrix.rows(), m.matrix.cols()) <= 1024) return op_norm(m.dense());
  // Power iteration on M^*M for large truncations.
  Vec x = Vec::Ones(m.matrix.cols()).normalized();
  double est = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Vec y = m.matrix.adjoint() * (m.matrix * x);
    double nrm = y.norm();
    if (nrm == 0.0) return 0.0;
    x = y / nrm;
    if (std::abs(nrm - est) <= 1e-14 * nrm) {
      est = nrm;
      break;
    }
    est = nrm;
  }
  return std::sqrt(est);
}

Mat coefficient_stack(const FreeSeries& f, int N) {
  const auto n = static_cast<Eigen::Index>(word_count(f.d(), N));
  Mat out = Mat::Zero(n * f.p(), f.q());
  for (const auto& [w, c] : f.terms())
    if (static_cast<int>(w.size()) <= N) out.middleRows(static_cast<Eigen::Index>(word_index(w)) * f.p(), f.p()) = c;
  return out;
}

FreeSeries series_from_stack(const Mat& stack, int d, int N, int p) {
  const auto n = static_cast<Eigen::Index>(word_count(d, N));
  if (stack.rows() != n * p) throw Error(ErrorKind::InvalidInput, "coefficient stack has the wrong height");
  FreeSeries f(d, N, p, static_cast<int>(stack.cols()));
  for (Eigen::Index i = 0; i < n; ++i) {
    Mat c = stack.middleRows(i * p, p);
    if (!c.isZero(0.0)) f.set(word_at(d, static_cast<std::size_t>(i)), c);
  }
  return f;
}

nlohmann::json to_json(const FreeSeries& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : f.terms()) {
    nlohmann::json t = matrix_to_json(c);
    t["word"] = to_json(w);
    terms.push_back(t);
  }
  return {{"d", f.d()}, {"deg", f.deg()}, {"p", f.p()}, {"q", f.q()}, {"terms", terms}};
}

FreeSeries series_from_json(const nlohmann::json& j) {
  try {
    FreeSeries f(j.at("d").get<int>(), j.at("deg").get<int>(), j.value("p", 1), j.value("q", 1));
    for (const auto& t : j.at("terms"))
      f.add(word_from_json(t.at("word"), f.d()), matrix_from_json(t.at("re"), t.value("im", nlohmann::json())));
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed series JSON: ") + e.what());
  }
}

}  // namespace freehardy

#include "freehardy/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "freehardy/error.hpp"

namespace freehardy {

namespace {

// Symbols a kernel needs, computed once per spec.
struct Prepared {
  KernelKind kind;
  int deg;
  int p = 1;
  FreeSeries sym;  // A (DbrLeft), A^dag (DbrRight) or H (Herglotz)
};

Prepared prepare(const KernelSpec& spec) {
  Prepared pr{spec.kind, spec.deg, 1, {}};
  if (spec.kind == KernelKind::Szego) return pr;
  if (!spec.B) throw Error(ErrorKind::InvalidInput, std::string(to_string(spec.kind)) + " kernel needs a symbol");
  const FreeSeries b = spec.B->with_degree(std::min(spec.B->deg(), spec.deg));
  pr.p = b.p();
  switch (spec.kind) {
    case KernelKind::DbrLeft:
      pr.sym = b;
      break;
    case KernelKind::DbrRight:
      pr.sym = dagger_series(b);
      break;
    case KernelKind::Herglotz:
      if (b.p() != b.q()) throw Error(ErrorKind::InvalidInput, "Herglotz kernel needs a square symbol");
      pr.sym = cayley(spec.B->with_degree(spec.deg), CayleyDirection::SchurToHerglotz);
      break;
    default:
      break;
  }
  return pr;
}

Mat eval_prepared(const Prepared& pr, const MatrixPoint& Z, const MatrixPoint& W, const Mat& P,
                  const Mat& symZ, const Mat& symW) {
  const Mat K = szego_eval(Z, W, P, pr.deg);
  if (pr.kind == KernelKind::Szego) return K;
  const Mat Ip = Mat::Identity(pr.p, pr.p);
  const Mat KI = kron(K, Ip);
  switch (pr.kind) {
    case KernelKind::DbrLeft: {
      const Mat Iq = Mat::Identity(pr.sym.q(), pr.sym.q());
      return KI - symZ * kron(K, Iq) * symW.adjoint();
    }
    case KernelKind::DbrRight: {
      const Mat Iq = Mat::Identity(pr.sym.q(), pr.sym.q());
      // Same grade recursion as the Szego sum, acting on the middle block.
      Mat t = symZ * kron(P, Iq) * symW.adjoint();
      Mat acc = t;
      for (int k = 1; k <= pr.deg; ++k) {
        Mat next = Mat::Zero(t.rows(), t.cols());
        for (int j = 0; j < Z.d; ++j) next += kron(Z.mats[j], Ip) * t * kron(W.mats[j], Ip).adjoint();
        t = std::move(next);
        if (t.isZero(0.0)) break;
        acc += t;
      }
      return KI - acc;
    }
    case KernelKind::Herglotz:
      return 0.5 * (symZ * KI + KI * symW.adjoint());
    default:
      return K;
  }
}

Mat symbol_at(const Prepared& pr, const MatrixPoint& Z) {
  if (pr.kind == KernelKind::Szego) return Mat();
  return evaluate(pr.sym, Z);
}

// Y_i as an (n p) x k matrix.
Mat pin_outer(const Pinning& pin, int p) {
  if (pin.h) {
    if (pin.h->size() != p) throw Error(ErrorKind::InvalidInput, "pin coefficient vector has the wrong size");
    return kron(Mat(pin.y), Mat(*pin.h));
  }
  return kron(Mat(pin.y), Mat::Identity(p, p));
}

void check_pin(const Pinning& pin) {
  if (pin.y.size() != pin.Z.n || pin.v.size() != pin.Z.n)
    throw Error(ErrorKind::InvalidInput, "pin vectors must match the point level");
}

Mat coefficient_prepared(const Prepared& pr, const Word& alpha, const Word& beta) {
  const int p = pr.p;
  Mat out = alpha == beta ? Mat(Mat::Identity(p, p)) : Mat(Mat::Zero(p, p));
  const std::size_t m = std::min(alpha.size(), beta.size());
  const auto& la = alpha.letters();
  const auto& lb = beta.letters();
  switch (pr.kind) {
    case KernelKind::Szego:
      break;
    case KernelKind::DbrLeft:
      // A(Z)(Z^g P W^g* (x) I)A(W)^* lands on (a g, b g).
      for (std::size_t k = 0; k <= m; ++k) {
        if (!std::equal(la.end() - k, la.end(), lb.end() - k)) break;
        Word a(alpha.d(), std::vector<int>(la.begin(), la.end() - k));
        Word b(beta.d(), std::vector<int>(lb.begin(), lb.end() - k));
        out -= pr.sym.coeff(a) * pr.sym.coeff(b).adjoint();
      }
      break;
    case KernelKind::DbrRight:
      // (Z^g (x) I) A^dag(Z) (P (x) I) A^dag(W)^* (W^g (x) I)^* lands on (g a, g b).
      for (std::size_t k = 0; k <= m; ++k) {
        if (!std::equal(la.begin(), la.begin() + k, lb.begin())) break;
        Word a(alpha.d(), std::vector<int>(la.begin() + k, la.end()));
        Word b(beta.d(), std::vector<int>(lb.begin() + k, lb.end()));
        out -= pr.sym.coeff(a) * pr.sym.coeff(b).adjoint();
      }
      break;
    case KernelKind::Herglotz: {
      out.setZero();
      if (auto g = right_quotient(beta, alpha)) out += 0.5 * pr.sym.coeff(*g);
      if (auto g = right_quotient(alpha, beta)) out += 0.5 * pr.sym.coeff(*g).adjoint();
      break;
    }
  }
  return out;
}


}  // namespace

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Szego: return "szego";
    case KernelKind::DbrLeft: return "dbr-left";
    case KernelKind::DbrRight: return "dbr-right";
    case KernelKind::Herglotz: return "herglotz";
  }
  return "?";
}

int KernelSpec::coeff_dim() const {
  if (kind == KernelKind::Szego || !B) return 1;
  return B->p();
}

Mat szego_eval(const MatrixPoint& Z, const MatrixPoint& W, const Mat& P, int deg) {
  if (Z.d != W.d) throw Error(ErrorKind::InvalidInput, "points have different d");
  if (P.rows() != Z.n || P.cols() != W.n) throw Error(ErrorKind::InvalidInput, "P must be n x m");
  Mat t = P;
  Mat acc = P;
  for (int k = 1; k <= deg; ++k) {
    Mat next = Mat::Zero(P.rows(), P.cols());
    for (int j = 0; j < Z.d; ++j) next += Z.mats[j] * t * W.mats[j].adjoint();
    t = std::move(next);
    if (t.isZero(0.0)) break;
    acc += t;
  }
  return acc;
}

FockVector kernel_vector(const Pinning& pin, int deg) {
  check_pin(pin);
  const int p = pin.h ? static_cast<int>(pin.h->size()) : 1;
  FockVector x = FockVector::zero(pin.Z.d, deg, p);
  const Vec h = pin.h ? *pin.h : Vec::Ones(1);
  // Breadth-first over words: Z^{alpha k} v = Z^alpha Z_k v is not a prefix
  // recursion, so build Z^alpha v from the right: Z^{k alpha} v = Z_k (Z^alpha v).
  std::vector<Vec> cur(1, pin.v);
  std::vector<Word> words(1, Word::unit(pin.Z.d));
  for (int len = 0; len <= deg; ++len) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const cplx c = cur[i].dot(pin.y);  // (Z^alpha v)^* y
      const auto base = static_cast<Eigen::Index>(word_index(words[i])) * p;
      x.coords.segment(base, p) = c * h;
    }
    if (len == deg) break;
    std::vector<Vec> nxt;
    std::vector<Word> nw;
    for (int k = 1; k <= pin.Z.d; ++k)
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::vector<int> l{k};
        l.insert(l.end(), words[i].letters().begin(), words[i].letters().end());
        nw.emplace_back(pin.Z.d, l);
        nxt.push_back(pin.Z.mats[k - 1] * cur[i]);
      }
    cur = std::move(nxt);
    words = std::move(nw);
  }
  return x;
}

Mat kernel_eval(const KernelSpec& spec, const MatrixPoint& Z, const MatrixPoint& W, const Mat& P) {
  const Prepared pr = prepare(spec);
  return eval_prepared(pr, Z, W, P, symbol_at(pr, Z), symbol_at(pr, W));
}

Mat gram_matrix(const KernelSpec& spec, const std::vector<Pinning>& pins) {
  if (pins.empty()) throw Error(ErrorKind::InvalidInput, "no pins");
  const Prepared pr = prepare(spec);
  std::vector<Mat> sym, outer;
  std::vector<Eigen::Index> offset(1, 0);
  for (const auto& pin : pins) {
    check_pin(pin);
    sym.push_back(symbol_at(pr, pin.Z));
    outer.push_back(pin_outer(pin, pr.p));
    offset.push_back(offset.back() + outer.back().cols());
  }
  Mat G(offset.back(), offset.back());
  for (std::size_t i = 0; i < pins.size(); ++i)
    for (std::size_t j = i; j < pins.size(); ++j) {
      const Mat P = pins[i].v * pins[j].v.adjoint();
      const Mat k = eval_prepared(pr, pins[i].Z, pins[j].Z, P, sym[i], sym[j]);
      Mat blk = outer[i].adjoint() * k * outer[j];
      if (i == j) blk = hermitian_part(blk);
      G.block(offset[i], offset[j], blk.rows(), blk.cols()) = blk;
      if (i != j) G.block(offset[j], offset[i], blk.cols(), blk.rows()) = blk.adjoint();
    }
  return G;
}

GramCheck gram_psd_check(const KernelSpec& spec, const std::vector<Pinning>& pins, double tol) {
  GramCheck r;
  r.gram = gram_matrix(spec, pins);
  r.min_eig = min_eig(r.gram);
  r.norm = op_norm(r.gram);
  r.certified = r.min_eig >= -tol * std::max(1.0, r.norm);
  return r;
}

Membership membership_norm(const KernelSpec& spec, const FreeSeries& f, const std::vector<Pinning>& pins,
                           double tol, double cap) {
  if (f.q() != 1 || f.p() != spec.coeff_dim())
    throw Error(ErrorKind::InvalidInput, "f must be a column series matching the kernel coefficient space");
  const Mat G = gram_matrix(spec, pins);
  const Prepared pr = prepare(spec);
  // Rows of the rank-one Gram: u_i = Y_i^* f(Z_i) v_i.
  Vec u(G.rows());
  Eigen::Index off = 0;
  for (const auto& pin : pins) {
    const Mat y = pin_outer(pin, pr.p);
    const Vec col = y.adjoint() * evaluate(f, pin.Z) * pin.v;
    u.segment(off, col.size()) = col;
    off += col.size();
  }
  const Mat Gf = u * u.adjoint();
  const double slack = tol * std::max(1.0, u.squaredNorm());
  auto ok = [&](double lam) { return min_eig(lam * lam * G - Gf) >= -slack; };
  Membership m;
  m.cap = cap;
  if (ok(0.0)) return m;
  if (!ok(cap)) {
    m.infinite = true;
    return m;
  }
  double lo = 0.0, hi = cap;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  m.lambda = hi;
  return m;
}

Mat coefficient_kernel(const KernelSpec& spec, const Word& alpha, const Word& beta) {
  if (static_cast<int>(alpha.size()) > spec.deg || static_cast<int>(beta.size()) > spec.deg)
    throw Error(ErrorKind::InvalidInput, "coefficient kernel words exceed the kernel degree");
  return coefficient_prepared(prepare(spec), alpha, beta);
}

Mat coefficient_kernel_matrix(const KernelSpec& spec, int d, int N) {
  const auto words = enumerate(d, N);
  KernelSpec s = spec;
  s.deg = std::max(spec.deg, N);
  const Prepared pr = prepare(s);
  const int p = pr.p;
  const auto n = static_cast<Eigen::Index>(words.size());
  Mat out(n * p, n * p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out.block(i * p, j * p, p, p) = coefficient_prepared(pr, words[i], words[j]);
  return out;
}

nlohmann::json to_json(const Pinning& pin) {
  auto vec = [](const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
  };
  nlohmann::json j = {{"Z", to_json(pin.Z)}, {"y", vec(pin.y)}, {"v", vec(pin.v)}};
  if (pin.h) j["h"] = vec(*pin.h);
  return j;
}

Pinning pinning_from_json(const nlohmann::json& j) {
  auto vec = [](const nlohmann::json& a) {
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = cplx(a[i].at(0).get<double>(), a[i].at(1).get<double>());
    return v;
  };
  Pinning pin{matrix_point_from_json(j.at("Z")), vec(j.at("y")), vec(j.at("v")), std::nullopt};
  if (j.contains("h")) pin.h = vec(j.at("h"));
  return pin;
}

}  // namespace freehardy

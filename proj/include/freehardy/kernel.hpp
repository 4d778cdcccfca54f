#pragma once

#include <optional>
#include <vector>

#include "freehardy/fock.hpp"
#include "freehardy/series.hpp"

namespace freehardy {

enum class KernelKind { Szego, DbrLeft, DbrRight, Herglotz };

const char* to_string(KernelKind kind);

// For DbrLeft and DbrRight, B is the Schur symbol; for Herglotz, B is the
// Schur symbol whose Cayley transform H = (I + B)(I - B)^{-1} is used.
struct KernelSpec {
  KernelKind kind = KernelKind::Szego;
  std::optional<FreeSeries> B;
  int deg = 8;

  // Coefficient-space dimension of the kernel values (1 for Szego).
  int coeff_dim() const;
};

struct Pinning {
  MatrixPoint Z;
  Vec y;
  Vec v;
  std::optional<Vec> h;
};

// sum_{|alpha| <= deg} Z^alpha P (W^alpha)^*
Mat szego_eval(const MatrixPoint& Z, const MatrixPoint& W, const Mat& P, int deg);

// Coordinates x_alpha = <Z^alpha v, y> (x) h, so that <x, f> = (y (x) h)^* f(Z) v.
FockVector kernel_vector(const Pinning& pin, int deg);

// DbrLeft:  K[P] (x) I - A(Z) (K[P] (x) I) A(W)^*
// DbrRight: K[P] (x) I - sum_alpha (Z^alpha (x) I) A^dag(Z) (P (x) I) A^dag(W)^* (W^alpha (x) I)^*
// Herglotz: (H(Z) (K[P] (x) I) + (K[P] (x) I) H(W)^*) / 2
Mat kernel_eval(const KernelSpec& spec, const MatrixPoint& Z, const MatrixPoint& W, const Mat& P);

// Block (i, j) is Y_i^* K(Z_i, Z_j)[v_i v_j^*] Y_j with Y_i = y_i (x) h_i, or
// y_i (x) e_k for every k when h_i is absent.
Mat gram_matrix(const KernelSpec& spec, const std::vector<Pinning>& pins);

struct GramCheck {
  Mat gram;
  double min_eig = 0.0;
  double norm = 0.0;
  bool certified = false;
};
GramCheck gram_psd_check(const KernelSpec& spec, const std::vector<Pinning>& pins, double tol);

struct Membership {
  bool infinite = false;
  double lambda = 0.0;  // meaningful when !infinite
  double cap = 1e3;
};
// Smallest lambda with lambda^2 G - G_f >= -tol max(1, ||G_f||), where G_f is
// the Gram matrix of f(Z)(.)f(W)^*. f is a p x 1 series.
Membership membership_norm(const KernelSpec& spec, const FreeSeries& f, const std::vector<Pinning>& pins,
                           double tol, double cap = 1e3);

// K_{alpha,beta} with K(Z,W)[P] = sum Z^alpha P (W^beta)^* (x) K_{alpha,beta}.
Mat coefficient_kernel(const KernelSpec& spec, const Word& alpha, const Word& beta);

// Block matrix [K_{alpha,beta}] over enumerate(d, N).
Mat coefficient_kernel_matrix(const KernelSpec& spec, int d, int N);

nlohmann::json to_json(const Pinning& pin);
Pinning pinning_from_json(const nlohmann::json& j);

}  // namespace freehardy

#pragma once

#include <map>
#include <vector>

#include "freehardy/fock.hpp"
#include "freehardy/kernel.hpp"
#include "freehardy/series.hpp"

namespace freehardy {

// Values mu(L^alpha) of a Clark functional for |alpha| <= deg. im_h0 keeps
// Im H(0), which the functional itself does not see.
struct MomentFunctional {
  int d = 1;
  int p = 1;
  int deg = 0;
  std::map<Word, Mat> moments;
  Mat im_h0;

  Mat at(const Word& w) const;
  // mu((L^alpha)^* L^beta) by prefix reduction.
  Mat pair(const Word& alpha, const Word& beta) const;
};

// mu(1) = Re H_0, mu(L^alpha) = (H_{alpha^dag})^* / 2, with H = cayley(B).
MomentFunctional clark_moments(const FreeSeries& B, int deg);

// i Im H(0) + sum_{|alpha| <= N} Z^alpha (x) 2 mu(L^{alpha^dag})^*, the
// Neumann expansion of (id (x) mu)((I + Z L^*)(I - Z L^*)^{-1}).
Mat herglotz_from_moments(const MomentFunctional& mu, const MatrixPoint& Z, int N);

// Blocks mu((L^alpha)^* L^beta) over enumerate(d, N). Needs mu.deg >= N.
Mat moment_matrix(const MomentFunctional& mu, int N);

struct GnsModel {
  int d = 1;
  int p = 1;
  int N = 0;
  Mat moment;
  // moment = E^* E with E = Lambda^{1/2} V_r^*; e_pinv = V_r Lambda^{-1/2}.
  Mat E;
  Mat e_pinv;
  std::vector<Mat> pi;
  // Orthonormal basis (GNS coordinates) of the span of words <= N - 1.
  Mat interior;
  int rank = 0;

  // GNS coordinates of e_alpha (x) I_p: an r x p block.
  Mat word_block(const Word& w) const;
  Mat embedding() const { return word_block(Word::unit(d)); }
  // Orthonormal basis of the span of words <= len.
  Mat span_of_words(int len) const;
};

GnsModel gns_build(const MomentFunctional& mu, int N, double rank_tol);

// max over k, j of ||W^* (Pi_k^* Pi_j - delta_kj I) W|| for W = model.interior.
double gns_isometry_defect(const GnsModel& model);

struct CuntzCheck {
  bool is_cuntz = false;
  double defect = 0.0;
};
// ||W^* (I - sum Pi_k Pi_k^*) W|| on the interior.
CuntzCheck cuntz_check(const GnsModel& model, double tol);

// Cauchy transform in coefficient coordinates. Herglotz-space norms are
// ||f||^2 = f^* kmat^+ f with kmat the left (or right) coefficient kernel.
struct CauchyTransform {
  Side side = Side::Left;
  Mat kmat;          // coefficient kernel over enumerate(d, N)
  Mat word_columns;  // column alpha = coefficients of K^L_{alpha^dag} (or K^R_alpha)
  Mat map;           // GNS coordinates -> coefficient coordinates
  Mat map_pinv;
  double isometry_residual = 0.0;  // || map^* kmat^+ map - I ||
};
CauchyTransform cauchy_transform_matrix(const GnsModel& gns, const FreeSeries& B, Side side, double rank_tol);

// V_k = C Pi_k C^+ on Herglotz coefficient coordinates, with its Herglotz-space
// adjoint C Pi_k^* C^+.
struct VbModel {
  GnsModel gns;
  CauchyTransform cauchy;
  std::vector<Mat> V;
  std::vector<Mat> V_adj;
  Mat range_basis;  // coefficient functions K_alpha, alpha != 0
};
VbModel vb_build(const MomentFunctional& mu, const FreeSeries& B, int N, double rank_tol);

// Herglotz-norm residual of V_j^*(K{Z,y,v} - K{0,y,v}) - K{Z,y,Z_j v}; j is 1-based.
double vb_adjoint_residual(const VbModel& vb, const Pinning& pin, int j);

nlohmann::json to_json(const MomentFunctional& mu);
nlohmann::json to_json(const GnsModel& model);

}  // namespace freehardy

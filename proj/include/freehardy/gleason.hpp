#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freehardy/clark.hpp"
#include "freehardy/kernel.hpp"
#include "freehardy/series.hpp"

namespace freehardy {

// H(B) as the range of D^{1/2}, D = I - T T^*, where T is right multiplication
// by B(Z) on F^2_{d,N} (x) C^q. This space is invariant under L^* (x) I, which
// is what makes the Gleason data below exact. Vectors are Fock coordinates
// (word-major, p components); H(B) coordinates refer to the basis
// V_r Lambda^{1/2}.
struct DbrModel {
  FreeSeries B;
  int N = 0;
  int p = 1;
  int q = 1;
  Mat T;
  Mat D;
  RVec lambda;  // retained eigenvalues, descending
  Mat V;        // retained eigenvectors

  int rank() const { return static_cast<int>(lambda.size()); }
  Mat onb() const;
  // H(B) coordinates Lambda^{-1/2} V^* f of Fock vectors f (columns).
  Mat coords(const Mat& f) const;
  // ||(I - Q) f|| with Q the projection onto the retained range.
  double membership_residual(const Mat& f) const;
  // K_0^*: H(B) coordinates -> value at 0, the empty-word block.
  Mat k0_adj() const;
  // Orthonormal basis (H(B) coordinates) of the span of D e_alpha, |alpha| <= len.
  Mat interior(int len) const;
  // The Fock coefficient stack of B, sum e_alpha (x) B_alpha.
  Mat symbol() const;
};

DbrModel dbr_model(const FreeSeries& B, int N, double rank_tol, double tol = 1e-8);

// Component j has coefficients B_{j alpha}.
std::vector<FreeSeries> gleason_vector(const FreeSeries& B);

struct GleasonData {
  std::vector<Mat> Bvec;  // r x q, H(B) coordinates of L_j^* b
  std::vector<Mat> X;     // r x r, compression of L_j^*
  Mat gap;                // I - B_0^* B_0 - Bvec^* Bvec
  double compression_residual = 0.0;
};
GleasonData gleason_data(const DbrModel& model);

struct GapLadder {
  std::vector<int> N;
  std::vector<double> gap_norm;
  Mat gap;  // at the finest truncation
  bool extremal = false;
  std::string trend;  // "extremal", "CE (trend)", "not extremal"
};
GapLadder extremality_gap(const FreeSeries& B, int N, double tol, double rank_tol = 1e-10);

// Zero columns when p > q, zero rows when q > p.
FreeSeries square_completion(const FreeSeries& B);

// Orthonormal basis of span{ran B_alpha^*}.
Mat support(const FreeSeries& A);

struct AEmptySq {
  Mat value;                   // clipped to PSD
  std::optional<Mat> via_hat;  // (I + Ahat^* Ahat)^{-1} when A h is a member
  double membership_residual = 0.0;
  double cross_check_error = 0.0;
};
AEmptySq a_empty_sq(const FreeSeries& A, int N, double tol, double rank_tol = 1e-10);

struct LInvariance {
  bool invariant = false;
  double rho = 0.0;  // +inf when A^* A is nonzero on ker(I - A_0^* A_0)
};
LInvariance l_invariance_test(const FreeSeries& A, int N, double tol, double rank_tol = 1e-10);

// ||Q (I - X^* X - K_0 K_0^* - (Ahat a_0)(Ahat a_0)^*) Q|| on the interior.
double exact_gs_residual(const DbrModel& model, const GleasonData& gs, int margin, double tol);

// ||Q (Phi Pi_k^* Phi^* - (X_k + Bvec_k (I - B_0)^{-1} K_0^*)) Q||, maximized over k,
// where Phi is the weighted Cauchy transform from the GNS space of the Clark
// functional of B^dag onto H(B).
double clark_intertwining_residual(const FreeSeries& B, int N, int margin, double rank_tol = 1e-10);

struct CeReport {
  GapLadder gleason;
  double szego_distance = 0.0;
  bool szego_ce = false;
  std::vector<Membership> membership;
  bool membership_ce = false;
  std::optional<CuntzCheck> cuntz;
  bool verdict_ce = false;
  std::vector<std::string> flags;
};
// The membership criterion is only meaningful when the pin kernel vectors
// span the words below the top pin level.
CeReport ce_test(const FreeSeries& B, int N, double tol, const std::vector<Pinning>& pins,
                 double rank_tol = 1e-10);

}  // namespace freehardy

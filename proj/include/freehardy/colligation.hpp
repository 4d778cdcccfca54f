#pragma once

#include <vector>

#include "freehardy/series.hpp"

namespace freehardy {

struct Colligation {
  int d = 1;
  int state_dim = 0;
  int in_dim = 1;
  int out_dim = 1;
  std::vector<Mat> A;  // state -> state
  std::vector<Mat> B;  // in -> state
  Mat C;               // state -> out
  Mat D;               // in -> out

  // [A_1 B_1; ...; A_d B_d; C D]
  Mat block() const;
  double norm() const { return op_norm(block()); }
  double isometry_defect() const;    // ||U^*U - I||
  double coisometry_defect() const;  // ||UU^* - I||
  void validate() const;
};

// I (x) D + (I (x) C)(I - sum Z_k (x) A_k)^{-1}(sum Z_k (x) B_k)
Mat transfer_eval(const Colligation& U, const MatrixPoint& Z);

// D at the empty word; C A_{i1} ... A_{ik} B_j at i1...ik j.
FreeSeries transfer_series(const Colligation& U, int deg);

// State space H(B^dag) in the right model; A = X, B = Gleason vector,
// C = evaluation at 0, D = B(0). The transfer function is B.
Colligation canonical_colligation(const FreeSeries& B, int N, double rank_tol = 1e-10);

// ||P^*(U U^* - I) P|| for U = canonical_colligation(B, N, rank_tol), where P
// keeps the state coordinates spanned by words <= N - margin in every one of
// the d state slots, plus the output. States built from top-level words do
// not satisfy the Gleason relations of the truncated space, so the full block
// can exceed norm 1.
double canonical_coisometry_defect(const FreeSeries& B, const Colligation& U, int N, int margin,
                                   double rank_tol = 1e-10);

struct ColumnCompletion {
  FreeSeries a;
  Colligation U;  // outputs [A; a]
  Mat a_empty;    // a(0) = positive root of I - A(0)^*A(0) - A^*A
  double isometry_defect = 0.0;   // interior ||P(U^*U - I)P||
  double column_norm = 0.0;       // ||M^L_{[A; a]}||
  double column_gram_min_eig = 0.0;  // min eig of I - M^*M on words <= N
};
// Throws ce-obstruction when a(0) vanishes.
ColumnCompletion complete_column(const FreeSeries& A, int N, double tol, double rank_tol = 1e-10);

nlohmann::json to_json(const Colligation& U);
Colligation colligation_from_json(const nlohmann::json& j);

}  // namespace freehardy

#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "freehardy/linalg.hpp"
#include "freehardy/word.hpp"

namespace freehardy {

enum class Side { Left, Right };

using SpMat = Eigen::SparseMatrix<cplx>;

// Dense coordinates over enumerate(d, N), optionally tensored with C^p
// (word-major: index = word_index * p + component).
struct FockVector {
  int d = 1;
  int N = 0;
  int p = 1;
  Vec coords;

  static FockVector zero(int d, int N, int p = 1);
  static FockVector basis(const Word& w, int N);

  cplx at(const Word& w, int component = 0) const;
  cplx& at(const Word& w, int component = 0);
};

cplx inner(const FockVector& a, const FockVector& b);  // conjugate-linear in a

nlohmann::json to_json(const FockVector& v);  // {"[1,2]": [re, im], ...}, scalar case only
FockVector fock_vector_from_json(const nlohmann::json& j, int d, int N);

// An operator on F^2_{d,N} (x) C^q -> F^2_{d,N} (x) C^p stored sparse.
struct FockOperator {
  int d = 1;
  int N = 0;
  int p = 1;
  int q = 1;
  SpMat matrix;
  std::string label;

  Mat dense() const { return Mat(matrix); }
  FockOperator adjoint() const;
};

FockOperator creation(Side side, int k, int d, int N);
FockOperator transpose_unitary(int d, int N);
// Projection onto words of length <= m inside F^2_{d,N}.
FockOperator grade_projection(int d, int N, int m_low, int m_high);

// || [T_k^* T_j]_{k,j} - diag(P_{<=N-1}) ||: zero exactly when the tuple is a
// row isometry on the words that the nilpotent truncation does not kill.
double row_isometry_defect(const std::vector<FockOperator>& ops);

}  // namespace freehardy

#include "freehardy/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace freehardy {

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

HermitianEig hermitian_eig(const Mat& a) {
  if (a.rows() == 0) return {RVec(0), Mat(0, 0)};
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eig(const Mat& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eig(const Mat& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  // The Gram matrix on the smaller side is cheaper than a full SVD.
  Mat g = a.rows() <= a.cols() ? Mat(a * a.adjoint()) : Mat(a.adjoint() * a);
  return std::sqrt(std::max(0.0, max_eig(g)));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat psd_sqrt(const Mat& hermitian) {
  auto e = hermitian_eig(hermitian);
  RVec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

Mat range_basis(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return Mat(a.rows(), 0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

Mat pinv(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  RVec inv = RVec::Zero(s.size());
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

void fix_column_phases(Mat& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index best = 0;
    double m = -1.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      // Ties resolve to the lowest index; the slack keeps that stable
      // against round-off between equal-modulus entries.
      double a = std::abs(v(i, j));
      if (a > m + 1e-12) {
        m = a;
        best = i;
      }
    }
    if (m > 0.0) v.col(j) *= std::conj(v(best, j)) / m;
  }
}

}  // namespace freehardy

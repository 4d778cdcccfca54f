#pragma once

#include <complex>

#include <Eigen/Dense>

namespace freehardy {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Eigenpairs of a Hermitian matrix, eigenvalues ascending. The input is
// symmetrized first so round-off asymmetry never leaks into the spectrum.
struct HermitianEig {
  RVec values;
  Mat vectors;
};
HermitianEig hermitian_eig(const Mat& a);

double min_eig(const Mat& hermitian);
double max_eig(const Mat& hermitian);

// Largest singular value.
double op_norm(const Mat& a);

Mat kron(const Mat& a, const Mat& b);

// Positive square root with negative eigenvalues clipped to zero.
Mat psd_sqrt(const Mat& hermitian);

// Orthonormal basis of the column space, singular values below
// rel_tol * largest singular value are dropped.
Mat range_basis(const Mat& a, double rel_tol);

// Moore-Penrose pseudo-inverse with the same relative cutoff.
Mat pinv(const Mat& a, double rel_tol);

// Rotate each column so its largest-modulus entry is real and positive.
void fix_column_phases(Mat& v);

Mat hermitian_part(const Mat& a);

}  // namespace freehardy

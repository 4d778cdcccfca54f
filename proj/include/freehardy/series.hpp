#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "freehardy/fock.hpp"
#include "freehardy/linalg.hpp"
#include "freehardy/word.hpp"

namespace freehardy {

// A d-tuple of n x n matrices. Z^alpha = Z_{i1} ... Z_{ik} for alpha = i1...ik.
struct MatrixPoint {
  int d = 1;
  int n = 1;
  std::vector<Mat> mats;

  MatrixPoint() = default;
  MatrixPoint(int d, std::vector<Mat> mats);
  static MatrixPoint zero(int d, int n);

  Mat power(const Word& w) const;
  // || [Z_1 ... Z_d] ||
  double row_norm() const;
  MatrixPoint scaled(cplx c) const;
};

MatrixPoint direct_sum(const MatrixPoint& a, const MatrixPoint& b);
MatrixPoint similar(const MatrixPoint& z, const Mat& s);  // S Z_k S^{-1}

nlohmann::json to_json(const MatrixPoint& z);
MatrixPoint matrix_point_from_json(const nlohmann::json& j);

// Free power series sum_alpha F_alpha z^alpha truncated at degree deg, with
// p x q matrix coefficients. Absent words carry a zero coefficient.
class FreeSeries {
 public:
  FreeSeries() = default;
  FreeSeries(int d, int deg, int p, int q);

  static FreeSeries constant(int d, int deg, const Mat& c);
  static FreeSeries identity(int d, int deg, int p);
  static FreeSeries monomial(const Word& w, int deg, const Mat& c);

  int d() const noexcept { return d_; }
  int deg() const noexcept { return deg_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }

  Mat coeff(const Word& w) const;
  const std::map<Word, Mat>& terms() const noexcept { return terms_; }

  void set(const Word& w, const Mat& c);
  void add(const Word& w, const Mat& c);
  // Drops coefficients that are exactly zero.
  void prune();

  FreeSeries with_degree(int deg) const;
  FreeSeries adjoint_coeffs() const;  // F_alpha -> F_alpha^*

  FreeSeries& operator+=(const FreeSeries& o);
  FreeSeries& operator-=(const FreeSeries& o);
  FreeSeries& operator*=(cplx c);

 private:
  void check_word(const Word& w) const;

  int d_ = 1;
  int deg_ = 0;
  int p_ = 1;
  int q_ = 1;
  std::map<Word, Mat> terms_;
};

FreeSeries operator+(FreeSeries a, const FreeSeries& b);
FreeSeries operator-(FreeSeries a, const FreeSeries& b);
FreeSeries operator*(cplx c, FreeSeries a);

// max_alpha ||F_alpha - G_alpha||_max over the union of supports.
double max_coeff_diff(const FreeSeries& f, const FreeSeries& g);

// Column stacking [F; G] of two series with the same q.
FreeSeries vstack(const FreeSeries& f, const FreeSeries& g);
// F * c for a constant q x r matrix c.
FreeSeries right_scale(const FreeSeries& f, const Mat& c);

Mat evaluate(const FreeSeries& f, const MatrixPoint& z);

FreeSeries multiply(const FreeSeries& f, const FreeSeries& g);
FreeSeries right_product(const FreeSeries& f, const FreeSeries& g);
FreeSeries dagger_series(const FreeSeries& f);
FreeSeries invert_series(const FreeSeries& f);

enum class CayleyDirection { SchurToHerglotz, HerglotzToSchur };
FreeSeries cayley(const FreeSeries& f, CayleyDirection dir);

// Left: e_gamma (x) x -> sum_beta e_{beta gamma} (x) F_beta x.
// Right: e_gamma (x) x -> sum_beta e_{gamma beta} (x) F_beta x.
// Words longer than N are dropped.
FockOperator multiplier_matrix(const FreeSeries& f, Side side, int N);

// Operator norm of the left multiplier on F^2_{d,N}. Nondecreasing in N and a
// lower bound for the multiplier norm.
double schur_norm_estimate(const FreeSeries& f, int N);

// The coefficient stack sum_alpha e_alpha (x) F_alpha as a (count * p) x q matrix.
Mat coefficient_stack(const FreeSeries& f, int N);
FreeSeries series_from_stack(const Mat& stack, int d, int N, int p);

nlohmann::json to_json(const FreeSeries& f);
FreeSeries series_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Mat& m);  // {"re": [[..]], "im": [[..]]}
Mat matrix_from_json(const nlohmann::json& re, const nlohmann::json& im);

}  // namespace freehardy

#include "freehardy/fixtures.hpp"

namespace freehardy {

Mat random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = n(rng);
      m(i, j) = cplx(re, n(rng));
    }
  return m;
}

FreeSeries random_series(int d, int deg, int p, int q, Rng& rng) {
  FreeSeries f(d, deg, p, q);
  for (const Word& w : enumerate(d, deg)) f.set(w, random_gaussian(p, q, rng));
  return f;
}

FreeSeries normalize_schur(const FreeSeries& f, double target, int N) {
  const double est = schur_norm_estimate(f, N);
  if (est == 0.0) return f;
  return cplx(target / est) * f;
}

MatrixPoint random_point(int d, int n, double row_norm, Rng& rng) {
  std::vector<Mat> mats;
  for (int k = 0; k < d; ++k) mats.push_back(random_gaussian(n, n, rng));
  MatrixPoint z(d, mats);
  const double r = z.row_norm();
  return r == 0.0 ? z : z.scaled(row_norm / r);
}

MatrixPoint random_nilpotent_point(int d, int n, double row_norm, Rng& rng) {
  std::vector<Mat> mats;
  for (int k = 0; k < d; ++k) {
    Mat m = random_gaussian(n, n, rng);
    mats.push_back(m.triangularView<Eigen::StrictlyUpper>());
  }
  MatrixPoint z(d, mats);
  const double r = z.row_norm();
  return r == 0.0 ? z : z.scaled(row_norm / r);
}

std::vector<Pinning> nilpotent_pins(int d, int count, int max_level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Pinning> pins;
  for (int i = 0; i < count; ++i) {
    const int n = 1 + i % max_level;
    Pinning pin;
    pin.Z = random_nilpotent_point(d, n, 0.9, rng);
    pin.y = random_gaussian(n, 1, rng).col(0).normalized();
    pin.v = random_gaussian(n, 1, rng).col(0).normalized();
    pins.push_back(std::move(pin));
  }
  return pins;
}

}  // namespace freehardy

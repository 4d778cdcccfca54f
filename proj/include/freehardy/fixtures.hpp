#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "freehardy/kernel.hpp"
#include "freehardy/series.hpp"

namespace freehardy {

using Rng = std::mt19937_64;

Mat random_gaussian(int rows, int cols, Rng& rng);

// Complex Gaussian coefficients on every word of length <= deg.
FreeSeries random_series(int d, int deg, int p, int q, Rng& rng);

// Rescale so schur_norm_estimate(f, N) equals target.
FreeSeries normalize_schur(const FreeSeries& f, double target, int N);

MatrixPoint random_point(int d, int n, double row_norm, Rng& rng);

// Strictly upper-triangular tuple: every word of length >= n vanishes.
MatrixPoint random_nilpotent_point(int d, int n, double row_norm, Rng& rng);

// count pins at levels cycling through 1..max_level, nilpotent points with
// row norm 0.9 and unit-norm random y, v.
std::vector<Pinning> nilpotent_pins(int d, int count, int max_level, std::uint64_t seed);

}  // namespace freehardy

#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the closed-form routines being checked.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

using Matrix2 = std::array<std::array<double, 2>, 2>;

inline Matrix2 transition(double a, double b) { return {{{1 - a, a}, {b, 1 - b}}}; }

inline Matrix2 multiply(const Matrix2& x, const Matrix2& y) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i][j] += x[i][k] * y[k][j];
  return out;
}

inline Matrix2 power(const Matrix2& m, std::size_t n) {
  Matrix2 out{{{1, 0}, {0, 1}}};
  for (std::size_t i = 0; i < n; ++i) out = multiply(out, m);
  return out;
}

/// Row vector (p1, 1 - p1) times P^n.
inline std::array<double, 2> distribution_after(double a, double b, double p1, std::size_t n) {
  const Matrix2 pn = power(transition(a, b), n);
  return {p1 * pn[0][0] + (1 - p1) * pn[1][0], p1 * pn[0][1] + (1 - p1) * pn[1][1]};
}

/// P((X_k, X_l) = (i, j)) for k < l by matrix powers.
inline std::array<double, 4> pair_probabilities(double a, double b, double p1, std::size_t k,
                                                std::size_t l) {
  const auto at_k = distribution_after(a, b, p1, k);
  const Matrix2 step = power(transition(a, b), l - k);
  return {at_k[0] * step[0][0], at_k[0] * step[0][1], at_k[1] * step[1][0],
          at_k[1] * step[1][1]};
}

struct WalkMoments {
  std::vector<double> mean;                 // E S_k, k = 0..K
  std::vector<std::vector<double>> second;  // E S_k S_l
};

/// Exact moments of S_1..S_K by summing over all 2^K words X_1..X_K.
inline WalkMoments enumerate_walk(double a, double b, double p1, std::size_t horizon) {
  const auto first = distribution_after(a, b, p1, 1);
  const Matrix2 p = transition(a, b);
  WalkMoments m;
  m.mean.assign(horizon + 1, 0.0);
  m.second.assign(horizon + 1, std::vector<double>(horizon + 1, 0.0));
  std::vector<int> s(horizon + 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << horizon); ++mask) {
    // bit i set means X_{i+1} = 2.
    double prob = first[mask & 1];
    for (std::size_t i = 1; i < horizon; ++i) {
      prob *= p[(mask >> (i - 1)) & 1][(mask >> i) & 1];
    }
    s[0] = 0;
    for (std::size_t i = 1; i <= horizon; ++i) s[i] = s[i - 1] + (((mask >> (i - 1)) & 1) ? -1 : 1);
    for (std::size_t k = 0; k <= horizon; ++k) {
      m.mean[k] += prob * s[k];
      for (std::size_t l = 0; l <= horizon; ++l) m.second[k][l] += prob * s[k] * s[l];
    }
  }
  return m;
}

/// P(chi_3 <= x) = P(chi^2_3 <= x^2), via Boost.
inline double chi3_cdf(double x) {
  if (x <= 0) return 0.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(3.0), x * x);
}

inline double chi_square3_cdf(double x) {
  if (x <= 0) return 0.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(3.0), x);
}

/// Composite Simpson rule on [lo, hi] with `intervals` (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      std::size_t intervals) {
  const double h = (hi - lo) / static_cast<double>(intervals);
  double sum = f(lo) + f(hi);
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(i));
  }
  return sum * h / 3.0;
}

}  // namespace oracle

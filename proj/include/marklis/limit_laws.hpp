#pragma once

// Limiting laws of the centered, sqrt(n)-scaled LI_n for the binary Markov
// word, the Brownian and 2x2 GUE representations of the symmetric-case law,
// and the drifted-maximum tail bound.

#include <cstddef>
#include <cstdint>
#include <variant>

#include "marklis/chain_model.hpp"
#include "marklis/rng.hpp"

namespace marklis {

/// scale * (-B(1)/2 + max_{0<=t<=1} B(t)).
struct BrownianFunctional {
  double scale;
};

struct CenteredNormal {
  double variance;
};

struct DegenerateAtZero {};

using LimitLaw = std::variant<BrownianFunctional, CenteredNormal, DegenerateAtZero>;

/// A limit law together with how LI_n is centered and scaled to reach it:
/// (LI_n - centering_rate * n) / sqrt(n) converges to `law`.
struct LimitingLaw {
  LimitLaw law;
  double centering_rate;  // 1/2 when a = b, otherwise max(pi1, pi2)

  /// (li - centering_rate * n) / sqrt(n).
  double standardize(std::size_t li, std::size_t n) const noexcept;
};

LimitingLaw limiting_law(const ChainParams& params);

/// Short identifier: "brownian-functional", "normal" or "degenerate".
const char* law_name(const LimitLaw& law) noexcept;

/// CDF of the law; degenerate and zero-variance laws are a unit step at 0.
double law_cdf(const LimitLaw& law, double x);

/// Density of the law, or NaN where none exists (degenerate laws).
double law_density(const LimitLaw& law, double x);

/// Standard normal CDF via erfc.
double normal_cdf(double x) noexcept;

/// Density of sqrt((1-a)/a) * (-B(1)/2 + max B):
///   16/sqrt(2 pi) (a/(1-a))^{3/2} y^2 exp(-2 a y^2 / (1-a)),  y >= 0.
/// Throws DomainError unless 0 < a < 1.
double density_f(double y, double a);

/// Integral of density_f over [0, y] by adaptive Gauss-Kronrod quadrature.
double cdf_f(double y, double a, double abs_tol = 1e-10);

/// Inverse of cdf_f by bisection. Throws InvalidArgument unless 0 <= q < 1.
double quantile_f(double q, double a);

/// Samples -W(1)/2 + max_j W(j/steps) for a Gaussian random walk W with
/// `steps` increments of variance 1/steps (the max includes W(0) = 0).
double sample_brownian_functional(std::size_t steps, std::uint64_t seed);
double sample_brownian_functional(std::size_t steps, Philox4x64& engine, NormalSampler& normal);

/// Largest eigenvalue sqrt(X1^2 + Y^2 + Z^2) of the traceless 2x2 GUE matrix
/// with unit-variance entries.
double sample_traceless_max_eig(std::uint64_t seed);
double sample_traceless_max_eig(Philox4x64& engine, NormalSampler& normal);

/// Mixing coefficients of M = alpha G I + beta M0, which gives the diagonal
/// entries correlation rho = alpha^2 - beta^2.
class GuePerturbation {
 public:
  /// Throws DomainError unless -1 <= rho <= 1.
  explicit GuePerturbation(double rho);

  double rho() const noexcept { return rho_; }
  double alpha() const noexcept { return alpha_; }
  double beta_coef() const noexcept { return beta_; }

 private:
  double rho_;
  double alpha_;
  double beta_;
};

/// alpha G + beta lambda_{1,0} with G independent of lambda_{1,0}.
double sample_perturbed_max_eig(const GuePerturbation& pert, std::uint64_t seed);
double sample_perturbed_max_eig(const GuePerturbation& pert, Philox4x64& engine,
                                NormalSampler& normal);

/// Joint eigenvalue density of the 2x2 GUE: (x1 - x2)^2 exp(-(x1^2 + x2^2)) / pi.
double gue2_density(double x1, double x2) noexcept;

/// Upper bound on P(max_{0<=t<=1} (B(t) - c t) > z):
///   2 (1 - Phi(z / sqrt(eps))) + 2 (1 - Phi(c eps + z)).
/// Throws InvalidArgument unless c >= 0, z > 0 and 0 < eps < 1.
double mc_tail_bound(double c, double z, double eps);

}  // namespace marklis

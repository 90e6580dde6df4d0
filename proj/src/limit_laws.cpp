#include "marklis/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "marklis/error.hpp"

namespace marklis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_open_unit(double a, const char* what) {
  if (!(a > 0.0 && a < 1.0)) {
    std::ostringstream msg;
    msg << what << ": requires 0 < a < 1, got a = " << a;
    throw DomainError(msg.str());
  }
}

// a = b recovered from the scale sqrt((1-a)/a).
double symmetric_rate(const BrownianFunctional& law) {
  return 1.0 / (1.0 + law.scale * law.scale);
}

}  // namespace

double LimitingLaw::standardize(std::size_t li, std::size_t n) const noexcept {
  const double nd = static_cast<double>(n);
  return (static_cast<double>(li) - centering_rate * nd) / std::sqrt(nd);
}

LimitingLaw limiting_law(const ChainParams& params) {
  const double a = params.a();
  const double b = params.b();
  if (params.is_alternating()) return {DegenerateAtZero{}, 0.5};
  if (params.is_symmetric() && a > 0.0) {
    return {BrownianFunctional{std::sqrt((1.0 - a) / a)}, 0.5};
  }
  const DerivedParams d = derive(params);
  const double variance =
      params.is_absorbing() ? 0.0 : a * b * (2.0 - a - b) / std::pow(a + b, 3);
  return {CenteredNormal{variance}, std::max(d.pi1, d.pi2)};
}

const char* law_name(const LimitLaw& law) noexcept {
  switch (law.index()) {
    case 0: return "brownian-functional";
    case 1: return "normal";
    default: return "degenerate";
  }
}

double law_cdf(const LimitLaw& law, double x) {
  if (const auto* bf = std::get_if<BrownianFunctional>(&law)) {
    return cdf_f(x, symmetric_rate(*bf));
  }
  if (const auto* normal = std::get_if<CenteredNormal>(&law); normal && normal->variance > 0.0) {
    return normal_cdf(x / std::sqrt(normal->variance));
  }
  return x < 0.0 ? 0.0 : 1.0;
}

double law_density(const LimitLaw& law, double x) {
  if (const auto* bf = std::get_if<BrownianFunctional>(&law)) {
    return density_f(x, symmetric_rate(*bf));
  }
  if (const auto* normal = std::get_if<CenteredNormal>(&law); normal && normal->variance > 0.0) {
    const double v = normal->variance;
    return std::exp(-0.5 * x * x / v) / std::sqrt(2.0 * std::numbers::pi * v);
  }
  return kNaN;
}

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double density_f(double y, double a) {
  require_open_unit(a, "density_f");
  if (y < 0.0) return 0.0;
  const double ratio = a / (1.0 - a);
  return 16.0 / std::sqrt(2.0 * std::numbers::pi) * std::pow(ratio, 1.5) * y * y *
         std::exp(-2.0 * ratio * y * y);
}

double cdf_f(double y, double a, double abs_tol) {
  require_open_unit(a, "cdf_f");
  if (!(y > 0.0)) return 0.0;
  if (std::isinf(y)) return 1.0;
  // The integrand is nonnegative with total mass 1, so a relative tolerance
  // on the L1 norm is also an absolute tolerance.
  const auto f = [a](double t) { return density_f(t, a); };
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, y, 30, abs_tol);
  return std::clamp(value, 0.0, 1.0);
}

double quantile_f(double q, double a) {
  require_open_unit(a, "quantile_f");
  if (!(q >= 0.0 && q < 1.0)) {
    throw InvalidArgument("quantile_f: requires 0 <= q < 1");
  }
  if (q == 0.0) return 0.0;
  // Bracket: the law is scale * chi_3 / 2, whose upper tail is negligible
  // well before 10 standard deviations.
  double lo = 0.0;
  double hi = std::sqrt((1.0 - a) / a);
  while (cdf_f(hi, a) < q) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (cdf_f(mid, a) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sample_brownian_functional(std::size_t steps, Philox4x64& engine, NormalSampler& normal) {
  if (steps == 0) throw InvalidArgument("sample_brownian_functional: steps must be >= 1");
  const double dt_sqrt = 1.0 / std::sqrt(static_cast<double>(steps));
  double w = 0.0;
  double peak = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    w += dt_sqrt * normal(engine);
    peak = std::max(peak, w);
  }
  return -0.5 * w + peak;
}

double sample_brownian_functional(std::size_t steps, std::uint64_t seed) {
  Philox4x64 engine(seed, 0, stream_tag::kBrownian);
  NormalSampler normal;
  return sample_brownian_functional(steps, engine, normal);
}

double sample_traceless_max_eig(Philox4x64& engine, NormalSampler& normal) {
  const double x1 = normal(engine);
  const double y = normal(engine);
  const double z = normal(engine);
  return std::sqrt(x1 * x1 + y * y + z * z);
}

double sample_traceless_max_eig(std::uint64_t seed) {
  Philox4x64 engine(seed, 0, stream_tag::kGue);
  NormalSampler normal;
  return sample_traceless_max_eig(engine, normal);
}

GuePerturbation::GuePerturbation(double rho)
    : rho_(rho), alpha_(0.0), beta_(0.0) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    std::ostringstream msg;
    msg << "GuePerturbation: rho must lie in [-1, 1], got " << rho;
    throw DomainError(msg.str());
  }
  alpha_ = std::sqrt((1.0 + rho) / 2.0);
  beta_ = std::sqrt((1.0 - rho) / 2.0);
}

double sample_perturbed_max_eig(const GuePerturbation& pert, Philox4x64& engine,
                                NormalSampler& normal) {
  const double g = normal(engine);
  const double top = sample_traceless_max_eig(engine, normal);
  return pert.alpha() * g + pert.beta_coef() * top;
}

double sample_perturbed_max_eig(const GuePerturbation& pert, std::uint64_t seed) {
  Philox4x64 engine(seed, 1, stream_tag::kGue);
  NormalSampler normal;
  return sample_perturbed_max_eig(pert, engine, normal);
}

double gue2_density(double x1, double x2) noexcept {
  const double gap = x1 - x2;
  return gap * gap * std::exp(-(x1 * x1 + x2 * x2)) / std::numbers::pi;
}

double mc_tail_bound(double c, double z, double eps) {
  if (!(c >= 0.0) || !(z > 0.0) || !(eps > 0.0 && eps < 1.0)) {
    std::ostringstream msg;
    msg << "mc_tail_bound: requires c >= 0, z > 0, 0 < eps < 1; got c = " << c
        << ", z = " << z << ", eps = " << eps;
    throw InvalidArgument(msg.str());
  }
  // 1 - Phi(x) = Phi(-x) keeps precision in the far tail.
  return 2.0 * normal_cdf(-z / std::sqrt(eps)) + 2.0 * normal_cdf(-(c * eps + z));
}

}  // namespace marklis

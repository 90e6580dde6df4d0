#include <doctest.h>

#include <cmath>
#include <numbers>
#include <variant>

#include "marklis/error.hpp"
#include "marklis/limit_laws.hpp"
#include "oracles.hpp"

using namespace marklis;

TEST_CASE("limiting_law selects the regime") {
  SUBCASE("a = b in (0, 1)") {
    const auto law = limiting_law(ChainParams(0.5, 0.5));
    REQUIRE(std::holds_alternative<BrownianFunctional>(law.law));
    CHECK(std::get<BrownianFunctional>(law.law).scale == doctest::Approx(1.0));
    CHECK(law.centering_rate == 0.5);
    CHECK(std::get<BrownianFunctional>(limiting_law(ChainParams(0.2, 0.2)).law).scale ==
          doctest::Approx(2.0));
    CHECK(std::string(law_name(law.law)) == "brownian-functional");
  }
  SUBCASE("a != b") {
    const auto law = limiting_law(ChainParams(0.3, 0.6));
    REQUIRE(std::holds_alternative<CenteredNormal>(law.law));
    CHECK(std::get<CenteredNormal>(law.law).variance == doctest::Approx(0.271605).epsilon(1e-6));
    CHECK(law.centering_rate == doctest::Approx(2.0 / 3));
    CHECK(limiting_law(ChainParams(0.6, 0.3)).centering_rate == doctest::Approx(2.0 / 3));
    CHECK(std::string(law_name(law.law)) == "normal");
  }
  SUBCASE("a = b = 0") {
    const auto law = limiting_law(ChainParams(0, 0));
    REQUIRE(std::holds_alternative<CenteredNormal>(law.law));
    CHECK(std::get<CenteredNormal>(law.law).variance == 0.0);
    CHECK(law.centering_rate == 1.0);
    CHECK(law_cdf(law.law, -1e-9) == 0.0);
    CHECK(law_cdf(law.law, 0.0) == 1.0);
  }
  SUBCASE("a = b = 1") {
    const auto law = limiting_law(ChainParams(1, 1));
    CHECK(std::holds_alternative<DegenerateAtZero>(law.law));
    CHECK(std::string(law_name(law.law)) == "degenerate");
    CHECK(law_cdf(law.law, -0.1) == 0.0);
    CHECK(law_cdf(law.law, 0.0) == 1.0);
    CHECK(std::isnan(law_density(law.law, 0.0)));
  }
  SUBCASE("standardize") {
    const auto law = limiting_law(ChainParams(0.5, 0.5));
    CHECK(law.standardize(5100, 10000) == doctest::Approx(1.0));
  }
  SUBCASE("boundary a != b with one absorbing state") {
    // a = 0, b > 0: letter 1 absorbs, so pi = (1, 0) and the variance vanishes.
    const auto law = limiting_law(ChainParams(0.0, 0.4));
    CHECK(std::get<CenteredNormal>(law.law).variance == 0.0);
    CHECK(law.centering_rate == 1.0);
  }
}

TEST_CASE("normal law") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-37.0) > 0.0);
  const LimitLaw n2 = CenteredNormal{4.0};
  CHECK(law_cdf(n2, 2.0) == doctest::Approx(normal_cdf(1.0)));
  CHECK(law_density(n2, 0.0) == doctest::Approx(1.0 / std::sqrt(8.0 * std::numbers::pi)));
}

TEST_CASE("density_f") {
  CHECK(density_f(1.0, 0.5) == doctest::Approx(0.863855464211009).epsilon(1e-14));
  CHECK(density_f(0.0, 0.3) == 0.0);
  CHECK(density_f(-1.0, 0.3) == 0.0);
  CHECK_THROWS_AS(density_f(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(density_f(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(cdf_f(1.0, -0.2), DomainError);
  SUBCASE("is the density of scale * chi_3 / 2") {
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double scale = std::sqrt((1 - a) / a);
      for (double y = 0.05; y < 4.0; y += 0.05) {
        // d/dy P(chi_3 <= 2y/scale), by a centered difference of the oracle CDF.
        const double h = 1e-5;
        const double numeric =
            (oracle::chi3_cdf(2 * (y + h) / scale) - oracle::chi3_cdf(2 * (y - h) / scale)) /
            (2 * h);
        REQUIRE(density_f(y, a) == doctest::Approx(numeric).epsilon(1e-6));
      }
    }
  }
  SUBCASE("integrates to one") {
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double hi = 20.0 * std::sqrt((1 - a) / a);
      const double mass = oracle::simpson([a](double y) { return density_f(y, a); }, 0, hi, 20000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("cdf_f and quantile_f") {
  CHECK(cdf_f(1.0, 0.5) == doctest::Approx(0.7385358700508888).epsilon(1e-10));
  CHECK(cdf_f(0.0, 0.5) == 0.0);
  CHECK(cdf_f(-3.0, 0.5) == 0.0);
  CHECK(cdf_f(INFINITY, 0.5) == 1.0);
  CHECK(quantile_f(0.5, 0.5) == doctest::Approx(0.7690861272275261).epsilon(1e-10));
  CHECK(quantile_f(0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(quantile_f(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(quantile_f(-0.1, 0.5), InvalidArgument);

  for (double a : {0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) {
    const double scale = std::sqrt((1 - a) / a);
    double prev = 0.0;
    for (double y = 0.02; y < 6.0 * scale; y += 0.02 * scale) {
      const double c = cdf_f(y, a);
      REQUIRE(c >= prev - 1e-15);
      REQUIRE(c == doctest::Approx(oracle::chi3_cdf(2 * y / scale)).epsilon(1e-9));
      prev = c;
    }
    for (double q = 0.001; q < 1.0; q += 0.01) {
      REQUIRE(std::abs(cdf_f(quantile_f(q, a), a) - q) <= 1e-8);
    }
    REQUIRE(std::abs(cdf_f(quantile_f(0.999999, a), a) - 0.999999) <= 1e-8);
  }
}

TEST_CASE("Brownian functional sampler") {
  CHECK_THROWS_AS(sample_brownian_functional(0, 1), InvalidArgument);
  CHECK(sample_brownian_functional(100, 5) == sample_brownian_functional(100, 5));
  // One step: -W/2 + max(0, W) = |W|/2.
  Philox4x64 eng(3, 0);
  NormalSampler normal;
  double sum = 0;
  const int reps = 40000;
  for (int i = 0; i < reps; ++i) {
    const double v = sample_brownian_functional(1, eng, normal);
    REQUIRE(v >= 0.0);
    sum += v;
  }
  // E|W|/2 = 1/sqrt(2 pi).
  CHECK(std::abs(sum / reps - 1 / std::sqrt(2 * std::numbers::pi)) < 5 * 0.3 / std::sqrt(reps));
}

TEST_CASE("GUE samplers") {
  CHECK_THROWS_AS(GuePerturbation(1.5), DomainError);
  CHECK_THROWS_AS(GuePerturbation(std::nan("")), DomainError);
  for (double rho : {-1.0, -0.3, 0.0, 0.4, 1.0}) {
    const GuePerturbation p(rho);
    CHECK(p.alpha() * p.alpha() - p.beta_coef() * p.beta_coef() == doctest::Approx(rho));
    CHECK(p.alpha() * p.alpha() + p.beta_coef() * p.beta_coef() == doctest::Approx(1.0));
  }
  CHECK(GuePerturbation(1.0).beta_coef() == 0.0);
  CHECK(GuePerturbation(-1.0).alpha() == 0.0);

  SUBCASE("rho = -1 reduces to the traceless eigenvalue") {
    Philox4x64 e1(9, 0), e2(9, 0);
    NormalSampler n1, n2;
    for (int i = 0; i < 100; ++i) {
      const double perturbed = sample_perturbed_max_eig(GuePerturbation(-1.0), e1, n1);
      n2(e2);  // the G draw that rho = -1 ignores
      REQUIRE(perturbed == doctest::Approx(sample_traceless_max_eig(e2, n2)));
    }
  }
  SUBCASE("rho = 1 gives the independent normal G, rho = 0 the equal mix") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Philox4x64 e1(seed, 0), e2(seed, 0), e3(seed, 0);
      NormalSampler n1, n2, n3;
      const double g = n2(e2);
      REQUIRE(sample_perturbed_max_eig(GuePerturbation(1.0), e1, n1) == g);
      const double mixed = sample_perturbed_max_eig(GuePerturbation(0.0), e3, n3);
      REQUIRE(mixed == doctest::Approx((g + sample_traceless_max_eig(e2, n2)) / std::sqrt(2.0)));
    }
  }
  SUBCASE("traceless eigenvalue moments") {
    Philox4x64 eng(11, 0);
    NormalSampler normal;
    double sum2 = 0;
    const int reps = 50000;
    for (int i = 0; i < reps; ++i) {
      const double l = sample_traceless_max_eig(eng, normal);
      REQUIRE(l >= 0.0);
      sum2 += l * l;
    }
    CHECK(std::abs(sum2 / reps - 3.0) < 5 * std::sqrt(6.0 / reps));
  }
  CHECK(sample_traceless_max_eig(4) == sample_traceless_max_eig(4));
  CHECK(sample_perturbed_max_eig(GuePerturbation(0.2), 4) ==
        sample_perturbed_max_eig(GuePerturbation(0.2), 4));
}

TEST_CASE("gue2_density") {
  CHECK(gue2_density(1.0, 1.0) == 0.0);
  CHECK(gue2_density(0.3, -0.7) == gue2_density(-0.7, 0.3));
  const double line = oracle::simpson([](double x) { return gue2_density(x, -x); }, 0, 10, 4000);
  CHECK(2 * std::sqrt(2 * std::numbers::pi) * line == doctest::Approx(1.0).epsilon(1e-10));
  // Total mass over the plane.
  double total = 0;
  const double h = 0.02;
  for (double x = -8; x < 8; x += h)
    for (double y = -8; y < 8; y += h) total += gue2_density(x + h / 2, y + h / 2) * h * h;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mc_tail_bound") {
  CHECK(mc_tail_bound(10, 1, 0.5) == doctest::Approx(0.1572992090234604).epsilon(1e-12));
  CHECK(mc_tail_bound(0, 1, 0.5) > mc_tail_bound(5, 1, 0.5));
  double prev = 2.0;
  for (double c = 0; c < 50; c += 0.5) {
    const double v = mc_tail_bound(c, 0.25, 0.5);
    REQUIRE(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(mc_tail_bound(-1, 1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(mc_tail_bound(1, 0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(mc_tail_bound(1, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(mc_tail_bound(1, 1, 0.0), InvalidArgument);
}

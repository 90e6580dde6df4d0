#include "marklis/chain_model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "marklis/error.hpp"

namespace marklis {

namespace {

constexpr double kProbabilitySlack = 1e-15;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void require_spectral(const ChainParams& params, const char* what) {
  if (params.is_absorbing()) {
    throw DomainError(std::string(what) +
                      ": no spectral decomposition at a = b = 0 (lambda1 = lambda2 = 1)");
  }
}

void require_ordered(std::size_t k, std::size_t l, bool strict, const char* what) {
  if (k < 1 || (strict ? k >= l : k > l)) {
    std::ostringstream msg;
    msg << what << ": need 1 <= k " << (strict ? "<" : "<=") << " l, got k = " << k
        << ", l = " << l;
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

ChainParams::ChainParams(double a, double b) : a_(a), b_(b) {
  if (!in_unit_interval(a) || !in_unit_interval(b)) {
    std::ostringstream msg;
    msg << "transition probabilities must lie in [0, 1], got a = " << a << ", b = " << b;
    throw DomainError(msg.str());
  }
}

DerivedParams derive(const ChainParams& params) noexcept {
  const double a = params.a();
  const double b = params.b();
  DerivedParams d{};
  d.lambda2 = 1.0 - a - b;
  if (params.is_absorbing()) {
    d.pi1 = 1.0;
    d.pi2 = 0.0;
    d.mu = 1.0;
    d.sigma2 = 0.0;
    d.sigma_tilde2 = 0.0;
    return d;
  }
  const double s = a + b;
  d.pi1 = b / s;
  d.pi2 = a / s;
  d.mu = (b - a) / s;
  d.sigma2 = 4.0 * a * b / (s * s);
  if (params.is_alternating() || d.sigma2 == 0.0) {
    d.sigma_tilde2 = 0.0;
  } else {
    d.sigma_tilde2 = d.sigma2 * (1.0 + d.lambda2) / (1.0 - d.lambda2);
  }
  return d;
}

InitialDistribution::InitialDistribution(const ChainParams& params, double p1)
    : p1_(p1), p2_(1.0 - p1), beta_(0.0) {
  if (!in_unit_interval(p1)) {
    std::ostringstream msg;
    msg << "initial probability of letter 1 must lie in [0, 1], got " << p1;
    throw DomainError(msg.str());
  }
  beta_ = params.a() * p1_ - params.b() * p2_;
}

InitialDistribution InitialDistribution::stationary(const ChainParams& params) {
  InitialDistribution init(params, derive(params).pi1);
  // pi1 = b/(a+b) makes beta vanish analytically; drop the rounding residue.
  init.beta_ = 0.0;
  return init;
}

Word::Word(std::vector<Letter> letters, std::uint32_t alphabet_size)
    : letters_(std::move(letters)), m_(alphabet_size) {
  if (m_ < 2) {
    throw InvalidArgument("alphabet size must be at least 2, got " + std::to_string(m_));
  }
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] < 1 || letters_[i] > m_) {
      std::ostringstream msg;
      msg << "letter " << letters_[i] << " at position " << i + 1 << " outside 1.." << m_;
      throw InvalidArgument(msg.str());
    }
  }
}

Word Word::reversed() const {
  return Word(std::vector<Letter>(letters_.rbegin(), letters_.rend()), m_);
}

double clamp_probability(double p) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (p < 0.0 && p >= -kProbabilitySlack) return 0.0;
  if (p > 1.0 && p <= 1.0 + kProbabilitySlack) return 1.0;
  std::ostringstream msg;
  msg.precision(17);
  msg << "probability formula produced " << p;
  throw ConsistencyError(msg.str());
}

DistributionVector evolve(const ChainParams& params, const InitialDistribution& init,
                          std::size_t n) {
  require_spectral(params, "evolve");
  const DerivedParams d = derive(params);
  const double shift =
      std::pow(d.lambda2, static_cast<double>(n)) * init.beta() / (params.a() + params.b());
  return {clamp_probability(d.pi1 + shift), clamp_probability(d.pi2 - shift)};
}

void sample_letters(const ChainParams& params, const InitialDistribution& init,
                    Philox4x64& engine, std::span<Letter> out) {
  const double a = params.a();
  const double b = params.b();
  Letter x = uniform01(engine) < init.p1() ? 1 : 2;
  for (Letter& slot : out) {
    const double u = uniform01(engine);
    if (x == 1) {
      x = u < a ? 2 : 1;
    } else {
      x = u < b ? 1 : 2;
    }
    slot = x;
  }
}

Word sample_word(const ChainParams& params, const InitialDistribution& init, std::size_t n,
                 Philox4x64& engine) {
  if (n == 0) throw InvalidArgument("sample_word: word length must be at least 1");
  std::vector<Letter> letters(n);
  sample_letters(params, init, engine, letters);
  return Word(std::move(letters), 2);
}

Word sample_word(const ChainParams& params, const InitialDistribution& init, std::size_t n,
                 std::uint64_t seed) {
  Philox4x64 engine(seed, 0, stream_tag::kWord);
  return sample_word(params, init, n, engine);
}

double mean_s(const ChainParams& params, const InitialDistribution& init, std::size_t k) {
  require_spectral(params, "mean_s");
  if (k < 1) throw InvalidArgument("mean_s: need k >= 1");
  const DerivedParams d = derive(params);
  const double kd = static_cast<double>(k);
  if (init.beta() == 0.0) return d.mu * kd;
  // (1 - lambda2^k) / (1 - lambda2) as a geometric sum; lambda2 = 1 is excluded.
  const double geometric =
      (1.0 - std::pow(d.lambda2, kd)) / (1.0 - d.lambda2);
  return d.mu * kd + 2.0 * (init.beta() * d.lambda2 / (params.a() + params.b())) * geometric;
}

double cov_z(const ChainParams& params, std::size_t k, std::size_t l) {
  require_spectral(params, "cov_z");
  require_ordered(k, l, false, "cov_z");
  const DerivedParams d = derive(params);
  if (k == l) return d.sigma2;
  return d.sigma2 * std::pow(d.lambda2, static_cast<double>(l - k));
}

double var_s(const ChainParams& params, std::size_t k) {
  require_spectral(params, "var_s");
  if (k < 1) throw InvalidArgument("var_s: need k >= 1");
  const DerivedParams d = derive(params);
  const double lam = d.lambda2;
  const double kd = static_cast<double>(k);
  const double one_minus = 1.0 - lam;
  return d.sigma2 * ((1.0 + lam) / one_minus) * kd +
         2.0 * d.sigma2 * (lam * (std::pow(lam, kd) - 1.0)) / (one_minus * one_minus);
}

double cov_s(const ChainParams& params, std::size_t k, std::size_t l) {
  require_spectral(params, "cov_s");
  require_ordered(k, l, false, "cov_s");
  const DerivedParams d = derive(params);
  const double lam = d.lambda2;
  const double kd = static_cast<double>(k);
  const double one_minus = 1.0 - lam;
  return d.sigma2 * (((1.0 + lam) / one_minus) * kd -
                     lam * (1.0 - std::pow(lam, kd)) *
                         (1.0 + std::pow(lam, static_cast<double>(l - k))) /
                         (one_minus * one_minus));
}

PairProbabilities pair_prob(const ChainParams& params, const InitialDistribution& init,
                            std::size_t k, std::size_t l) {
  if (params.is_absorbing()) {
    throw DomainError("pair_prob: requires a + b > 0");
  }
  require_ordered(k, l, true, "pair_prob");
  const DerivedParams d = derive(params);
  const double s = params.a() + params.b();
  const double gap = std::pow(d.lambda2, static_cast<double>(l - k));
  const double drift = std::pow(d.lambda2, static_cast<double>(k)) * init.beta() / s;
  const double at_k1 = d.pi1 + drift;  // P(X_k = 1)
  const double at_k2 = d.pi2 - drift;  // P(X_k = 2)
  // Each entry is P(X_k = i) times the (l-k)-step transition probability i -> j.
  return {
      clamp_probability((d.pi1 + gap * params.a() / s) * at_k1),
      clamp_probability((d.pi2 - gap * params.a() / s) * at_k1),
      clamp_probability((d.pi1 - gap * params.b() / s) * at_k2),
      clamp_probability((d.pi2 + gap * params.b() / s) * at_k2),
  };
}

}  // namespace marklis

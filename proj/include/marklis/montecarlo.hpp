#pragma once

// Repeated-trial experiments linking sampled Markov words, LI_n, and the
// limiting laws. Trial t always draws from its own Philox stream keyed by
// (seed, t), so every result is a pure function of the configuration.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "marklis/chain_model.hpp"
#include "marklis/lis_core.hpp"
#include "marklis/limit_laws.hpp"

namespace marklis {

enum class ExperimentKind { kLiLaw, kShapeJoint, kMomentCheck, kDriftVanish };

std::string_view to_string(ExperimentKind kind) noexcept;
/// Parses "li-law", "shape-joint", "moment-check" or "drift-vanish".
/// Throws InvalidArgument otherwise.
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  ChainParams params;
  std::size_t n = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  ExperimentKind kind = ExperimentKind::kLiLaw;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  /// Throws InvalidArgument unless n >= 1 and trials >= 1.
  void validate() const;
};

/// Runs body(i) for every i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

class EmpiricalDistribution {
 public:
  /// Sorts the samples ascending.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t count() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  /// Fraction of samples <= x.
  double ecdf(double x) const noexcept;

 private:
  std::vector<double> samples_;
};

struct KsResult {
  double statistic;
  std::size_t count;
};

/// One-sample Kolmogorov-Smirnov distance sup_x |F_N(x) - F(x)|, evaluated as
///   D = max_i max(|i/N - F(x_(i))|, |(i-1)/N - F(x_(i)-)|)
/// with tied samples treated as a single ECDF step. For continuous F this is
/// the textbook formula. Throws InvalidArgument for an empty sample.
KsResult ks_statistic(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_1(x) - F_2(x)|.
double ks_two_sample(const EmpiricalDistribution& first, const EmpiricalDistribution& second);

/// Samples of (LI_n - centering_rate n)/sqrt(n) over stationary-start words.
/// LI_n comes from lis_combinatorial; every 100th trial is cross-checked with
/// lis_patience (ConsistencyError on disagreement).
EmpiricalDistribution run_li_experiment(const ExperimentConfig& cfg);

struct ShapeSample {
  double first;   // (R^1_n - n pi_max)/sqrt(n)
  double second;  // (R^2_n - n pi_min)/sqrt(n)
};

struct ShapeExperimentResult {
  std::vector<ShapeSample> pairs;  // trial order
  EmpiricalDistribution first;
  EmpiricalDistribution second;
};

/// RSK shapes of stationary-start words. For a = b both rows are centered at
/// n/2.
ShapeExperimentResult run_shape_experiment(const ExperimentConfig& cfg);

struct MomentRow {
  std::size_t k;
  double mc_mean;
  double exact_mean;
  double mean_se;
  double mc_var;
  double exact_var;
  double var_se;
};

/// Monte Carlo mean and variance of S_k (stationary start) against mean_s and
/// var_s, for each k in `ks` (1 <= k <= cfg.n). Throws DomainError at
/// a = b = 0.
std::vector<MomentRow> run_moment_check(const ExperimentConfig& cfg,
                                        std::span<const std::size_t> ks);

/// Drift coefficient c_n = sqrt(n) |pi1 - pi2| / sigma_tilde.
double drift_coefficient(const ChainParams& params, std::size_t n);

/// The drift functional that vanishes in probability when pi1 != pi2, on the
/// grid t = k/n of the polygonal process B_n:
///   pi2 > pi1:  max_t (B_n(t) - c_n t)
///   pi1 > pi2:  max_t (B_n(t) - B_n(1) - c_n (1 - t))
/// Throws DomainError when a = b or sigma_tilde = 0.
double drift_functional(const Word& word, const ChainParams& params);

struct DriftRow {
  std::size_t n;
  double c_n;
  double exceed_prob;  // empirical P(functional > z)
  double std_err;      // binomial standard error
  double tail_bound;   // mc_tail_bound(c_n, z, 1/sqrt(c_n)); 1 when c_n <= 1
};

std::vector<DriftRow> run_drift_experiment(const ChainParams& params,
                                           std::span<const std::size_t> n_list,
                                           std::size_t trials, std::uint64_t seed, double z,
                                           unsigned threads = 0);

}  // namespace marklis

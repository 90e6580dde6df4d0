#include "marklis/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "marklis/error.hpp"

namespace marklis {

namespace {

// Moment sums are reduced per fixed-size chunk and then combined in chunk
// order, which keeps floating-point results independent of thread count.
constexpr std::size_t kChunk = 1024;
constexpr std::size_t kSpotCheckStride = 100;

unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

InitialDistribution stationary_start(const ChainParams& params) {
  return InitialDistribution::stationary(params);
}

Word sample_trial_word(const ExperimentConfig& cfg, std::uint64_t tag, std::size_t trial) {
  Philox4x64 engine(cfg.seed, trial, tag);
  return sample_word(cfg.params, stationary_start(cfg.params), cfg.n, engine);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::kLiLaw: return "li-law";
    case ExperimentKind::kShapeJoint: return "shape-joint";
    case ExperimentKind::kMomentCheck: return "moment-check";
    case ExperimentKind::kDriftVanish: return "drift-vanish";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto kind : {ExperimentKind::kLiLaw, ExperimentKind::kShapeJoint,
                    ExperimentKind::kMomentCheck, ExperimentKind::kDriftVanish}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (n < 1) throw InvalidArgument("experiment word length n must be >= 1");
  if (trials < 1) throw InvalidArgument("experiment trial count must be >= 1");
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const unsigned workers = resolve_threads(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::ecdf(double x) const noexcept {
  if (samples_.empty()) return 0.0;
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

KsResult ks_statistic(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf) {
  if (emp.empty()) throw InvalidArgument("ks_statistic: empty sample");
  const auto xs = emp.samples();
  const double total = static_cast<double>(xs.size());
  double d = 0.0;
  // Tied samples form one ECDF jump: compare the jump's top with F(x) and its
  // bottom with F(x-), which also handles laws whose CDF jumps at x.
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    const double f_left = cdf(std::nextafter(xs[i], -INFINITY));
    const double above = static_cast<double>(j) / total;
    const double below = static_cast<double>(i) / total;
    d = std::max({d, std::abs(above - f), std::abs(below - f_left)});
    i = j;
  }
  return {std::min(d, 1.0), xs.size()};
}

double ks_two_sample(const EmpiricalDistribution& first, const EmpiricalDistribution& second) {
  if (first.empty() || second.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  const auto xs = first.samples();
  const auto ys = second.samples();
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Walk the merged order, evaluating both ECDFs after each distinct value.
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

EmpiricalDistribution run_li_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const LimitingLaw law = limiting_law(cfg.params);
  std::vector<double> values(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const Word word = sample_trial_word(cfg, stream_tag::kLiLaw, t);
    const std::size_t li = lis_combinatorial(word);
    if (t % kSpotCheckStride == 0 && lis_patience(word) != li) {
      throw ConsistencyError("trial " + std::to_string(t) +
                             ": lis_combinatorial disagrees with lis_patience");
    }
    values[t] = law.standardize(li, cfg.n);
  });
  return EmpiricalDistribution(std::move(values));
}

ShapeExperimentResult run_shape_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const LimitingLaw law = limiting_law(cfg.params);
  // Row 1 is centered like LI_n; row 2 at the complementary rate.
  const double nd = static_cast<double>(cfg.n);
  const double center1 = law.centering_rate * nd;
  const double center2 = nd - center1;
  const double root_n = std::sqrt(nd);
  std::vector<ShapeSample> pairs(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    const Word word = sample_trial_word(cfg, stream_tag::kShape, t);
    const YoungShape shape = rsk_shape(word);
    if (t % kSpotCheckStride == 0 && shape.row(0) != lis_combinatorial(word)) {
      throw ConsistencyError("trial " + std::to_string(t) +
                             ": first RSK row disagrees with lis_combinatorial");
    }
    pairs[t] = {(static_cast<double>(shape.row(0)) - center1) / root_n,
                (static_cast<double>(shape.row(1)) - center2) / root_n};
  });
  std::vector<double> first(cfg.trials);
  std::vector<double> second(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    first[t] = pairs[t].first;
    second[t] = pairs[t].second;
  }
  return {std::move(pairs), EmpiricalDistribution(std::move(first)),
          EmpiricalDistribution(std::move(second))};
}

std::vector<MomentRow> run_moment_check(const ExperimentConfig& cfg,
                                        std::span<const std::size_t> ks) {
  cfg.validate();
  if (cfg.params.is_absorbing()) {
    throw DomainError("moment-check: requires a + b > 0");
  }
  for (const std::size_t k : ks) {
    if (k < 1 || k > cfg.n) {
      throw InvalidArgument("moment-check: k = " + std::to_string(k) + " outside 1..n");
    }
  }
  const InitialDistribution init = stationary_start(cfg.params);
  std::vector<double> exact_mean(ks.size());
  for (std::size_t j = 0; j < ks.size(); ++j) exact_mean[j] = mean_s(cfg.params, init, ks[j]);

  // Power sums of S_k - E S_k, per chunk: [chunk][j][power-1].
  const std::size_t chunks = (cfg.trials + kChunk - 1) / kChunk;
  const std::size_t horizon = *std::max_element(ks.begin(), ks.end());
  std::vector<double> sums(chunks * ks.size() * 4, 0.0);
  parallel_for(chunks, cfg.threads, [&](std::size_t c) {
    std::vector<Letter> letters(horizon);
    std::vector<std::int64_t> walk(horizon + 1);
    double* out = sums.data() + c * ks.size() * 4;
    const std::size_t end = std::min(cfg.trials, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < end; ++t) {
      Philox4x64 engine(cfg.seed, t, stream_tag::kMoment);
      sample_letters(cfg.params, init, engine, letters);
      walk[0] = 0;
      for (std::size_t k = 1; k <= horizon; ++k) {
        walk[k] = walk[k - 1] + (letters[k - 1] == 1 ? 1 : -1);
      }
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const double d = static_cast<double>(walk[ks[j]]) - exact_mean[j];
        const double d2 = d * d;
        out[4 * j + 0] += d;
        out[4 * j + 1] += d2;
        out[4 * j + 2] += d2 * d;
        out[4 * j + 3] += d2 * d2;
      }
    }
  });

  const double total = static_cast<double>(cfg.trials);
  std::vector<MomentRow> rows;
  rows.reserve(ks.size());
  for (std::size_t j = 0; j < ks.size(); ++j) {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
      const double* in = sums.data() + c * ks.size() * 4 + 4 * j;
      p1 += in[0];
      p2 += in[1];
      p3 += in[2];
      p4 += in[3];
    }
    // Raw moments of d = S_k - E S_k, then central moments about the sample mean.
    const double m1 = p1 / total;
    const double m2 = p2 / total;
    const double m3 = p3 / total;
    const double m4 = p4 / total;
    const double central2 = std::max(0.0, m2 - m1 * m1);
    const double central4 =
        std::max(0.0, m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1);
    const double sample_var = cfg.trials > 1 ? central2 * total / (total - 1.0) : 0.0;
    MomentRow row{};
    row.k = ks[j];
    row.exact_mean = exact_mean[j];
    row.mc_mean = exact_mean[j] + m1;
    row.mean_se = std::sqrt(sample_var / total);
    row.exact_var = var_s(cfg.params, ks[j]);
    row.mc_var = sample_var;
    row.var_se = std::sqrt(std::max(0.0, central4 - central2 * central2) / total);
    rows.push_back(row);
  }
  return rows;
}

double drift_coefficient(const ChainParams& params, std::size_t n) {
  const DerivedParams d = derive(params);
  if (params.is_symmetric() || d.sigma_tilde2 <= 0.0) {
    throw DomainError("drift functional requires a != b and a nondegenerate chain (sigma_tilde > 0)");
  }
  return std::sqrt(static_cast<double>(n)) * std::abs(d.pi1 - d.pi2) / std::sqrt(d.sigma_tilde2);
}

double drift_functional(const Word& word, const ChainParams& params) {
  const std::size_t n = word.size();
  if (n == 0) throw InvalidArgument("drift_functional: empty word");
  const double c_n = drift_coefficient(params, n);
  const DerivedParams d = derive(params);
  const double nd = static_cast<double>(n);
  const double norm = std::sqrt(d.sigma_tilde2 * nd);
  // B_n(k/n) = (S_k - k mu) / (sigma_tilde sqrt(n)); the polygonal process is
  // linear between grid points, so the maxima below are attained on the grid.
  double s = 0.0;
  double best = 0.0;  // value at t = 0 in either regime before the final shift
  const bool drift_on_second = d.pi2 > d.pi1;
  if (!drift_on_second) best = -c_n;
  for (std::size_t k = 1; k <= n; ++k) {
    s += word[k - 1] == 1 ? 1.0 : -1.0;
    const double kd = static_cast<double>(k);
    const double b_hat = (s - kd * d.mu) / norm;
    const double t = kd / nd;
    best = std::max(best, drift_on_second ? b_hat - c_n * t : b_hat - c_n * (1.0 - t));
  }
  if (drift_on_second) return best;
  const double b_hat_one = (s - nd * d.mu) / norm;
  return best - b_hat_one;
}

std::vector<DriftRow> run_drift_experiment(const ChainParams& params,
                                           std::span<const std::size_t> n_list,
                                           std::size_t trials, std::uint64_t seed, double z,
                                           unsigned threads) {
  if (trials < 1) throw InvalidArgument("drift-vanish: trial count must be >= 1");
  if (!(z > 0.0)) throw InvalidArgument("drift-vanish: threshold z must be > 0");
  const InitialDistribution init = stationary_start(params);
  std::vector<DriftRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const std::size_t n = n_list[idx];
    if (n < 1) throw InvalidArgument("drift-vanish: word lengths must be >= 1");
    const double c_n = drift_coefficient(params, n);
    std::vector<std::uint8_t> exceeded(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
      Philox4x64 engine(seed, (static_cast<std::uint64_t>(idx) << 40) | t, stream_tag::kDrift);
      const Word word = sample_word(params, init, n, engine);
      exceeded[t] = drift_functional(word, params) > z ? 1 : 0;
    });
    const auto hits = static_cast<double>(std::count(exceeded.begin(), exceeded.end(), 1));
    const double total = static_cast<double>(trials);
    const double p = hits / total;
    DriftRow row{};
    row.n = n;
    row.c_n = c_n;
    row.exceed_prob = p;
    row.std_err = std::sqrt(p * (1.0 - p) / total);
    row.tail_bound = c_n > 1.0 ? mc_tail_bound(c_n, z, 1.0 / std::sqrt(c_n)) : 1.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace marklis

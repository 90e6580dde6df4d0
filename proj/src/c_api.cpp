#include "marklis/marklis.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "marklis/chain_model.hpp"
#include "marklis/error.hpp"
#include "marklis/limit_laws.hpp"
#include "marklis/lis_core.hpp"
#include "marklis/montecarlo.hpp"

struct mlis_word {
  marklis::Word word;
};

struct mlis_table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
mlis_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return MLIS_OK;
  } catch (const marklis::DomainError& e) {
    g_last_error = e.what();
    return MLIS_ERR_DOMAIN;
  } catch (const marklis::InvalidArgument& e) {
    g_last_error = e.what();
    return MLIS_ERR_INVALID_ARGUMENT;
  } catch (const marklis::ConsistencyError& e) {
    g_last_error = e.what();
    return MLIS_ERR_CONSISTENCY;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MLIS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MLIS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return MLIS_ERR_INTERNAL;
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) throw marklis::InvalidArgument(std::string(name) + " must not be NULL");
}

marklis::ChainParams to_params(mlis_chain_params p) { return {p.a, p.b}; }

marklis::LimitLaw to_law(const mlis_limit_law& law) {
  switch (law.kind) {
    case MLIS_LAW_BROWNIAN_FUNCTIONAL:
      if (!(law.parameter > 0.0)) {
        throw marklis::DomainError("Brownian functional scale must be positive");
      }
      return marklis::BrownianFunctional{law.parameter};
    case MLIS_LAW_CENTERED_NORMAL:
      if (!(law.parameter >= 0.0)) {
        throw marklis::DomainError("normal variance must be nonnegative");
      }
      return marklis::CenteredNormal{law.parameter};
    case MLIS_LAW_DEGENERATE:
      return marklis::DegenerateAtZero{};
  }
  throw marklis::InvalidArgument("unknown law kind");
}

marklis::ExperimentConfig to_config(const mlis_experiment_config& cfg,
                                    marklis::ExperimentKind kind) {
  marklis::ExperimentConfig out{to_params(cfg.params)};
  out.n = cfg.n;
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  out.kind = kind;
  out.threads = cfg.threads;
  return out;
}

// A p1 equal to the stationary value selects the exact stationary law (beta = 0).
marklis::InitialDistribution make_init(const marklis::ChainParams& params, double p1) {
  const auto stationary = marklis::InitialDistribution::stationary(params);
  if (p1 == stationary.p1()) return stationary;
  return {params, p1};
}

std::unique_ptr<mlis_table> make_table(std::vector<std::string> names, std::size_t rows) {
  auto table = std::make_unique<mlis_table>();
  table->columns.assign(names.size(), std::vector<double>(rows));
  table->names = std::move(names);
  return table;
}

}  // namespace

extern "C" {

const char* mlis_status_string(mlis_status status) {
  switch (status) {
    case MLIS_OK: return "ok";
    case MLIS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MLIS_ERR_DOMAIN: return "parameter domain violation";
    case MLIS_ERR_CONSISTENCY: return "internal consistency error";
    case MLIS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mlis_last_error(void) { return g_last_error.c_str(); }

mlis_status mlis_derive(mlis_chain_params params, mlis_derived_params* out) {
  return guarded([&] {
    require(out, "out");
    const auto d = marklis::derive(to_params(params));
    *out = {d.pi1, d.pi2, d.lambda2, d.mu, d.sigma2, d.sigma_tilde2};
  });
}

mlis_status mlis_stationary_p1(mlis_chain_params params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::InitialDistribution::stationary(to_params(params)).p1();
  });
}

mlis_status mlis_evolve(mlis_chain_params params, double p1, size_t n, double out[2]) {
  return guarded([&] {
    require(out, "out");
    const auto p = to_params(params);
    const auto v = marklis::evolve(p, make_init(p, p1), n);
    out[0] = v[0];
    out[1] = v[1];
  });
}

mlis_status mlis_mean_s(mlis_chain_params params, double p1, size_t k, double* out) {
  return guarded([&] {
    require(out, "out");
    const auto p = to_params(params);
    *out = marklis::mean_s(p, make_init(p, p1), k);
  });
}

mlis_status mlis_cov_z(mlis_chain_params params, size_t k, size_t l, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::cov_z(to_params(params), k, l);
  });
}

mlis_status mlis_var_s(mlis_chain_params params, size_t k, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::var_s(to_params(params), k);
  });
}

mlis_status mlis_cov_s(mlis_chain_params params, size_t k, size_t l, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::cov_s(to_params(params), k, l);
  });
}

mlis_status mlis_pair_prob(mlis_chain_params params, double p1, size_t k, size_t l,
                           double out[4]) {
  return guarded([&] {
    require(out, "out");
    const auto p = to_params(params);
    const auto probs = marklis::pair_prob(p, make_init(p, p1), k, l);
    for (int i = 0; i < 4; ++i) out[i] = probs[static_cast<std::size_t>(i)];
  });
}

mlis_status mlis_word_create(const uint32_t* letters, size_t n, uint32_t m, mlis_word** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(letters, "letters");
    std::vector<marklis::Letter> copy(letters, letters + n);
    *out = new mlis_word{marklis::Word(std::move(copy), m)};
  });
}

mlis_status mlis_word_sample(mlis_chain_params params, double p1, size_t n, uint64_t seed,
                             mlis_word** out) {
  return guarded([&] {
    require(out, "out");
    const auto p = to_params(params);
    *out = new mlis_word{marklis::sample_word(p, make_init(p, p1), n, seed)};
  });
}

void mlis_word_destroy(mlis_word* word) { delete word; }

size_t mlis_word_length(const mlis_word* word) { return word ? word->word.size() : 0; }

uint32_t mlis_word_alphabet_size(const mlis_word* word) {
  return word ? word->word.alphabet_size() : 0;
}

const uint32_t* mlis_word_letters(const mlis_word* word) {
  return word ? word->word.letters().data() : nullptr;
}

mlis_status mlis_word_walk(const mlis_word* word, int64_t* out, size_t capacity) {
  return guarded([&] {
    require(word, "word");
    const auto walk = marklis::build_walk(word->word);
    const std::size_t m = walk.alphabet_size();
    const std::size_t needed = (walk.length() + 1) * (m - 1);
    if (capacity < needed) {
      throw marklis::InvalidArgument("walk buffer holds " + std::to_string(capacity) +
                                     " values, need " + std::to_string(needed));
    }
    require(out, "out");
    for (std::size_t k = 0; k <= walk.length(); ++k) {
      for (std::uint32_t r = 1; r < m; ++r) out[k * (m - 1) + (r - 1)] = walk.s(k, r);
    }
  });
}

mlis_status mlis_lis_bruteforce(const mlis_word* word, size_t* out) {
  return guarded([&] {
    require(word, "word");
    require(out, "out");
    *out = marklis::lis_bruteforce(word->word);
  });
}

mlis_status mlis_lis_patience(const mlis_word* word, size_t* out) {
  return guarded([&] {
    require(word, "word");
    require(out, "out");
    *out = marklis::lis_patience(word->word);
  });
}

mlis_status mlis_lis_combinatorial(const mlis_word* word, size_t* out) {
  return guarded([&] {
    require(word, "word");
    require(out, "out");
    *out = marklis::lis_combinatorial(word->word);
  });
}

mlis_status mlis_rsk_shape(const mlis_word* word, size_t* rows, size_t capacity,
                           size_t* rows_out) {
  return guarded([&] {
    require(word, "word");
    require(rows_out, "rows_out");
    if (capacity > 0) require(rows, "rows");
    const auto shape = marklis::rsk_shape(word->word);
    for (std::size_t i = 0; i < shape.rows.size() && i < capacity; ++i) rows[i] = shape.rows[i];
    *rows_out = shape.rows.size();
  });
}

mlis_status mlis_limiting_law(mlis_chain_params params, mlis_limit_law* out) {
  return guarded([&] {
    require(out, "out");
    const auto law = marklis::limiting_law(to_params(params));
    out->centering_rate = law.centering_rate;
    if (const auto* bf = std::get_if<marklis::BrownianFunctional>(&law.law)) {
      out->kind = MLIS_LAW_BROWNIAN_FUNCTIONAL;
      out->parameter = bf->scale;
    } else if (const auto* normal = std::get_if<marklis::CenteredNormal>(&law.law)) {
      out->kind = MLIS_LAW_CENTERED_NORMAL;
      out->parameter = normal->variance;
    } else {
      out->kind = MLIS_LAW_DEGENERATE;
      out->parameter = 0.0;
    }
  });
}

const char* mlis_law_name(mlis_law_kind kind) {
  switch (kind) {
    case MLIS_LAW_BROWNIAN_FUNCTIONAL: return "brownian-functional";
    case MLIS_LAW_CENTERED_NORMAL: return "normal";
    case MLIS_LAW_DEGENERATE: return "degenerate";
  }
  return "unknown";
}

mlis_status mlis_law_cdf(const mlis_limit_law* law, double x, double* out) {
  return guarded([&] {
    require(law, "law");
    require(out, "out");
    *out = marklis::law_cdf(to_law(*law), x);
  });
}

mlis_status mlis_law_density(const mlis_limit_law* law, double x, double* out) {
  return guarded([&] {
    require(law, "law");
    require(out, "out");
    *out = marklis::law_density(to_law(*law), x);
  });
}

double mlis_normal_cdf(double x) { return marklis::normal_cdf(x); }

mlis_status mlis_density_f(double y, double a, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::density_f(y, a);
  });
}

mlis_status mlis_cdf_f(double y, double a, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::cdf_f(y, a);
  });
}

mlis_status mlis_quantile_f(double q, double a, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::quantile_f(q, a);
  });
}

double mlis_gue2_density(double x1, double x2) { return marklis::gue2_density(x1, x2); }

mlis_status mlis_mc_tail_bound(double c, double z, double eps, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::mc_tail_bound(c, z, eps);
  });
}

mlis_status mlis_sample_brownian_functional(size_t steps, uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::sample_brownian_functional(steps, seed);
  });
}

mlis_status mlis_sample_traceless_max_eig(uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::sample_traceless_max_eig(seed);
  });
}

mlis_status mlis_sample_perturbed_max_eig(double rho, uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = marklis::sample_perturbed_max_eig(marklis::GuePerturbation(rho), seed);
  });
}

void mlis_table_destroy(mlis_table* table) { delete table; }

size_t mlis_table_rows(const mlis_table* table) {
  return table && !table->columns.empty() ? table->columns.front().size() : 0;
}

size_t mlis_table_columns(const mlis_table* table) { return table ? table->names.size() : 0; }

const char* mlis_table_column_name(const mlis_table* table, size_t column) {
  if (!table || column >= table->names.size()) return nullptr;
  return table->names[column].c_str();
}

const double* mlis_table_column(const mlis_table* table, size_t column) {
  if (!table || column >= table->columns.size()) return nullptr;
  return table->columns[column].data();
}

mlis_status mlis_run_li_experiment(const mlis_experiment_config* cfg, mlis_table** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    const auto dist =
        marklis::run_li_experiment(to_config(*cfg, marklis::ExperimentKind::kLiLaw));
    auto table = make_table({"index", "value"}, dist.count());
    const auto xs = dist.samples();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      table->columns[0][i] = static_cast<double>(i);
      table->columns[1][i] = xs[i];
    }
    *out = table.release();
  });
}

mlis_status mlis_run_shape_experiment(const mlis_experiment_config* cfg, mlis_table** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    const auto result =
        marklis::run_shape_experiment(to_config(*cfg, marklis::ExperimentKind::kShapeJoint));
    auto table = make_table({"trial", "r1", "r2"}, result.pairs.size());
    for (std::size_t t = 0; t < result.pairs.size(); ++t) {
      table->columns[0][t] = static_cast<double>(t);
      table->columns[1][t] = result.pairs[t].first;
      table->columns[2][t] = result.pairs[t].second;
    }
    *out = table.release();
  });
}

mlis_status mlis_run_moment_check(const mlis_experiment_config* cfg, const size_t* ks,
                                  size_t count, mlis_table** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    if (count == 0) throw marklis::InvalidArgument("moment-check: empty k list");
    require(ks, "ks");
    const auto rows = marklis::run_moment_check(
        to_config(*cfg, marklis::ExperimentKind::kMomentCheck), {ks, count});
    auto table = make_table(
        {"k", "mc_mean", "exact_mean", "mean_se", "mc_var", "exact_var", "var_se"}, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const double values[] = {static_cast<double>(r.k), r.mc_mean, r.exact_mean, r.mean_se,
                               r.mc_var, r.exact_var, r.var_se};
      for (std::size_t c = 0; c < 7; ++c) table->columns[c][i] = values[c];
    }
    *out = table.release();
  });
}

mlis_status mlis_run_drift_experiment(const mlis_experiment_config* cfg, const size_t* n_list,
                                      size_t count, double z, mlis_table** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    if (count == 0) throw marklis::InvalidArgument("drift-vanish: empty n list");
    require(n_list, "n_list");
    const auto rows = marklis::run_drift_experiment(to_params(cfg->params), {n_list, count},
                                                    cfg->trials, cfg->seed, z, cfg->threads);
    auto table = make_table({"n", "c_n", "exceed_prob", "std_err", "tail_bound"}, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const double values[] = {static_cast<double>(r.n), r.c_n, r.exceed_prob, r.std_err,
                               r.tail_bound};
      for (std::size_t c = 0; c < 5; ++c) table->columns[c][i] = values[c];
    }
    *out = table.release();
  });
}

mlis_status mlis_ks_against_law(const double* samples, size_t count, const mlis_limit_law* law,
                                double* out) {
  return guarded([&] {
    require(law, "law");
    require(out, "out");
    if (count == 0) throw marklis::InvalidArgument("ks: empty sample");
    require(samples, "samples");
    const auto target = to_law(*law);
    const marklis::EmpiricalDistribution emp(std::vector<double>(samples, samples + count));
    *out = marklis::ks_statistic(emp, [&](double x) { return marklis::law_cdf(target, x); })
               .statistic;
  });
}

}  // extern "C"

// marklis-cli: samplers, exact formulas, limit laws and Monte Carlo
// experiments for longest increasing subsequences of binary Markov words.
// Talks to the library only through the C API.
//
// Exit codes: 0 success / check passed, 1 check failed or invalid file,
// 2 invalid flags, 3 parameter outside the model domain, 4 unwritable output.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "marklis/marklis.h"
#include "records.hpp"

namespace {

using marklis::cli::Field;
using marklis::cli::Format;
using marklis::cli::Record;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitOutput = 4;

struct CliFailure {
  int code;
  std::string message;
};

void check(mlis_status status) {
  if (status == MLIS_OK) return;
  const int code = status == MLIS_ERR_DOMAIN             ? kExitDomain
                   : status == MLIS_ERR_INVALID_ARGUMENT ? kExitUsage
                                                         : kExitFail;
  throw CliFailure{code, std::string(mlis_status_string(status)) + ": " + mlis_last_error()};
}

struct TableDeleter {
  void operator()(mlis_table* t) const { mlis_table_destroy(t); }
};
struct WordDeleter {
  void operator()(mlis_word* w) const { mlis_word_destroy(w); }
};
using TablePtr = std::unique_ptr<mlis_table, TableDeleter>;
using WordPtr = std::unique_ptr<mlis_word, WordDeleter>;

Format parse_format(const std::string& name) { return name == "csv" ? Format::kCsv : Format::kJson; }

// Opens the output target up front so an unwritable path fails before any
// expensive work.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::out | std::ios::trunc);
    if (!file_) throw CliFailure{kExitOutput, "cannot open '" + path + "' for writing"};
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    stream().flush();
    if (!stream()) throw CliFailure{kExitOutput, "write to '" + path + "' failed"};
  }

 private:
  std::ofstream file_;
};

// ---- simulate -----------------------------------------------------------

struct SimulateOptions {
  double a = 0, b = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string init = "stationary";
  std::string format = "json";
  std::string out;
  bool walk = false;
  bool shape = false;
};

int run_simulate(const SimulateOptions& opt) {
  const mlis_chain_params params{opt.a, opt.b};
  mlis_derived_params derived;
  check(mlis_derive(params, &derived));
  double p1 = 1.0;
  if (opt.init == "stationary") {
    check(mlis_stationary_p1(params, &p1));
  } else if (opt.init == "point2") {
    p1 = 0.0;
  }
  Sink sink(opt.out);
  mlis_word* raw = nullptr;
  check(mlis_word_sample(params, p1, opt.n, opt.seed, &raw));
  const WordPtr word(raw);

  const auto base = [&](const char* series, std::size_t index, marklis::cli::Value value) {
    return Record{{"schema_version", std::string(marklis::cli::kSchemaVersion)},
                  {"kind", std::string("simulate")},
                  {"a", opt.a},
                  {"b", opt.b},
                  {"n", static_cast<std::int64_t>(opt.n)},
                  {"seed", opt.seed},
                  {"init", opt.init},
                  {"series", std::string(series)},
                  {"index", static_cast<std::int64_t>(index)},
                  {"value", std::move(value)}};
  };
  std::vector<Record> records;
  const std::uint32_t* letters = mlis_word_letters(word.get());
  for (std::size_t k = 0; k < opt.n; ++k) {
    records.push_back(base("letter", k + 1, static_cast<std::int64_t>(letters[k])));
  }
  if (opt.walk) {
    std::vector<std::int64_t> s(opt.n + 1);
    check(mlis_word_walk(word.get(), s.data(), s.size()));
    for (std::size_t k = 0; k <= opt.n; ++k) records.push_back(base("s1", k, s[k]));
  }
  if (opt.shape) {
    std::vector<std::size_t> rows(2);
    std::size_t count = 0;
    check(mlis_rsk_shape(word.get(), rows.data(), rows.size(), &count));
    for (std::size_t i = 0; i < count && i < rows.size(); ++i) {
      records.push_back(base("shape", i + 1, static_cast<std::int64_t>(rows[i])));
    }
  }
  write_records(sink.stream(), records, parse_format(opt.format));
  sink.finish(opt.out);
  return 0;
}

// ---- laws ---------------------------------------------------------------

struct LawsOptions {
  double a = 0, b = 0;
  std::string grid;
  std::string format = "json";
  std::string out;
};

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw CliFailure{kExitUsage, "--grid expects min:max:step, got '" + spec + "'"};
  }
  if (!(step > 0) || hi < lo || (hi - lo) / step > 1e6) {
    throw CliFailure{kExitUsage, "--grid needs step > 0, max >= min and at most 1e6 points"};
  }
  std::vector<double> ys;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) ys.push_back(lo + static_cast<double>(i) * step);
  return ys;
}

int run_laws(const LawsOptions& opt) {
  const mlis_chain_params params{opt.a, opt.b};
  mlis_limit_law law;
  check(mlis_limiting_law(params, &law));
  const std::vector<double> ys = opt.grid.empty() ? std::vector<double>{} : parse_grid(opt.grid);
  Sink sink(opt.out);

  marklis::cli::Value scale, variance;
  if (law.kind == MLIS_LAW_BROWNIAN_FUNCTIONAL) scale = law.parameter;
  if (law.kind != MLIS_LAW_BROWNIAN_FUNCTIONAL) variance = law.parameter;
  const auto base = [&](marklis::cli::Value y, marklis::cli::Value density,
                        marklis::cli::Value cdf) {
    return Record{{"schema_version", std::string(marklis::cli::kSchemaVersion)},
                  {"kind", std::string("laws")},
                  {"a", opt.a},
                  {"b", opt.b},
                  {"law", std::string(mlis_law_name(law.kind))},
                  {"scale", scale},
                  {"variance", variance},
                  {"centering_rate", law.centering_rate},
                  {"scaling", std::string("sqrt(n)")},
                  {"y", std::move(y)},
                  {"density", std::move(density)},
                  {"cdf", std::move(cdf)}};
  };
  std::vector<Record> records;
  if (ys.empty()) records.push_back(base({}, {}, {}));
  for (const double y : ys) {
    double density = 0, cdf = 0;
    check(mlis_law_density(&law, y, &density));
    check(mlis_law_cdf(&law, y, &cdf));
    marklis::cli::Value dens_value;
    if (std::isfinite(density)) dens_value = density;
    records.push_back(base(y, dens_value, cdf));
  }
  write_records(sink.stream(), records, parse_format(opt.format));
  sink.finish(opt.out);
  return 0;
}

// ---- experiment ---------------------------------------------------------

struct ExperimentOptions {
  std::string kind;
  double a = 0, b = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  double ks_threshold = 0.02;
  unsigned threads = 0;
  std::vector<std::size_t> k_list;
  std::vector<std::size_t> n_list;
  double z = 0.25;
};

std::vector<double> column(const mlis_table* table, std::size_t c) {
  const double* data = mlis_table_column(table, c);
  return {data, data + mlis_table_rows(table)};
}

std::vector<std::size_t> default_k_list(std::size_t n) {
  std::vector<std::size_t> ks;
  for (std::size_t k : {1, 2, 5, 10, 20, 50, 100}) {
    if (k <= n) ks.push_back(k);
  }
  return ks;
}

std::vector<std::size_t> default_n_list(std::size_t n) {
  std::vector<std::size_t> ns;
  for (std::size_t m : {n / 100, n / 10, n}) {
    if (m >= 1 && (ns.empty() || ns.back() != m)) ns.push_back(m);
  }
  return ns;
}

int run_experiment(const ExperimentOptions& opt) {
  const mlis_chain_params params{opt.a, opt.b};
  mlis_derived_params derived;
  check(mlis_derive(params, &derived));
  Sink sink(opt.out);
  const mlis_experiment_config cfg{params, opt.n, opt.trials, opt.seed, opt.threads};

  const auto prefix = [&] {
    return Record{{"schema_version", std::string(marklis::cli::kSchemaVersion)},
                  {"kind", opt.kind},
                  {"a", opt.a},
                  {"b", opt.b},
                  {"n", static_cast<std::int64_t>(opt.n)},
                  {"trials", static_cast<std::int64_t>(opt.trials)},
                  {"seed", opt.seed}};
  };
  std::vector<Record> records;
  bool pass = true;
  std::ostream& report = std::cout;
  report << "kind=" << opt.kind << " a=" << opt.a << " b=" << opt.b << " n=" << opt.n
         << " trials=" << opt.trials << " seed=" << opt.seed << '\n';

  mlis_table* raw = nullptr;
  if (opt.kind == "li-law" || opt.kind == "shape-joint") {
    mlis_limit_law law;
    check(mlis_limiting_law(params, &law));
    const bool li = opt.kind == "li-law";
    check(li ? mlis_run_li_experiment(&cfg, &raw) : mlis_run_shape_experiment(&cfg, &raw));
    const TablePtr table(raw);
    const auto first = column(table.get(), 1);
    double d = 0;
    check(mlis_ks_against_law(first.data(), first.size(), &law, &d));
    report << "law=" << mlis_law_name(law.kind) << '\n';
    report << "ks_statistic=" << marklis::cli::format_double(d)
           << " threshold=" << opt.ks_threshold << '\n';
    pass = d <= opt.ks_threshold;
    if (li) {
      const auto index = column(table.get(), 0);
      for (std::size_t i = 0; i < first.size(); ++i) {
        Record rec = prefix();
        rec.push_back({"index", static_cast<std::int64_t>(index[i])});
        rec.push_back({"value", first[i]});
        records.push_back(std::move(rec));
      }
    } else {
      const auto trial = column(table.get(), 0);
      const auto second = column(table.get(), 2);
      std::size_t off_diagonal = 0;
      for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i] + second[i] != 0.0) ++off_diagonal;
        Record rec = prefix();
        rec.push_back({"trial", static_cast<std::int64_t>(trial[i])});
        rec.push_back({"r1", first[i]});
        rec.push_back({"r2", second[i]});
        records.push_back(std::move(rec));
      }
      report << "off_diagonal_trials=" << off_diagonal << '\n';
      pass = pass && off_diagonal == 0;
    }
  } else if (opt.kind == "moment-check") {
    const auto ks = opt.k_list.empty() ? default_k_list(opt.n) : opt.k_list;
    check(mlis_run_moment_check(&cfg, ks.data(), ks.size(), &raw));
    const TablePtr table(raw);
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < mlis_table_columns(table.get()); ++c) {
      cols.push_back(column(table.get(), c));
    }
    double worst = 0;
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
      const double mean_z = cols[3][i] > 0 ? std::abs(cols[1][i] - cols[2][i]) / cols[3][i] : 0;
      const double var_z = cols[6][i] > 0 ? std::abs(cols[4][i] - cols[5][i]) / cols[6][i] : 0;
      worst = std::max({worst, mean_z, var_z});
      Record rec = prefix();
      rec.push_back({"k", static_cast<std::int64_t>(cols[0][i])});
      for (std::size_t c = 1; c < cols.size(); ++c) {
        rec.push_back({mlis_table_column_name(table.get(), c), cols[c][i]});
      }
      records.push_back(std::move(rec));
    }
    report << "max_standard_errors=" << marklis::cli::format_double(worst) << " threshold=5\n";
    pass = worst <= 5.0;
  } else {
    const auto ns = opt.n_list.empty() ? default_n_list(opt.n) : opt.n_list;
    check(mlis_run_drift_experiment(&cfg, ns.data(), ns.size(), opt.z, &raw));
    const TablePtr table(raw);
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < mlis_table_columns(table.get()); ++c) {
      cols.push_back(column(table.get(), c));
    }
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
      const double p = cols[2][i];
      const bool within_bound = p <= cols[4][i] + 3.0 * cols[3][i];
      const bool monotone = i == 0 || p <= cols[2][i - 1];
      pass = pass && within_bound && monotone;
      report << "n=" << static_cast<std::size_t>(cols[0][i])
             << " exceed_prob=" << marklis::cli::format_double(p)
             << " bound=" << marklis::cli::format_double(cols[4][i])
             << (within_bound ? "" : " [above bound]") << (monotone ? "" : " [increase]") << '\n';
      Record rec = prefix();
      rec.push_back({"z", opt.z});
      rec.push_back({"word_length", static_cast<std::int64_t>(cols[0][i])});
      rec.push_back({"c_n", cols[1][i]});
      rec.push_back({"exceed_prob", p});
      rec.push_back({"std_err", cols[3][i]});
      rec.push_back({"tail_bound", cols[4][i]});
      records.push_back(std::move(rec));
    }
  }
  write_records(sink.stream(), records, parse_format(opt.format));
  sink.finish(opt.out);
  report << "result=" << (pass ? "pass" : "fail") << '\n';
  return pass ? 0 : kExitFail;
}

// ---- validate -----------------------------------------------------------

int run_validate(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read '" << path << "'\n";
    return kExitFail;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto report = marklis::cli::validate_text(buffer.str());
  if (report.ok()) {
    std::cout << "valid: kind=" << report.kind << " records=" << report.records << '\n';
    return 0;
  }
  std::cout << "invalid: " << report.problems.size() << " problem(s)\n";
  for (const auto& p : report.problems) std::cout << "  " << p << '\n';
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longest increasing subsequences of binary Markov random words"};
  app.require_subcommand(0, 1);
  std::string validate_path;
  app.add_option("--validate", validate_path, "Re-parse an emitted JSON/CSV file and check it");

  const std::vector<std::string> formats{"json", "csv"};

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Sample one word from the chain");
  simulate->add_option("--a", sim.a, "P(next = 2 | current = 1)")->required();
  simulate->add_option("--b", sim.b, "P(next = 1 | current = 2)")->required();
  simulate->add_option("--n", sim.n, "Word length")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "RNG seed")->required();
  simulate->add_option("--init", sim.init, "Law of X_0")
      ->check(CLI::IsMember({"stationary", "point1", "point2"}));
  simulate->add_option("--format", sim.format)->check(CLI::IsMember(formats));
  simulate->add_option("--out", sim.out, "Output path (default stdout)");
  simulate->add_flag("--walk", sim.walk, "Also emit the walk S_k");
  simulate->add_flag("--shape", sim.shape, "Also emit the RSK shape");

  LawsOptions laws;
  auto* laws_cmd = app.add_subcommand("laws", "Describe and tabulate the limiting law");
  laws_cmd->add_option("--a", laws.a)->required();
  laws_cmd->add_option("--b", laws.b)->required();
  laws_cmd->add_option("--grid", laws.grid, "Tabulate density and CDF on min:max:step");
  laws_cmd->add_option("--format", laws.format)->check(CLI::IsMember(formats));
  laws_cmd->add_option("--out", laws.out, "Output path (default stdout)");

  ExperimentOptions exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("--kind", exp.kind)
      ->required()
      ->check(CLI::IsMember({"li-law", "shape-joint", "moment-check", "drift-vanish"}));
  experiment->add_option("--a", exp.a)->required();
  experiment->add_option("--b", exp.b)->required();
  experiment->add_option("--n", exp.n, "Word length")->required()->check(CLI::PositiveNumber);
  experiment->add_option("--trials", exp.trials)->required()->check(CLI::PositiveNumber);
  experiment->add_option("--seed", exp.seed)->required();
  experiment->add_option("--out", exp.out, "Result file")->required();
  experiment->add_option("--format", exp.format)->check(CLI::IsMember(formats));
  experiment->add_option("--ks-threshold", exp.ks_threshold, "KS pass threshold");
  experiment->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");
  experiment->add_option("--k-list", exp.k_list, "moment-check: indices k")->delimiter(',');
  experiment->add_option("--n-list", exp.n_list, "drift-vanish: word lengths (default n/100,n/10,n)")
      ->delimiter(',');
  experiment->add_option("--z", exp.z, "drift-vanish: exceedance level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (!validate_path.empty()) return run_validate(validate_path);
    if (*simulate) return run_simulate(sim);
    if (*laws_cmd) return run_laws(laws);
    if (*experiment) return run_experiment(exp);
    std::cout << app.help();
    return kExitUsage;
  } catch (const CliFailure& failure) {
    std::cerr << "error: " << failure.message << '\n';
    return failure.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

#include "records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace marklis::cli {

namespace {

const std::vector<std::string> kExperimentPrefix = {"schema_version", "kind", "a", "b",
                                                    "n", "trials", "seed"};

std::vector<std::string> concat(std::vector<std::string> head,
                                std::initializer_list<const char*> tail) {
  for (const char* name : tail) head.emplace_back(name);
  return head;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render(const Value& v, Format format) {
  if (std::holds_alternative<std::monostate>(v)) return format == Format::kJson ? "null" : "";
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return format == Format::kJson ? "null" : "";
    return format_double(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&v)) return std::to_string(*u);
  const auto& s = std::get<std::string>(v);
  return format == Format::kJson ? json_escape(s) : s;
}

// A parsed cell from either format.
struct Cell {
  bool null = true;
  bool is_string = false;
  std::string text;
  std::optional<double> number;
};

using Row = std::map<std::string, Cell>;

struct Parsed {
  std::vector<std::string> header;  // CSV only: column order as written
  std::vector<Row> rows;
  bool csv = false;
};

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

Parsed parse_csv(std::string_view text, std::vector<std::string>& problems) {
  Parsed parsed;
  parsed.csv = true;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) {
    problems.emplace_back("empty CSV file");
    return parsed;
  }
  parsed.header = split_csv_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != parsed.header.size()) {
      problems.push_back("line " + std::to_string(line_no) + ": " + std::to_string(cells.size()) +
                         " cells, header has " + std::to_string(parsed.header.size()));
      continue;
    }
    Row row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      Cell c;
      c.text = cells[i];
      c.null = cells[i].empty();
      c.number = parse_number(cells[i]);
      c.is_string = !c.null && !c.number;
      row[parsed.header[i]] = c;
    }
    parsed.rows.push_back(std::move(row));
  }
  return parsed;
}

Parsed parse_json(std::string_view text, std::vector<std::string>& problems) {
  Parsed parsed;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    problems.push_back(std::string("JSON parse error: ") + e.what());
    return parsed;
  }
  if (!doc.is_array()) {
    problems.emplace_back("top-level JSON value must be an array of records");
    return parsed;
  }
  for (const auto& obj : doc) {
    if (!obj.is_object()) {
      problems.emplace_back("JSON array element is not an object");
      continue;
    }
    Row row;
    for (const auto& [key, value] : obj.items()) {
      Cell c;
      if (value.is_null()) {
        c.null = true;
      } else if (value.is_string()) {
        c.null = false;
        c.is_string = true;
        c.text = value.get<std::string>();
      } else if (value.is_number()) {
        c.null = false;
        c.number = value.get<double>();
        c.text = value.dump();
      } else {
        problems.push_back("field '" + key + "' is neither null, string nor number");
        continue;
      }
      row[key] = c;
    }
    parsed.rows.push_back(std::move(row));
  }
  return parsed;
}

class Checker {
 public:
  explicit Checker(std::vector<std::string>& problems) : problems_(problems) {}

  void fail(std::size_t row, const std::string& what) {
    if (problems_.size() < 50) problems_.push_back("record " + std::to_string(row) + ": " + what);
  }

  std::optional<double> number(const Row& r, std::size_t i, const std::string& col,
                               bool nullable = false) {
    const auto it = r.find(col);
    if (it == r.end()) {
      fail(i, "missing column '" + col + "'");
      return std::nullopt;
    }
    if (it->second.null) {
      if (!nullable) fail(i, "column '" + col + "' is null");
      return std::nullopt;
    }
    if (!it->second.number) {
      fail(i, "column '" + col + "' is not numeric");
      return std::nullopt;
    }
    return it->second.number;
  }

  std::string text(const Row& r, const std::string& col) {
    const auto it = r.find(col);
    return it == r.end() ? std::string() : it->second.text;
  }

 private:
  std::vector<std::string>& problems_;
};

void check_kind_invariants(const std::string& kind, const std::vector<Row>& rows,
                           Checker& check) {
  if (kind == "li-law") {
    double prev = -INFINITY;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto idx = check.number(rows[i], i, "index");
      const auto v = check.number(rows[i], i, "value");
      if (idx && *idx != static_cast<double>(i)) check.fail(i, "index out of sequence");
      if (v) {
        if (*v < prev) check.fail(i, "values are not sorted ascending");
        prev = *v;
      }
    }
  } else if (kind == "shape-joint") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r1 = check.number(rows[i], i, "r1");
      const auto r2 = check.number(rows[i], i, "r2");
      if (r1 && r2 && *r1 + *r2 != 0.0) check.fail(i, "r1 + r2 != 0");
    }
  } else if (kind == "moment-check") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto k = check.number(rows[i], i, "k");
      if (k && *k < 1) check.fail(i, "k < 1");
      for (const char* col : {"mc_var", "exact_var", "mean_se", "var_se"}) {
        const auto v = check.number(rows[i], i, col);
        if (v && *v < 0) check.fail(i, std::string(col) + " is negative");
      }
      check.number(rows[i], i, "mc_mean");
      check.number(rows[i], i, "exact_mean");
    }
  } else if (kind == "drift-vanish") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto p = check.number(rows[i], i, "exceed_prob");
      if (p && (*p < 0 || *p > 1)) check.fail(i, "exceed_prob outside [0, 1]");
      const auto se = check.number(rows[i], i, "std_err");
      if (se && *se < 0) check.fail(i, "std_err is negative");
      const auto bound = check.number(rows[i], i, "tail_bound");
      if (bound && *bound < 0) check.fail(i, "tail_bound is negative");
      check.number(rows[i], i, "word_length");
      check.number(rows[i], i, "c_n");
    }
  } else if (kind == "simulate") {
    std::optional<double> prev_s;
    std::optional<double> prev_row;
    double shape_total = 0;
    bool has_shape = false;
    std::optional<double> n;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string series = check.text(rows[i], "series");
      const auto v = check.number(rows[i], i, "value");
      if (!n) n = check.number(rows[i], i, "n");
      if (!v) continue;
      if (series == "letter") {
        if (*v != 1 && *v != 2) check.fail(i, "letter outside {1, 2}");
      } else if (series == "s1") {
        if (prev_s && std::abs(*v - *prev_s) != 1) check.fail(i, "walk step is not +-1");
        if (!prev_s && *v != 0) check.fail(i, "walk does not start at 0");
        prev_s = v;
      } else if (series == "shape") {
        if (prev_row && *v > *prev_row) check.fail(i, "shape rows increase");
        prev_row = v;
        shape_total += *v;
        has_shape = true;
      } else {
        check.fail(i, "unknown series '" + series + "'");
      }
    }
    if (has_shape && n && shape_total != *n) check.fail(0, "shape rows do not sum to n");
  } else if (kind == "laws") {
    std::vector<std::pair<double, double>> cdf_points;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string law = check.text(rows[i], "law");
      if (law != "brownian-functional" && law != "normal" && law != "degenerate") {
        check.fail(i, "unknown law '" + law + "'");
      }
      const auto y = check.number(rows[i], i, "y", true);
      const auto cdf = check.number(rows[i], i, "cdf", true);
      const auto density = check.number(rows[i], i, "density", true);
      if (cdf && (*cdf < 0 || *cdf > 1)) check.fail(i, "cdf outside [0, 1]");
      if (density && *density < 0) check.fail(i, "negative density");
      if (y && cdf) cdf_points.emplace_back(*y, *cdf);
    }
    std::sort(cdf_points.begin(), cdf_points.end());
    for (std::size_t i = 1; i < cdf_points.size(); ++i) {
      if (cdf_points[i].second < cdf_points[i - 1].second) check.fail(i, "cdf decreases in y");
    }
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_records(std::ostream& out, const std::vector<Record>& records, Format format) {
  if (format == Format::kCsv) {
    if (records.empty()) return;
    for (std::size_t i = 0; i < records.front().size(); ++i) {
      out << (i ? "," : "") << records.front()[i].name;
    }
    out << '\n';
    for (const auto& rec : records) {
      for (std::size_t i = 0; i < rec.size(); ++i) {
        out << (i ? "," : "") << render(rec[i].value, format);
      }
      out << '\n';
    }
    return;
  }
  out << "[\n";
  for (std::size_t r = 0; r < records.size(); ++r) {
    out << "  {";
    for (std::size_t i = 0; i < records[r].size(); ++i) {
      out << (i ? ", " : "") << json_escape(records[r][i].name) << ": "
          << render(records[r][i].value, format);
    }
    out << (r + 1 < records.size() ? "},\n" : "}\n");
  }
  out << "]\n";
}

std::vector<std::string> columns_for(std::string_view kind) {
  if (kind == "li-law") return concat(kExperimentPrefix, {"index", "value"});
  if (kind == "shape-joint") return concat(kExperimentPrefix, {"trial", "r1", "r2"});
  if (kind == "moment-check") {
    return concat(kExperimentPrefix,
                  {"k", "mc_mean", "exact_mean", "mean_se", "mc_var", "exact_var", "var_se"});
  }
  if (kind == "drift-vanish") {
    return concat(kExperimentPrefix,
                  {"z", "word_length", "c_n", "exceed_prob", "std_err", "tail_bound"});
  }
  if (kind == "simulate") {
    return {"schema_version", "kind", "a", "b", "n", "seed", "init", "series", "index", "value"};
  }
  if (kind == "laws") {
    return {"schema_version", "kind", "a", "b", "law", "scale", "variance", "centering_rate",
            "scaling", "y", "density", "cdf"};
  }
  return {};
}

ValidationReport validate_text(std::string_view text) {
  ValidationReport report;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    report.problems.emplace_back("file is empty");
    return report;
  }
  const Parsed parsed =
      text[first] == '[' ? parse_json(text, report.problems) : parse_csv(text, report.problems);
  report.records = parsed.rows.size();
  if (parsed.rows.empty()) {
    report.problems.emplace_back("no records");
    return report;
  }
  Checker check(report.problems);
  report.kind = check.text(parsed.rows.front(), "kind");
  const auto expected = columns_for(report.kind);
  if (expected.empty()) {
    check.fail(0, "unknown kind '" + report.kind + "'");
    return report;
  }
  if (parsed.csv && parsed.header != expected) {
    report.problems.emplace_back("CSV header does not match the '" + report.kind + "' layout");
  }
  for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
    const Row& row = parsed.rows[i];
    if (row.size() != expected.size() ||
        !std::all_of(expected.begin(), expected.end(),
                     [&](const std::string& c) { return row.count(c) == 1; })) {
      check.fail(i, "column set does not match the '" + report.kind + "' layout");
      continue;
    }
    const Cell& version = row.at("schema_version");
    if (version.text != kSchemaVersion) check.fail(i, "schema_version is not \"1\"");
    if (row.at("kind").text != report.kind) check.fail(i, "mixed kinds in one file");
    if (parsed.csv) {
      for (const auto& [name, cell] : row) {
        const bool integral = cell.text.find_first_not_of("-0123456789") == std::string::npos;
        if (cell.number && !integral && cell.text != format_double(*cell.number)) {
          check.fail(i, "column '" + name + "' is not in canonical 17-digit form");
        }
      }
    }
  }
  if (report.ok()) check_kind_invariants(report.kind, parsed.rows, check);
  return report;
}

}  // namespace marklis::cli

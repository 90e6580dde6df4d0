#pragma once

// Output records shared by every CLI command: flat rows with a fixed column
// order per kind, written as a JSON array of objects or as CSV. Floats use 17
// significant digits so both formats carry identical numeric payloads.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace marklis::cli {

inline constexpr std::string_view kSchemaVersion = "1";

using Value = std::variant<std::monostate, double, std::int64_t, std::uint64_t, std::string>;

struct Field {
  std::string name;
  Value value;
};

using Record = std::vector<Field>;

enum class Format { kJson, kCsv };

/// "%.17g"; non-finite values are not representable and map to null.
std::string format_double(double x);

/// Writes records that all share the first record's column names.
void write_records(std::ostream& out, const std::vector<Record>& records, Format format);

/// Column names, in order, for an output kind ("simulate", "laws", "li-law",
/// "shape-joint", "moment-check", "drift-vanish"). Empty for unknown kinds.
std::vector<std::string> columns_for(std::string_view kind);

struct ValidationReport {
  std::size_t records = 0;
  std::string kind;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

/// Re-parses an emitted file (format detected from its first character) and
/// checks schema version, column layout and the per-kind invariants.
ValidationReport validate_text(std::string_view text);

}  // namespace marklis::cli

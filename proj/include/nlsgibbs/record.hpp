#pragma once

// Result records: named numeric tables plus the resolved config, seed and
// software version. JSON is the lossless form; each table is also written as
// CSV with the config echoed in '# ' comment lines and %.17g numbers.
// Nothing time-dependent is recorded, so equal inputs give equal bytes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nlsgibbs {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Per-row status: "ok", "tainted" or "failed: <reason>".
  std::vector<std::string> status;

  void add_row(std::vector<double> row, std::string row_status = "ok");
};

struct ResultRecord {
  std::string experiment;
  std::string version;
  std::uint64_t seed = 0;
  /// Resolved config in INI form.
  std::string config;
  std::vector<Table> tables;
  std::vector<std::string> warnings;
  bool tainted = false;  // any cell flagged for mixing
  bool failed = false;   // any cell threw

  const Table& table(const std::string& name) const;
};

/// NaN-aware equality (NaN matches NaN in the same slot).
bool equivalent(const ResultRecord& a, const ResultRecord& b);

std::string software_version();

std::string to_json(const ResultRecord& record);
ResultRecord record_from_json(const std::string& text);

/// CSV text of one table: '# ' config lines, a header and one row per cell.
std::string to_csv(const ResultRecord& record, const Table& table);

/// Paths the record would be written to under `dir`: <tag>.json and
/// <tag>_<table>.csv.
std::vector<std::filesystem::path> output_paths(const ResultRecord& record,
                                                const std::filesystem::path& dir);
/// Writes JSON and CSVs. Creates `dir`; refuses (std::runtime_error) to
/// replace existing files unless `force`.
std::vector<std::filesystem::path> write_record(const ResultRecord& record,
                                                const std::filesystem::path& dir, bool force);

}  // namespace nlsgibbs

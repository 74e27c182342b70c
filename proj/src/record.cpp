#include "nlsgibbs/record.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nlsgibbs/error.hpp"

#ifndef NLSGIBBS_VERSION
#define NLSGIBBS_VERSION "0.0.0"
#endif

namespace nlsgibbs {

using nlohmann::json;

void Table::add_row(std::vector<double> row, std::string row_status) {
  if (row.size() != columns.size()) throw InvalidArgument("Table: row width does not match the header");
  rows.push_back(std::move(row));
  status.push_back(std::move(row_status));
}

const Table& ResultRecord::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw InvalidArgument("ResultRecord: no table named " + name);
}

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same(const Table& a, const Table& b) {
  if (a.name != b.name || a.columns != b.columns || a.status != b.status) return false;
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t j = 0; j < a.rows[i].size(); ++j)
      if (!same(a.rows[i][j], b.rows[i][j])) return false;
  }
  return true;
}

// JSON has no NaN or infinity; they travel as strings.
json encode(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode(const json& v) {
  if (v.is_number()) return v.get<double>();
  const auto s = v.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw std::runtime_error("record: unexpected value " + s);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool equivalent(const ResultRecord& a, const ResultRecord& b) {
  if (a.experiment != b.experiment || a.version != b.version || a.seed != b.seed ||
      a.config != b.config || a.warnings != b.warnings || a.tainted != b.tainted ||
      a.failed != b.failed || a.tables.size() != b.tables.size())
    return false;
  for (std::size_t i = 0; i < a.tables.size(); ++i)
    if (!same(a.tables[i], b.tables[i])) return false;
  return true;
}

std::string software_version() { return NLSGIBBS_VERSION; }

std::string to_json(const ResultRecord& record) {
  json j;
  j["experiment"] = record.experiment;
  j["version"] = record.version;
  j["seed"] = record.seed;
  j["config"] = record.config;
  j["warnings"] = record.warnings;
  j["tainted"] = record.tainted;
  j["failed"] = record.failed;
  j["tables"] = json::array();
  for (const auto& t : record.tables) {
    json jt;
    jt["name"] = t.name;
    jt["columns"] = t.columns;
    jt["status"] = t.status;
    jt["rows"] = json::array();
    for (const auto& row : t.rows) {
      json jr = json::array();
      for (double v : row) jr.push_back(encode(v));
      jt["rows"].push_back(std::move(jr));
    }
    j["tables"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

ResultRecord record_from_json(const std::string& text) {
  const json j = json::parse(text);
  ResultRecord r;
  r.experiment = j.at("experiment").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config").get<std::string>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.tainted = j.at("tainted").get<bool>();
  r.failed = j.at("failed").get<bool>();
  for (const auto& jt : j.at("tables")) {
    Table t;
    t.name = jt.at("name").get<std::string>();
    t.columns = jt.at("columns").get<std::vector<std::string>>();
    t.status = jt.at("status").get<std::vector<std::string>>();
    for (const auto& jr : jt.at("rows")) {
      std::vector<double> row;
      for (const auto& v : jr) row.push_back(decode(v));
      t.rows.push_back(std::move(row));
    }
    r.tables.push_back(std::move(t));
  }
  return r;
}

std::string to_csv(const ResultRecord& record, const Table& table) {
  std::ostringstream out;
  out << "# experiment = " << record.experiment << '\n';
  out << "# table = " << table.name << '\n';
  out << "# version = " << record.version << '\n';
  out << "# seed = " << record.seed << '\n';
  std::istringstream cfg(record.config);
  for (std::string line; std::getline(cfg, line);) out << "# " << line << '\n';
  for (const auto& w : record.warnings) out << "# warning: " << w << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << table.columns[c] << ',';
  out << "status\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (double v : table.rows[i]) out << format_number(v) << ',';
    std::string s = table.status[i];
    for (auto& ch : s)
      if (ch == ',' || ch == '\n') ch = ';';
    out << s << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> output_paths(const ResultRecord& record,
                                                const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths{dir / (record.experiment + ".json")};
  for (const auto& t : record.tables) paths.push_back(dir / (record.experiment + "_" + t.name + ".csv"));
  return paths;
}

std::vector<std::filesystem::path> write_record(const ResultRecord& record,
                                                const std::filesystem::path& dir, bool force) {
  std::filesystem::create_directories(dir);
  const auto paths = output_paths(record, dir);
  if (!force)
    for (const auto& p : paths)
      if (std::filesystem::exists(p))
        throw std::runtime_error("refusing to overwrite " + p.string() + " (use --force)");
  auto put = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
  };
  put(paths[0], to_json(record));
  for (std::size_t i = 0; i < record.tables.size(); ++i) put(paths[i + 1], to_csv(record, record.tables[i]));
  return paths;
}

}  // namespace nlsgibbs

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "nlsgibbs/config.hpp"
#include "nlsgibbs/error.hpp"
#include "nlsgibbs/record.hpp"

using namespace nlsgibbs;
namespace fs = std::filesystem;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

ResultRecord sample_record() {
  ResultRecord r;
  r.experiment = "scan";
  r.version = software_version();
  r.seed = 18446744073709551615ull;
  r.config = "[experiment]\ntag = scan\n";
  Table t;
  t.name = "cells";
  t.columns = {"beta", "value", "se"};
  t.add_row({0.0, 0.1, 1e-300});
  t.add_row({1.0 / 3.0, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()},
            "failed: something");
  t.add_row({-2.5e-17, -std::numeric_limits<double>::infinity(), 123456789.123456789}, "tainted");
  r.tables.push_back(t);
  Table e;
  e.name = "empty";
  e.columns = {"x"};
  r.tables.push_back(e);
  r.warnings = {"first, with a comma", "second \"quoted\""};
  r.tainted = true;
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("nlsgibbs_test_" + name + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("parse a full config") {
  const std::string text = R"([experiment]
tag = scan
seed = 42
threads = 3
output = out/dir

[model]
p = 4
alpha = 1.5
mass_density = 2
betas = 0, 0.5, 48
lengths = 8, 16
gammas = 1
points = 256, 1024

[mcmc]
steps = 1000
burn_in = 100
thin = 2
step_size = 0.2
adapt = false
target_acceptance = 0.3
ess_threshold = 40

[observables]
local_mass_half_width = 1.5
ou_window = auto
lags = 0, 1
q = 6
reference_beta = 48
deltas = 0.05, 0.1

[tail]
intervals = 4, 8
thresholds = 0.5, 1
samples = 500
min_exceedances = 10

[partition]
anchor_samples = 300
drift_samples = 400
drift_beta = 0.5
drift_mass =
)";
  const auto c = parse_config(text);
  CHECK(c.tag == "scan");
  CHECK(c.seed == 42);
  CHECK(c.threads == 3);
  CHECK(c.output == "out/dir");
  CHECK(c.alpha == 1.5);
  CHECK(c.betas == std::vector<double>{0.0, 0.5, 48.0});
  CHECK(c.points == std::vector<std::size_t>{256, 1024});
  CHECK(c.points_for(1) == 1024);
  CHECK(!c.adapt);
  CHECK(!c.ou_window);
  CHECK(c.reference_beta == 48.0);
  CHECK(c.drift_beta == 0.5);
  CHECK(!c.drift_mass);
  CHECK(c.tail_samples == 500);

  // canonical rendering round-trips exactly
  const auto again = parse_config(render_config(c));
  CHECK(render_config(again) == render_config(c));
  CHECK(again.betas == c.betas);
  CHECK(again.drift_beta == c.drift_beta);
  CHECK(again.output == c.output);
  // the record echo leaves out runtime-only keys
  const auto echo = render_config(c, false);
  CHECK(echo.find("output") == std::string::npos);
  CHECK(echo.find("threads") == std::string::npos);
  CHECK(parse_config(echo).threads == 1);
}

TEST_CASE("defaults and awkward numbers survive a round trip") {
  ExperimentConfig c;
  c.tag = "sample";
  c.alpha = 0.1;
  c.betas = {1.0 / 3.0, 1e-17, 12345.678901234567};
  c.seed = 18446744073709551615ull;
  const auto r = parse_config(render_config(c));
  CHECK(r.alpha == c.alpha);
  CHECK(r.betas == c.betas);
  CHECK(r.seed == c.seed);
}

TEST_CASE("config errors carry the key path") {
  const std::string head = "[experiment]\ntag = sample\n";
  CHECK(key_of(head + "[model]\nbetas =\n") == "model.betas");
  CHECK(key_of(head + "[model]\nbogus = 1\n") == "model.bogus");
  CHECK(key_of(head + "[nosuch]\nx = 1\n") == "nosuch.x");
  CHECK(key_of(head + "[model]\nalpha = abc\n") == "model.alpha");
  CHECK(key_of(head + "[model]\nalpha = -1\n") == "model.alpha");
  CHECK(key_of(head + "[model]\npoints = 100\n") == "model.points");
  CHECK(key_of(head + "[model]\np = 7\n") == "model.p");
  CHECK(key_of(head + "[mcmc]\nsteps = -5\n") == "mcmc.steps");
  CHECK(key_of(head + "[mcmc]\nadapt = maybe\n") == "mcmc.adapt");
  CHECK(key_of(head + "[mcmc]\nburn_in = 50000\n") == "mcmc.burn_in");
  CHECK(key_of(head + "[mcmc]\nstep_size = 2\n") == "mcmc.step_size");
  CHECK(key_of("[experiment]\ntag = bogus\n") == "experiment.tag");
  CHECK(key_of("stray = 1\n[experiment]\ntag = sample\n") == "stray");
  CHECK(key_of(head + "[model]\nlengths = 8, x\n") == "model.lengths");
  CHECK(key_of(head) == "<no error>");
  CHECK_THROWS_AS(parse_config("[experiment\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("JSON round trip is lossless") {
  const auto r = sample_record();
  const auto back = record_from_json(to_json(r));
  CHECK(equivalent(r, back));
  CHECK(back.seed == r.seed);
  CHECK(back.warnings == r.warnings);
  CHECK(back.tables[0].status == r.tables[0].status);
  CHECK(std::isnan(back.tables[0].rows[1][1]));
  CHECK(back.tables[0].rows[2][1] == -std::numeric_limits<double>::infinity());
  CHECK(back.tables[0].rows[0][2] == 1e-300);
  CHECK(to_json(back) == to_json(r));

  auto other = r;
  other.tables[0].rows[0][1] = std::nextafter(0.1, 1.0);
  CHECK(!equivalent(r, other));
  CHECK_THROWS(record_from_json("{not json"));
}

TEST_CASE("CSV layout") {
  const auto r = sample_record();
  const auto csv = to_csv(r, r.tables[0]);
  std::istringstream in(csv);
  std::string line, header;
  std::vector<std::string> data;
  bool saw_seed = false, saw_warning = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      saw_seed = saw_seed || line.find("18446744073709551615") != std::string::npos;
      saw_warning = saw_warning || line.rfind("# warning:", 0) == 0;
    } else if (header.empty()) {
      header = line;
    } else {
      data.push_back(line);
    }
  }
  CHECK(saw_seed);
  CHECK(saw_warning);
  CHECK(header == "beta,value,se,status");
  REQUIRE(data.size() == 3);
  CHECK(data[0].rfind("0,0.10000000000000001,", 0) == 0);
  CHECK(data[1].find("failed: something") != std::string::npos);
  // every numeric field parses back to the same double
  std::istringstream row(data[2]);
  std::string cell;
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == -2.5e-17);
  CHECK(to_csv(r, r.tables[0]) == csv);
}

TEST_CASE("writing records") {
  const auto dir = scratch_dir("write");
  const auto r = sample_record();
  const auto paths = write_record(r, dir, false);
  CHECK(paths == output_paths(r, dir));
  REQUIRE(paths.size() == 3);
  CHECK(paths[0].filename() == "scan.json");
  CHECK(paths[1].filename() == "scan_cells.csv");
  for (const auto& p : paths) CHECK(fs::exists(p));
  CHECK_THROWS_AS(write_record(r, dir, false), std::runtime_error);
  CHECK_NOTHROW(write_record(r, dir, true));

  std::ifstream in(paths[0]);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(equivalent(record_from_json(ss.str()), r));
  fs::remove_all(dir);
}

#include "nlsgibbs/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment.tag",         "experiment.seed",          "experiment.threads",
      "experiment.output",      "model.p",                  "model.alpha",
      "model.mass_density",     "model.betas",              "model.lengths",
      "model.gammas",           "model.points",             "mcmc.steps",
      "mcmc.burn_in",           "mcmc.thin",                "mcmc.step_size",
      "mcmc.adapt",             "mcmc.target_acceptance",   "mcmc.ess_threshold",
      "observables.local_mass_half_width", "observables.ou_window", "observables.lags",
      "observables.q",          "observables.reference_beta", "observables.deltas",
      "tail.intervals",         "tail.thresholds",          "tail.samples",
      "tail.min_exceedances",   "partition.anchor_samples", "partition.drift_samples",
      "partition.drift_beta",   "partition.drift_mass"};
  return keys;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key, "expected a number, got '" + s + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key, "expected a nonnegative integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

std::vector<std::string> split(const std::string& raw) {
  std::vector<std::string> out;
  if (trim(raw).empty()) return out;
  std::stringstream ss(raw);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(trim(item));
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <class T, class Conv>
  void get(const std::string& key, T& target, Conv conv) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) target = conv(key, *v);
  }
  void number(const std::string& key, double& t) const { get(key, t, to_double); }
  void count(const std::string& key, std::size_t& t) const {
    get(key, t, [](const std::string& k, const std::string& s) {
      return static_cast<std::size_t>(to_unsigned(k, s));
    });
  }
  void flag(const std::string& key, bool& t) const { get(key, t, to_bool); }
  void text(const std::string& key, std::string& t) const {
    get(key, t, [](const std::string&, const std::string& s) { return trim(s); });
  }
  void numbers(const std::string& key, std::vector<double>& t) const {
    get(key, t, [](const std::string& k, const std::string& s) {
      std::vector<double> out;
      for (const auto& item : split(s)) out.push_back(to_double(k, item));
      return out;
    });
  }
  void counts(const std::string& key, std::vector<std::size_t>& t) const {
    get(key, t, [](const std::string& k, const std::string& s) {
      std::vector<std::size_t> out;
      for (const auto& item : split(s)) out.push_back(static_cast<std::size_t>(to_unsigned(k, item)));
      return out;
    });
  }
  void optional_number(const std::string& key, std::optional<double>& t) const {
    get(key, t, [](const std::string& k, const std::string& s) -> std::optional<double> {
      const auto v = trim(s);
      if (v.empty() || v == "auto") return std::nullopt;
      return to_double(k, v);
    });
  }

 private:
  const pt::ptree& tree_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += fmt(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : "auto"; }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.message() + " at line " +
                              std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError(section, "top-level keys must live in a section");
    for (const auto& [key, value] : body) {
      const std::string path = section + "." + key;
      if (!known_keys().contains(path)) throw ConfigError(path, "unknown key");
    }
  }

  ExperimentConfig c;
  const Reader r(tree);
  r.text("experiment.tag", c.tag);
  r.get("experiment.seed", c.seed, to_unsigned);
  r.count("experiment.threads", c.threads);
  r.text("experiment.output", c.output);

  r.number("model.p", c.p);
  r.number("model.alpha", c.alpha);
  r.number("model.mass_density", c.mass_density);
  r.numbers("model.betas", c.betas);
  r.numbers("model.lengths", c.lengths);
  r.numbers("model.gammas", c.gammas);
  r.counts("model.points", c.points);

  r.count("mcmc.steps", c.steps);
  r.count("mcmc.burn_in", c.burn_in);
  r.count("mcmc.thin", c.thin);
  r.number("mcmc.step_size", c.step_size);
  r.flag("mcmc.adapt", c.adapt);
  r.number("mcmc.target_acceptance", c.target_acceptance);
  r.number("mcmc.ess_threshold", c.ess_threshold);

  r.number("observables.local_mass_half_width", c.local_mass_half_width);
  r.optional_number("observables.ou_window", c.ou_window);
  r.numbers("observables.lags", c.lags);
  r.number("observables.q", c.q);
  r.optional_number("observables.reference_beta", c.reference_beta);
  r.numbers("observables.deltas", c.deltas);

  r.numbers("tail.intervals", c.intervals);
  r.numbers("tail.thresholds", c.thresholds);
  r.count("tail.samples", c.tail_samples);
  r.count("tail.min_exceedances", c.min_exceedances);

  r.count("partition.anchor_samples", c.anchor_samples);
  r.count("partition.drift_samples", c.drift_samples);
  r.optional_number("partition.drift_beta", c.drift_beta);
  r.optional_number("partition.drift_mass", c.drift_mass);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const ExperimentConfig& c, bool include_runtime) {
  std::ostringstream o;
  o << "[experiment]\n"
    << "tag = " << c.tag << '\n'
    << "seed = " << c.seed << '\n'
    << (include_runtime ? "threads = " + std::to_string(c.threads) + "\noutput = " + c.output + "\n"
                        : std::string())
    << "\n[model]\n"
    << "p = " << fmt(c.p) << '\n'
    << "alpha = " << fmt(c.alpha) << '\n'
    << "mass_density = " << fmt(c.mass_density) << '\n'
    << "betas = " << join(c.betas) << '\n'
    << "lengths = " << join(c.lengths) << '\n'
    << "gammas = " << join(c.gammas) << '\n'
    << "points = " << join(c.points) << '\n'
    << "\n[mcmc]\n"
    << "steps = " << c.steps << '\n'
    << "burn_in = " << c.burn_in << '\n'
    << "thin = " << c.thin << '\n'
    << "step_size = " << fmt(c.step_size) << '\n'
    << "adapt = " << (c.adapt ? "true" : "false") << '\n'
    << "target_acceptance = " << fmt(c.target_acceptance) << '\n'
    << "ess_threshold = " << fmt(c.ess_threshold) << '\n'
    << "\n[observables]\n"
    << "local_mass_half_width = " << fmt(c.local_mass_half_width) << '\n'
    << "ou_window = " << opt(c.ou_window) << '\n'
    << "lags = " << join(c.lags) << '\n'
    << "q = " << fmt(c.q) << '\n'
    << "reference_beta = " << opt(c.reference_beta) << '\n'
    << "deltas = " << join(c.deltas) << '\n'
    << "\n[tail]\n"
    << "intervals = " << join(c.intervals) << '\n'
    << "thresholds = " << join(c.thresholds) << '\n'
    << "samples = " << c.tail_samples << '\n'
    << "min_exceedances = " << c.min_exceedances << '\n'
    << "\n[partition]\n"
    << "anchor_samples = " << c.anchor_samples << '\n'
    << "drift_samples = " << c.drift_samples << '\n'
    << "drift_beta = " << opt(c.drift_beta) << '\n'
    << "drift_mass = " << opt(c.drift_mass) << '\n';
  return o.str();
}

}  // namespace nlsgibbs

#pragma once

// INI config files for the experiment drivers. Sections and keys are listed in
// the README; lists are comma separated. Every error is a ConfigError whose
// key() is the dotted path (section.key) of the offending entry.

#include <filesystem>
#include <string>

#include "nlsgibbs/experiments.hpp"

namespace nlsgibbs {

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical INI text of a config: every key, fixed order, %.17g numbers.
/// parse_config(render_config(c)) reproduces c. Records echo the config
/// without the output directory and thread count, which affect no result.
std::string render_config(const ExperimentConfig& config, bool include_runtime = true);

}  // namespace nlsgibbs

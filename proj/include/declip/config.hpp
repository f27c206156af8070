#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "declip/harness.hpp"

namespace declip {

struct RunSettings {
  ExperimentConfig cfg;
  std::optional<SweepParam> sweep;
  std::filesystem::path out;
};

// Keys match the long command-line flags without the leading dashes
// (n, mod, cr, ebn0, p, frames, seed, algos, sweep, phase-mode, out, ...).
// List-valued keys take comma-separated values. Throws std::invalid_argument
// naming the key on unknown keys or malformed values.
void apply_setting(RunSettings& s, std::string_view key, std::string_view value);

// Plain key=value lines; '#' starts a comment, blank lines are ignored.
void apply_config_text(RunSettings& s, std::string_view text, std::string_view origin = "<config>");
void apply_config_file(RunSettings& s, const std::filesystem::path& path);

std::optional<SweepParam> parse_sweep_param(std::string_view name) noexcept;

}  // namespace declip

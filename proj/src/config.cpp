#include "declip/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace declip {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    const auto item = trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw std::invalid_argument(std::string(key) + ": " + std::string(why) + " '" + std::string(value) + "'");
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) bad(key, v, "expected a non-negative integer, got");
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  const std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::logic_error&) {
    bad(key, v, "expected a number, got");
  }
  if (used != s.size()) bad(key, v, "expected a number, got");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "expected on/off, got");
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_double(key, item));
  if (out.empty()) bad(key, v, "expected at least one value, got");
  return out;
}

}  // namespace

std::optional<SweepParam> parse_sweep_param(std::string_view name) noexcept {
  if (name == "p") return SweepParam::P;
  if (name == "ebn0") return SweepParam::EbN0;
  if (name == "cr") return SweepParam::CR;
  return std::nullopt;
}

void apply_setting(RunSettings& s, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  auto& c = s.cfg;
  if (key == "n") {
    c.n = to_u64(key, value);
  } else if (key == "mod") {
    c.modulation = static_cast<unsigned>(to_u64(key, value));
  } else if (key == "cr") {
    c.cr = to_doubles(key, value);
  } else if (key == "ebn0") {
    c.ebn0_db = to_doubles(key, value);
  } else if (key == "p") {
    c.reliable.clear();
    for (auto item : split_list(value)) c.reliable.push_back(to_u64(key, item));
    if (c.reliable.empty()) bad(key, value, "expected at least one value, got");
  } else if (key == "frames") {
    c.frames = to_u64(key, value);
  } else if (key == "seed") {
    c.seed = to_u64(key, value);
  } else if (key == "taps") {
    c.taps = to_u64(key, value);
  } else if (key == "cp") {
    c.cp_length = to_u64(key, value);
  } else if (key == "algos") {
    c.algorithms.clear();
    for (auto item : split_list(value)) {
      const auto a = parse_algorithm(item);
      if (!a) bad(key, item, "unknown algorithm");
      c.algorithms.push_back(*a);
    }
    if (c.algorithms.empty()) bad(key, value, "expected at least one algorithm, got");
  } else if (key == "panc-iterations") {
    c.panc_iterations = to_u64(key, value);
  } else if (key == "phase-mode") {
    if (value == "off") {
      c.phase_mode = PhaseMode::Off;
    } else if (value == "saturating") {
      c.phase_mode = PhaseMode::Saturating;
    } else {
      bad(key, value, "expected off or saturating, got");
    }
  } else if (key == "phi-max") {
    c.phi_max = to_double(key, value);
  } else if (key == "k-inflation") {
    c.k_inflation = to_double(key, value);
  } else if (key == "whitened") {
    c.whitened = to_bool(key, value);
  } else if (key == "noise-ref") {
    if (value == "receiver") {
      c.noise_ref = NoiseReference::Receiver;
    } else if (value == "channel-input") {
      c.noise_ref = NoiseReference::ChannelInput;
    } else {
      bad(key, value, "expected receiver or channel-input, got");
    }
  } else if (key == "threads") {
    c.threads = to_u64(key, value);
  } else if (key == "timing") {
    c.timing = to_bool(key, value);
  } else if (key == "generator") {
    c.generator = std::string(value);
  } else if (key == "sweep") {
    const auto p = parse_sweep_param(value);
    if (!p) bad(key, value, "expected p, ebn0 or cr, got");
    s.sweep = *p;
  } else if (key == "out") {
    s.out = std::string(value);
  } else {
    throw std::invalid_argument("unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunSettings& s, std::string_view text, std::string_view origin) {
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    auto line = text.substr(start, end == std::string_view::npos ? end : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = std::string(origin) + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) throw std::invalid_argument(where + "expected key=value");
    try {
      apply_setting(s, line.substr(0, eq), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + e.what());
    }
  }
}

void apply_config_file(RunSettings& s, const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  apply_config_text(s, ss.str(), path.string());
}

}  // namespace declip

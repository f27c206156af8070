#pragma once

#include <filesystem>
#include <string>

#include "declip/harness.hpp"

namespace declip {

// Header of every sweep CSV.
inline constexpr const char* kCsvHeader = "param,algo,ber,mult_count,runtime_ms,frames,seed";

std::string format_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

// Rows only; PointStats have no CSV representation.
SweepResult parse_csv_text(const std::string& text);
SweepResult parse_csv(const std::filesystem::path& path);

// Writes a matplotlib script that reads `csv_path` and draws BER on a log
// axis with a runtime inset.
void emit_plot_script(const SweepResult& result, SweepParam swept,
                      const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path);

}  // namespace declip

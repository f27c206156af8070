#include "declip/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace declip {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    parts.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_csv(const SweepResult& result) {
  if (result.rows.empty()) throw std::invalid_argument("format_csv: empty sweep result");
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : result.rows) {
    out += fmt("%.17g", r.param) + "," + r.algo + "," + fmt("%.17e", r.ber) + "," +
           fmt("%.17g", r.mult_count) + "," + fmt("%.17g", r.runtime_ms) + "," +
           std::to_string(r.frames) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_file(path, format_csv(result));
}

SweepResult parse_csv_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::runtime_error("parse_csv: missing or unexpected header");
  }
  SweepResult result;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw std::runtime_error("parse_csv: line " + std::to_string(lineno) + " has " +
                                                std::to_string(f.size()) + " fields");
    try {
      result.rows.push_back({std::stod(f[0]), f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4]),
                             std::stoull(f[5]), std::stoull(f[6])});
    } catch (const std::logic_error&) {
      throw std::runtime_error("parse_csv: malformed number on line " + std::to_string(lineno));
    }
  }
  return result;
}

SweepResult parse_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  try {
    return parse_csv_text(ss.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void emit_plot_script(const SweepResult& result, SweepParam swept,
                      const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path) {
  if (result.rows.empty()) throw std::invalid_argument("emit_plot_script: empty sweep result");
  std::string xlabel;
  switch (swept) {
    case SweepParam::P: xlabel = "Number of reliable carriers, P"; break;
    case SweepParam::EbN0: xlabel = "Eb/N0 (dB)"; break;
    case SweepParam::CR: xlabel = "Clipping ratio, CR = tau / sigma_x"; break;
  }
  std::string s;
  s += "#!/usr/bin/env python3\n";
  s += "# Generated by declip_sim. Usage: python3 <this script> [output.png]\n";
  s += "import csv\nimport sys\nfrom collections import defaultdict\n\n";
  s += "import matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n\n";
  s += "CSV = " + std::string("r'") + csv_path.string() + "'\n";
  s += "XLABEL = '" + xlabel + "'\n";
  s += "STYLE = {'unrecovered': dict(color='green', linestyle='-.'),\n"
       "         'wiht': dict(color='blue', marker='o', label='Weighted IHT'),\n"
       "         'oracle': dict(color='red', linestyle='--', label='Oracle-LS'),\n"
       "         'panc': dict(color='black', marker='s', label='PANC')}\n\n";
  s += "series = defaultdict(lambda: ([], [], [], []))\n"
       "with open(CSV, newline='') as fh:\n"
       "    for row in csv.DictReader(fh):\n"
       "        x, ber, rt, mc = series[row['algo']]\n"
       "        x.append(float(row['param']))\n"
       "        ber.append(float(row['ber']))\n"
       "        rt.append(float(row['runtime_ms']))\n"
       "        mc.append(float(row['mult_count']))\n\n";
  s += "fig, ax = plt.subplots(figsize=(6.4, 4.8))\n"
       "for algo, (x, ber, _, _) in sorted(series.items()):\n"
       "    style = dict(STYLE.get(algo, {}))\n"
       "    style.setdefault('label', algo.capitalize())\n"
       "    ax.semilogy(x, [max(b, 1e-7) for b in ber], **style)\n"
       "ax.set_xlabel(XLABEL)\n"
       "ax.set_ylabel('Uncoded BER')\n"
       "ax.grid(True, which='both', alpha=0.4)\n"
       "ax.legend(loc='lower left', fontsize=8)\n\n";
  s += "# Runtimes are zero when timing was disabled; show multiplications instead.\n"
       "timed = any(any(rt) for _, _, rt, _ in series.values())\n"
       "inset = ax.inset_axes([0.62, 0.62, 0.36, 0.34])\n"
       "for algo, (x, _, rt, mc) in sorted(series.items()):\n"
       "    y = rt if timed else mc\n"
       "    if algo == 'unrecovered' or not any(y):\n"
       "        continue\n"
       "    style = {k: v for k, v in STYLE.get(algo, {}).items() if k != 'label'}\n"
       "    inset.semilogy(x, y, **style)\n"
       "inset.set_ylabel('Runtime (ms)' if timed else 'Multiplications', fontsize=8)\n"
       "inset.tick_params(labelsize=7)\n"
       "inset.grid(True, which='both', alpha=0.3)\n\n";
  s += "out = sys.argv[1] if len(sys.argv) > 1 else CSV.rsplit('.', 1)[0] + '.png'\n"
       "fig.savefig(out, dpi=150, bbox_inches='tight')\n"
       "print(out)\n";
  write_file(script_path, s);
}

}  // namespace declip

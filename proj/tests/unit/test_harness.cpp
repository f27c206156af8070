#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "declip/config.hpp"
#include "declip/harness.hpp"
#include "declip/report.hpp"
#include "declip/rng.hpp"

using namespace declip;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.reliable = {70};
  cfg.frames = 40;
  cfg.timing = false;
  return cfg;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("declip_test_" + name);
}

}  // namespace

TEST_CASE("seed derivation and generator stream") {
  // Reference values of the documented mixing function.
  SplitMix64 g(0);
  CHECK(g() == 0xE220A8397B1DCDAFull);
  CHECK(g() == 0x6E789E6AA1B965F4ull);
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 1) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));

  SplitMix64 rng(5);
  double sum = 0.0, sq = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    CHECK_FALSE((u < 0.0 || u >= 1.0));
    sum += u;
    sq += u * u;
  }
  CHECK(std::abs(sum / count - 0.5) < 0.005);
  CHECK(std::abs(sq / count - 1.0 / 3.0) < 0.005);
}

TEST_CASE("ebn0_to_noise_var examples") {
  const Constellation qpsk(4), q16(16);
  CHECK(ebn0_to_noise_var(0.0, qpsk, 1.0) == doctest::Approx(0.5));
  CHECK(ebn0_to_noise_var(10.0, q16, 1.0) == doctest::Approx(1.0 / 40.0));
  CHECK(ebn0_to_noise_var(400.0, q16, 1.0) < 1e-30);
}

TEST_CASE("noise variance matches a direct SNR measurement") {
  ExperimentConfig cfg;
  const Constellation q(16);
  const double erx = measure_received_power(cfg, 1.3);
  // |x|^2 ~ Exp(1) for a Gaussian envelope, so E[min(|x|^2, tau^2)] is
  // 1 - exp(-tau^2); unit-power channels preserve it on average.
  const double expected = 1.0 - std::exp(-1.69);
  CHECK(erx == doctest::Approx(expected).epsilon(0.02));

  // Sample SNR at the receiver input with the calibrated noise variance.
  const double nv = ebn0_to_noise_var(15.0, q, erx);
  SplitMix64 rng(9);
  double noise = 0.0;
  const int samples = 200000;
  for (int i = 0; i < samples; ++i) noise += std::norm(rng.complex_gaussian(nv));
  const double snr = erx / (noise / samples);
  CHECK(snr == doctest::Approx(4.0 * std::pow(10.0, 1.5)).epsilon(0.02));
}

TEST_CASE("run_trial: clean link and determinism") {
  auto cfg = small_config();
  cfg.cr = {1e6};
  cfg.ebn0_db = {300.0};
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto t = run_trial(cfg, seed);
    REQUIRE(t.per_algorithm.size() == 4);
    CHECK(t.clip_support == 0);
    for (const auto& o : t.per_algorithm) {
      CHECK(o.bit_errors == 0);
      CHECK(o.bits == 128u * 4u);
    }
  }

  auto noisy = small_config();
  noisy.timing = true;
  const auto a = run_trial(noisy, 42);
  const auto b = run_trial(noisy, 42);
  CHECK(a.same_result(b));
  const auto c = run_trial(noisy, 43);
  CHECK_FALSE(a.same_result(c));
  for (const auto& o : a.per_algorithm) CHECK(o.bit_errors <= o.bits);
}

TEST_CASE("single-point sweep equals run_trial aggregation") {
  auto cfg = small_config();
  const auto sweep = run_sweep(cfg, SweepParam::P);
  const double rx = measure_received_power(cfg, cfg.cr[0]);
  const double nv = ebn0_to_noise_var(cfg.ebn0_db[0], Constellation(cfg.modulation), rx);
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> errs;
  std::map<std::string, std::uint64_t> mults;
  for (std::size_t f = 0; f < cfg.frames; ++f) {
    const auto t = run_trial(cfg, first_point(cfg), nv, derive_seed(cfg.seed, 0, f));
    for (const auto& o : t.per_algorithm) {
      auto& e = errs[std::string(algorithm_name(o.algorithm))];
      e.first += o.bit_errors;
      e.second += o.bits;
      mults[std::string(algorithm_name(o.algorithm))] += o.mult_count;
    }
  }
  REQUIRE(sweep.rows.size() == 4);
  for (const auto& row : sweep.rows) {
    CHECK(row.param == 70.0);
    CHECK(row.frames == cfg.frames);
    CHECK(row.seed == cfg.seed);
    const auto& e = errs.at(row.algo);
    CHECK(row.ber == static_cast<double>(e.first) / static_cast<double>(e.second));
    CHECK(row.mult_count == static_cast<double>(mults.at(row.algo)) / cfg.frames);
    CHECK(row.runtime_ms == 0.0);
  }
  // Canonical order: parameter, then algorithm name.
  CHECK(sweep.rows[0].algo == "oracle");
  CHECK(sweep.rows[1].algo == "panc");
  CHECK(sweep.rows[2].algo == "unrecovered");
  CHECK(sweep.rows[3].algo == "wiht");
}

TEST_CASE("CSV is identical across runs and thread counts") {
  auto cfg = small_config();
  cfg.ebn0_db = {12.0, 16.0};
  const auto one = format_csv(run_sweep(cfg, SweepParam::EbN0));
  const auto again = format_csv(run_sweep(cfg, SweepParam::EbN0));
  cfg.threads = 3;
  const auto threaded = format_csv(run_sweep(cfg, SweepParam::EbN0));
  CHECK(one == again);
  CHECK(one == threaded);
}

TEST_CASE("CSV emission and round trip") {
  SweepResult r;
  r.rows.push_back({275.0, "wiht", 1.6e-3, 85123.25, 0.0812, 2000, 1});
  const auto path = temp_path("one.csv");
  emit_csv(r, path);
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind("param,algo,ber,mult_count,runtime_ms,frames,seed\n", 0) == 0);
  CHECK(text.find("1.60000000000000008e-03") != std::string::npos);

  auto cfg = small_config();
  cfg.reliable = {50, 70, 90};
  const auto sweep = run_sweep(cfg, SweepParam::P);
  const auto path2 = temp_path("sweep.csv");
  emit_csv(sweep, path2);
  CHECK(parse_csv(path2).rows == sweep.rows);
  CHECK(parse_csv(path).rows == r.rows);

  CHECK_THROWS_AS(emit_csv(SweepResult{}, path), std::invalid_argument);
  try {
    emit_csv(r, "/nonexistent-dir/x.csv");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
  try {
    parse_csv("/nonexistent-dir/y.csv");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/y.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv_text("wrong,header\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_csv_text(std::string(kCsvHeader) + "\n1,wiht,x,1,1,1,1\n"), std::runtime_error);

  const auto script = temp_path("sweep.py");
  emit_plot_script(sweep, SweepParam::P, path2, script);
  std::ifstream ps(script);
  std::stringstream pss;
  pss << ps.rdbuf();
  CHECK(pss.str().find("semilogy") != std::string::npos);
  CHECK(pss.str().find("inset_axes") != std::string::npos);
  CHECK(pss.str().find(path2.string()) != std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
  std::filesystem::remove(script);
}

TEST_CASE("config parsing and precedence") {
  RunSettings s;
  apply_config_text(s,
                    "# comment\n"
                    "n = 256\n"
                    "mod=64\n"
                    "cr=1.2, 1.4\n"
                    "ebn0=10,12\n"
                    "p=100,120\n"
                    "frames=7   # trailing comment\n"
                    "seed=99\n"
                    "algos=wiht,panc\n"
                    "phase-mode=off\n"
                    "sweep=cr\n"
                    "out=/tmp/x.csv\n"
                    "\n"
                    "whitened=on\n"
                    "noise-ref=receiver\n"
                    "timing=off\n");
  CHECK(s.cfg.n == 256);
  CHECK(s.cfg.modulation == 64);
  CHECK(s.cfg.cr == std::vector<double>{1.2, 1.4});
  CHECK(s.cfg.ebn0_db == std::vector<double>{10.0, 12.0});
  CHECK(s.cfg.reliable == std::vector<std::size_t>{100, 120});
  CHECK(s.cfg.frames == 7);
  CHECK(s.cfg.seed == 99);
  CHECK(s.cfg.algorithms == std::vector<Algorithm>{Algorithm::Wiht, Algorithm::Panc});
  CHECK(s.cfg.phase_mode == PhaseMode::Off);
  CHECK(s.sweep == SweepParam::CR);
  CHECK(s.out == "/tmp/x.csv");
  CHECK(s.cfg.whitened);
  CHECK(s.cfg.noise_ref == NoiseReference::Receiver);
  CHECK_FALSE(s.cfg.timing);

  // A later setting (a command-line flag) overrides the file.
  apply_setting(s, "frames", "11");
  CHECK(s.cfg.frames == 11);

  CHECK_THROWS_AS(apply_setting(s, "bogus", "1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(s, "frames", "ten"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(s, "algos", "wiht,foo"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(s, "sweep", "n"), std::invalid_argument);
  try {
    apply_config_text(s, "n=4\nnot a pair\n", "file.cfg");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).rfind("file.cfg:2:", 0) == 0);
  }
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.n = 500;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.reliable = {512};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.frames = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.taps = 17;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.generator = "mt19937";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

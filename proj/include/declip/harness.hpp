#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "declip/nonlinearity.hpp"
#include "declip/ofdm_phy.hpp"

namespace declip {

enum class Algorithm { Unrecovered, Wiht, Oracle, Panc };

std::string_view algorithm_name(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

// Where the AWGN enters the link.
//   Receiver:     y = h * x_p + z, the textbook placement; after zero-forcing
//                 the noise on subcarrier k is scaled by 1/|Lambda_k|.
//   ChannelInput: y = h * (x_p + z); after zero-forcing every subcarrier sees
//                 the same noise variance. Same mean SNR at the receiver input.
enum class NoiseReference { Receiver, ChannelInput };

enum class SweepParam { P, EbN0, CR };

std::string_view sweep_param_name(SweepParam p) noexcept;

struct ExperimentConfig {
  std::size_t n = 512;
  unsigned modulation = 16;
  std::vector<double> cr{1.3};
  std::vector<double> ebn0_db{15.0};
  std::vector<std::size_t> reliable{275};
  std::size_t frames = 2000;
  std::uint64_t seed = 1;
  std::size_t taps = 4;
  std::size_t cp_length = 16;
  std::vector<Algorithm> algorithms{Algorithm::Unrecovered, Algorithm::Wiht, Algorithm::Oracle,
                                    Algorithm::Panc};
  std::size_t panc_iterations = 2;
  PhaseMode phase_mode = PhaseMode::Saturating;
  double phi_max = 0.3;
  double k_inflation = 1.0;
  bool whitened = false;
  NoiseReference noise_ref = NoiseReference::ChannelInput;
  std::size_t threads = 1;
  // When false, runtimes are reported as zero so output is reproducible byte
  // for byte.
  bool timing = true;
  // Named stream generator. Only "splitmix64" is implemented.
  std::string generator = "splitmix64";

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

// One (CR, Eb/N0, P) combination.
struct OperatingPoint {
  double cr = 1.3;
  double ebn0_db = 15.0;
  std::size_t reliable = 275;
};

OperatingPoint first_point(const ExperimentConfig& cfg);

struct AlgorithmOutcome {
  Algorithm algorithm = Algorithm::Unrecovered;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t mult_count = 0;
  std::chrono::nanoseconds duration{0};
  std::size_t support_size = 0;
  bool fallback = false;

  bool same_result(const AlgorithmOutcome& o) const noexcept {
    return algorithm == o.algorithm && bit_errors == o.bit_errors && bits == o.bits &&
           mult_count == o.mult_count && support_size == o.support_size && fallback == o.fallback;
  }
};

struct TrialOutcome {
  std::vector<AlgorithmOutcome> per_algorithm;  // config order
  std::size_t channel_redraws = 0;
  std::size_t clip_support = 0;  // |supp(c)| of the transmitted frame

  const AlgorithmOutcome* find(Algorithm a) const noexcept;
  // Equality ignoring wall-clock durations.
  bool same_result(const TrialOutcome& o) const noexcept;
};

// sigma_z^2 = E_rx / (log2(M) * 10^(Eb/N0 / 10)).
double ebn0_to_noise_var(double ebn0_db, const Constellation& qam, double received_power = 1.0);

// Mean per-sample power of h * x_p, estimated from `frames` pilot frames
// drawn on a stream disjoint from the trial streams.
double measure_received_power(const ExperimentConfig& cfg, double cr, std::size_t frames = 256);

TrialOutcome run_trial(const ExperimentConfig& cfg, const OperatingPoint& pt, double noise_var,
                       std::uint64_t frame_seed);
// First point of cfg, noise calibrated with measure_received_power.
TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t frame_seed);

struct SweepRow {
  double param = 0.0;
  std::string algo;
  double ber = 0.0;
  double mult_count = 0.0;  // mean per frame
  double runtime_ms = 0.0;  // mean per frame
  std::uint64_t frames = 0;
  std::uint64_t seed = 0;

  bool operator==(const SweepRow&) const = default;
};

// Per-point side information that has no CSV column.
struct PointStats {
  double param = 0.0;
  double noise_var = 0.0;
  double received_power = 0.0;
  std::uint64_t channel_redraws = 0;
  double mean_clip_support = 0.0;
  std::vector<std::pair<Algorithm, double>> mean_support;
  std::vector<std::pair<Algorithm, std::uint64_t>> fallbacks;
  std::vector<std::pair<Algorithm, std::uint64_t>> bit_errors;
  std::uint64_t bits = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by param, then algorithm name
  std::vector<PointStats> points;
};

// Frame f of point i uses derive_seed(cfg.seed, i, f). Frames may run on
// cfg.threads workers; all aggregates are integer sums, so the result does
// not depend on the thread count.
SweepResult run_sweep(const ExperimentConfig& cfg, SweepParam swept);

}  // namespace declip

#include "declip/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "declip/rng.hpp"
#include "declip/sparse_recovery.hpp"

namespace declip {
namespace {

// Stream tag for received-power calibration frames.
constexpr std::uint64_t kCalibrationPoint = 0xCA11B7A7E0000000ull;
constexpr std::size_t kMaxChannelRedraws = 1000;

std::vector<std::uint8_t> draw_bits(SplitMix64& rng, std::size_t count) {
  std::vector<std::uint8_t> bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

std::uint64_t count_bit_errors(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e += (a[i] != b[i]);
  return e;
}

ChannelRealization draw_channel(SplitMix64& rng, const ExperimentConfig& cfg, std::size_t& redraws) {
  for (;;) {
    auto ch = ChannelRealization::draw(rng, cfg.taps, cfg.n, cfg.cp_length);
    if (!ch.degenerate()) return ch;
    if (++redraws > kMaxChannelRedraws) throw DegenerateChannelError("run_trial: too many channel redraws");
  }
}

PaModel make_pa(const ExperimentConfig& cfg, double cr) {
  // Nominal signal power is 1 (unit-energy QAM, unitary IDFT), so tau = CR.
  return PaModel(threshold_from_cr(cr, 1.0), cfg.phase_mode, cfg.phi_max);
}

OperatingPoint point_at(const ExperimentConfig& cfg, SweepParam swept, std::size_t i) {
  OperatingPoint pt = first_point(cfg);
  switch (swept) {
    case SweepParam::P: pt.reliable = cfg.reliable.at(i); break;
    case SweepParam::EbN0: pt.ebn0_db = cfg.ebn0_db.at(i); break;
    case SweepParam::CR: pt.cr = cfg.cr.at(i); break;
  }
  return pt;
}

std::size_t point_count(const ExperimentConfig& cfg, SweepParam swept) {
  switch (swept) {
    case SweepParam::P: return cfg.reliable.size();
    case SweepParam::EbN0: return cfg.ebn0_db.size();
    case SweepParam::CR: return cfg.cr.size();
  }
  return 0;
}

double param_value(const OperatingPoint& pt, SweepParam swept) {
  switch (swept) {
    case SweepParam::P: return static_cast<double>(pt.reliable);
    case SweepParam::EbN0: return pt.ebn0_db;
    case SweepParam::CR: return pt.cr;
  }
  return 0.0;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Unrecovered: return "unrecovered";
    case Algorithm::Wiht: return "wiht";
    case Algorithm::Oracle: return "oracle";
    case Algorithm::Panc: return "panc";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (auto a : {Algorithm::Unrecovered, Algorithm::Wiht, Algorithm::Oracle, Algorithm::Panc}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view sweep_param_name(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::P: return "p";
    case SweepParam::EbN0: return "ebn0";
    case SweepParam::CR: return "cr";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (n < 4 || !std::has_single_bit(n)) throw std::invalid_argument("n must be a power of two >= 4");
  Constellation check(modulation);  // throws for a non-square order
  if (cr.empty() || ebn0_db.empty() || reliable.empty()) {
    throw std::invalid_argument("cr, ebn0 and p need at least one value each");
  }
  for (double c : cr) {
    if (!(c > 0.0)) throw std::invalid_argument("cr must be > 0");
  }
  for (auto p : reliable) {
    if (p < 1 || p >= n) throw std::invalid_argument("p must satisfy 1 <= p < n");
  }
  if (frames < 1) throw std::invalid_argument("frames must be >= 1");
  if (taps < 1 || taps > cp_length) throw std::invalid_argument("taps must be in [1, cp length]");
  if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (!(k_inflation > 0.0)) throw std::invalid_argument("k-inflation must be > 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (generator != "splitmix64") throw std::invalid_argument("unknown generator '" + generator + "'");
}

OperatingPoint first_point(const ExperimentConfig& cfg) {
  return {cfg.cr.at(0), cfg.ebn0_db.at(0), cfg.reliable.at(0)};
}

const AlgorithmOutcome* TrialOutcome::find(Algorithm a) const noexcept {
  for (const auto& o : per_algorithm) {
    if (o.algorithm == a) return &o;
  }
  return nullptr;
}

bool TrialOutcome::same_result(const TrialOutcome& o) const noexcept {
  if (channel_redraws != o.channel_redraws || clip_support != o.clip_support ||
      per_algorithm.size() != o.per_algorithm.size()) {
    return false;
  }
  for (std::size_t i = 0; i < per_algorithm.size(); ++i) {
    if (!per_algorithm[i].same_result(o.per_algorithm[i])) return false;
  }
  return true;
}

double ebn0_to_noise_var(double ebn0_db, const Constellation& qam, double received_power) {
  return received_power / (qam.bits_per_symbol() * std::pow(10.0, ebn0_db / 10.0));
}

double measure_received_power(const ExperimentConfig& cfg, double cr, std::size_t frames) {
  const Constellation qam(cfg.modulation);
  const PaModel pa = make_pa(cfg, cr);
  double power = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    SplitMix64 rng(derive_seed(cfg.seed, kCalibrationPoint, f));
    const auto bits = draw_bits(rng, cfg.n * qam.bits_per_symbol());
    const TimeFrame clipped = clip_signal(idft(qam_map(bits, qam)), pa);
    std::size_t redraws = 0;
    const TimeFrame rx = apply_channel(clipped, draw_channel(rng, cfg, redraws));
    for (auto v : rx.values) power += std::norm(v);
  }
  return power / static_cast<double>(frames * cfg.n);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const OperatingPoint& pt, double noise_var,
                       std::uint64_t frame_seed) {
  const Constellation qam(cfg.modulation);
  const std::size_t n = cfg.n;
  SplitMix64 rng(frame_seed);
  TrialOutcome out;

  // Transmitter: bits -> QAM -> IDFT -> amplifier.
  const auto bits = draw_bits(rng, n * qam.bits_per_symbol());
  const TimeFrame x = idft(qam_map(bits, qam));
  const PaModel pa = make_pa(cfg, pt.cr);
  const TimeFrame x_p = clip_signal(x, pa);
  const ClipVector clip = clip_vector(x, x_p);
  out.clip_support = clip.support.size();

  // Channel and noise. Both noise placements consume the same N draws.
  const ChannelRealization ch = draw_channel(rng, cfg, out.channel_redraws);
  TimeFrame y;
  if (cfg.noise_ref == NoiseReference::Receiver) {
    y = apply_channel(x_p, ch, noise_var, rng);
  } else {
    TimeFrame noisy = x_p;
    for (auto& v : noisy.values) v += rng.complex_gaussian(noise_var);
    y = apply_channel(noisy, ch);
  }

  const FrequencyFrame received = dft(y);
  const FrequencyFrame equalized = equalize(received, ch);
  const FrequencyFrame sliced = slicer(equalized, qam);

  std::optional<SensingProblem> prob;
  auto sensing = [&]() -> const SensingProblem& {
    if (!prob) {
      std::vector<double> row_var;
      const auto rel = select_reliable(equalized, qam, pt.reliable);
      row_var.reserve(rel.size());
      for (auto k : rel.indices) {
        row_var.push_back(cfg.noise_ref == NoiseReference::Receiver
                              ? noise_var / std::norm(ch.eigenvalues()[k])
                              : noise_var);
      }
      prob.emplace(build_sensing(rel, equalized, sliced, std::move(row_var)));
    }
    return *prob;
  };

  const std::uint64_t nbits = bits.size();
  for (Algorithm a : cfg.algorithms) {
    AlgorithmOutcome o;
    o.algorithm = a;
    o.bits = nbits;
    auto score = [&](const RecoveryResult& r) {
      o.bit_errors = count_bit_errors(bits, demap(r.frequency_estimate, qam));
      o.mult_count = r.mult_count;
      o.duration = cfg.timing ? r.duration : std::chrono::nanoseconds{0};
      o.support_size = r.support.size();
      o.fallback = r.status == RecoveryStatus::NumericalFallback;
    };
    switch (a) {
      case Algorithm::Unrecovered:
        o.bit_errors = count_bit_errors(bits, demap(equalized, qam));
        break;
      case Algorithm::Wiht: {
        WihtOptions opts;
        opts.k_inflation = cfg.k_inflation;
        opts.blue.whitened = cfg.whitened;
        score(wiht_recover(equalized, sensing(), opts));
        break;
      }
      case Algorithm::Oracle: {
        BlueOptions opts;
        opts.whitened = cfg.whitened;
        score(oracle_ls(equalized, sensing(), SupportSet{clip.support}, opts));
        break;
      }
      case Algorithm::Panc:
        score(panc_recover(received, ch, pa, qam, cfg.panc_iterations));
        break;
    }
    out.per_algorithm.push_back(o);
  }
  return out;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t frame_seed) {
  cfg.validate();
  const OperatingPoint pt = first_point(cfg);
  const double rx_power = measure_received_power(cfg, pt.cr);
  const double noise_var = ebn0_to_noise_var(pt.ebn0_db, Constellation(cfg.modulation), rx_power);
  return run_trial(cfg, pt, noise_var, frame_seed);
}

SweepResult run_sweep(const ExperimentConfig& cfg, SweepParam swept) {
  cfg.validate();
  const Constellation qam(cfg.modulation);
  SweepResult result;
  std::map<double, double> rx_power_by_cr;

  for (std::size_t i = 0; i < point_count(cfg, swept); ++i) {
    const OperatingPoint pt = point_at(cfg, swept, i);
    auto [it, fresh] = rx_power_by_cr.try_emplace(pt.cr, 0.0);
    if (fresh) it->second = measure_received_power(cfg, pt.cr);
    const double noise_var = ebn0_to_noise_var(pt.ebn0_db, qam, it->second);

    std::vector<TrialOutcome> trials(cfg.frames);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      try {
        for (std::size_t f = next++; f < cfg.frames; f = next++) {
          trials[f] = run_trial(cfg, pt, noise_var, derive_seed(cfg.seed, i, f));
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.frames;
      }
    };
    if (cfg.threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    PointStats stats;
    stats.param = param_value(pt, swept);
    stats.noise_var = noise_var;
    stats.received_power = it->second;
    std::uint64_t clip_support = 0;
    for (const auto& t : trials) {
      stats.channel_redraws += t.channel_redraws;
      clip_support += t.clip_support;
    }
    stats.mean_clip_support = static_cast<double>(clip_support) / static_cast<double>(cfg.frames);

    for (Algorithm a : cfg.algorithms) {
      std::uint64_t errors = 0, bits = 0, mults = 0, support = 0, fallbacks = 0;
      std::int64_t nanos = 0;
      for (const auto& t : trials) {
        const AlgorithmOutcome* o = t.find(a);
        errors += o->bit_errors;
        bits += o->bits;
        mults += o->mult_count;
        support += o->support_size;
        fallbacks += o->fallback;
        nanos += o->duration.count();
      }
      const auto frames = static_cast<double>(cfg.frames);
      result.rows.push_back({stats.param, std::string(algorithm_name(a)),
                             static_cast<double>(errors) / static_cast<double>(bits),
                             static_cast<double>(mults) / frames,
                             static_cast<double>(nanos) / 1e6 / frames, cfg.frames, cfg.seed});
      stats.mean_support.emplace_back(a, static_cast<double>(support) / frames);
      stats.fallbacks.emplace_back(a, fallbacks);
      stats.bit_errors.emplace_back(a, errors);
      stats.bits = bits;
    }
    result.points.push_back(std::move(stats));
  }

  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.param < b.param || (a.param == b.param && a.algo < b.algo);
  });
  std::stable_sort(result.points.begin(), result.points.end(),
                   [](const PointStats& a, const PointStats& b) { return a.param < b.param; });
  return result;
}

}  // namespace declip

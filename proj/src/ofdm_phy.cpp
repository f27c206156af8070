#include "declip/ofdm_phy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "declip/fft.hpp"
#include "declip/simd/kernels.hpp"

namespace declip {

Constellation::Constellation(unsigned order) : order_(order) {
  if (order < 4 || !std::has_single_bit(order) || (std::bit_width(order) - 1) % 2 != 0) {
    throw std::invalid_argument("QAM order must be a power of 4, got " + std::to_string(order));
  }
  bits_per_symbol_ = static_cast<unsigned>(std::bit_width(order) - 1);
  side_ = 1u << (bits_per_symbol_ / 2);
  // Levels are odd multiples of scale_; mean energy 2/3 (M-1) scale^2 = 1.
  scale_ = std::sqrt(3.0 / (2.0 * (order - 1)));

  level_from_gray_.resize(side_);
  for (unsigned level = 0; level < side_; ++level) level_from_gray_[level ^ (level >> 1)] = level;

  points_.reserve(order);
  for (unsigned li = 0; li < side_; ++li) {
    for (unsigned lq = 0; lq < side_; ++lq) {
      const double re = (2.0 * li - (side_ - 1.0)) * scale_;
      const double im = (2.0 * lq - (side_ - 1.0)) * scale_;
      points_.emplace_back(re, im);
    }
  }
}

double Constellation::average_energy() const noexcept {
  double e = 0.0;
  for (auto p : points_) e += std::norm(p);
  return e / static_cast<double>(points_.size());
}

std::size_t Constellation::nearest_level(double v) const noexcept {
  const double t = (v / scale_ + (side_ - 1.0)) / 2.0;  // level coordinate
  const double lower = std::floor(t);
  double level = (t - lower > 0.5 + 1e-9) ? lower + 1.0 : lower;
  level = std::clamp(level, 0.0, side_ - 1.0);
  return static_cast<std::size_t>(level);
}

std::size_t Constellation::nearest_index(cplx v) const noexcept {
  return nearest_level(v.real()) * side_ + nearest_level(v.imag());
}

std::size_t Constellation::index_from_bits(std::span<const std::uint8_t> bits) const {
  if (bits.size() != bits_per_symbol_) throw InputSizeError("index_from_bits: wrong bit count");
  const unsigned half = bits_per_symbol_ / 2;
  unsigned gi = 0, gq = 0;
  for (unsigned b = 0; b < half; ++b) {
    gi = (gi << 1) | (bits[b] & 1u);
    gq = (gq << 1) | (bits[half + b] & 1u);
  }
  return static_cast<std::size_t>(level_from_gray_[gi]) * side_ + level_from_gray_[gq];
}

void Constellation::bits_from_index(std::size_t index, std::span<std::uint8_t> bits) const {
  if (bits.size() != bits_per_symbol_) throw InputSizeError("bits_from_index: wrong bit count");
  const unsigned half = bits_per_symbol_ / 2;
  const auto li = static_cast<unsigned>(index / side_);
  const auto lq = static_cast<unsigned>(index % side_);
  const unsigned gi = li ^ (li >> 1);
  const unsigned gq = lq ^ (lq >> 1);
  for (unsigned b = 0; b < half; ++b) {
    bits[b] = static_cast<std::uint8_t>((gi >> (half - 1 - b)) & 1u);
    bits[half + b] = static_cast<std::uint8_t>((gq >> (half - 1 - b)) & 1u);
  }
}

FrequencyFrame qam_map(std::span<const std::uint8_t> bits, const Constellation& qam) {
  const unsigned k = qam.bits_per_symbol();
  if (bits.empty() || bits.size() % k != 0) {
    throw InputSizeError("qam_map: " + std::to_string(bits.size()) +
                         " bits is not a whole number of " + std::to_string(k) + "-bit symbols");
  }
  FrequencyFrame out(bits.size() / k);
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s] = qam.point(qam.index_from_bits(bits.subspan(s * k, k)));
  }
  return out;
}

FrequencyFrame slicer(const FrequencyFrame& frame, const Constellation& qam) {
  FrequencyFrame out(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out[i] = qam.point(qam.nearest_index(frame[i]));
  return out;
}

std::vector<std::uint8_t> demap(const FrequencyFrame& frame, const Constellation& qam) {
  const unsigned k = qam.bits_per_symbol();
  std::vector<std::uint8_t> bits(frame.size() * k);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    qam.bits_from_index(qam.nearest_index(frame[i]), std::span(bits).subspan(i * k, k));
  }
  return bits;
}

FrequencyFrame dft(const TimeFrame& x) {
  FrequencyFrame out(x.size());
  fft::forward(x.values, out.values);
  return out;
}

TimeFrame idft(const FrequencyFrame& x) {
  TimeFrame out(x.size());
  fft::inverse(x.values, out.values);
  return out;
}

ChannelRealization::ChannelRealization(CVector taps, std::size_t n, std::size_t cp_length)
    : taps_(std::move(taps)), eigenvalues_(n), cp_length_(cp_length) {
  if (taps_.empty() || taps_.size() > n) throw InputSizeError("channel: tap count must be in [1, N]");
  if (taps_.size() > cp_length_) {
    throw InputSizeError("channel: delay spread exceeds the cyclic prefix");
  }
  CVector padded(n);
  std::copy(taps_.begin(), taps_.end(), padded.begin());
  fft::forward(padded, eigenvalues_);
  const double gain = std::sqrt(static_cast<double>(n));
  for (auto& v : eigenvalues_) v *= gain;
}

ChannelRealization ChannelRealization::draw(SplitMix64& rng, std::size_t num_taps, std::size_t n,
                                            std::size_t cp_length) {
  CVector taps(num_taps);
  double power = 0.0;
  for (auto& t : taps) {
    t = rng.complex_gaussian(1.0);
    power += std::norm(t);
  }
  const double norm = 1.0 / std::sqrt(power);
  for (auto& t : taps) t *= norm;
  return ChannelRealization(std::move(taps), n, cp_length);
}

double ChannelRealization::min_gain() const noexcept {
  double g = INFINITY;
  for (auto v : eigenvalues_) g = std::min(g, std::abs(v));
  return g;
}

TimeFrame apply_channel(const TimeFrame& x, const ChannelRealization& ch) {
  const std::size_t n = x.size();
  if (n != ch.size()) throw InputSizeError("apply_channel: frame and channel sizes differ");
  TimeFrame y(n);
  const auto taps = ch.taps();
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    for (std::size_t l = 0; l < taps.size(); ++l) acc += taps[l] * x[(i + n - l) % n];
    y[i] = acc;
  }
  return y;
}

TimeFrame apply_channel(const TimeFrame& x, const ChannelRealization& ch, double noise_var,
                        SplitMix64& rng) {
  if (!(noise_var >= 0.0)) throw std::invalid_argument("apply_channel: noise variance must be >= 0");
  TimeFrame y = apply_channel(x, ch);
  for (auto& v : y.values) v += rng.complex_gaussian(noise_var);
  return y;
}

FrequencyFrame equalize(const FrequencyFrame& y, const ChannelRealization& ch) {
  if (y.size() != ch.size()) throw InputSizeError("equalize: frame and channel sizes differ");
  if (ch.degenerate()) {
    throw DegenerateChannelError("equalize: |Lambda_k| below " +
                                 std::to_string(ChannelRealization::kSingularityFloor));
  }
  FrequencyFrame out(y.size());
  simd::kernels().div(y.values.data(), ch.eigenvalues().data(), out.values.data(), y.size());
  return out;
}

}  // namespace declip

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "declip/rng.hpp"
#include "declip/types.hpp"

namespace declip {

// Square M-QAM with per-axis Gray labels, scaled to unit mean energy.
//
// Point index = iq_level_i * side + iq_level_q, where level 0 is the most
// negative amplitude. The first log2(side) bits of a symbol select the
// in-phase level through its Gray label, the remaining bits the quadrature
// level. All-zero bits therefore map to the (-,-) corner, index 0.
class Constellation {
 public:
  explicit Constellation(unsigned order);

  unsigned order() const noexcept { return order_; }
  unsigned side() const noexcept { return side_; }
  unsigned bits_per_symbol() const noexcept { return bits_per_symbol_; }
  double d_min() const noexcept { return 2.0 * scale_; }
  double average_energy() const noexcept;
  std::span<const cplx> points() const noexcept { return points_; }
  cplx point(std::size_t index) const { return points_.at(index); }

  // Nearest point. A value within 1e-9 (grid units) of a decision boundary
  // resolves to the lower level on that axis, i.e. the lower point index.
  std::size_t nearest_index(cplx v) const noexcept;

  std::size_t index_from_bits(std::span<const std::uint8_t> bits) const;
  void bits_from_index(std::size_t index, std::span<std::uint8_t> bits) const;

 private:
  std::size_t nearest_level(double v) const noexcept;

  unsigned order_;
  unsigned side_;
  unsigned bits_per_symbol_;
  double scale_;  // half the spacing between adjacent levels
  std::vector<cplx> points_;
  std::vector<unsigned> level_from_gray_;
};

// bits.size() must equal N * log2(M); N is inferred.
FrequencyFrame qam_map(std::span<const std::uint8_t> bits, const Constellation& qam);
FrequencyFrame slicer(const FrequencyFrame& frame, const Constellation& qam);
std::vector<std::uint8_t> demap(const FrequencyFrame& frame, const Constellation& qam);

FrequencyFrame dft(const TimeFrame& x);
TimeFrame idft(const FrequencyFrame& x);

// Multipath channel with cyclic prefix, i.e. circular convolution by taps.
// eigenvalues() is the unnormalized N-point DFT of the zero-padded taps, so
// with the unitary DFT the received spectrum is eigenvalues() .* dft(x).
class ChannelRealization {
 public:
  static constexpr std::size_t kDefaultCpLength = 16;
  static constexpr double kSingularityFloor = 1e-6;

  ChannelRealization(CVector taps, std::size_t n, std::size_t cp_length = kDefaultCpLength);

  // i.i.d. CN(0,1) taps, rescaled to unit total power.
  static ChannelRealization draw(SplitMix64& rng, std::size_t num_taps, std::size_t n,
                                 std::size_t cp_length = kDefaultCpLength);

  std::span<const cplx> taps() const noexcept { return taps_; }
  std::span<const cplx> eigenvalues() const noexcept { return eigenvalues_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  std::size_t cp_length() const noexcept { return cp_length_; }
  double min_gain() const noexcept;
  bool degenerate() const noexcept { return min_gain() < kSingularityFloor; }

 private:
  CVector taps_;
  CVector eigenvalues_;
  std::size_t cp_length_;
};

// Circular convolution plus CN(0, noise_var) per sample. Noise samples are
// drawn from rng even when noise_var is zero so the stream position does not
// depend on the noise level.
TimeFrame apply_channel(const TimeFrame& x, const ChannelRealization& ch, double noise_var,
                        SplitMix64& rng);
// Noise-free convenience overload.
TimeFrame apply_channel(const TimeFrame& x, const ChannelRealization& ch);

// Zero-forcing: Y ./ eigenvalues. Throws DegenerateChannelError below the floor.
FrequencyFrame equalize(const FrequencyFrame& y, const ChannelRealization& ch);

}  // namespace declip

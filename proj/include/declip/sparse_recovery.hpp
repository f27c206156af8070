#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "declip/nonlinearity.hpp"
#include "declip/ofdm_phy.hpp"
#include "declip/op_count.hpp"
#include "declip/types.hpp"

namespace declip {

// ---------------------------------------------------------------------------
// Reliable-carrier selection
// ---------------------------------------------------------------------------

// Geometric reliability of a slicer residual e for a square QAM grid:
//   R = (sqrt2*d - |e|)/(sqrt2*d) + |e|/(sqrt2*d) * cos(4*arg(e) + pi)
// 1 for e = 0 or a purely diagonal deviation; drops fastest along the axes,
// where the neighbouring decision boundary is closest.
double reliability(cplx deviation, double d_min);

struct ReliableSet {
  std::vector<std::size_t> indices;  // ascending subcarrier indices
  std::vector<double> scores;        // reliability of every subcarrier
  std::size_t size() const noexcept { return indices.size(); }
};

// The `count` subcarriers with the highest reliability; ties go to the lower
// subcarrier index.
ReliableSet select_reliable(const FrequencyFrame& equalized, const Constellation& qam,
                            std::size_t count);

// ---------------------------------------------------------------------------
// Sensing problem  y = A c + z'
// ---------------------------------------------------------------------------

// A is the unitary DFT restricted to the reliable rows. It is never stored
// densely: entry (k, j) is read from a shared table of N twiddles.
class SensingProblem {
 public:
  SensingProblem(std::size_t n, std::vector<std::size_t> rows, CVector measurement,
                 std::vector<double> row_noise_var = {});

  std::size_t n() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::span<const std::size_t> row_indices() const noexcept { return rows_; }
  std::span<const cplx> measurement() const noexcept { return measurement_; }
  // Per-row variance of z' (sigma^2 / |Lambda_k|^2 for receiver noise). May
  // be empty when unknown.
  std::span<const double> row_noise_var() const noexcept { return row_noise_var_; }

  cplx entry(std::size_t row, std::size_t col) const noexcept {
    return (*twiddles_)[(rows_[row] * col) % n_];
  }
  void column(std::size_t col, std::span<cplx> out) const;
  // Row-major P x N copy, for tests and small problems.
  CVector dense() const;

  // A^H y for every column, computed as a zero-filled inverse DFT.
  CVector correlate(OpCounter* ops = nullptr) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> rows_;
  CVector measurement_;
  std::vector<double> row_noise_var_;
  std::shared_ptr<const CVector> twiddles_;
};

// Measurement = (equalized - sliced) on the reliable rows.
SensingProblem build_sensing(const ReliableSet& rel, const FrequencyFrame& equalized,
                             const FrequencyFrame& sliced, std::vector<double> row_noise_var = {});

// ---------------------------------------------------------------------------
// Weighted IHT building blocks
// ---------------------------------------------------------------------------

// Number of correlations at or above half the largest, scaled by `inflation`
// (rounded up) and clamped to [1, max(1, rows - 1)]. Returns 0 when every
// correlation is zero, meaning no clipping was detected.
std::size_t estimate_k(std::span<const double> correlation_magnitude, std::size_t rows,
                       double inflation = 1.0);
std::size_t estimate_k(const SensingProblem& prob, double inflation = 1.0);

double estimate_tau(const TimeFrame& clipped_estimate);

// w_i = exp(-(tau_hat - |x_i|)). Requires tau_hat >= max|x_i| (to rounding).
std::vector<double> weight_vector(const TimeFrame& clipped_estimate, double tau_hat);

struct SupportSet {
  std::vector<std::size_t> indices;  // ascending
  std::size_t size() const noexcept { return indices.size(); }
  bool operator==(const SupportSet&) const = default;
};

// Indices of the k largest nonzero magnitudes, ties to the lower index.
SupportSet hard_threshold(std::span<const double> magnitude, std::size_t k);
SupportSet hard_threshold(std::span<const cplx> v, std::size_t k);

struct BlueOptions {
  // Weight rows by 1/row_noise_var before solving. Off by default.
  bool whitened = false;
  // Cholesky pivot-ratio bound, (max L_jj / min L_jj)^2.
  double max_condition = 1e8;
};

// Least squares of y on the columns of A listed in `support`, via the normal
// equations and a Cholesky factorization. The result is zero off-support.
// Throws NumericalFailure when the Gram matrix is not safely positive definite.
ClipVector blue_estimate(const SensingProblem& prob, const SupportSet& support,
                         OpCounter* ops = nullptr, const BlueOptions& opts = {});

// ---------------------------------------------------------------------------
// Recovery algorithms
// ---------------------------------------------------------------------------

enum class RecoveryStatus {
  Corrected,
  NoClippingDetected,  // y = 0, nothing to estimate
  NumericalFallback,   // least squares failed; zero correction returned
};

struct RecoveryResult {
  TimeFrame clip_estimate;        // c_hat, zero off-support
  TimeFrame signal_estimate;      // x_hat = x_hat_p - c_hat
  FrequencyFrame frequency_estimate;  // dft(x_hat), the detector input
  SupportSet support;
  std::size_t k = 0;
  double tau_hat = 0.0;
  // Complex multiplications of the algorithm proper. Producing
  // frequency_estimate for detection is not charged.
  std::uint64_t mult_count = 0;
  std::chrono::nanoseconds duration{0};
  RecoveryStatus status = RecoveryStatus::Corrected;
};

struct WihtOptions {
  double k_inflation = 1.0;
  // Overrides the estimated K when set (still clamped to the valid range).
  std::optional<std::size_t> fixed_k;
  BlueOptions blue;
};

// Weighted iterative hard thresholding: one thresholding step on the
// clipping-probability-weighted correlation picks the support, least squares
// on that support gives the clip values. Needs no knowledge of the amplifier.
RecoveryResult wiht_recover(const FrequencyFrame& equalized, const SensingProblem& prob,
                            const WihtOptions& opts = {});

// Genie baseline: least squares on the true clip support.
RecoveryResult oracle_ls(const FrequencyFrame& equalized, const SensingProblem& prob,
                         const SupportSet& true_support, const BlueOptions& opts = {});

// Decision-aided PA nonlinearity cancellation with a known amplifier model.
// Each iteration: slice, regenerate the time signal, re-clip it through `pa`,
// and subtract the spectrum of the predicted distortion from the equalized
// frame.
RecoveryResult panc_recover(const FrequencyFrame& received, const ChannelRealization& ch,
                            const PaModel& pa, const Constellation& qam,
                            std::size_t iterations = 2);

}  // namespace declip

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "declip/fft.hpp"
#include "declip/sparse_recovery.hpp"

namespace declip {
namespace {

// exp(-2*pi*i*m/n) / sqrt(n), shared across problems of the same size.
std::shared_ptr<const CVector> twiddle_table(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const CVector>> tables;
  std::lock_guard lock(mu);
  auto& slot = tables[n];
  if (!slot) {
    auto t = std::make_shared<CVector>(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
      (*t)[m] = std::polar(scale, angle);
    }
    slot = std::move(t);
  }
  return slot;
}

}  // namespace

double reliability(cplx deviation, double d_min) {
  if (!(d_min > 0.0)) throw std::invalid_argument("reliability: d_min must be > 0");
  const double span = std::numbers::sqrt2 * d_min;
  const double mag = std::abs(deviation);
  const double theta = std::arg(deviation);
  return (span - mag) / span + (mag / span) * std::cos(4.0 * theta + std::numbers::pi);
}

ReliableSet select_reliable(const FrequencyFrame& equalized, const Constellation& qam,
                            std::size_t count) {
  const std::size_t n = equalized.size();
  if (count < 1 || count > n) throw std::invalid_argument("select_reliable: need 1 <= P <= N");

  ReliableSet rel;
  rel.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx decided = qam.point(qam.nearest_index(equalized[i]));
    rel.scores[i] = reliability(equalized[i] - decided, qam.d_min());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& s = rel.scores;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&s](std::size_t a, std::size_t b) { return s[a] > s[b] || (s[a] == s[b] && a < b); });
  rel.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(rel.indices.begin(), rel.indices.end());
  return rel;
}

SensingProblem::SensingProblem(std::size_t n, std::vector<std::size_t> rows, CVector measurement,
                               std::vector<double> row_noise_var)
    : n_(n),
      rows_(std::move(rows)),
      measurement_(std::move(measurement)),
      row_noise_var_(std::move(row_noise_var)),
      twiddles_(twiddle_table(n)) {
  if (rows_.size() != measurement_.size()) {
    throw InputSizeError("SensingProblem: one measurement per selected row required");
  }
  if (!row_noise_var_.empty() && row_noise_var_.size() != rows_.size()) {
    throw InputSizeError("SensingProblem: noise variance length differs from row count");
  }
  for (auto r : rows_) {
    if (r >= n_) throw std::out_of_range("SensingProblem: row index outside [0, N)");
  }
}

void SensingProblem::column(std::size_t col, std::span<cplx> out) const {
  if (out.size() != rows_.size()) throw InputSizeError("column: output length must be P");
  for (std::size_t k = 0; k < rows_.size(); ++k) out[k] = entry(k, col);
}

CVector SensingProblem::dense() const {
  CVector a(rows_.size() * n_);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    for (std::size_t j = 0; j < n_; ++j) a[k * n_ + j] = entry(k, j);
  }
  return a;
}

CVector SensingProblem::correlate(OpCounter* ops) const {
  // conj(F[k, j]) = exp(+2*pi*i*k*j/N)/sqrt(N), so A^H y is the unitary
  // inverse DFT of y scattered onto its subcarriers.
  CVector spread(n_);
  for (std::size_t k = 0; k < rows_.size(); ++k) spread[rows_[k]] = measurement_[k];
  fft::inverse(spread, spread);
  if (ops) ops->add(fft::mult_cost(n_));
  return spread;
}

SensingProblem build_sensing(const ReliableSet& rel, const FrequencyFrame& equalized,
                             const FrequencyFrame& sliced, std::vector<double> row_noise_var) {
  if (equalized.size() != sliced.size()) throw InputSizeError("build_sensing: frame lengths differ");
  CVector y(rel.size());
  for (std::size_t k = 0; k < rel.size(); ++k) {
    const std::size_t i = rel.indices[k];
    if (i >= equalized.size()) throw std::out_of_range("build_sensing: reliable index outside frame");
    y[k] = equalized[i] - sliced[i];
  }
  return SensingProblem(equalized.size(), rel.indices, std::move(y), std::move(row_noise_var));
}

}  // namespace declip

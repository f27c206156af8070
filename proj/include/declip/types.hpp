#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace declip {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Frequency-domain frame: one complex value per subcarrier.
struct FrequencyFrame {
  CVector values;

  FrequencyFrame() = default;
  explicit FrequencyFrame(std::size_t n) : values(n) {}
  explicit FrequencyFrame(CVector v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

// Time-domain frame (one OFDM symbol without cyclic prefix).
struct TimeFrame {
  CVector values;

  TimeFrame() = default;
  explicit TimeFrame(std::size_t n) : values(n) {}
  explicit TimeFrame(CVector v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

class InputSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace declip

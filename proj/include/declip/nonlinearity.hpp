#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "declip/types.hpp"

namespace declip {

enum class PhaseMode {
  Off,         // soft clipping only
  Saturating,  // phi(r) = phi_max * (1 - tau / r) above the threshold
};

// Envelope clipper with amplitude-dependent phase rotation in saturation.
//
// The saturating phase curve stands in for a measured AM/PM characteristic:
// it is zero at the threshold, monotone, and bounded by phi_max. Receivers
// in this library never evaluate it; only the transmitter model and PANC do.
struct PaModel {
  double threshold = std::numeric_limits<double>::infinity();
  PhaseMode mode = PhaseMode::Off;
  double phi_max = 0.3;

  PaModel() = default;
  PaModel(double tau, PhaseMode m = PhaseMode::Off, double phi = 0.3);

  // Phase offset for an input amplitude above the threshold.
  double phase(double amplitude) const noexcept;
  cplx apply(cplx x) const noexcept;
};

TimeFrame clip_signal(const TimeFrame& x, const PaModel& pa);

struct ClipVector {
  TimeFrame values;                  // c = x_p - x
  std::vector<std::size_t> support;  // ascending indices where c != 0
};

ClipVector clip_vector(const TimeFrame& x, const TimeFrame& x_p);

// tau = cr * sigma_x.
double threshold_from_cr(double cr, double sigma_x = 1.0);
// Same, with sigma_x measured as the RMS over a set of frames.
double threshold_from_cr(double cr, const std::vector<TimeFrame>& ensemble);

// Peak-to-average power ratio, linear.
double papr(const TimeFrame& x);

}  // namespace declip

#include "declip/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace declip {

PaModel::PaModel(double tau, PhaseMode m, double phi) : threshold(tau), mode(m), phi_max(phi) {
  if (!(tau > 0.0)) throw std::invalid_argument("PaModel: clipping threshold must be > 0");
}

double PaModel::phase(double amplitude) const noexcept {
  if (mode == PhaseMode::Off || !(amplitude > threshold)) return 0.0;
  return phi_max * (1.0 - threshold / amplitude);
}

cplx PaModel::apply(cplx x) const noexcept {
  const double r = std::abs(x);
  if (!(r > threshold)) return x;
  cplx y = std::polar(threshold, std::arg(x) + phase(r));
  // polar() can round one ulp above tau; pull back so outputs never re-clip.
  while (std::abs(y) > threshold) y *= 1.0 - 0x1p-53;
  return y;
}

TimeFrame clip_signal(const TimeFrame& x, const PaModel& pa) {
  TimeFrame out(x.size());
  std::transform(x.values.begin(), x.values.end(), out.values.begin(),
                 [&pa](cplx v) { return pa.apply(v); });
  return out;
}

ClipVector clip_vector(const TimeFrame& x, const TimeFrame& x_p) {
  if (x.size() != x_p.size()) throw InputSizeError("clip_vector: frame lengths differ");
  ClipVector c{TimeFrame(x.size()), {}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.values[i] = x_p[i] - x[i];
    if (c.values[i] != cplx{}) c.support.push_back(i);
  }
  return c;
}

double threshold_from_cr(double cr, double sigma_x) {
  if (!(cr > 0.0)) throw std::invalid_argument("threshold_from_cr: clipping ratio must be > 0");
  return cr * sigma_x;
}

double threshold_from_cr(double cr, const std::vector<TimeFrame>& ensemble) {
  double power = 0.0;
  std::size_t count = 0;
  for (const auto& f : ensemble) {
    for (auto v : f.values) power += std::norm(v);
    count += f.size();
  }
  if (count == 0) throw InputSizeError("threshold_from_cr: empty ensemble");
  return threshold_from_cr(cr, std::sqrt(power / static_cast<double>(count)));
}

double papr(const TimeFrame& x) {
  if (x.size() == 0) throw InputSizeError("papr: empty frame");
  double peak = 0.0, mean = 0.0;
  for (auto v : x.values) {
    const double p = std::norm(v);
    peak = std::max(peak, p);
    mean += p;
  }
  mean /= static_cast<double>(x.size());
  return mean > 0.0 ? peak / mean : 0.0;
}

}  // namespace declip

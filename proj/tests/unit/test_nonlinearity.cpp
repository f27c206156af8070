#include <doctest.h>

#include <cmath>
#include <vector>

#include "declip/nonlinearity.hpp"
#include "declip/ofdm_phy.hpp"

using namespace declip;

namespace {

TimeFrame qam_frame(SplitMix64& rng, std::size_t n, const Constellation& q) {
  std::vector<std::uint8_t> bits(n * q.bits_per_symbol());
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return idft(qam_map(bits, q));
}

}  // namespace

TEST_CASE("clip_signal examples") {
  const TimeFrame x(CVector{0.5, 2.0, std::polar(2.0, M_PI / 4)});
  const auto y = clip_signal(x, PaModel(1.0));
  CHECK(y[0] == cplx(0.5));
  CHECK(y[1] == cplx(1.0, 0.0));
  CHECK(std::abs(y[2] - std::polar(1.0, M_PI / 4)) < 1e-15);

  // phi_max chosen so that phi(2) = phi_max * (1 - 1/2) = 0.1.
  const PaModel pa(1.0, PhaseMode::Saturating, 0.2);
  CHECK(pa.phase(2.0) == doctest::Approx(0.1));
  const auto z = clip_signal(x, pa);
  CHECK(z[0] == cplx(0.5));
  CHECK(std::abs(z[2] - std::polar(1.0, M_PI / 4 + 0.1)) < 1e-15);

  CHECK_THROWS_AS(PaModel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PaModel(-1.0), std::invalid_argument);
}

TEST_CASE("magnitude law, phase preservation, idempotence, PAPR") {
  SplitMix64 rng(31);
  const Constellation q(16);
  for (auto mode : {PhaseMode::Off, PhaseMode::Saturating}) {
    const PaModel pa(1.3, mode, 0.3);
    for (int rep = 0; rep < 10; ++rep) {
      const auto x = qam_frame(rng, 512, q);
      const auto xp = clip_signal(x, pa);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = std::abs(x[i]);
        if (m <= 1.3) {
          // Identity below the threshold, bit for bit.
          CHECK(xp[i] == x[i]);
        } else {
          CHECK(std::abs(xp[i]) == doctest::Approx(1.3).epsilon(1e-15));
        }
      }
      CHECK(papr(xp) <= papr(x));
      if (mode == PhaseMode::Off) {
        const auto again = clip_signal(xp, pa);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(again[i] == xp[i]);
      }
    }
  }
}

TEST_CASE("saturating phase curve") {
  const PaModel pa(1.0, PhaseMode::Saturating, 0.3);
  CHECK(pa.phase(1.0) == 0.0);
  double prev = 0.0;
  for (double r = 1.01; r < 50.0; r *= 1.3) {
    const double p = pa.phase(r);
    CHECK(p >= prev);
    CHECK(p < 0.3);
    prev = p;
  }
  CHECK(PaModel(1.0, PhaseMode::Off).phase(3.0) == 0.0);
}

TEST_CASE("clip_vector examples") {
  SplitMix64 rng(32);
  const Constellation q(16);
  const auto x = qam_frame(rng, 64, q);
  const auto none = clip_vector(x, x);
  CHECK(none.support.empty());
  for (auto v : none.values.values) CHECK(v == cplx(0.0));

  auto xp = x;
  xp[7] += cplx(0.25, -0.1);
  const auto one = clip_vector(x, xp);
  CHECK(one.support == std::vector<std::size_t>{7});

  CHECK_THROWS_AS(clip_vector(x, TimeFrame(3)), InputSizeError);
}

TEST_CASE("clip support equals the over-threshold set and follows the Gaussian tail") {
  SplitMix64 rng(33);
  const Constellation q(16);
  const PaModel pa(threshold_from_cr(1.3), PhaseMode::Saturating);
  double fraction = 0.0;
  const int frames = 50;
  for (int f = 0; f < frames; ++f) {
    const auto x = qam_frame(rng, 512, q);
    const auto c = clip_vector(x, clip_signal(x, pa));
    std::vector<std::size_t> over;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) > 1.3) over.push_back(i);
    }
    CHECK(c.support == over);
    fraction += static_cast<double>(c.support.size()) / 512.0;
  }
  CHECK(std::abs(fraction / frames - std::exp(-1.69)) < 0.05);
}

TEST_CASE("threshold_from_cr") {
  CHECK(threshold_from_cr(1.3) == 1.3);
  CHECK(threshold_from_cr(1.0, 2.0) == 2.0);
  CHECK_THROWS_AS(threshold_from_cr(0.0), std::invalid_argument);

  SplitMix64 rng(34);
  const Constellation q(16);
  std::vector<TimeFrame> ensemble;
  for (int f = 0; f < 200; ++f) ensemble.push_back(qam_frame(rng, 512, q));
  // tau / cr is the measured sigma_x.
  CHECK(std::abs(threshold_from_cr(1.0, ensemble) - 1.0) < 0.02);
}

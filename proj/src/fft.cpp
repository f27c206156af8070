#include "declip/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace declip::fft {
namespace {

// The FFTW planner is not thread-safe, execution with new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
    // identical from run to run.
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
  if (in.size() != out.size()) throw InputSizeError("fft: input and output lengths differ");
  const std::size_t n = in.size();
  if (n == 0) return;
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* data = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(cache().get(n, sign), data, data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }
void inverse(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_BACKWARD); }

std::uint64_t mult_cost(std::size_t n) noexcept {
  if (n < 2) return 0;
  const auto log2n = static_cast<std::uint64_t>(std::bit_width(n) - 1);
  return static_cast<std::uint64_t>(n / 2) * log2n;
}

}  // namespace declip::fft

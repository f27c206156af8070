#pragma once

#include <cstdint>

namespace declip {

// Complex-multiplication tally. A complex*complex product, a real*complex
// product, a complex division and a magnitude evaluation each count as one.
// FFTs are charged (n/2)*log2(n), the radix-2 butterfly count.
class OpCounter {
 public:
  void add(std::uint64_t n) noexcept { mults_ += n; }
  std::uint64_t mults() const noexcept { return mults_; }
  void reset() noexcept { mults_ = 0; }

 private:
  std::uint64_t mults_ = 0;
};

}  // namespace declip

#pragma once

#include <cstdint>
#include <span>

#include "declip/types.hpp"

namespace declip::fft {

// Unitary DFT pair (1/sqrt(n) in both directions). Any n >= 1 is accepted;
// the simulator only uses powers of two. Input and output may alias.
void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

// Radix-2 butterfly count charged per transform: (n/2) * log2(n).
std::uint64_t mult_cost(std::size_t n) noexcept;

}  // namespace declip::fft

#pragma once

#include <cstdint>
#include <vector>

namespace ccsim::gf256 {

// GF(2^8) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d),
// log/exp table arithmetic.
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);             // a != 0
std::uint8_t div(std::uint8_t a, std::uint8_t b);

using Matrix = std::vector<std::vector<std::uint8_t>>;

Matrix identity(int n);
Matrix mat_mul(const Matrix& a, const Matrix& b);
// Gauss-Jordan inverse; throws invalid_argument on singular input.
Matrix mat_inv(const Matrix& m);

} // namespace ccsim::gf256

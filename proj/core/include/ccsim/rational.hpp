#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ccsim {

// Rates and memory sizes are kept as exact rationals wherever the underlying
// byte counts allow it; floating point only enters for transcendental
// formulas (logs, square roots).
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(std::int64_t num, std::int64_t den = 1) { return Rat(num, den); }

// C(n, k) without overflow; n up to a few hundred in this codebase.
BigInt binomial(int n, int k);

double to_double(const Rat& r);

// "p/q" (or just "p" when q == 1).
std::string rat_to_fraction(const Rat& r);

// Decimal expansion rounded to `sig` significant digits, no exponent for the
// magnitudes that occur here (rates and memories are tame).
std::string rat_to_decimal(const Rat& r, int sig = 12);

// Shared formatting for double-valued columns: 12 significant digits.
std::string double_to_string(double v, int sig = 12);

} // namespace ccsim

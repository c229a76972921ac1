#pragma once

// Exact integer and rational arithmetic shared by every module.
//
// ExactInt is an arbitrary-precision signed integer; values that fit a
// machine word stay in inline storage, so the common case costs no
// allocation. The enumeration kernels work in raw 64-bit words and use the
// checked_* helpers below, which throw instead of wrapping.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace subring {

using ExactInt = boost::multiprecision::cpp_int;
using ExactRational = boost::multiprecision::cpp_rational;

class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// C(n, k); zero when k < 0 or k > n.
ExactInt binomial(long n, long k);

ExactInt ipow(const ExactInt& base, unsigned exponent);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_pow(std::int64_t base, int exponent);

/// Narrow an ExactInt to 64 bits, throwing ArithmeticOverflow if it does not fit.
std::int64_t to_int64(const ExactInt& value);

bool is_prime(std::int64_t n);

/// Prime factorisation by trial division, primes ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

std::string to_string(const ExactInt& value);
std::string to_string(const ExactRational& value);

} // namespace subring

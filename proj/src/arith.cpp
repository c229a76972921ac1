#include "subring/arith.hpp"

#include <limits>

namespace subring {

ExactInt binomial(long n, long k)
{
    if (n < 0 || k < 0 || k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    ExactInt result = 1;
    for (long i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

ExactInt ipow(const ExactInt& base, unsigned exponent)
{
    ExactInt result = 1;
    ExactInt b = base;
    while (exponent != 0) {
        if (exponent & 1U)
            result *= b;
        exponent >>= 1U;
        if (exponent != 0)
            b *= b;
    }
    return result;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw ArithmeticOverflow("64-bit addition overflow");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw ArithmeticOverflow("64-bit multiplication overflow");
    return out;
}

std::int64_t checked_pow(std::int64_t base, int exponent)
{
    if (exponent < 0)
        throw std::invalid_argument("checked_pow: negative exponent");
    std::int64_t result = 1;
    for (int i = 0; i < exponent; ++i)
        result = checked_mul(result, base);
    return result;
}

std::int64_t to_int64(const ExactInt& value)
{
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min())
        throw ArithmeticOverflow("value " + value.str() + " does not fit in 64 bits");
    return value.convert_to<std::int64_t>();
}

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (std::int64_t d = 3; d <= n / d; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    if (n < 1)
        throw std::invalid_argument("factorize: argument must be positive");
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t d = 2; d <= n / d; d += (d == 2 ? 1 : 2)) {
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e > 0)
            out.emplace_back(d, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

std::string to_string(const ExactInt& value) { return value.str(); }

std::string to_string(const ExactRational& value)
{
    const ExactInt num = boost::multiprecision::numerator(value);
    const ExactInt den = boost::multiprecision::denominator(value);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

} // namespace subring

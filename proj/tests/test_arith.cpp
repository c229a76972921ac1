#include <doctest.h>

#include "oracles.hpp"
#include "subring/arith.hpp"
#include "subring/polynomial.hpp"
#include "subring/series.hpp"

using namespace subring;

namespace {

IntPolynomial random_polynomial(int max_degree)
{
    std::vector<ExactInt> coeffs;
    const auto degree = oracle::uniform(0, max_degree);
    for (int k = 0; k <= degree; ++k)
        coeffs.emplace_back(oracle::uniform(-50, 50));
    return IntPolynomial(std::move(coeffs));
}

TruncatedSeries random_series(int order)
{
    std::vector<ExactInt> coeffs;
    for (int k = 0; k <= order; ++k)
        coeffs.emplace_back(oracle::uniform(-20, 20));
    return TruncatedSeries(std::move(coeffs), order);
}

} // namespace

TEST_SUITE("arith")
{
    TEST_CASE("binomial coefficients")
    {
        CHECK(binomial(5, 2) == 10);
        CHECK(binomial(4, 0) == 1);
        CHECK(binomial(3, 5) == 0);
        CHECK(binomial(3, -1) == 0);
        CHECK(binomial(60, 30) == ExactInt("118264581564861424"));
        for (long n = 1; n <= 60; ++n)
            for (long k = 1; k <= n; ++k)
                REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }

    TEST_CASE("checked arithmetic throws instead of wrapping")
    {
        CHECK(checked_mul(1 << 20, 1 << 20) == std::int64_t{1} << 40);
        CHECK_THROWS_AS(checked_mul(std::int64_t{1} << 40, std::int64_t{1} << 40), ArithmeticOverflow);
        CHECK_THROWS_AS(checked_add(INT64_MAX, 1), ArithmeticOverflow);
        CHECK(checked_pow(23, 8) == 78310985281);
        CHECK_THROWS_AS(checked_pow(31, 13), ArithmeticOverflow);
        CHECK(to_int64(ExactInt(12345)) == 12345);
        CHECK_THROWS_AS(to_int64(ipow(ExactInt(2), 70)), ArithmeticOverflow);
    }

    TEST_CASE("primes and factorisation")
    {
        std::vector<std::int64_t> primes;
        for (std::int64_t n = -3; n < 40; ++n)
            if (is_prime(n))
                primes.push_back(n);
        CHECK(primes == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37});
        CHECK(factorize(360) == std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
        CHECK(factorize(1).empty());
        CHECK(factorize(97) == std::vector<std::pair<std::int64_t, int>>{{97, 1}});
    }

    TEST_CASE("exact rationals print reduced")
    {
        CHECK(to_string(ExactRational(6, 4)) == "3/2");
        CHECK(to_string(ExactRational(-8, 4)) == "-2");
    }
}

TEST_SUITE("polynomial")
{
    TEST_CASE("evaluation")
    {
        const IntPolynomial g3211{0, 0, 6, -6, 7};
        CHECK(poly_eval(g3211, 2) == 88);
        CHECK(poly_eval(IntPolynomial{}, 5) == 0);
        // p^4 + 3p^2(p - 1) as a dense polynomial
        const IntPolynomial g2211 = IntPolynomial::monomial(1, 4) + IntPolynomial{0, 0, 3} * IntPolynomial{-1, 1};
        CHECK(g2211 == IntPolynomial{0, 0, -3, 3, 1});
        CHECK(poly_eval(g2211, 3) == 135);
    }

    TEST_CASE("normalisation and printing")
    {
        CHECK(IntPolynomial{1, 2, 0, 0}.degree() == 1);
        CHECK(IntPolynomial{0, 0}.is_zero());
        CHECK(IntPolynomial{}.degree() == -1);
        CHECK(IntPolynomial{0, 0, 6, -6, 7}.to_string() == "7p^4 - 6p^3 + 6p^2");
        CHECK(IntPolynomial{1, -1}.to_string() == "-p + 1");
        CHECK(IntPolynomial{}.to_string() == "0");
        CHECK((IntPolynomial{1, 1} - IntPolynomial{1, 1}).is_zero());
    }

    TEST_CASE("ring axioms and evaluation homomorphism on random inputs")
    {
        for (int trial = 0; trial < 200; ++trial) {
            const auto f = random_polynomial(6);
            const auto g = random_polynomial(6);
            const auto h = random_polynomial(6);
            REQUIRE((f * g) * h == f * (g * h));
            REQUIRE(f * (g + h) == f * g + f * h);
            REQUIRE(f + g == g + f);
            const auto p = oracle::uniform(-7, 7);
            REQUIRE(poly_eval(f * g, p) == poly_eval(f, p) * poly_eval(g, p));
            REQUIRE(poly_eval(f + g, p) == poly_eval(f, p) + poly_eval(g, p));
        }
    }
}

TEST_SUITE("series")
{
    TEST_CASE("products and geometric factors")
    {
        const TruncatedSeries one_plus_t({1, 1}, 4);
        const TruncatedSeries one_minus_t({1, -1}, 4);
        CHECK(one_plus_t * one_minus_t == TruncatedSeries({1, 0, -1}, 4));
        CHECK(series_geom(1, 1, 6) * TruncatedSeries({1, -1}, 6) == TruncatedSeries::one(6));
        CHECK(series_geom(3, 1, 3) == TruncatedSeries({1, 3, 9, 27}, 3));
        CHECK(series_geom(1, 2, 5) == TruncatedSeries({1, 0, 1, 0, 1, 0}, 5));
        CHECK(series_geom(4, 4, 8) == TruncatedSeries({1, 0, 0, 0, 4, 0, 0, 0, 16}, 8));
        CHECK_THROWS_AS(series_geom(1, 0, 3), std::invalid_argument);
    }

    TEST_CASE("(1-t)^-m matches the binomial series")
    {
        for (int m = 1; m <= 5; ++m) {
            TruncatedSeries s = TruncatedSeries::one(8);
            for (int i = 0; i < m; ++i)
                s = s * series_geom(1, 1, 8);
            for (int k = 0; k <= 8; ++k)
                REQUIRE(s[k] == binomial(m + k - 1, k));
        }
    }

    TEST_CASE("truncation follows the smaller order")
    {
        const auto a = series_geom(2, 1, 3);
        const auto b = series_geom(2, 1, 6);
        CHECK((a * b).order() == 3);
        CHECK((a + b).order() == 3);
        CHECK(b.truncated(2) == TruncatedSeries({1, 2, 4}, 2));
    }

    TEST_CASE("ring axioms and geometric inverse on random inputs")
    {
        for (int trial = 0; trial < 100; ++trial) {
            const int order = static_cast<int>(oracle::uniform(0, 8));
            const auto a = random_series(order);
            const auto b = random_series(order);
            const auto c = random_series(order);
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(series_mul(a, b) == b * a);

            const ExactInt coeff = oracle::uniform(-5, 5);
            const int k = static_cast<int>(oracle::uniform(1, 4));
            TruncatedSeries factor = TruncatedSeries::one(order);
            if (k <= order)
                factor[k] = -coeff;
            REQUIRE(series_geom(coeff, k, order) * factor == TruncatedSeries::one(order));
        }
    }
}

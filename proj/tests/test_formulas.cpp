#include <doctest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "subring/formulas.hpp"
#include "subring/zeta.hpp"

using namespace subring;

namespace {

std::string builtin_table_text()
{
    std::ifstream in(SUBRING_DATA_DIR "/f_coefficients.txt", std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const std::vector<std::int64_t> kSmallPrimes{2, 3, 5, 7};

} // namespace

TEST_SUITE("formulas")
{
    TEST_CASE("coefficient table integrity")
    {
        const std::string text = builtin_table_text();
        REQUIRE_FALSE(text.empty());
        CHECK(sha256_hex(text) == kCoefficientTableSha256);
        CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

        const auto table = CoefficientTable::load(text);
        CHECK(table.max_e() == 8);
        CHECK(table.digest() == kCoefficientTableSha256);
        CHECK(CoefficientTable::load_file(SUBRING_DATA_DIR "/f_coefficients.txt").max_e() == 8);
        for (int e = 1; e <= 8; ++e) {
            REQUIRE(table.has_row(e));
            for (const auto& [k, poly] : table.row(e).terms) {
                REQUIRE(k >= 2);
                REQUIRE(k <= 2 * e);
            }
            // The top coefficient counts perfect matchings on 2e points.
            ExactInt matchings = 1;
            for (int odd = 1; odd < 2 * e; odd += 2)
                matchings *= odd;
            REQUIRE(table.row(e).coefficient(2 * e) == IntPolynomial::constant(matchings));
        }
        CHECK_THROWS_AS(table.row(9), std::out_of_range);

        std::string tampered = text;
        tampered.replace(tampered.find("8 16 2027025"), 12, "8 16 2027026");
        CHECK_THROWS_AS(CoefficientTable::load(tampered), TableIntegrityError);

        const std::string malformed = "format-version 1\n3 x 1\n";
        CHECK_THROWS_AS(CoefficientTable::load(malformed, sha256_hex(malformed)), std::invalid_argument);
        const std::string wrong_version = "format-version 2\n";
        CHECK_THROWS_AS(CoefficientTable::load(wrong_version, sha256_hex(wrong_version)), std::invalid_argument);
        const std::string out_of_range_k = "format-version 1\n1 3 1\n";
        CHECK_THROWS_AS(CoefficientTable::load(out_of_range_k, sha256_hex(out_of_range_k)), std::invalid_argument);
    }

    TEST_CASE("tabulated values")
    {
        CHECK(eval_formula_f(4, 5, 3) == 137);
        for (std::int64_t p : kSmallPrimes) {
            CHECK(eval_formula_f(3, 2, p) == 4);
            for (int e = 0; e <= 8; ++e) {
                REQUIRE(eval_formula_f(2, e, p) == 1);
                REQUIRE(eval_formula_f(1, e, p) == (e == 0 ? 1 : 0));
            }
            for (int n = 0; n <= 12; ++n)
                REQUIRE(eval_formula_f(n, 1, p) == binomial(n, 2));
        }
        CHECK(eval_formula_f(6, 0, 5) == 1);
        CHECK_THROWS_AS(eval_formula_f(3, 9, 2), std::out_of_range);
        CHECK(CoefficientTable::builtin().row(5).coefficient(10) == IntPolynomial{945});
        CHECK(CoefficientTable::builtin().row(5).to_string().find("(15p^2 + 35p + 141)*C(n,6)") != std::string::npos);
    }

    TEST_CASE("errata")
    {
        const auto printed2 = printed_row(2);
        CHECK(printed2.coefficient(2) == IntPolynomial{2});
        CHECK(printed2.coefficient(3).is_zero());
        CHECK(printed2.evaluate(3, 2) == 6);
        CHECK(CoefficientTable::builtin().row(2).evaluate(3, 2) == 4);

        const auto printed8 = printed_row(8);
        const auto& shipped8 = CoefficientTable::builtin().row(8);
        for (std::int64_t p : kSmallPrimes) {
            for (int n = 0; n <= 7; ++n)
                REQUIRE(printed8.evaluate(n, p) == shipped8.evaluate(n, p));
            // Shipped minus printed is 3p^6 C(n,8) + C(n,9).
            for (int n = 8; n <= 16; ++n)
                REQUIRE(shipped8.evaluate(n, p) - printed8.evaluate(n, p) ==
                        3 * ipow(ExactInt(p), 6) * binomial(n, 8) + binomial(n, 9));
        }
        for (int e : {1, 3, 4, 5, 6, 7})
            CHECK(printed_row(e).terms == CoefficientTable::builtin().row(e).terms);
    }

    TEST_CASE("recurrence base cases and small values")
    {
        for (std::int64_t p : {2, 3}) {
            const GTable g = build_gtable_enumerated(8, 6, p);
            CHECK(f_recurrence(0, 0, p, g) == 1);
            CHECK(f_recurrence(0, 3, p, g) == 0);
            for (int n = 1; n <= 8; ++n)
                REQUIRE(f_recurrence(n, 1, p, g) == binomial(n, 2));
            CHECK(f_recurrence(5, 6, p, g) == eval_formula_f(5, 6, p));
            // g vanishes below index p^{n-1}.
            for (int j = 2; j <= 8; ++j)
                for (int i = 0; i < j - 1 && i <= 6; ++i)
                    REQUIRE(g.at(j, i).value == 0);
        }
    }

    TEST_CASE("missing g-table entries are reported")
    {
        const GTable g = build_gtable_enumerated(3, 2, 2);
        try {
            f_recurrence(4, 2, 2, g);
            FAIL("expected MissingTableEntry");
        } catch (const MissingTableEntry& ex) {
            CHECK(ex.n() == 4);
            CHECK(ex.e() <= 2);
        }
        CHECK_THROWS_AS(f_recurrence(2, 2, 3, g), std::invalid_argument);
    }

    TEST_CASE("g-tables from enumeration and from the formulas agree")
    {
        for (std::int64_t p : {2, 3}) {
            const GTable enumerated = build_gtable_enumerated(9, 8, p);
            const GTable solved = build_gtable_from_formulas(9, 8, p);
            for (const auto& [key, entry] : enumerated.entries()) {
                CAPTURE(key.first);
                CAPTURE(key.second);
                REQUIRE(entry.provenance == Provenance::Enumerated);
                REQUIRE(solved.at(key.first, key.second).provenance == Provenance::ClosedForm);
                REQUIRE(solved.at(key.first, key.second).value == entry.value);
            }
        }
    }

    TEST_CASE("leading-one memoisation does not change the table")
    {
        GTableOptions plain;
        plain.use_leading_one_reduction = false;
        for (std::int64_t p : {2, 3}) {
            const GTable a = build_gtable_enumerated(6, 5, p);
            const GTable b = build_gtable_enumerated(6, 5, p, plain);
            for (const auto& [key, entry] : a.entries())
                REQUIRE(b.at(key.first, key.second).value == entry.value);
        }
    }

    TEST_CASE("closed forms of g_alpha")
    {
        const auto g2211 = IntPolynomial{0, 0, -3, 3, 1};
        CHECK(closed_g_alpha_polynomial(Composition({1, 1, 2, 2, 1, 1})) == g2211);
        CHECK(closed_g_alpha_polynomial(Composition({5, 1, 1})) == IntPolynomial::monomial(3, 2));
        CHECK(closed_g_alpha_polynomial(Composition({1, 2})) == IntPolynomial{1});
        CHECK_FALSE(closed_g_alpha_polynomial(Composition({2, 1, 2, 1})).has_value());
        CHECK(eval_closed_g_alpha(Composition({3, 2, 1, 1}), 2) == ExactInt(88));
        CHECK_FALSE(eval_closed_g_alpha(Composition({2, 2, 2}), 2).has_value());

        EnumBudget budget;
        budget.max_candidates = 20'000'000;
        for (int e = 1; e <= 8; ++e)
            for (int len = 1; len <= e; ++len)
                for (const auto& alpha : compositions(e, len)) {
                    const auto closed = closed_g_alpha_polynomial(alpha);
                    if (!closed)
                        continue;
                    for (std::int64_t p : kSmallPrimes) {
                        if (search_space_size(alpha, p) > budget.max_candidates)
                            continue;
                        CAPTURE(alpha.to_string());
                        CAPTURE(p);
                        REQUIRE(g_alpha(alpha, p, budget) == poly_eval(*closed, p));
                    }
                }
    }

    TEST_CASE("multiplicative extension and partial sums")
    {
        CHECK(f_general(3, 6) == 9);
        CHECK(f_general(5, 1) == 1);
        CHECK(f_general(2, 360) == 1);
        for (int n = 0; n <= 4; ++n)
            for (std::int64_t a = 1; a <= 30; ++a)
                for (std::int64_t b = 1; b <= 30; ++b) {
                    if (std::gcd(a, b) != 1)
                        continue;
                    REQUIRE(f_general(n, a * b) == f_general(n, a) * f_general(n, b));
                }
        CHECK_THROWS_AS(f_general(3, 0), std::invalid_argument);

        // Exponent 9 is outside the table and goes through enumeration.
        const auto zeta3 = subring_local_factor_closed(3, 2, 9);
        CHECK(f_general(3, 512) == zeta3[9]);
        CHECK(f_general(3, 512 * 3) == zeta3[9] * 3);

        CHECK(partial_sum_NR(4, 2) == 1);
        CHECK(partial_sum_NR(2, 100) == 99);
        const ExactInt expected = 1 + 3 + 3 + 4 + 3 + 9 + 3 + eval_formula_f(3, 3, 2) + eval_formula_f(3, 2, 3);
        CHECK(partial_sum_NR(3, 10) == expected);
        CHECK(expected == 36);
    }

    TEST_CASE("lower bounds")
    {
        CHECK(lower_bound_g(5, 6, 3) == 81);
        for (int n = 2; n <= 8; ++n)
            CHECK(lower_bound_g(n, n - 1, 7) == 1);
        CHECK(lower_bound_g(3, 4, 2) == 1);
        CHECK_THROWS_AS(lower_bound_g(3, 5, 2), std::invalid_argument);
        CHECK_THROWS_AS(lower_bound_g(5, 3, 2), std::invalid_argument);
        CHECK(BoundSpec::for_shape(5, 6).composition() == Composition({2, 2, 1, 1}));

        CHECK(max_lower_bound(8, 5) == ipow(ExactInt(5), 8));
        CHECK(max_lower_bound(2, 5) == 1);
        CHECK(max_lower_bound(7, 3) == 729);
        CHECK(maximizing_n(8) == std::vector<int>{7});
        CHECK(maximizing_n(6) == std::vector<int>{5, 6});
        CHECK(maximizing_n(2) == std::vector<int>{2, 3});
        for (int e = 1; e <= 40; ++e) {
            int best = -1;
            for (int n = 1; n <= e + 1; ++n) {
                const int r = e - (n - 1);
                const int s = 2 * (n - 1) - e;
                if (r >= 0 && s >= 0)
                    best = std::max(best, r * s);
            }
            REQUIRE(max_lower_bound_exponent(e) == best);
        }

        for (std::int64_t p : {2, 3, 5})
            for (int r = 0; r <= 5; ++r)
                for (int s = 0; r + s <= 5; ++s) {
                    if (r + s == 0)
                        continue;
                    std::vector<int> parts(static_cast<std::size_t>(r), 2);
                    parts.insert(parts.end(), static_cast<std::size_t>(s), 1);
                    const Composition alpha(parts);
                    CAPTURE(alpha.to_string());
                    CAPTURE(p);
                    REQUIRE(g_alpha(alpha, p) >= ipow(ExactInt(p), static_cast<unsigned>(r * s)));
                }
    }
}

#pragma once

// Closed forms for subring counts of Z^n at prime-power index, the
// recurrence assembling f_n(p^e) from irreducible counts g_j(p^i), and
// lower bounds on g.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subring/arith.hpp"
#include "subring/hnf.hpp"
#include "subring/polynomial.hpp"
#include "subring/subring_enum.hpp"

namespace subring {

/// f_n(p^e) = sum_k terms[k](p) * C(n, k).
struct BinomialFormula {
    int e = 0;
    std::map<int, IntPolynomial> terms;

    ExactInt evaluate(int n, const ExactInt& p) const;
    /// Coefficient polynomial of C(n, k); zero if absent.
    IntPolynomial coefficient(int k) const;
    std::string to_string() const;
};

class TableIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SHA-256 of the shipped data/f_coefficients.txt. Editing the table
/// requires updating this digest.
inline constexpr std::string_view kCoefficientTableSha256 =
    "fa2e49d708cc8d008151191c8c177d806c8bfec3ae9d52d9fa55ba0f72be6f21";

std::string sha256_hex(std::string_view data);

class CoefficientTable {
public:
    /// Parses the text format and checks its digest. Throws TableIntegrityError
    /// on a digest mismatch and std::invalid_argument on malformed rows.
    static CoefficientTable load(std::string_view text, std::string_view expected_sha256 = kCoefficientTableSha256);
    static CoefficientTable load_file(const std::string& path, std::string_view expected_sha256 = kCoefficientTableSha256);

    /// The table compiled into the library, verified on first use.
    static const CoefficientTable& builtin();

    int max_e() const { return rows_.empty() ? 0 : rows_.rbegin()->first; }
    bool has_row(int e) const { return rows_.count(e) != 0; }
    /// Throws std::out_of_range for untabulated e.
    const BinomialFormula& row(int e) const;
    const std::string& digest() const { return digest_; }

private:
    std::map<int, BinomialFormula> rows_;
    std::string digest_;
};

/// A coefficient whose commonly reproduced form disagrees with direct counts.
struct Erratum {
    int e = 0;
    int k = 0;
    IntPolynomial printed;
    IntPolynomial corrected;
};

/// The corrected entries of the shipped table: c(2,3), c(8,8) and c(8,9).
const std::vector<Erratum>& known_errata();

/// Row e as commonly reproduced, i.e. the shipped row with every erratum undone.
BinomialFormula printed_row(int e);

/// f_n(p^e) from the coefficient table; e = 0 gives 1. Throws
/// std::out_of_range for e outside [0, max_e].
ExactInt eval_formula_f(int n, int e, std::int64_t p);

enum class Provenance { Enumerated, ClosedForm };
std::string to_string(Provenance provenance);

class MissingTableEntry : public std::runtime_error {
public:
    MissingTableEntry(int n, int e)
        : std::runtime_error("g-table has no entry for g_" + std::to_string(n) + "(p^" + std::to_string(e) + ")"), n_(n), e_(e)
    {
    }
    int n() const { return n_; }
    int e() const { return e_; }

private:
    int n_;
    int e_;
};

/// g_n(p^e) values at one prime.
class GTable {
public:
    struct Entry {
        ExactInt value;
        Provenance provenance = Provenance::Enumerated;
    };

    explicit GTable(std::int64_t p) : p_(p) {}

    std::int64_t prime() const { return p_; }
    void set(int n, int e, ExactInt value, Provenance provenance);
    bool contains(int n, int e) const { return entries_.count({n, e}) != 0; }
    const Entry& at(int n, int e) const;
    const std::map<std::pair<int, int>, Entry>& entries() const { return entries_; }

private:
    std::int64_t p_;
    std::map<std::pair<int, int>, Entry> entries_;
};

struct GTableOptions {
    EnumOptions enumeration{};
    /// Key g_alpha by alpha with leading 1s removed, so equal counts are enumerated once.
    bool use_leading_one_reduction = true;
};

/// Enumerated g_j(p^i), filled on demand. g_alpha values are memoised per
/// composition so repeated shapes are counted once.
class GTableBuilder {
public:
    GTableBuilder(std::int64_t p, GTableOptions options = {});

    /// Computes and stores g_j(p^i) unless present. Throws BudgetExceeded.
    const ExactInt& ensure(int j, int i);
    const GTable& table() const { return table_; }
    /// Total search nodes visited so far.
    std::uint64_t nodes() const { return nodes_; }

private:
    GTable table_;
    GTableOptions options_;
    std::map<Composition, ExactInt> memo_;
    std::uint64_t nodes_ = 0;
};

/// g_j(p^i) for 1 <= j <= n_max, 0 <= i <= e_max by enumeration.
GTable build_gtable_enumerated(int n_max, int e_max, std::int64_t p, const GTableOptions& options = {});

/// The same range, solved from the coefficient table by inverting the recurrence.
GTable build_gtable_from_formulas(int n_max, int e_max, std::int64_t p);

/// f_n(p^e) = sum_{i=0}^{e} sum_{j=1}^{n} C(n-1, j-1) f_{n-j}(p^{e-i}) g_j(p^i),
/// with f_0(1) = 1 and f_0(p^e) = 0 for e > 0. Throws MissingTableEntry.
ExactInt f_recurrence(int n, int e, std::int64_t p, const GTable& g);

/// All f_{n'}(p^{e'}) for n' <= n_max, e' <= e_max; result[n'][e'].
std::vector<std::vector<ExactInt>> f_recurrence_grid(int n_max, int e_max, const GTable& g);

/// Closed form of g_alpha as a polynomial in p, when one is known.
std::optional<IntPolynomial> closed_g_alpha_polynomial(const Composition& alpha);
std::optional<ExactInt> eval_closed_g_alpha(const Composition& alpha, std::int64_t p);

/// f_n(k) for any k >= 1 by multiplicativity over the prime powers dividing k.
/// Factors with exponent <= max_e come from the table, the rest from
/// enumeration plus the recurrence.
ExactInt f_general(int n, std::int64_t k, const EnumOptions& options = {});

/// sum_{k < X} f_n(k).
ExactInt partial_sum_NR(int n, std::int64_t X, const EnumOptions& options = {});

/// Counts of 2-parts and 1-parts in the composition (2,...,2,1,...,1) of e
/// into n - 1 parts.
struct BoundSpec {
    int r = 0;
    int s = 0;

    /// Throws std::invalid_argument when no such composition exists.
    static BoundSpec for_shape(int n, int e);
    Composition composition() const;
};

/// p^{rs}, a lower bound for g_alpha at alpha = (2^r, 1^s).
ExactInt lower_bound_g(int n, int e, std::int64_t p);

/// Exponent of the largest lower_bound_g over n for fixed e.
int max_lower_bound_exponent(int e);
ExactInt max_lower_bound(int e, std::int64_t p);

/// The n attaining max_lower_bound_exponent(e) (two of them when e = 2 mod 4).
std::vector<int> maximizing_n(int e);

} // namespace subring

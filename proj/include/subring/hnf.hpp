#pragma once

// Hermite normal form matrices and sublattice counting.
//
// Convention: a lattice is the span of the *columns* of its matrix. An HNF
// matrix is upper triangular with positive diagonal, and every entry above
// the diagonal satisfies 0 <= a(i, j) < a(i, i) (reduced modulo its row's
// pivot). This convention is used everywhere in the library.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subring/arith.hpp"

namespace subring {

/// Nonnegative parts summing to target().
struct WeakComposition {
    std::vector<int> parts;

    int target() const;
    std::size_t length() const { return parts.size(); }
    friend bool operator==(const WeakComposition&, const WeakComposition&) = default;
    friend auto operator<=>(const WeakComposition&, const WeakComposition&) = default;
};

/// Positive parts summing to target(). The empty composition (target 0)
/// is allowed and indexes the 1x1 identity.
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<int> parts);

    /// Parses "3,2,1,1"; whitespace around parts is ignored.
    static Composition parse(const std::string& text);

    const std::vector<int>& parts() const { return parts_; }
    std::size_t length() const { return parts_.size(); }
    int target() const;
    int operator[](std::size_t i) const { return parts_[i]; }

    /// Drops leading parts equal to 1.
    Composition strip_leading_ones() const;

    std::string to_string() const;

    friend bool operator==(const Composition&, const Composition&) = default;
    friend auto operator<=>(const Composition&, const Composition&) = default;

private:
    std::vector<int> parts_;
};

/// All weak compositions of e with the given length, lexicographically descending
/// in the first part, i.e. (e,0,..) first. Count is C(e+length-1, length-1).
std::vector<WeakComposition> weak_compositions(int e, int length);

/// All compositions of e into `length` positive parts, same order convention.
/// Count is C(e-1, length-1); compositions(0, 0) is the single empty composition.
std::vector<Composition> compositions(int e, int length);

/// Integer vectors used for lattice columns.
using Vec = std::vector<std::int64_t>;

/// Componentwise product. Throws std::invalid_argument on length mismatch.
Vec hadamard(std::span<const std::int64_t> u, std::span<const std::int64_t> w);

class HnfMatrix {
public:
    /// Validates the HNF invariants and throws std::invalid_argument if violated.
    /// The determinant must fit in 62 bits.
    static HnfMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);
    static HnfMatrix identity(int n);

    int dim() const { return n_; }
    std::int64_t at(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }
    Vec column(int j) const;
    Vec diagonal() const;
    std::int64_t determinant() const { return det_; }

    std::string to_string() const;

    friend bool operator==(const HnfMatrix&, const HnfMatrix&) = default;

private:
    HnfMatrix(int n, std::vector<std::int64_t> entries);

    int n_ = 0;
    std::vector<std::int64_t> a_;
    std::int64_t det_ = 1;
};

/// True iff A x = w has an integer solution. Back-substitution from the last
/// row upward with an explicit divisibility check at every pivot; residuals
/// are kept reduced modulo det(A), which lies in the lattice along each axis.
bool in_column_span(std::span<const std::int64_t> w, const HnfMatrix& A);

/// Number of HNF matrices with diagonal (p^i_1, ..., p^i_n): p^{sum_j (n-j) i_j}.
ExactInt count_hnf_with_diagonal(const WeakComposition& exponents, std::int64_t p);

/// Number of sublattices of Z^n of index p^k.
ExactInt s_n(int n, int k, std::int64_t p);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, ExactInt estimated_cost)
        : std::runtime_error(what + " (estimated cost " + estimated_cost.str() + ")"),
          estimated_cost_(std::move(estimated_cost))
    {
    }
    const ExactInt& estimated_cost() const { return estimated_cost_; }

private:
    ExactInt estimated_cost_;
};

/// Every HNF matrix of determinant p^e, each exactly once: diagonals in
/// weak_compositions order, then off-diagonal entries row-major with the
/// last entry varying fastest. Throws BudgetExceeded before visiting anything
/// if s_n(p^e) exceeds max_candidates.
void enumerate_hnf(int n, int e, std::int64_t p, std::uint64_t max_candidates,
                   const std::function<void(const HnfMatrix&)>& visit);

} // namespace subring

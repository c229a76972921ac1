#pragma once

// Subring matrices of Z^n and the pruned enumeration of irreducible ones.
//
// A subring matrix is an HNF matrix whose column span contains (1,...,1)
// and is closed under the componentwise product of columns. An irreducible
// subring matrix of index p^e has last column (1,...,1) and every other
// entry divisible by p; its diagonal is (p^a_1, ..., p^a_{n-1}, 1) for a
// composition a of e.

#include <cstdint>
#include <functional>

#include "subring/arith.hpp"
#include "subring/hnf.hpp"

namespace subring {

struct EnumBudget {
    /// Upper limit on the size of the unpruned candidate space.
    std::uint64_t max_candidates = 1'000'000'000;
    /// Wall-clock limit for one counting call.
    double max_seconds = 3600.0;
};

struct EnumOptions {
    EnumBudget budget{};
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

bool is_multiplicatively_closed(const HnfMatrix& A);
bool is_subring_matrix(const HnfMatrix& A);
bool is_irreducible_subring_matrix(const HnfMatrix& A, std::int64_t p);

/// p^{sum_i (a_i - 1)(L - i)}: the number of candidate matrices before any
/// closure test, with L = length and i 1-based.
ExactInt search_space_size(const Composition& alpha, std::int64_t p);

/// Exponent of search_space_size.
int free_entry_exponent(const Composition& alpha);

struct GAlphaStats {
    ExactInt count;
    std::uint64_t nodes = 0;
    std::size_t shards = 0;
    double seconds = 0.0;
};

/// Number of irreducible subring matrices with diagonal (p^a_1, ..., p^a_L, 1).
/// Backtracking over the free entries column by column; each product
/// v_i o v_j is tested as soon as rows 1..i of column j are fixed, and a
/// failure prunes the whole subtree. Throws BudgetExceeded.
GAlphaStats g_alpha_stats(const Composition& alpha, std::int64_t p, const EnumOptions& options = {});
ExactInt g_alpha(const Composition& alpha, std::int64_t p, const EnumBudget& budget = {}, unsigned workers = 0);

/// Same count, by testing every candidate with is_irreducible_subring_matrix.
ExactInt g_alpha_unpruned(const Composition& alpha, std::int64_t p, const EnumBudget& budget = {});

/// Visits every matrix counted by g_alpha, sequentially, in search order.
void for_each_irreducible_subring_matrix(const Composition& alpha, std::int64_t p, const EnumBudget& budget,
                                         const std::function<void(const HnfMatrix&)>& visit);

/// Number of irreducible subrings of Z^n of index p^e: the sum of g_alpha over
/// compositions of e into n - 1 parts. g_1 is 1 at index 1 and 0 otherwise.
ExactInt g_n(int n, int e, std::int64_t p, const EnumBudget& budget = {}, unsigned workers = 0);

/// Subrings of Z^n of index p^e by filtering every HNF matrix of that determinant.
ExactInt f_bruteforce(int n, int e, std::int64_t p, const EnumBudget& budget = {});

/// Points (x, y, u, v, c) in F_p^5 with
///   (x^2 - x) - (u^2 - u) c = (y^2 - y) - (v^2 - v) c = xy - uvc = 0.
ExactInt count_variety_points(std::int64_t p);

} // namespace subring

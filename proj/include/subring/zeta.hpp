#pragma once

// Local zeta factors as truncated series in t = p^{-s}.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subring/arith.hpp"
#include "subring/polynomial.hpp"
#include "subring/series.hpp"

namespace subring {

enum class FactorKind { Subgroup, SubringClosedForm };

struct LocalFactorSpec {
    int n = 1;
    std::int64_t p = 2;
    FactorKind kind = FactorKind::Subgroup;
    int order = 8;

    /// Throws std::invalid_argument for n < 1, non-prime p, negative order,
    /// or a closed-form subring factor outside n in {2, 3, 4}.
    void validate() const;
};

/// prod_{j=0}^{n-1} (1 - p^j t)^{-1}; the coefficient of t^k is s_n(p^k).
TruncatedSeries subgroup_local_factor(int n, std::int64_t p, int order);

/// Closed-form subring local factor for n = 2, 3, 4; the coefficient of t^e is f_n(p^e).
TruncatedSeries subring_local_factor_closed(int n, std::int64_t p, int order);

TruncatedSeries local_factor(const LocalFactorSpec& spec);

/// Numerator of the n = 4 factor as (power of t, coefficient polynomial in p).
const std::vector<std::pair<int, IntPolynomial>>& quartic_numerator();

struct CoefficientMatch {
    int e = 0;
    ExactInt series_value;
    ExactInt count;
    bool match = false;
};

struct ZetaComparison {
    int n = 0;
    std::int64_t p = 0;
    std::vector<CoefficientMatch> rows;

    bool all_match() const;
};

class ZetaMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Compares the closed-form factor's coefficients t^0..t^e_max with counts[e].
/// In strict mode the first disagreement throws ZetaMismatch.
ZetaComparison compare_counts(int n, std::int64_t p, int e_max, const std::vector<ExactInt>& counts, bool strict = false);

} // namespace subring

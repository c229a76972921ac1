#include "subring/zeta.hpp"

#include <algorithm>

namespace subring {

void LocalFactorSpec::validate() const
{
    if (n < 1)
        throw std::invalid_argument("local factor: n must be positive");
    if (!is_prime(p))
        throw std::invalid_argument("local factor: " + std::to_string(p) + " is not prime");
    if (order < 0)
        throw std::invalid_argument("local factor: order must be nonnegative");
    if (kind == FactorKind::SubringClosedForm && (n < 2 || n > 4))
        throw std::invalid_argument("closed-form subring factor is only available for n = 2, 3, 4");
}

TruncatedSeries subgroup_local_factor(int n, std::int64_t p, int order)
{
    LocalFactorSpec{n, p, FactorKind::Subgroup, order}.validate();
    TruncatedSeries out = TruncatedSeries::one(order);
    ExactInt pj = 1;
    for (int j = 0; j < n; ++j) {
        out = out * series_geom(pj, 1, order);
        pj *= p;
    }
    return out;
}

const std::vector<std::pair<int, IntPolynomial>>& quartic_numerator()
{
    static const std::vector<std::pair<int, IntPolynomial>> rows = {
        {0, IntPolynomial{1}},
        {1, IntPolynomial{4}},
        {2, IntPolynomial{2}},
        {3, IntPolynomial{-3, 4}},
        {4, IntPolynomial{-1, 5}},
        {5, IntPolynomial{0, -5, 1}},
        {6, IntPolynomial{0, -4, 3}},
        {7, IntPolynomial{0, 0, -2}},
        {8, IntPolynomial{0, 0, -4}},
        {9, IntPolynomial{0, 0, -1}},
    };
    return rows;
}

namespace {

TruncatedSeries polynomial_series(const std::vector<std::pair<int, ExactInt>>& terms, int order)
{
    TruncatedSeries out(order);
    for (const auto& [k, c] : terms)
        if (k <= order)
            out[k] += c;
    return out;
}

} // namespace

TruncatedSeries subring_local_factor_closed(int n, std::int64_t p, int order)
{
    LocalFactorSpec{n, p, FactorKind::SubringClosedForm, order}.validate();
    switch (n) {
    case 2:
        return series_geom(1, 1, order);
    case 3: {
        TruncatedSeries out = series_geom(p, 3, order);
        for (int i = 0; i < 3; ++i)
            out = out * series_geom(1, 1, order);
        const TruncatedSeries one_minus_t2 = polynomial_series({{0, 1}, {2, -1}}, order);
        return out * one_minus_t2 * one_minus_t2;
    }
    default: {
        std::vector<std::pair<int, ExactInt>> numerator;
        for (const auto& [k, poly] : quartic_numerator())
            numerator.emplace_back(k, poly_eval(poly, p));
        const ExactInt p2 = ExactInt(p) * p;
        TruncatedSeries out = polynomial_series(numerator, order) * series_geom(1, 1, order) * series_geom(1, 1, order);
        out = out * series_geom(p2, 4, order) * series_geom(p2 * p, 6, order);
        // Transcription guard: the t coefficient must be f_4(p) = C(4,2).
        if (order >= 1 && out[1] != 6)
            throw std::logic_error("n = 4 closed form does not reproduce f_4(p) = 6");
        return out;
    }
    }
}

TruncatedSeries local_factor(const LocalFactorSpec& spec)
{
    return spec.kind == FactorKind::Subgroup ? subgroup_local_factor(spec.n, spec.p, spec.order)
                                             : subring_local_factor_closed(spec.n, spec.p, spec.order);
}

bool ZetaComparison::all_match() const
{
    return std::all_of(rows.begin(), rows.end(), [](const CoefficientMatch& row) { return row.match; });
}

ZetaComparison compare_counts(int n, std::int64_t p, int e_max, const std::vector<ExactInt>& counts, bool strict)
{
    if (static_cast<int>(counts.size()) <= e_max)
        throw std::invalid_argument("compare_counts: need counts for e = 0.." + std::to_string(e_max));
    const TruncatedSeries series = subring_local_factor_closed(n, p, e_max);
    ZetaComparison report{n, p, {}};
    for (int e = 0; e <= e_max; ++e) {
        const ExactInt& count = counts[static_cast<std::size_t>(e)];
        const bool match = series[e] == count;
        report.rows.push_back(CoefficientMatch{e, series[e], count, match});
        if (strict && !match)
            throw ZetaMismatch("closed-form coefficient of t^" + std::to_string(e) + " is " + to_string(series[e]) +
                               " but the count is " + to_string(count) + " (n = " + std::to_string(n) +
                               ", p = " + std::to_string(p) + ")");
    }
    return report;
}

} // namespace subring

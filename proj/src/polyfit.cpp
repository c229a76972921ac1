#include "subring/polyfit.hpp"

#include <algorithm>
#include <stdexcept>

#include "subring/subring_enum.hpp"

namespace subring {

void SampleSet::add(std::int64_t p, ExactInt value)
{
    for (const auto& [q, v] : points_)
        if (q == p)
            throw std::invalid_argument("duplicate prime " + std::to_string(p) + " in sample set");
    points_.emplace_back(p, std::move(value));
}

std::string to_string(FitStatus status)
{
    switch (status) {
    case FitStatus::ExactInteger:
        return "exact-integer";
    case FitStatus::NonIntegerCoefficients:
        return "non-integer-coefficients";
    case FitStatus::Underdetermined:
        return "underdetermined";
    case FitStatus::HoldoutMismatch:
        return "holdout-mismatch";
    }
    return "unknown";
}

namespace {

ExactRational eval_rational(const std::vector<ExactRational>& coeffs, const ExactRational& x)
{
    ExactRational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

std::string rational_poly_string(const std::vector<ExactRational>& coeffs)
{
    std::string out;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        if (coeffs[k] == 0)
            continue;
        if (!out.empty())
            out += " + ";
        out += "(" + subring::to_string(coeffs[k]) + ")";
        if (k > 0)
            out += k == 1 ? "p" : "p^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

} // namespace

std::string FitResult::interpolant_string() const
{
    const bool integral =
        std::all_of(coefficients.begin(), coefficients.end(), [](const ExactRational& c) { return denominator(c) == 1; });
    return integral ? polynomial.to_string() : rational_poly_string(coefficients);
}

std::string FitResult::to_string() const { return interpolant_string() + " [" + subring::to_string(status) + "]"; }

FitResult interpolate_in_p(const SampleSet& samples, int degree_bound)
{
    if (degree_bound < 0)
        throw std::invalid_argument("interpolate_in_p: degree bound must be nonnegative");
    const auto& pts = samples.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i].first == pts[j].first)
                throw std::invalid_argument("interpolate_in_p: duplicate prime " + std::to_string(pts[i].first));
    if (pts.empty())
        throw std::invalid_argument("interpolate_in_p: no samples");

    FitResult result;
    result.degree_bound = degree_bound;
    const std::size_t m = std::min(pts.size(), static_cast<std::size_t>(degree_bound) + 1);

    // Newton divided differences, then expansion into the monomial basis.
    std::vector<ExactRational> dd;
    for (std::size_t i = 0; i < m; ++i)
        dd.emplace_back(pts[i].second);
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / ExactRational(pts[i].first - pts[i - level].first);

    std::vector<ExactRational> coeffs{dd[m - 1]};
    for (std::size_t i = m - 1; i-- > 0;) {
        // coeffs <- coeffs * (x - x_i) + dd[i]
        const ExactRational xi = pts[i].first;
        std::vector<ExactRational> next(coeffs.size() + 1);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            next[k + 1] += coeffs[k];
            next[k] -= coeffs[k] * xi;
        }
        next[0] += dd[i];
        coeffs = std::move(next);
    }
    while (!coeffs.empty() && coeffs.back() == 0)
        coeffs.pop_back();
    result.coefficients = coeffs;

    for (std::size_t i = 0; i < m; ++i)
        result.fitted_on.push_back(pts[i].first);
    for (std::size_t i = m; i < pts.size(); ++i) {
        if (eval_rational(coeffs, ExactRational(pts[i].first)) == ExactRational(pts[i].second))
            result.verified_on.push_back(pts[i].first);
        else
            result.failed_on.push_back(pts[i].first);
    }

    const bool integral =
        std::all_of(coeffs.begin(), coeffs.end(), [](const ExactRational& c) { return denominator(c) == 1; });
    if (integral) {
        std::vector<ExactInt> ints;
        for (const auto& c : coeffs)
            ints.push_back(numerator(c));
        result.polynomial = IntPolynomial(std::move(ints));
    }

    if (!result.failed_on.empty())
        result.status = FitStatus::HoldoutMismatch;
    else if (!integral)
        result.status = FitStatus::NonIntegerCoefficients;
    else if (result.verified_on.empty())
        result.status = FitStatus::Underdetermined;
    else
        result.status = FitStatus::ExactInteger;
    return result;
}

int default_degree_bound(const Composition& alpha) { return free_entry_exponent(alpha); }

std::vector<ExactInt> binomial_fit_over_n(const std::map<int, ExactInt>& values, int k_max)
{
    if (k_max < 0)
        throw std::invalid_argument("binomial_fit_over_n: k_max must be nonnegative");
    std::vector<ExactInt> diffs;
    for (int n = 0; n <= k_max; ++n) {
        auto it = values.find(n);
        if (it == values.end())
            throw std::invalid_argument("binomial_fit_over_n: missing value at n = " + std::to_string(n));
        diffs.push_back(it->second);
    }
    std::vector<ExactInt> coeffs;
    for (int k = 0; k <= k_max; ++k) {
        coeffs.push_back(diffs[0]);
        for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
            diffs[i] = diffs[i + 1] - diffs[i];
        diffs.pop_back();
    }
    return coeffs;
}

ExactInt binomial_basis_eval(const std::vector<ExactInt>& coefficients, int n)
{
    ExactInt total = 0;
    for (std::size_t k = 0; k < coefficients.size(); ++k)
        total += coefficients[k] * binomial(n, static_cast<long>(k));
    return total;
}

std::string PMinusOneExpansion::sign_summary() const
{
    return std::to_string(positive) + " positive, " + std::to_string(negative) + " negative, " +
           std::to_string(zero) + " zero";
}

PMinusOneExpansion expand_p_minus_1(const IntPolynomial& f)
{
    // Repeated synthetic division by (p - 1): the remainders are b_0, b_1, ...
    std::vector<ExactInt> work = f.coefficients();
    PMinusOneExpansion out;
    while (!work.empty()) {
        for (std::size_t k = work.size() - 1; k-- > 0;)
            work[k] += work[k + 1];
        out.coefficients.push_back(work[0]);
        work.erase(work.begin());
    }
    if (out.coefficients.empty())
        out.coefficients.push_back(0);
    if (out.coefficients[0] != poly_eval(f, 1))
        throw std::logic_error("Taylor shift disagrees with f(1)");
    for (const auto& b : out.coefficients) {
        if (b > 0)
            ++out.positive;
        else if (b < 0)
            ++out.negative;
        else
            ++out.zero;
    }
    return out;
}

IntPolynomial from_p_minus_1(const std::vector<ExactInt>& coefficients)
{
    IntPolynomial result;
    const IntPolynomial shift{-1, 1};
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        result = result * shift + IntPolynomial::constant(*it);
    return result;
}

} // namespace subring

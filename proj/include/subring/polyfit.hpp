#pragma once

// Recovering polynomial structure from exact counts: interpolation in p,
// fitting in the binomial basis over n, and re-expansion in powers of p - 1.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subring/arith.hpp"
#include "subring/hnf.hpp"
#include "subring/polynomial.hpp"

namespace subring {

class SampleSet {
public:
    SampleSet() = default;
    explicit SampleSet(std::string label) : label_(std::move(label)) {}

    /// Throws std::invalid_argument if p was already sampled.
    void add(std::int64_t p, ExactInt value);

    const std::vector<std::pair<std::int64_t, ExactInt>>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const std::string& label() const { return label_; }

private:
    std::vector<std::pair<std::int64_t, ExactInt>> points_;
    std::string label_;
};

enum class FitStatus { ExactInteger, NonIntegerCoefficients, Underdetermined, HoldoutMismatch };
std::string to_string(FitStatus status);

struct FitResult {
    /// Ascending coefficients of the interpolant, reduced.
    std::vector<ExactRational> coefficients;
    /// The interpolant when every coefficient is integral, else zero.
    IntPolynomial polynomial;
    std::vector<std::int64_t> fitted_on;
    std::vector<std::int64_t> verified_on;
    std::vector<std::int64_t> failed_on;
    int degree_bound = 0;
    FitStatus status = FitStatus::Underdetermined;

    /// The interpolant, with rational coefficients when they are not integral.
    std::string interpolant_string() const;
    std::string to_string() const;
};

/// Interpolates through the first degree_bound + 1 samples and checks the rest.
/// With too few samples for a held-out check the fit uses what is there and
/// is flagged Underdetermined. Throws std::invalid_argument on duplicate primes
/// or a negative bound.
FitResult interpolate_in_p(const SampleSet& samples, int degree_bound);

/// Degree bound used for g_alpha when none is given: the exponent of the
/// candidate-space size, which bounds the growth of the count.
int default_degree_bound(const Composition& alpha);

/// c_0..c_{k_max} with value(n) = sum_k c_k C(n, k) for n = 0..k_max, i.e.
/// c_k is the k-th forward difference at 0. Throws std::invalid_argument if
/// any n in 0..k_max is missing.
std::vector<ExactInt> binomial_fit_over_n(const std::map<int, ExactInt>& values, int k_max);

ExactInt binomial_basis_eval(const std::vector<ExactInt>& coefficients, int n);

struct PMinusOneExpansion {
    /// b_j with f(p) = sum_j b_j (p - 1)^j.
    std::vector<ExactInt> coefficients;
    int positive = 0;
    int negative = 0;
    int zero = 0;

    bool all_positive() const { return negative == 0 && zero == 0; }
    std::string sign_summary() const;
};

/// Taylor shift of f to the point 1. b_0 is checked against f(1).
PMinusOneExpansion expand_p_minus_1(const IntPolynomial& f);

/// Inverse of expand_p_minus_1.
IntPolynomial from_p_minus_1(const std::vector<ExactInt>& coefficients);

} // namespace subring

#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "subring/arith.hpp"

namespace subring {

/// Dense univariate polynomial in p with exact integer coefficients.
/// coefficient(k) multiplies p^k. The highest stored coefficient is always
/// nonzero; the zero polynomial stores nothing.
class IntPolynomial {
public:
    IntPolynomial() = default;
    IntPolynomial(std::initializer_list<long> ascending);
    explicit IntPolynomial(std::vector<ExactInt> ascending);

    static IntPolynomial constant(const ExactInt& c);
    static IntPolynomial monomial(const ExactInt& c, unsigned degree);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    ExactInt coefficient(unsigned k) const;
    const std::vector<ExactInt>& coefficients() const { return coeffs_; }

    IntPolynomial& operator+=(const IntPolynomial& rhs);
    IntPolynomial& operator-=(const IntPolynomial& rhs);
    IntPolynomial& operator*=(const IntPolynomial& rhs);
    friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
    friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
    friend IntPolynomial operator*(IntPolynomial a, const IntPolynomial& b) { return a *= b; }
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    /// Human form, highest degree first, e.g. "7p^4 - 6p^3 + 6p^2".
    std::string to_string(char var = 'p') const;

private:
    void normalize();
    std::vector<ExactInt> coeffs_;
};

/// Horner evaluation.
ExactInt poly_eval(const IntPolynomial& f, const ExactInt& p);

} // namespace subring

#include "subring/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace subring {

IntPolynomial::IntPolynomial(std::initializer_list<long> ascending)
{
    coeffs_.reserve(ascending.size());
    for (long c : ascending)
        coeffs_.emplace_back(c);
    normalize();
}

IntPolynomial::IntPolynomial(std::vector<ExactInt> ascending) : coeffs_(std::move(ascending)) { normalize(); }

IntPolynomial IntPolynomial::constant(const ExactInt& c) { return IntPolynomial(std::vector<ExactInt>{c}); }

IntPolynomial IntPolynomial::monomial(const ExactInt& c, unsigned degree)
{
    std::vector<ExactInt> v(degree + 1);
    v[degree] = c;
    return IntPolynomial(std::move(v));
}

ExactInt IntPolynomial::coefficient(unsigned k) const { return k < coeffs_.size() ? coeffs_[k] : ExactInt(0); }

void IntPolynomial::normalize()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& rhs)
{
    if (coeffs_.size() < rhs.coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k)
        coeffs_[k] += rhs.coeffs_[k];
    normalize();
    return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& rhs)
{
    if (coeffs_.size() < rhs.coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k)
        coeffs_[k] -= rhs.coeffs_[k];
    normalize();
    return *this;
}

IntPolynomial& IntPolynomial::operator*=(const IntPolynomial& rhs)
{
    if (is_zero() || rhs.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<ExactInt> out(coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    coeffs_ = std::move(out);
    normalize();
    return *this;
}

std::string IntPolynomial::to_string(char var) const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const ExactInt& c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0)
            continue;
        const ExactInt mag = abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (mag != 1 || k == 0)
            os << mag;
        if (k >= 1)
            os << var;
        if (k >= 2)
            os << '^' << k;
    }
    return os.str();
}

ExactInt poly_eval(const IntPolynomial& f, const ExactInt& p)
{
    ExactInt acc = 0;
    const auto& c = f.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * p + *it;
    return acc;
}

} // namespace subring

#include "subring/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace subring {

TruncatedSeries::TruncatedSeries(int order) : coeffs_(), order_(order)
{
    if (order < 0)
        throw std::invalid_argument("series order must be nonnegative");
    coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries::TruncatedSeries(std::vector<ExactInt> coefficients, int order) : TruncatedSeries(order)
{
    const std::size_t n = std::min(coefficients.size(), coeffs_.size());
    for (std::size_t k = 0; k < n; ++k)
        coeffs_[k] = std::move(coefficients[k]);
}

TruncatedSeries TruncatedSeries::one(int order)
{
    TruncatedSeries s(order);
    s.coeffs_[0] = 1;
    return s;
}

TruncatedSeries TruncatedSeries::truncated(int order) const
{
    return TruncatedSeries(coeffs_, std::min(order, order_));
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b)
{
    TruncatedSeries out(std::min(a.order_, b.order_));
    for (int k = 0; k <= out.order_; ++k)
        out[k] = a[k] + b[k];
    return out;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b)
{
    TruncatedSeries out(std::min(a.order_, b.order_));
    for (int k = 0; k <= out.order_; ++k)
        out[k] = a[k] - b[k];
    return out;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
{
    TruncatedSeries out(std::min(a.order_, b.order_));
    for (int i = 0; i <= out.order_; ++i) {
        if (a[i] == 0)
            continue;
        for (int j = 0; i + j <= out.order_; ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

std::string TruncatedSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= order_; ++k) {
        const ExactInt& c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0)
            continue;
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << '-';
        first = false;
        const ExactInt mag = abs(c);
        if (mag != 1 || k == 0)
            os << mag;
        if (k >= 1)
            os << 't';
        if (k >= 2)
            os << '^' << k;
    }
    if (first)
        os << '0';
    os << " + O(t^" << order_ + 1 << ')';
    return os.str();
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries series_geom(const ExactInt& c, int k, int order)
{
    if (k < 1)
        throw std::invalid_argument("series_geom: step must be at least 1");
    TruncatedSeries out(order);
    ExactInt power = 1;
    for (int m = 0; m * k <= order; ++m) {
        out[m * k] = power;
        power *= c;
    }
    return out;
}

} // namespace subring

#pragma once

#include <string>
#include <vector>

#include "subring/arith.hpp"

namespace subring {

/// Default truncation order for series in t = p^{-s}.
inline constexpr int kDefaultSeriesOrder = 10;

/// Power series in t with exact integer coefficients, known up to and
/// including t^order. Binary operations truncate to the smaller order.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order = kDefaultSeriesOrder);
    /// Coefficients beyond `order` are dropped; missing ones are zero.
    TruncatedSeries(std::vector<ExactInt> coefficients, int order);

    static TruncatedSeries one(int order);

    int order() const { return order_; }
    const ExactInt& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    ExactInt& operator[](int k) { return coeffs_.at(static_cast<std::size_t>(k)); }
    const std::vector<ExactInt>& coefficients() const { return coeffs_; }

    TruncatedSeries truncated(int order) const;

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

    std::string to_string() const;

private:
    std::vector<ExactInt> coeffs_;
    int order_;
};

/// Cauchy product truncated to min(a.order(), b.order()).
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// (1 - c t^k)^{-1} up to t^order.
TruncatedSeries series_geom(const ExactInt& c, int k, int order);

} // namespace subring

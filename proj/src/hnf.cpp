#include "subring/hnf.hpp"

#include <numeric>
#include <sstream>

namespace subring {

int WeakComposition::target() const { return std::accumulate(parts.begin(), parts.end(), 0); }

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts))
{
    for (int part : parts_)
        if (part < 1)
            throw std::invalid_argument("composition parts must be positive");
}

Composition Composition::parse(const std::string& text)
{
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos)
            throw std::invalid_argument("empty part in composition '" + text + "'");
        const std::string trimmed = item.substr(first, last - first + 1);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(trimmed, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad part '" + trimmed + "' in composition '" + text + "'");
        }
        if (used != trimmed.size())
            throw std::invalid_argument("bad part '" + trimmed + "' in composition '" + text + "'");
        parts.push_back(value);
    }
    return Composition(std::move(parts));
}

int Composition::target() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

Composition Composition::strip_leading_ones() const
{
    std::size_t k = 0;
    while (k < parts_.size() && parts_[k] == 1)
        ++k;
    return Composition(std::vector<int>(parts_.begin() + static_cast<long>(k), parts_.end()));
}

std::string Composition::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i != 0)
            out += ',';
        out += std::to_string(parts_[i]);
    }
    return out;
}

namespace {

void weak_rec(int remaining, int slots, std::vector<int>& prefix, std::vector<WeakComposition>& out)
{
    if (slots == 1) {
        prefix.push_back(remaining);
        out.push_back(WeakComposition{prefix});
        prefix.pop_back();
        return;
    }
    for (int first = remaining; first >= 0; --first) {
        prefix.push_back(first);
        weak_rec(remaining - first, slots - 1, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<WeakComposition> weak_compositions(int e, int length)
{
    if (e < 0 || length < 0)
        throw std::invalid_argument("weak_compositions: negative argument");
    std::vector<WeakComposition> out;
    if (length == 0) {
        if (e == 0)
            out.push_back(WeakComposition{});
        return out;
    }
    std::vector<int> prefix;
    weak_rec(e, length, prefix, out);
    return out;
}

std::vector<Composition> compositions(int e, int length)
{
    if (e < 0 || length < 0)
        throw std::invalid_argument("compositions: negative argument");
    std::vector<Composition> out;
    if (e < length)
        return out;
    // Subtract one from every part to get a weak composition of e - length.
    for (const auto& w : weak_compositions(e - length, length)) {
        std::vector<int> parts = w.parts;
        for (int& part : parts)
            ++part;
        out.emplace_back(std::move(parts));
    }
    return out;
}

Vec hadamard(std::span<const std::int64_t> u, std::span<const std::int64_t> w)
{
    if (u.size() != w.size())
        throw std::invalid_argument("hadamard: length mismatch");
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = checked_mul(u[i], w[i]);
    return out;
}

HnfMatrix::HnfMatrix(int n, std::vector<std::int64_t> entries) : n_(n), a_(std::move(entries))
{
    for (int i = 0; i < n_; ++i)
        det_ = checked_mul(det_, at(i, i));
    if (det_ > (std::int64_t{1} << 62))
        throw std::invalid_argument("HNF determinant exceeds 2^62");
}

HnfMatrix HnfMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows)
{
    const int n = static_cast<int>(rows.size());
    std::vector<std::int64_t> entries;
    entries.reserve(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw std::invalid_argument("HNF matrix must be square");
        for (int j = 0; j < n; ++j)
            entries.push_back(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < n; ++i) {
        const std::int64_t pivot = entries[static_cast<std::size_t>(i * n + i)];
        if (pivot <= 0)
            throw std::invalid_argument("HNF diagonal must be positive");
        for (int j = 0; j < n; ++j) {
            const std::int64_t v = entries[static_cast<std::size_t>(i * n + j)];
            if (j < i && v != 0)
                throw std::invalid_argument("HNF matrix must be upper triangular");
            if (j > i && (v < 0 || v >= pivot))
                throw std::invalid_argument("HNF off-diagonal entry not reduced modulo its pivot");
        }
    }
    return HnfMatrix(n, std::move(entries));
}

HnfMatrix HnfMatrix::identity(int n)
{
    std::vector<std::int64_t> entries(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i)
        entries[static_cast<std::size_t>(i * n + i)] = 1;
    return HnfMatrix(n, std::move(entries));
}

Vec HnfMatrix::column(int j) const
{
    Vec out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out[static_cast<std::size_t>(i)] = at(i, j);
    return out;
}

Vec HnfMatrix::diagonal() const
{
    Vec out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out[static_cast<std::size_t>(i)] = at(i, i);
    return out;
}

std::string HnfMatrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < n_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < n_; ++j)
            os << (j ? ", " : "") << at(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

bool in_column_span(std::span<const std::int64_t> w, const HnfMatrix& A)
{
    const int n = A.dim();
    if (static_cast<int>(w.size()) != n)
        throw std::invalid_argument("in_column_span: dimension mismatch");
    const __int128 mod = A.determinant();
    std::vector<__int128> r(w.begin(), w.end());
    for (auto& x : r) {
        x %= mod;
        if (x < 0)
            x += mod;
    }
    for (int row = n - 1; row >= 0; --row) {
        const std::int64_t pivot = A.at(row, row);
        if (r[static_cast<std::size_t>(row)] % pivot != 0)
            return false;
        const __int128 q = r[static_cast<std::size_t>(row)] / pivot;
        for (int k = 0; k < row; ++k) {
            __int128& x = r[static_cast<std::size_t>(k)];
            x = (x - q * A.at(k, row)) % mod;
            if (x < 0)
                x += mod;
        }
    }
    return true;
}

ExactInt count_hnf_with_diagonal(const WeakComposition& exponents, std::int64_t p)
{
    const long n = static_cast<long>(exponents.length());
    unsigned long total = 0;
    for (long j = 0; j < n; ++j)
        total += static_cast<unsigned long>((n - 1 - j) * exponents.parts[static_cast<std::size_t>(j)]);
    return ipow(ExactInt(p), static_cast<unsigned>(total));
}

ExactInt s_n(int n, int k, std::int64_t p)
{
    if (n < 1 || k < 0)
        throw std::invalid_argument("s_n: need n >= 1 and k >= 0");
    ExactInt total = 0;
    for (const auto& w : weak_compositions(k, n))
        total += count_hnf_with_diagonal(w, p);
    return total;
}

void enumerate_hnf(int n, int e, std::int64_t p, std::uint64_t max_candidates,
                   const std::function<void(const HnfMatrix&)>& visit)
{
    if (n < 1 || e < 0 || !is_prime(p))
        throw std::invalid_argument("enumerate_hnf: need n >= 1, e >= 0 and p prime");
    const ExactInt estimate = s_n(n, e, p);
    if (estimate > max_candidates)
        throw BudgetExceeded("HNF enumeration over budget", estimate);
    checked_pow(p, e);

    std::vector<std::pair<int, int>> free_positions;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            free_positions.emplace_back(i, j);

    for (const auto& w : weak_compositions(e, n)) {
        std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        Vec diag(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            diag[static_cast<std::size_t>(i)] = checked_pow(p, w.parts[static_cast<std::size_t>(i)]);
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)];
        }
        // Odometer over the off-diagonal entries, last position fastest.
        while (true) {
            visit(HnfMatrix::from_rows(rows));
            int k = static_cast<int>(free_positions.size()) - 1;
            for (; k >= 0; --k) {
                const auto [i, j] = free_positions[static_cast<std::size_t>(k)];
                auto& entry = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (++entry < diag[static_cast<std::size_t>(i)])
                    break;
                entry = 0;
            }
            if (k < 0)
                break;
        }
    }
}

} // namespace subring

#include "subring/subring_enum.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace subring {

namespace {

using Word = std::int64_t;
using Clock = std::chrono::steady_clock;

// Products of two reduced words fit in 63 bits below this modulus.
constexpr Word kNarrowModulusLimit = 3'000'000'000;

/// Closure of the lattice under A: reduces the componentwise product of two
/// columns modulo det(A) before the span test so nothing overflows.
bool product_in_span(const HnfMatrix& A, int i, int j)
{
    const int n = A.dim();
    const __int128 mod = A.determinant();
    Vec w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        w[static_cast<std::size_t>(k)] = static_cast<Word>((static_cast<__int128>(A.at(k, i)) * A.at(k, j)) % mod);
    return in_column_span(w, A);
}

template <class Wide>
class IrreducibleSearch {
public:
    IrreducibleSearch(const Composition& alpha, Word p) : m_(static_cast<int>(alpha.length())), p_(p)
    {
        diag_.resize(static_cast<std::size_t>(m_));
        a_.assign(static_cast<std::size_t>(m_ * m_), 0);
        scratch_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            diag_[static_cast<std::size_t>(i)] = checked_pow(p, alpha[static_cast<std::size_t>(i)]);
            at(i, i) = diag_[static_cast<std::size_t>(i)];
        }
        mod_ = checked_pow(p, alpha.target());
        if (mod_ > (Word{1} << 61))
            throw ArithmeticOverflow("p^e exceeds 2^61 in irreducible search");
        for (int j = 1; j < m_; ++j)
            for (int i = 0; i < j; ++i)
                positions_.emplace_back(i, j);
    }

    std::size_t position_count() const { return positions_.size(); }
    std::uint64_t nodes() const { return nodes_; }

    void set_stop(const std::atomic<bool>* stop, Clock::time_point deadline, std::atomic<bool>* timed_out)
    {
        stop_ = stop;
        deadline_ = deadline;
        timed_out_ = timed_out;
    }
    void set_leaf_visitor(const std::function<void(const HnfMatrix&)>* visit) { visit_ = visit; }

    /// Overwrites the first prefix.size() positions and clears the rest.
    void load_prefix(const std::vector<Word>& prefix)
    {
        for (std::size_t k = 0; k < positions_.size(); ++k) {
            const auto [i, j] = positions_[k];
            at(i, j) = k < prefix.size() ? prefix[k] : 0;
        }
    }

    /// Values at position `pos` that pass the tests made decidable there.
    template <class F>
    void for_each_survivor(std::size_t pos, F&& f)
    {
        const auto [i, j] = positions_[pos];
        Word& entry = at(i, j);
        const Word limit = diag_[static_cast<std::size_t>(i)];
        for (Word v = 0; v < limit; v += p_) {
            entry = v;
            ++nodes_;
            if (!product_closed(i, j))
                continue;
            if (i == j - 1 && !product_closed(j, j))
                continue;
            f(v);
        }
        entry = 0;
    }

    std::uint64_t count_from(std::size_t pos)
    {
        if (pos == positions_.size()) {
            if (visit_ != nullptr)
                (*visit_)(current_matrix());
            return 1;
        }
        if (stop_ != nullptr && --check_countdown_ == 0) {
            check_countdown_ = kCheckInterval;
            if (stop_->load(std::memory_order_relaxed))
                return 0;
            if (Clock::now() > deadline_) {
                timed_out_->store(true);
                return 0;
            }
        }
        std::uint64_t total = 0;
        for_each_survivor(pos, [&](Word) { total += count_from(pos + 1); });
        return total;
    }

    HnfMatrix current_matrix() const
    {
        const int n = m_ + 1;
        std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < m_; ++i) {
            for (int j = i; j < m_; ++j)
                rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = at(i, j);
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(m_)] = 1;
        }
        rows[static_cast<std::size_t>(m_)][static_cast<std::size_t>(m_)] = 1;
        return HnfMatrix::from_rows(rows);
    }

private:
    Word& at(int i, int j) { return a_[static_cast<std::size_t>(i * m_ + j)]; }
    Word at(int i, int j) const { return a_[static_cast<std::size_t>(i * m_ + j)]; }

    Word mulmod(Word x, Word y) const { return static_cast<Word>((static_cast<Wide>(x) * y) % mod_); }

    /// Is v_i o v_j in the lattice, for i <= j? Only rows 1..i are nonzero, so
    /// only columns 1..i and rows 1..i of column j are read. Row i is cleared
    /// up front by subtracting a(i,j) v_i (or a(i,i) v_i when i == j).
    bool product_closed(int i, int j)
    {
        Word* w = scratch_.data();
        const Word q = at(i, j);
        for (int k = 0; k < i; ++k) {
            const Word aki = at(k, i);
            w[k] = aki == 0 ? 0 : mulmod(aki, at(k, j) - q);
        }
        for (int r = i - 1; r >= 0; --r) {
            const Word pivot = diag_[static_cast<std::size_t>(r)];
            Word x = w[r] % pivot;
            if (x != 0)
                return false;
            const Word coeff = w[r] / pivot;
            if (coeff == 0)
                continue;
            for (int k = 0; k < r; ++k) {
                const Word akr = at(k, r);
                if (akr != 0)
                    w[k] = (w[k] - mulmod(coeff, akr)) % mod_;
            }
        }
        return true;
    }

    int m_;
    Word p_;
    Word mod_ = 1;
    std::vector<Word> diag_;
    std::vector<Word> a_;
    std::vector<Word> scratch_;
    std::vector<std::pair<int, int>> positions_;
    static constexpr std::uint32_t kCheckInterval = 1U << 16;
    std::uint64_t nodes_ = 0;
    std::uint32_t check_countdown_ = kCheckInterval;
    const std::atomic<bool>* stop_ = nullptr;
    std::atomic<bool>* timed_out_ = nullptr;
    Clock::time_point deadline_{};
    const std::function<void(const HnfMatrix&)>* visit_ = nullptr;
};

void check_alpha_args(std::int64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

template <class Wide>
GAlphaStats run_search(const Composition& alpha, std::int64_t p, const EnumOptions& options)
{
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(options.budget.max_seconds));
    unsigned workers = options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.workers;

    IrreducibleSearch<Wide> root(alpha, p);
    GAlphaStats stats;

    // Shard by expanding the first positions breadth-first. Each shard is a
    // prefix that already passed every test decidable within it.
    std::vector<std::vector<Word>> shards{{}};
    std::size_t depth = 0;
    const std::size_t target = workers == 1 ? 1 : 64 * static_cast<std::size_t>(workers);
    while (shards.size() < target && depth < root.position_count()) {
        std::vector<std::vector<Word>> next;
        for (const auto& prefix : shards) {
            root.load_prefix(prefix);
            root.for_each_survivor(depth, [&](Word v) {
                auto extended = prefix;
                extended.push_back(v);
                next.push_back(std::move(extended));
            });
        }
        shards = std::move(next);
        ++depth;
    }
    stats.shards = shards.size();

    std::vector<std::uint64_t> shard_counts(shards.size(), 0);
    std::atomic<std::size_t> next_shard{0};
    std::atomic<bool> timed_out{false};
    std::atomic<std::uint64_t> nodes{root.nodes()};

    auto work = [&] {
        IrreducibleSearch<Wide> search(alpha, p);
        search.set_stop(&timed_out, deadline, &timed_out);
        for (std::size_t s = next_shard++; s < shards.size(); s = next_shard++) {
            if (timed_out.load())
                break;
            search.load_prefix(shards[s]);
            shard_counts[s] = search.count_from(depth);
        }
        nodes += search.nodes();
    };

    workers = static_cast<unsigned>(std::min<std::size_t>(workers, shards.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    if (timed_out.load())
        throw BudgetExceeded("g_alpha(" + alpha.to_string() + ", p=" + std::to_string(p) + ") exceeded the time budget",
                             search_space_size(alpha, p));

    for (auto c : shard_counts)
        stats.count += c;
    stats.nodes = nodes.load();
    stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return stats;
}

} // namespace

bool is_multiplicatively_closed(const HnfMatrix& A)
{
    for (int j = 0; j < A.dim(); ++j)
        for (int i = 0; i <= j; ++i)
            if (!product_in_span(A, i, j))
                return false;
    return true;
}

bool is_subring_matrix(const HnfMatrix& A)
{
    const Vec ones(static_cast<std::size_t>(A.dim()), 1);
    return in_column_span(ones, A) && is_multiplicatively_closed(A);
}

bool is_irreducible_subring_matrix(const HnfMatrix& A, std::int64_t p)
{
    const int n = A.dim();
    for (int i = 0; i < n; ++i) {
        if (A.at(i, n - 1) != 1)
            return false;
        for (int j = 0; j < n - 1; ++j)
            if (A.at(i, j) % p != 0)
                return false;
    }
    return is_subring_matrix(A);
}

int free_entry_exponent(const Composition& alpha)
{
    const int len = static_cast<int>(alpha.length());
    int total = 0;
    for (int i = 0; i < len; ++i)
        total += (alpha[static_cast<std::size_t>(i)] - 1) * (len - 1 - i);
    return total;
}

ExactInt search_space_size(const Composition& alpha, std::int64_t p)
{
    return ipow(ExactInt(p), static_cast<unsigned>(free_entry_exponent(alpha)));
}

GAlphaStats g_alpha_stats(const Composition& alpha, std::int64_t p, const EnumOptions& options)
{
    check_alpha_args(p);
    const ExactInt space = search_space_size(alpha, p);
    if (space > options.budget.max_candidates)
        throw BudgetExceeded("g_alpha(" + alpha.to_string() + ", p=" + std::to_string(p) + ") over candidate budget", space);
    if (alpha.length() == 0)
        return GAlphaStats{1, 0, 0, 0.0};
    const Word mod = checked_pow(p, alpha.target());
    if (mod <= kNarrowModulusLimit)
        return run_search<Word>(alpha, p, options);
    return run_search<__int128>(alpha, p, options);
}

ExactInt g_alpha(const Composition& alpha, std::int64_t p, const EnumBudget& budget, unsigned workers)
{
    return g_alpha_stats(alpha, p, EnumOptions{budget, workers}).count;
}

void for_each_irreducible_subring_matrix(const Composition& alpha, std::int64_t p, const EnumBudget& budget,
                                         const std::function<void(const HnfMatrix&)>& visit)
{
    check_alpha_args(p);
    const ExactInt space = search_space_size(alpha, p);
    if (space > budget.max_candidates)
        throw BudgetExceeded("irreducible enumeration over candidate budget", space);
    if (alpha.length() == 0) {
        visit(HnfMatrix::identity(1));
        return;
    }
    IrreducibleSearch<__int128> search(alpha, p);
    search.set_leaf_visitor(&visit);
    search.count_from(0);
}

ExactInt g_alpha_unpruned(const Composition& alpha, std::int64_t p, const EnumBudget& budget)
{
    check_alpha_args(p);
    const ExactInt space = search_space_size(alpha, p);
    if (space > budget.max_candidates)
        throw BudgetExceeded("unpruned g_alpha over candidate budget", space);
    const int m = static_cast<int>(alpha.length());
    const int n = m + 1;
    std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    Vec diag(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < m; ++i)
        diag[static_cast<std::size_t>(i)] = checked_pow(p, alpha[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)];
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = 1;
    }
    std::vector<std::pair<int, int>> free_positions;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            free_positions.emplace_back(i, j);

    ExactInt count = 0;
    while (true) {
        if (is_irreducible_subring_matrix(HnfMatrix::from_rows(rows), p))
            ++count;
        int k = static_cast<int>(free_positions.size()) - 1;
        for (; k >= 0; --k) {
            const auto [i, j] = free_positions[static_cast<std::size_t>(k)];
            auto& entry = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            entry += p;
            if (entry < diag[static_cast<std::size_t>(i)])
                break;
            entry = 0;
        }
        if (k < 0)
            break;
    }
    return count;
}

ExactInt g_n(int n, int e, std::int64_t p, const EnumBudget& budget, unsigned workers)
{
    if (n < 1 || e < 0)
        throw std::invalid_argument("g_n: need n >= 1 and e >= 0");
    if (n == 1)
        return e == 0 ? 1 : 0;
    ExactInt total = 0;
    for (const auto& alpha : compositions(e, n - 1))
        total += g_alpha(alpha, p, budget, workers);
    return total;
}

ExactInt f_bruteforce(int n, int e, std::int64_t p, const EnumBudget& budget)
{
    ExactInt count = 0;
    enumerate_hnf(n, e, p, budget.max_candidates, [&](const HnfMatrix& A) {
        if (is_subring_matrix(A))
            ++count;
    });
    return count;
}

ExactInt count_variety_points(std::int64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("count_variety_points: p must be prime");
    // t(z) = z^2 - z mod p
    std::vector<Word> t(static_cast<std::size_t>(p));
    for (Word z = 0; z < p; ++z)
        t[static_cast<std::size_t>(z)] = (z * z - z) % p;
    std::uint64_t count = 0;
    for (Word c = 0; c < p; ++c)
        for (Word u = 0; u < p; ++u)
            for (Word x = 0; x < p; ++x) {
                if ((t[static_cast<std::size_t>(x)] - t[static_cast<std::size_t>(u)] * c) % p != 0)
                    continue;
                for (Word v = 0; v < p; ++v)
                    for (Word y = 0; y < p; ++y) {
                        if ((t[static_cast<std::size_t>(y)] - t[static_cast<std::size_t>(v)] * c) % p != 0)
                            continue;
                        if ((x * y - u * v % p * c) % p != 0)
                            continue;
                        ++count;
                    }
            }
    return count;
}

} // namespace subring

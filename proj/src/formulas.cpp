#include "subring/formulas.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include <openssl/evp.h>

namespace subring {

namespace detail {
extern const std::string_view kEmbeddedCoefficientTable;
}

ExactInt BinomialFormula::evaluate(int n, const ExactInt& p) const
{
    ExactInt total = 0;
    for (const auto& [k, poly] : terms)
        total += poly_eval(poly, p) * binomial(n, k);
    return total;
}

IntPolynomial BinomialFormula::coefficient(int k) const
{
    auto it = terms.find(k);
    return it == terms.end() ? IntPolynomial{} : it->second;
}

std::string BinomialFormula::to_string() const
{
    std::string out;
    for (const auto& [k, poly] : terms) {
        if (!out.empty())
            out += " + ";
        const bool wrap = poly.coefficients().size() > 1;
        out += (wrap ? "(" : "") + poly.to_string() + (wrap ? ")" : "") + "*C(n," + std::to_string(k) + ")";
    }
    return out.empty() ? "0" : out;
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < length; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

CoefficientTable CoefficientTable::load(std::string_view text, std::string_view expected_sha256)
{
    CoefficientTable table;
    table.digest_ = sha256_hex(text);
    if (table.digest_ != expected_sha256)
        throw TableIntegrityError("coefficient table digest " + table.digest_ + " does not match expected " +
                                  std::string(expected_sha256));

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_version = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        if (line.rfind("format-version", 0) == 0) {
            std::string tag;
            int version = 0;
            fields >> tag >> version;
            if (version != 1)
                throw std::invalid_argument("unsupported coefficient table version " + std::to_string(version));
            saw_version = true;
            continue;
        }
        int e = 0;
        int k = 0;
        if (!(fields >> e >> k))
            throw std::invalid_argument("malformed coefficient row at line " + std::to_string(line_no));
        std::vector<ExactInt> coeffs;
        std::string token;
        while (fields >> token)
            coeffs.emplace_back(token);
        if (coeffs.empty())
            throw std::invalid_argument("coefficient row without coefficients at line " + std::to_string(line_no));
        if (k < 2 || k > 2 * e)
            throw std::invalid_argument("binomial index out of range at line " + std::to_string(line_no));
        auto& row = table.rows_[e];
        row.e = e;
        if (!row.terms.emplace(k, IntPolynomial(std::move(coeffs))).second)
            throw std::invalid_argument("duplicate (e, k) row at line " + std::to_string(line_no));
    }
    if (!saw_version)
        throw std::invalid_argument("coefficient table lacks a format-version line");
    return table;
}

CoefficientTable CoefficientTable::load_file(const std::string& path, std::string_view expected_sha256)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open coefficient table " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load(buffer.str(), expected_sha256);
}

const CoefficientTable& CoefficientTable::builtin()
{
    static const CoefficientTable table = load(detail::kEmbeddedCoefficientTable);
    return table;
}

const BinomialFormula& CoefficientTable::row(int e) const
{
    auto it = rows_.find(e);
    if (it == rows_.end())
        throw std::out_of_range("no tabulated formula for f_n(p^" + std::to_string(e) + ")");
    return it->second;
}

const std::vector<Erratum>& known_errata()
{
    static const std::vector<Erratum> errata = {
        {2, 3, IntPolynomial{}, IntPolynomial{1}},
        {2, 2, IntPolynomial{2}, IntPolynomial{1}},
        {8, 8, IntPolynomial{8933, 9073, 9374, 1093, 652, 29, 26}, IntPolynomial{8933, 9073, 9374, 1093, 652, 29, 29}},
        {8, 9, IntPolynomial{37200, 39810, 15324, 6420, 498, 36}, IntPolynomial{37201, 39810, 15324, 6420, 498, 36}},
    };
    return errata;
}

BinomialFormula printed_row(int e)
{
    BinomialFormula row = CoefficientTable::builtin().row(e);
    for (const auto& fix : known_errata()) {
        if (fix.e != e)
            continue;
        if (row.coefficient(fix.k) != fix.corrected)
            throw std::logic_error("erratum for c(" + std::to_string(e) + "," + std::to_string(fix.k) +
                                   ") does not match the shipped table");
        if (fix.printed.is_zero())
            row.terms.erase(fix.k);
        else
            row.terms[fix.k] = fix.printed;
    }
    return row;
}

ExactInt eval_formula_f(int n, int e, std::int64_t p)
{
    if (n < 0)
        throw std::invalid_argument("eval_formula_f: n must be nonnegative");
    if (e == 0)
        return 1;
    return CoefficientTable::builtin().row(e).evaluate(n, p);
}

std::string to_string(Provenance provenance)
{
    return provenance == Provenance::Enumerated ? "enumerated" : "closed-form";
}

void GTable::set(int n, int e, ExactInt value, Provenance provenance)
{
    entries_[{n, e}] = Entry{std::move(value), provenance};
}

const GTable::Entry& GTable::at(int n, int e) const
{
    auto it = entries_.find({n, e});
    if (it == entries_.end())
        throw MissingTableEntry(n, e);
    return it->second;
}

GTableBuilder::GTableBuilder(std::int64_t p, GTableOptions options) : table_(p), options_(std::move(options))
{
    if (!is_prime(p))
        throw std::invalid_argument("g-table: " + std::to_string(p) + " is not prime");
}

const ExactInt& GTableBuilder::ensure(int j, int i)
{
    if (j < 1 || i < 0)
        throw std::invalid_argument("g-table: need j >= 1 and i >= 0");
    if (table_.contains(j, i))
        return table_.at(j, i).value;
    ExactInt total = 0;
    if (j == 1) {
        total = i == 0 ? 1 : 0;
    } else {
        for (const auto& alpha : compositions(i, j - 1)) {
            const Composition key = options_.use_leading_one_reduction ? alpha.strip_leading_ones() : alpha;
            auto it = memo_.find(key);
            if (it == memo_.end()) {
                const GAlphaStats stats = g_alpha_stats(key, table_.prime(), options_.enumeration);
                nodes_ += stats.nodes;
                it = memo_.emplace(key, stats.count).first;
            }
            total += it->second;
        }
    }
    table_.set(j, i, std::move(total), Provenance::Enumerated);
    return table_.at(j, i).value;
}

GTable build_gtable_enumerated(int n_max, int e_max, std::int64_t p, const GTableOptions& options)
{
    GTableBuilder builder(p, options);
    for (int j = 1; j <= n_max; ++j)
        for (int i = 0; i <= e_max; ++i)
            builder.ensure(j, i);
    return builder.table();
}

namespace {

ExactInt f_from_table_or_base(int n, int e, std::int64_t p)
{
    if (n == 0)
        return e == 0 ? 1 : 0;
    return eval_formula_f(n, e, p);
}

} // namespace

GTable build_gtable_from_formulas(int n_max, int e_max, std::int64_t p)
{
    GTable table(p);
    for (int i = 0; i <= e_max; ++i) {
        for (int j = 1; j <= n_max; ++j) {
            // The (i, j) term of the recurrence for f_j(p^i) is g_j(p^i) itself.
            ExactInt rest = 0;
            for (int ii = 0; ii <= i; ++ii)
                for (int jj = 1; jj <= j; ++jj) {
                    if (ii == i && jj == j)
                        continue;
                    const ExactInt& g = table.at(jj, ii).value;
                    if (g != 0)
                        rest += binomial(j - 1, jj - 1) * f_from_table_or_base(j - jj, i - ii, p) * g;
                }
            table.set(j, i, f_from_table_or_base(j, i, p) - rest, Provenance::ClosedForm);
        }
    }
    return table;
}

std::vector<std::vector<ExactInt>> f_recurrence_grid(int n_max, int e_max, const GTable& g)
{
    std::vector<std::vector<ExactInt>> f(static_cast<std::size_t>(n_max) + 1,
                                         std::vector<ExactInt>(static_cast<std::size_t>(e_max) + 1));
    f[0][0] = 1;
    for (int n = 1; n <= n_max; ++n)
        for (int e = 0; e <= e_max; ++e) {
            ExactInt total = 0;
            for (int i = 0; i <= e; ++i)
                for (int j = 1; j <= n; ++j) {
                    const ExactInt& gji = g.at(j, i).value;
                    if (gji == 0)
                        continue;
                    total += binomial(n - 1, j - 1) * f[static_cast<std::size_t>(n - j)][static_cast<std::size_t>(e - i)] * gji;
                }
            f[static_cast<std::size_t>(n)][static_cast<std::size_t>(e)] = std::move(total);
        }
    return f;
}

ExactInt f_recurrence(int n, int e, std::int64_t p, const GTable& g)
{
    if (n < 0 || e < 0)
        throw std::invalid_argument("f_recurrence: need n >= 0 and e >= 0");
    if (g.prime() != p)
        throw std::invalid_argument("f_recurrence: g-table was built for a different prime");
    return f_recurrence_grid(n, e, g)[static_cast<std::size_t>(n)][static_cast<std::size_t>(e)];
}

std::optional<IntPolynomial> closed_g_alpha_polynomial(const Composition& alpha)
{
    const Composition core = alpha.strip_leading_ones();
    if (core.length() <= 1)
        return IntPolynomial{1};
    const auto& parts = core.parts();
    const bool tail_all_ones = std::all_of(parts.begin() + 1, parts.end(), [](int x) { return x == 1; });
    if (tail_all_ones) {
        const auto ones = static_cast<unsigned>(core.length() - 1);
        const long factor = parts[0] == 2 ? 1 : static_cast<long>(ones) + 1;
        return IntPolynomial::monomial(factor, ones);
    }
    if (parts == std::vector<int>{2, 2, 1, 1})
        return IntPolynomial{0, 0, -3, 3, 1};
    if (parts == std::vector<int>{3, 2, 1, 1})
        return IntPolynomial{0, 0, 6, -6, 7};
    return std::nullopt;
}

std::optional<ExactInt> eval_closed_g_alpha(const Composition& alpha, std::int64_t p)
{
    if (auto poly = closed_g_alpha_polynomial(alpha))
        return poly_eval(*poly, p);
    return std::nullopt;
}

ExactInt f_general(int n, std::int64_t k, const EnumOptions& options)
{
    if (n < 0 || k < 1)
        throw std::invalid_argument("f_general: need n >= 0 and k >= 1");
    const CoefficientTable& table = CoefficientTable::builtin();
    ExactInt total = 1;
    for (const auto& [p, e] : factorize(k)) {
        if (e <= table.max_e()) {
            total *= eval_formula_f(n, e, p);
        } else {
            const GTable g = build_gtable_enumerated(n, e, p, GTableOptions{options, true});
            total *= f_recurrence(n, e, p, g);
        }
        if (total == 0)
            break;
    }
    return total;
}

ExactInt partial_sum_NR(int n, std::int64_t X, const EnumOptions& options)
{
    ExactInt total = 0;
    for (std::int64_t k = 1; k < X; ++k)
        total += f_general(n, k, options);
    return total;
}

BoundSpec BoundSpec::for_shape(int n, int e)
{
    const BoundSpec spec{e - (n - 1), 2 * (n - 1) - e};
    if (n < 1 || spec.r < 0 || spec.s < 0)
        throw std::invalid_argument("no composition of " + std::to_string(e) + " into " + std::to_string(n - 1) +
                                    " parts equal to 1 or 2");
    return spec;
}

Composition BoundSpec::composition() const
{
    std::vector<int> parts(static_cast<std::size_t>(r), 2);
    parts.insert(parts.end(), static_cast<std::size_t>(s), 1);
    return Composition(std::move(parts));
}

ExactInt lower_bound_g(int n, int e, std::int64_t p)
{
    const BoundSpec spec = BoundSpec::for_shape(n, e);
    return ipow(ExactInt(p), static_cast<unsigned>(spec.r * spec.s));
}

int max_lower_bound_exponent(int e)
{
    if (e < 1)
        throw std::invalid_argument("max_lower_bound: e must be positive");
    switch (e % 4) {
    case 0:
        return e * e / 8;
    case 2:
        return (e * e - 4) / 8;
    default:
        return (e * e - 1) / 8;
    }
}

ExactInt max_lower_bound(int e, std::int64_t p)
{
    return ipow(ExactInt(p), static_cast<unsigned>(max_lower_bound_exponent(e)));
}

std::vector<int> maximizing_n(int e)
{
    std::vector<int> best;
    int best_value = -1;
    for (int n = 1; n <= e + 1; ++n) {
        const int r = e - (n - 1);
        const int s = 2 * (n - 1) - e;
        if (r < 0 || s < 0)
            continue;
        if (r * s > best_value) {
            best_value = r * s;
            best.clear();
        }
        if (r * s == best_value)
            best.push_back(n);
    }
    return best;
}

} // namespace subring

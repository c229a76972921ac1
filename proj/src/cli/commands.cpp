#include "subring/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subring/cli/cache.hpp"
#include "subring/cli/report.hpp"
#include "subring/formulas.hpp"
#include "subring/hnf.hpp"
#include "subring/polyfit.hpp"
#include "subring/subring_enum.hpp"
#include "subring/zeta.hpp"

namespace subring::cli {

using nlohmann::json;

namespace {

struct CommonOptions {
    unsigned workers = 0;
    std::string budget = "1e9";
    double max_seconds = 3600.0;
    bool no_cache = false;
    std::string cache_path;
    bool strict = false;
    bool json = false;
    bool canonical = false;
    bool csv = false;
};

struct CsvRow {
    int n;
    int e;
    std::int64_t p;
    ExactInt value;
    std::string method;
};

class Session {
public:
    Session(const CommonOptions& options, std::ostream& out, std::ostream& err)
        : options_(options), out_(out), err_(err), started_(std::chrono::steady_clock::now())
    {
    }

    EnumOptions enum_options() const
    {
        return EnumOptions{EnumBudget{parse_budget(options_.budget), options_.max_seconds}, options_.workers};
    }

    bool strict() const { return options_.strict; }
    std::ostream& err() { return err_; }

    void open_cache()
    {
        if (options_.no_cache)
            return;
        std::optional<std::string> path;
        if (!options_.cache_path.empty())
            path = options_.cache_path;
        else
            path = default_cache_path();
        if (path)
            cache_.emplace(*path);
    }

    /// Records a value; throws CacheIntegrityError if it contradicts the file.
    void remember(const std::string& key, const ExactInt& value, const std::string& method, const std::string& note = {})
    {
        if (cache_)
            cache_->record(CacheRecord{key, value, method, kEngineVersion, utc_timestamp(), note});
    }

    Report& report() { return report_; }
    std::ostringstream& text() { return text_; }
    void add_csv(CsvRow row) { csv_.push_back(std::move(row)); }

    void emit()
    {
        report_.execution["seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        report_.execution["workers"] = options_.workers;
        if (cache_)
            report_.execution["cache"] = cache_->path();
        if (options_.canonical)
            out_ << report_.canonical().dump(2) << '\n';
        else if (options_.json)
            out_ << report_.full().dump(2) << '\n';
        else if (options_.csv) {
            out_ << "n,e,p,value,method\n";
            for (const auto& row : csv_)
                out_ << row.n << ',' << row.e << ',' << row.p << ',' << to_string(row.value) << ',' << row.method << '\n';
        } else
            out_ << text_.str();
    }

    static std::uint64_t parse_budget(const std::string& text)
    {
        std::size_t used = 0;
        long double value = 0;
        try {
            value = std::stold(text, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --budget value '" + text + "'");
        }
        if (used != text.size() || !(value >= 1) || value > 1.8e19L || value != std::floor(value))
            throw std::invalid_argument("bad --budget value '" + text + "'");
        return static_cast<std::uint64_t>(value);
    }

private:
    static std::optional<std::string> default_cache_path()
    {
        if (auto env = CountCache::path_from_environment())
            return env;
        std::filesystem::path dir;
        if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
            dir = xdg;
        else if (const char* home = std::getenv("HOME"); home && *home)
            dir = std::filesystem::path(home) / ".cache";
        else
            return std::nullopt;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            return std::nullopt;
        return (dir / "subring-counts.jsonl").string();
    }

    CommonOptions options_;
    std::ostream& out_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point started_;
    std::optional<CountCache> cache_;
    Report report_;
    std::ostringstream text_;
    std::vector<CsvRow> csv_;
};

std::int64_t require_prime(std::int64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument(std::to_string(p) + " is not prime");
    return p;
}

std::string prime_key(std::int64_t p) { return "p=" + std::to_string(p); }

std::string galpha_key(const Composition& alpha, std::int64_t p)
{
    return "galpha:alpha=" + alpha.to_string() + ":" + prime_key(p);
}

std::string grid_key(const std::string& kind, int n, int e, std::int64_t p)
{
    return kind + ":n=" + std::to_string(n) + ":e=" + std::to_string(e) + ":" + prime_key(p);
}

json primes_json(const std::vector<std::int64_t>& primes)
{
    json j = json::array();
    for (auto p : primes)
        j.push_back(p);
    return j;
}

// ---------------------------------------------------------------- count

int count_galpha(Session& s, const std::string& alpha_text, std::int64_t p)
{
    require_prime(p);
    const Composition alpha = Composition::parse(alpha_text);
    const Composition key_alpha = alpha.strip_leading_ones();
    const GAlphaStats stats = g_alpha_stats(key_alpha, p, s.enum_options());

    auto& r = s.report();
    r.command = "count galpha";
    r.inputs = {{"alpha", alpha.to_string()}, {"prime", p}};
    r.outputs = {{"value", to_string(stats.count)}, {"method", "enumerated"}, {"key", galpha_key(key_alpha, p)}};
    if (key_alpha != alpha)
        r.outputs["reduced_alpha"] = key_alpha.to_string();
    r.execution["nodes"] = stats.nodes;
    r.execution["shards"] = stats.shards;

    s.remember(galpha_key(key_alpha, p), stats.count, "enumerated",
               key_alpha != alpha ? "leading ones stripped from " + alpha.to_string() : "");
    s.text() << "g_(" << alpha.to_string() << ")(" << p << ") = " << to_string(stats.count) << '\n';

    int code = kExitOk;
    if (auto closed = closed_g_alpha_polynomial(alpha)) {
        const ExactInt expected = poly_eval(*closed, p);
        const bool pass = expected == stats.count;
        r.add_item({{"check", "closed-form"}, {"polynomial", closed->to_string()}, {"expected", to_string(expected)},
                    {"pass", pass}});
        s.text() << "closed form " << closed->to_string() << " gives " << to_string(expected)
                 << (pass ? " (match)" : " (MISMATCH)") << '\n';
        if (!pass)
            code = kExitMismatch;
    }
    s.add_csv({static_cast<int>(alpha.length()) + 1, alpha.target(), p, stats.count, "enumerated"});
    return code;
}

int count_gn(Session& s, int n, int e, std::int64_t p)
{
    require_prime(p);
    if (n < 1 || e < 0)
        throw std::invalid_argument("need --n >= 1 and --e >= 0");
    GTableBuilder builder(p, GTableOptions{s.enum_options(), true});
    const ExactInt value = builder.ensure(n, e);
    auto& r = s.report();
    r.command = "count gn";
    r.inputs = {{"n", n}, {"e", e}, {"prime", p}};
    r.outputs = {{"value", to_string(value)}, {"method", "enumerated"}, {"key", grid_key("gn", n, e, p)}};
    r.execution["nodes"] = builder.nodes();
    s.remember(grid_key("gn", n, e, p), value, "enumerated");
    s.text() << "g_" << n << "(" << p << "^" << e << ") = " << to_string(value) << '\n';
    s.add_csv({n, e, p, value, "enumerated"});
    return kExitOk;
}

int count_fn(Session& s, int n, int e, std::int64_t p, bool enumerate)
{
    require_prime(p);
    if (n < 0 || e < 0)
        throw std::invalid_argument("need --n >= 0 and --e >= 0");
    const bool use_table = !enumerate && e <= CoefficientTable::builtin().max_e();
    ExactInt value;
    std::string method;
    if (use_table) {
        value = eval_formula_f(n, e, p);
        method = "closed-form";
    } else {
        GTableBuilder builder(p, GTableOptions{s.enum_options(), true});
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i <= e; ++i)
                builder.ensure(j, i);
        value = f_recurrence(n, e, p, builder.table());
        method = "recurrence";
        s.report().execution["nodes"] = builder.nodes();
    }
    auto& r = s.report();
    r.command = "count fn";
    r.inputs = {{"n", n}, {"e", e}, {"prime", p}, {"enumerate", enumerate}};
    r.outputs = {{"value", to_string(value)}, {"method", method}, {"key", grid_key("fn", n, e, p)}};
    s.remember(grid_key("fn", n, e, p), value, method);
    s.text() << "f_" << n << "(" << p << "^" << e << ") = " << to_string(value) << "  [" << method << "]\n";
    s.add_csv({n, e, p, value, method});
    return kExitOk;
}

int count_sn(Session& s, int n, int e, std::int64_t p)
{
    require_prime(p);
    const ExactInt value = s_n(n, e, p);
    auto& r = s.report();
    r.command = "count sn";
    r.inputs = {{"n", n}, {"e", e}, {"prime", p}};
    r.outputs = {{"value", to_string(value)}, {"method", "closed-form"}, {"key", grid_key("sn", n, e, p)}};
    s.remember(grid_key("sn", n, e, p), value, "closed-form");
    s.text() << "s_" << n << "(" << p << "^" << e << ") = " << to_string(value) << '\n';
    s.add_csv({n, e, p, value, "closed-form"});
    return kExitOk;
}

int count_nr(Session& s, int n, std::int64_t X)
{
    if (n < 0 || X < 1)
        throw std::invalid_argument("need --n >= 0 and --X >= 1");
    const ExactInt value = partial_sum_NR(n, X, s.enum_options());
    // Every k < X has all exponents within the table when X <= 2^(max_e + 1).
    const int max_e = CoefficientTable::builtin().max_e();
    const std::string method = X <= (std::int64_t{1} << (max_e + 1)) ? "closed-form" : "recurrence";
    const std::string key = "NR:n=" + std::to_string(n) + ":X=" + std::to_string(X);
    auto& r = s.report();
    r.command = "count NR";
    r.inputs = {{"n", n}, {"X", X}};
    r.outputs = {{"value", to_string(value)}, {"method", method}, {"key", key}};
    s.remember(key, value, method);
    s.text() << "N_" << n << "^R(" << X << ") = " << to_string(value) << "  [sum over k < " << X << "]\n";
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(Session& s, int e, const std::vector<std::int64_t>& primes, int n_max)
{
    if (e < 1 || n_max < 1)
        throw std::invalid_argument("need --e >= 1 and --n-max >= 1");
    for (auto p : primes)
        require_prime(p);
    const BinomialFormula& row = CoefficientTable::builtin().row(e);
    const bool has_errata = std::any_of(known_errata().begin(), known_errata().end(),
                                        [e](const Erratum& fix) { return fix.e == e; });
    const BinomialFormula printed = printed_row(e);

    auto& r = s.report();
    r.command = "verify";
    r.inputs = {{"e", e}, {"primes", primes_json(primes)}, {"n_max", n_max}};
    r.execution["primes"] = json::object();

    int passed = 0;
    int failed = 0;
    int skipped = 0;
    s.text() << std::left << std::setw(4) << "n" << std::setw(6) << "p" << std::setw(28) << "recurrence" << std::setw(28)
             << "formula" << "status\n";
    for (auto p : primes) {
        const auto started = std::chrono::steady_clock::now();
        GTableBuilder builder(p, GTableOptions{s.enum_options(), true});
        int reachable = n_max;
        std::string budget_note;
        for (int j = 1; j <= n_max && reachable == n_max; ++j) {
            try {
                for (int i = 0; i <= e; ++i)
                    builder.ensure(j, i);
            } catch (const BudgetExceeded& ex) {
                reachable = j - 1;
                budget_note = ex.what();
                if (s.strict())
                    throw;
            }
        }
        for (const auto& [key, entry] : builder.table().entries())
            s.remember(grid_key("gn", key.first, key.second, p), entry.value, "enumerated");

        const auto grid = f_recurrence_grid(reachable, e, builder.table());
        for (int n = 1; n <= n_max; ++n) {
            json item = {{"n", n}, {"e", e}, {"prime", p}};
            if (n > reachable) {
                item["pass"] = true;
                item["skipped"] = true;
                item["reason"] = budget_note;
                ++skipped;
                r.add_item(item);
                s.text() << std::setw(4) << n << std::setw(6) << p << std::setw(28) << "-" << std::setw(28) << "-"
                         << "skipped (budget)\n";
                continue;
            }
            const ExactInt& counted = grid[static_cast<std::size_t>(n)][static_cast<std::size_t>(e)];
            const ExactInt expected = row.evaluate(n, p);
            const bool pass = counted == expected;
            item["recurrence"] = to_string(counted);
            item["formula"] = to_string(expected);
            item["pass"] = pass;
            if (has_errata) {
                const ExactInt printed_value = printed.evaluate(n, p);
                item["printed_form"] = to_string(printed_value);
                item["printed_form_agrees"] = printed_value == counted;
            }
            r.add_item(item);
            pass ? ++passed : ++failed;
            s.remember(grid_key("fn", n, e, p), counted, "recurrence");
            s.add_csv({n, e, p, counted, "recurrence"});
            s.text() << std::setw(4) << n << std::setw(6) << p << std::setw(28) << to_string(counted) << std::setw(28)
                     << to_string(expected) << (pass ? "ok" : "MISMATCH");
            if (has_errata && !item["printed_form_agrees"].get<bool>())
                s.text() << "  (uncorrected row gives " << item["printed_form"].get<std::string>() << ")";
            s.text() << '\n';
        }
        r.execution["primes"][std::to_string(p)] = {
            {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()},
            {"nodes", builder.nodes()}};
    }
    r.outputs = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}, {"formula", row.to_string()}};
    if (has_errata)
        r.outputs["uncorrected_formula"] = printed.to_string();
    s.text() << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    if (failed > 0)
        return kExitMismatch;
    return kExitOk;
}

// ---------------------------------------------------------------- zeta

int cmd_zeta(Session& s, int n, std::int64_t p, int order, const std::string& counts_from)
{
    require_prime(p);
    const LocalFactorSpec spec{n, p, FactorKind::SubringClosedForm, order};
    spec.validate();

    std::vector<ExactInt> counts;
    if (counts_from == "formula") {
        for (int e = 0; e <= order; ++e)
            counts.push_back(e <= CoefficientTable::builtin().max_e() ? eval_formula_f(n, e, p) : ExactInt(-1));
        if (order > CoefficientTable::builtin().max_e())
            throw std::invalid_argument("--counts formula only reaches e = " +
                                        std::to_string(CoefficientTable::builtin().max_e()));
    } else {
        GTableBuilder builder(p, GTableOptions{s.enum_options(), true});
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i <= order; ++i)
                builder.ensure(j, i);
        const auto grid = f_recurrence_grid(n, order, builder.table());
        counts = grid[static_cast<std::size_t>(n)];
        s.report().execution["nodes"] = builder.nodes();
    }

    const ZetaComparison cmp = compare_counts(n, p, order, counts, s.strict());
    auto& r = s.report();
    r.command = "zeta";
    r.inputs = {{"n", n}, {"prime", p}, {"order", order}, {"counts", counts_from}};
    json coeffs = json::array();
    s.text() << "local subring zeta factor of Z^" << n << " at p = " << p << ", t = p^-s\n";
    for (const auto& row : cmp.rows) {
        coeffs.push_back(to_string(row.series_value));
        r.add_item({{"e", row.e},
                    {"series", to_string(row.series_value)},
                    {"count", to_string(row.count)},
                    {"pass", row.match}});
        s.text() << "  t^" << row.e << ": " << std::left << std::setw(16) << to_string(row.series_value) << " count "
                 << std::setw(16) << to_string(row.count) << (row.match ? "ok" : "MISMATCH") << '\n';
        s.add_csv({n, row.e, p, row.series_value, "closed-form"});
    }
    r.outputs = {{"coefficients", coeffs}, {"all_match", cmp.all_match()}};
    return cmp.all_match() ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------- interpolate

int cmd_interpolate(Session& s, const std::string& alpha_text, const std::vector<std::int64_t>& primes,
                    std::optional<int> degree_bound)
{
    const Composition alpha = Composition::parse(alpha_text);
    const Composition key_alpha = alpha.strip_leading_ones();
    if (primes.size() < 2)
        throw std::invalid_argument("interpolate needs at least two primes");
    for (auto p : primes)
        require_prime(p);

    auto& r = s.report();
    r.command = "interpolate";
    r.inputs = {{"alpha", alpha.to_string()}, {"primes", primes_json(primes)}};
    if (degree_bound)
        r.inputs["degree_bound"] = *degree_bound;

    SampleSet samples("g_(" + alpha.to_string() + ")");
    json sample_json = json::array();
    std::optional<std::string> budget_error;
    for (auto p : primes) {
        try {
            const GAlphaStats stats = g_alpha_stats(key_alpha, p, s.enum_options());
            samples.add(p, stats.count);
            sample_json.push_back({{"prime", p}, {"value", to_string(stats.count)}});
            s.remember(galpha_key(key_alpha, p), stats.count, "enumerated",
                       key_alpha != alpha ? "leading ones stripped from " + alpha.to_string() : "");
        } catch (const BudgetExceeded& ex) {
            budget_error = ex.what();
            break;
        }
    }
    r.outputs["samples"] = sample_json;
    s.text() << "samples of " << samples.label() << ":";
    for (const auto& [p, v] : samples.points())
        s.text() << ' ' << p << "->" << to_string(v);
    s.text() << '\n';

    if (budget_error) {
        r.outputs["budget_error"] = *budget_error;
        s.text() << "stopped: " << *budget_error << '\n';
        if (samples.size() < 2)
            return kExitBudget;
    }

    const int bound = degree_bound.value_or(
        std::min(default_degree_bound(key_alpha), std::max(0, static_cast<int>(samples.size()) - 2)));
    const FitResult fit = interpolate_in_p(samples, bound);
    r.outputs["fit"] = {{"polynomial", fit.interpolant_string()},
                        {"status", to_string(fit.status)},
                        {"degree_bound", bound},
                        {"fitted_on", primes_json(fit.fitted_on)},
                        {"verified_on", primes_json(fit.verified_on)},
                        {"failed_on", primes_json(fit.failed_on)}};
    for (auto p : fit.verified_on)
        r.add_item({{"holdout", p}, {"pass", true}});
    for (auto p : fit.failed_on)
        r.add_item({{"holdout", p}, {"pass", false}});
    s.text() << "fit (degree <= " << bound << "): " << fit.to_string() << '\n';
    if (!fit.verified_on.empty() || !fit.failed_on.empty())
        s.text() << "holdout: " << fit.verified_on.size() << " verified, " << fit.failed_on.size() << " failed\n";

    if (!fit.polynomial.is_zero()) {
        const PMinusOneExpansion expansion = expand_p_minus_1(fit.polynomial);
        json b = json::array();
        for (const auto& c : expansion.coefficients)
            b.push_back(to_string(c));
        r.outputs["p_minus_1_expansion"] = {{"coefficients", b}, {"signs", expansion.sign_summary()}};
        s.text() << "in powers of (p-1):";
        for (const auto& c : expansion.coefficients)
            s.text() << ' ' << to_string(c);
        s.text() << "  (" << expansion.sign_summary() << ")\n";
    }
    if (auto closed = closed_g_alpha_polynomial(alpha)) {
        r.outputs["closed_form"] = closed->to_string();
        r.outputs["closed_form_agrees"] = fit.status == FitStatus::ExactInteger && fit.polynomial == *closed;
    }
    if (budget_error)
        return kExitBudget;
    return fit.status == FitStatus::HoldoutMismatch ? kExitMismatch : kExitOk;
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(Session& s, int e, std::int64_t p, bool enumerate)
{
    require_prime(p);
    if (e < 1)
        throw std::invalid_argument("need --e >= 1");
    const std::vector<int> best = maximizing_n(e);
    auto& r = s.report();
    r.command = "bounds";
    r.inputs = {{"e", e}, {"prime", p}, {"enumerate", enumerate}};

    s.text() << std::left << std::setw(4) << "n" << std::setw(10) << "(r,s)" << std::setw(16) << "p^(rs)"
             << std::setw(16) << "g_alpha" << std::setw(16) << "g_n" << '\n';
    bool violated = false;
    GTableBuilder builder(p, GTableOptions{s.enum_options(), true});
    for (int n = 1; n <= e + 1; ++n) {
        BoundSpec spec;
        try {
            spec = BoundSpec::for_shape(n, e);
        } catch (const std::invalid_argument&) {
            continue;
        }
        const ExactInt bound = lower_bound_g(n, e, p);
        const bool maximal = std::find(best.begin(), best.end(), n) != best.end();
        json item = {{"n", n}, {"r", spec.r}, {"s", spec.s}, {"bound", to_string(bound)}, {"maximizing", maximal}};
        std::string galpha_text = "-";
        std::string gn_text = "-";
        bool pass = true;
        if (enumerate) {
            try {
                const ExactInt ga = g_alpha(spec.composition(), p, s.enum_options().budget, s.enum_options().workers);
                item["g_alpha"] = to_string(ga);
                galpha_text = to_string(ga);
                pass = pass && ga >= bound;
            } catch (const BudgetExceeded&) {
                item["g_alpha"] = "skipped";
            }
            try {
                const ExactInt gn = builder.ensure(n, e);
                item["g_n"] = to_string(gn);
                gn_text = to_string(gn);
                pass = pass && gn >= bound;
            } catch (const BudgetExceeded&) {
                item["g_n"] = "skipped";
            }
        }
        item["pass"] = pass;
        violated = violated || !pass;
        r.add_item(item);
        s.text() << std::setw(4) << n << std::setw(10) << ("(" + std::to_string(spec.r) + "," + std::to_string(spec.s) + ")")
                 << std::setw(16) << to_string(bound) << std::setw(16) << galpha_text << std::setw(16) << gn_text
                 << (maximal ? "max" : "") << (pass ? "" : " VIOLATED") << '\n';
    }
    json best_json = json::array();
    for (int n : best)
        best_json.push_back(n);
    r.outputs = {{"max_exponent", max_lower_bound_exponent(e)},
                 {"max_bound", to_string(max_lower_bound(e, p))},
                 {"maximizing_n", best_json}};
    s.text() << "largest bound p^" << max_lower_bound_exponent(e) << " = " << to_string(max_lower_bound(e, p))
             << " at n =";
    for (int n : best)
        s.text() << ' ' << n;
    s.text() << '\n';
    return violated ? kExitMismatch : kExitOk;
}

// ---------------------------------------------------------------- variety

int cmd_variety(Session& s, std::int64_t p_max, bool cross_check)
{
    if (p_max < 2)
        throw std::invalid_argument("need --p-max >= 2");
    auto& r = s.report();
    r.command = "variety";
    r.inputs = {{"p_max", p_max}, {"cross_check", cross_check}};
    const IntPolynomial formula{6, -6, 7};
    const Composition alpha({3, 2, 1, 1});
    bool all_match = true;
    for (std::int64_t p = 2; p <= p_max; ++p) {
        if (!is_prime(p))
            continue;
        const ExactInt points = count_variety_points(p);
        const ExactInt expected = poly_eval(formula, p);
        json item = {{"prime", p}, {"points", to_string(points)}, {"formula", to_string(expected)}};
        bool pass = points == expected;
        s.text() << "p = " << std::left << std::setw(4) << p << " #V = " << std::setw(8) << to_string(points)
                 << " 7p^2-6p+6 = " << std::setw(8) << to_string(expected) << (pass ? "ok" : "MISMATCH");
        if (cross_check) {
            try {
                const ExactInt g = g_alpha(alpha, p, s.enum_options().budget, s.enum_options().workers);
                const ExactInt scaled = points * p * p;
                item["g_3211"] = to_string(g);
                item["p2_points"] = to_string(scaled);
                pass = pass && g == scaled;
                s.text() << "  p^2 #V = " << to_string(scaled) << ", g_(3,2,1,1) = " << to_string(g)
                         << (g == scaled ? " ok" : " MISMATCH");
            } catch (const BudgetExceeded&) {
                item["g_3211"] = "skipped";
                s.text() << "  g_(3,2,1,1) skipped (budget)";
            }
        }
        s.text() << '\n';
        item["pass"] = pass;
        all_match = all_match && pass;
        r.add_item(item);
    }
    r.outputs = {{"all_match", all_match}};
    return all_match ? kExitOk : kExitMismatch;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact counts of subrings of Z^n"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--workers", common.workers, "Worker threads (0 = all cores)");
    app.add_option("--budget", common.budget, "Largest candidate space to enumerate, e.g. 1e8");
    app.add_option("--max-seconds", common.max_seconds, "Wall-clock limit per enumeration");
    app.add_flag("--no-cache", common.no_cache, "Do not read or write the count cache");
    app.add_option("--cache", common.cache_path, "Cache file (default: $SUBRING_CACHE)");
    app.add_flag("--strict", common.strict, "Treat budget skips and first mismatches as fatal");
    auto* json_flag = app.add_flag("--json", common.json, "Print the full JSON report");
    auto* canonical_flag = app.add_flag("--canonical", common.canonical, "Print the canonical JSON report only");
    auto* csv_flag = app.add_flag("--csv", common.csv, "Print a CSV grid (n,e,p,value,method)");
    json_flag->excludes(canonical_flag)->excludes(csv_flag);
    canonical_flag->excludes(csv_flag);

    std::function<int(Session&)> action;

    auto* count = app.add_subcommand("count", "Count one quantity exactly");
    count->require_subcommand(1);

    std::string alpha_text;
    std::int64_t prime = 0;
    int n = 0;
    int e = 0;
    std::int64_t X = 0;
    bool enumerate = false;

    auto* galpha = count->add_subcommand("galpha", "Irreducible subring matrices with diagonal exponents alpha");
    galpha->add_option("--alpha", alpha_text, "Composition, e.g. 3,2,1,1")->required();
    galpha->add_option("--prime", prime, "Prime p")->required();
    galpha->callback([&] { action = [&](Session& s) { return count_galpha(s, alpha_text, prime); }; });

    auto* gn = count->add_subcommand("gn", "Irreducible subrings of Z^n of index p^e");
    gn->add_option("--n", n)->required();
    gn->add_option("--e", e)->required();
    gn->add_option("--prime", prime)->required();
    gn->callback([&] { action = [&](Session& s) { return count_gn(s, n, e, prime); }; });

    auto* fn = count->add_subcommand("fn", "Subrings of Z^n of index p^e");
    fn->add_option("--n", n)->required();
    fn->add_option("--e", e)->required();
    fn->add_option("--prime", prime)->required();
    fn->add_flag("--enumerate", enumerate, "Use enumeration and the recurrence even when a formula exists");
    fn->callback([&] { action = [&](Session& s) { return count_fn(s, n, e, prime, enumerate); }; });

    auto* sn = count->add_subcommand("sn", "Sublattices of Z^n of index p^e");
    sn->add_option("--n", n)->required();
    sn->add_option("--e", e)->required();
    sn->add_option("--prime", prime)->required();
    sn->callback([&] { action = [&](Session& s) { return count_sn(s, n, e, prime); }; });

    auto* nr = count->add_subcommand("NR", "Subrings of Z^n of index below X");
    nr->add_option("--n", n)->required();
    nr->add_option("--X", X)->required();
    nr->callback([&] { action = [&](Session& s) { return count_nr(s, n, X); }; });

    std::vector<std::int64_t> primes;
    int n_max = 0;
    auto* verify = app.add_subcommand("verify", "Check tabulated f_n(p^e) against enumeration");
    verify->add_option("--e", e)->required();
    verify->add_option("--primes", primes)->required()->delimiter(',');
    verify->add_option("--n-max", n_max)->required();
    verify->callback([&] { action = [&](Session& s) { return cmd_verify(s, e, primes, n_max); }; });

    int order = 8;
    std::string counts_from = "enumerated";
    auto* zeta = app.add_subcommand("zeta", "Closed-form local subring zeta factor versus counts");
    zeta->add_option("--n", n)->required()->check(CLI::Range(2, 4));
    zeta->add_option("--prime", prime)->required();
    zeta->add_option("--order", order)->check(CLI::Range(0, 64));
    zeta->add_option("--counts", counts_from, "Counts to compare with")->check(CLI::IsMember({"enumerated", "formula"}));
    zeta->callback([&] { action = [&](Session& s) { return cmd_zeta(s, n, prime, order, counts_from); }; });

    std::optional<int> degree_bound;
    auto* interpolate = app.add_subcommand("interpolate", "Fit g_alpha as a polynomial in p");
    interpolate->add_option("--alpha", alpha_text)->required();
    interpolate->add_option("--primes", primes)->required()->delimiter(',');
    interpolate->add_option("--degree-bound", degree_bound);
    interpolate->callback([&] { action = [&](Session& s) { return cmd_interpolate(s, alpha_text, primes, degree_bound); }; });

    bool no_enumerate = false;
    auto* bounds = app.add_subcommand("bounds", "Lower bounds p^(rs) for g_n(p^e)");
    bounds->add_option("--e", e)->required();
    bounds->add_option("--prime", prime)->required();
    bounds->add_flag("--no-enumerate", no_enumerate, "Skip the comparison with enumerated counts");
    bounds->callback([&] { action = [&](Session& s) { return cmd_bounds(s, e, prime, !no_enumerate); }; });

    std::int64_t p_max = 0;
    bool cross_check = false;
    auto* variety = app.add_subcommand("variety", "Count F_p-points of the (3,2,1,1) variety");
    variety->add_option("--p-max", p_max)->required();
    variety->add_flag("--cross-check", cross_check, "Compare p^2 #V with enumerated g_(3,2,1,1)");
    variety->callback([&] { action = [&](Session& s) { return cmd_variety(s, p_max, cross_check); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Session session(common, out, err);
        session.enum_options();
        session.open_cache();
        const int code = action(session);
        session.emit();
        return code;
    } catch (const BudgetExceeded& ex) {
        err << "budget exceeded: " << ex.what() << "\n";
        return kExitBudget;
    } catch (const CacheIntegrityError& ex) {
        err << "cache integrity error: " << ex.what() << "\n";
        return kExitIntegrity;
    } catch (const TableIntegrityError& ex) {
        err << "table integrity error: " << ex.what() << "\n";
        return kExitIntegrity;
    } catch (const ZetaMismatch& ex) {
        err << "mismatch: " << ex.what() << "\n";
        return kExitMismatch;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
}

} // namespace subring::cli

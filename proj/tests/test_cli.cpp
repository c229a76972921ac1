#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "subring/cli/cache.hpp"
#include "subring/cli/commands.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = subring::cli;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;

    json report() const { return json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

/// Runs without touching any cache file.
Outcome run_json(std::vector<std::string> args)
{
    args.insert(args.begin(), {"--no-cache", "--json"});
    return run_cli(std::move(args));
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("subring-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    fs::path file(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

std::vector<std::string> read_lines(const fs::path& path)
{
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            lines.push_back(line);
    return lines;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("count")
    {
        auto galpha = run_json({"count", "galpha", "--alpha", "2,2,1,1", "--prime", "3"});
        REQUIRE(galpha.code == cli::kExitOk);
        CHECK(galpha.report()["outputs"]["value"] == "135");
        CHECK(galpha.report()["items"][0]["pass"] == true);

        auto stripped = run_json({"count", "galpha", "--alpha", "1,1,3,2,1,1", "--prime", "2"});
        REQUIRE(stripped.code == cli::kExitOk);
        CHECK(stripped.report()["outputs"]["value"] == "88");
        CHECK(stripped.report()["outputs"]["reduced_alpha"] == "3,2,1,1");

        auto fn = run_json({"count", "fn", "--n", "2", "--e", "8", "--prime", "7"});
        REQUIRE(fn.code == cli::kExitOk);
        CHECK(fn.report()["outputs"]["value"] == "1");

        auto fn_enum = run_json({"count", "fn", "--n", "5", "--e", "4", "--prime", "3", "--enumerate"});
        auto fn_table = run_json({"count", "fn", "--n", "5", "--e", "4", "--prime", "3"});
        REQUIRE(fn_enum.code == cli::kExitOk);
        REQUIRE(fn_table.code == cli::kExitOk);
        CHECK(fn_enum.report()["outputs"]["value"] == fn_table.report()["outputs"]["value"]);
        CHECK(fn_enum.report()["outputs"]["method"] != fn_table.report()["outputs"]["method"]);

        auto sn = run_json({"count", "sn", "--n", "2", "--e", "1", "--prime", "5"});
        REQUIRE(sn.code == cli::kExitOk);
        CHECK(sn.report()["outputs"]["value"] == "6");

        auto gn = run_json({"count", "gn", "--n", "4", "--e", "3", "--prime", "5"});
        REQUIRE(gn.code == cli::kExitOk);
        CHECK(gn.report()["outputs"]["value"] == "1");

        auto nr = run_json({"count", "NR", "--n", "2", "--X", "100"});
        REQUIRE(nr.code == cli::kExitOk);
        CHECK(nr.report()["outputs"]["value"] == "99");

        auto text = run_cli({"--no-cache", "count", "galpha", "--alpha", "3,2,1,1", "--prime", "2"});
        CHECK(text.code == cli::kExitOk);
        CHECK(text.out.find("88") != std::string::npos);
    }

    TEST_CASE("usage errors")
    {
        CHECK(run_json({"count", "galpha", "--alpha", "2,2,1,1", "--prime", "4"}).code == cli::kExitUsage);
        CHECK(run_json({"count", "galpha", "--alpha", "2,0", "--prime", "3"}).code == cli::kExitUsage);
        CHECK(run_json({"count", "galpha", "--prime", "3"}).code == cli::kExitUsage);
        CHECK(run_json({"zeta", "--n", "5", "--prime", "3"}).code == cli::kExitUsage);
        CHECK(run_json({"frobnicate"}).code == cli::kExitUsage);
        CHECK(run_cli({}).code == cli::kExitUsage);
        CHECK(run_cli({"--no-cache", "--json", "--csv", "count", "sn", "--n", "2", "--e", "1", "--prime", "5"}).code ==
              cli::kExitUsage);
        CHECK(run_json({"--budget", "lots", "count", "sn", "--n", "2", "--e", "1", "--prime", "5"}).code ==
              cli::kExitUsage);
        CHECK(run_cli({"--help"}).code == cli::kExitOk);
    }

    TEST_CASE("verify")
    {
        auto five = run_json({"verify", "--e", "5", "--primes", "2,3,5,7", "--n-max", "10"});
        REQUIRE(five.code == cli::kExitOk);
        const json report = five.report();
        CHECK(report["items"].size() == 40);
        CHECK(report["outputs"]["failed"] == 0);
        CHECK(report["outputs"]["skipped"] == 0);
        for (const auto& item : report["items"])
            REQUIRE(item["pass"] == true);

        auto two = run_json({"verify", "--e", "2", "--primes", "2", "--n-max", "4"});
        REQUIRE(two.code == cli::kExitOk);
        const json flagged = two.report();
        CHECK(flagged["outputs"].contains("uncorrected_formula"));
        const auto& n3 = flagged["items"][2];
        CHECK(n3["n"] == 3);
        CHECK(n3["recurrence"] == "4");
        CHECK(n3["printed_form"] == "6");
        CHECK(n3["printed_form_agrees"] == false);

        auto budget = run_json({"--budget", "100", "verify", "--e", "6", "--primes", "3", "--n-max", "6"});
        CHECK(budget.code == cli::kExitOk);
        CHECK(budget.report()["outputs"]["skipped"].get<int>() > 0);
        auto strict = run_json({"--strict", "--budget", "100", "verify", "--e", "6", "--primes", "3", "--n-max", "6"});
        CHECK(strict.code == cli::kExitBudget);
    }

    TEST_CASE("zeta")
    {
        auto three = run_json({"zeta", "--n", "3", "--prime", "2", "--order", "5"});
        REQUIRE(three.code == cli::kExitOk);
        const json items = three.report()["items"];
        REQUIRE(items.size() == 6);
        const std::vector<std::string> expected{"1", "3", "4", "6", "10", "12"};
        for (std::size_t e = 0; e < expected.size(); ++e) {
            CHECK(items[e]["series"] == expected[e]);
            CHECK(items[e]["pass"] == true);
        }

        auto two = run_json({"zeta", "--n", "2", "--prime", "3", "--order", "8"});
        REQUIRE(two.code == cli::kExitOk);
        for (const auto& item : two.report()["items"])
            CHECK(item["series"] == "1");

        auto four = run_json({"zeta", "--n", "4", "--prime", "3", "--order", "8"});
        CHECK(four.code == cli::kExitOk);
        auto from_table = run_json({"zeta", "--n", "4", "--prime", "5", "--counts", "formula"});
        CHECK(from_table.code == cli::kExitOk);
    }

    TEST_CASE("interpolate")
    {
        auto quartic = run_json({"interpolate", "--alpha", "3,2,1,1", "--primes", "2,3,5,7,11,13"});
        REQUIRE(quartic.code == cli::kExitOk);
        const json fit = quartic.report()["outputs"]["fit"];
        CHECK(fit["polynomial"] == "7p^4 - 6p^3 + 6p^2");
        CHECK(fit["status"] == "exact-integer");
        CHECK(quartic.report()["outputs"]["closed_form_agrees"] == true);

        auto constant = run_json({"interpolate", "--alpha", "2", "--primes", "2,3"});
        REQUIRE(constant.code == cli::kExitOk);
        CHECK(constant.report()["outputs"]["fit"]["polynomial"] == "1");

        auto low = run_json({"interpolate", "--alpha", "3,2,1,1", "--primes", "2,3,5,7", "--degree-bound", "2"});
        CHECK(low.code == cli::kExitMismatch);
        CHECK(low.report()["outputs"]["fit"]["status"] == "holdout-mismatch");

        auto budget = run_json({"--budget", "1e3", "interpolate", "--alpha", "2,2,2,1,1", "--primes", "2,3"});
        CHECK(budget.code == cli::kExitBudget);
        CHECK(budget.report()["outputs"].contains("budget_error"));
    }

    TEST_CASE("bounds and variety")
    {
        auto eight = run_json({"bounds", "--e", "8", "--prime", "2"});
        REQUIRE(eight.code == cli::kExitOk);
        CHECK(eight.report()["outputs"]["max_bound"] == "256");
        CHECK(eight.report()["outputs"]["maximizing_n"] == json::array({7}));

        auto two = run_json({"bounds", "--e", "2", "--prime", "5", "--no-enumerate"});
        REQUIRE(two.code == cli::kExitOk);
        CHECK(two.report()["outputs"]["max_bound"] == "1");

        auto six = run_json({"bounds", "--e", "6", "--prime", "3"});
        REQUIRE(six.code == cli::kExitOk);
        CHECK(six.report()["outputs"]["maximizing_n"] == json::array({5, 6}));

        auto variety = run_json({"variety", "--p-max", "31"});
        REQUIRE(variety.code == cli::kExitOk);
        CHECK(variety.report()["items"].size() == 11);
        CHECK(variety.report()["outputs"]["all_match"] == true);

        auto single = run_json({"variety", "--p-max", "2"});
        CHECK(single.report()["items"].size() == 1);

        auto cross = run_json({"variety", "--p-max", "7", "--cross-check"});
        REQUIRE(cross.code == cli::kExitOk);
        for (const auto& item : cross.report()["items"])
            CHECK(item["g_3211"] == item["p2_points"]);
    }

    TEST_CASE("csv output")
    {
        auto csv = run_cli({"--no-cache", "--csv", "verify", "--e", "1", "--primes", "3", "--n-max", "3"});
        REQUIRE(csv.code == cli::kExitOk);
        CHECK(csv.out.rfind("n,e,p,value,method\n", 0) == 0);
        CHECK(csv.out.find("3,1,3,3,recurrence") != std::string::npos);
    }

    TEST_CASE("canonical reports do not depend on the worker count")
    {
        const std::vector<std::vector<std::string>> commands{
            {"verify", "--e", "6", "--primes", "2,3", "--n-max", "10"},
            {"count", "galpha", "--alpha", "3,2,2,1,1", "--prime", "3"},
            {"zeta", "--n", "4", "--prime", "2", "--order", "7"},
        };
        for (const auto& command : commands) {
            std::vector<std::string> serial{"--no-cache", "--canonical", "--workers", "1"};
            std::vector<std::string> parallel{"--no-cache", "--canonical", "--workers", "4"};
            serial.insert(serial.end(), command.begin(), command.end());
            parallel.insert(parallel.end(), command.begin(), command.end());
            const auto a = run_cli(serial);
            const auto b = run_cli(parallel);
            REQUIRE(a.code == cli::kExitOk);
            REQUIRE(b.code == cli::kExitOk);
            CHECK(a.out == b.out);
            CHECK_FALSE(a.report().contains("execution"));
        }
    }

    TEST_CASE("cache records and conflicts")
    {
        TempDir dir;
        const auto path = dir.file("counts.jsonl");

        auto first = run_cli({"--cache", path.string(), "--json", "count", "galpha", "--alpha", "2,2,1,1", "--prime", "3"});
        REQUIRE(first.code == cli::kExitOk);
        auto lines = read_lines(path);
        REQUIRE(lines.size() == 1);
        const json record = json::parse(lines[0]);
        CHECK(record["key"] == "galpha:alpha=2,2,1,1:p=3");
        CHECK(record["value"] == "135");
        CHECK(record["method"] == "enumerated");

        // Recomputing the same value leaves the file unchanged.
        REQUIRE(run_cli({"--cache", path.string(), "count", "galpha", "--alpha", "1,2,2,1,1", "--prime", "3"}).code ==
                cli::kExitOk);
        CHECK(read_lines(path).size() == 1);

        {
            std::ofstream out(path, std::ios::trunc);
            out << R"({"key":"galpha:alpha=2,2,1,1:p=3","value":"134","method":"enumerated"})" << '\n';
        }
        auto conflict = run_cli({"--cache", path.string(), "count", "galpha", "--alpha", "2,2,1,1", "--prime", "3"});
        CHECK(conflict.code == cli::kExitIntegrity);
        CHECK(read_lines(path).size() == 1);

        {
            std::ofstream out(path, std::ios::trunc);
            out << "not json\n";
        }
        CHECK(run_cli({"--cache", path.string(), "count", "sn", "--n", "2", "--e", "1", "--prime", "5"}).code ==
              cli::kExitIntegrity);

        CHECK_THROWS_AS(
            [&] {
                std::ofstream out(path, std::ios::trunc);
                out << R"({"key":"k","value":"1","method":"m"})" << '\n' << R"({"key":"k","value":"2","method":"m"})" << '\n';
                out.close();
                cli::CountCache cache(path.string());
            }(),
            cli::CacheIntegrityError);
    }

    TEST_CASE("cache location from the environment")
    {
        TempDir dir;
        const auto path = dir.file("env.jsonl");
        const char* previous = std::getenv(cli::kCacheEnvVar);
        const std::string saved = previous ? previous : "";
        ::setenv(cli::kCacheEnvVar, path.string().c_str(), 1);
        CHECK(cli::CountCache::path_from_environment() == path.string());
        auto o = run_cli({"count", "sn", "--n", "3", "--e", "2", "--prime", "2"});
        CHECK(o.code == cli::kExitOk);
        const auto lines = read_lines(path);
        REQUIRE(lines.size() == 1);
        CHECK(json::parse(lines[0])["key"] == "sn:n=3:e=2:p=2");
        CHECK(json::parse(lines[0])["value"] == "35");
        if (previous)
            ::setenv(cli::kCacheEnvVar, saved.c_str(), 1);
        else
            ::unsetenv(cli::kCacheEnvVar);
    }
}

#pragma once

// Machine-readable command reports. The canonical form holds everything that
// is a function of the inputs; wall-clock time, worker counts and search
// statistics live under "execution" and are dropped from it.

#include <string>

#include <json.hpp>

namespace subring::cli {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

struct Report {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    /// One object per checked item, each with a boolean "pass".
    nlohmann::json items = nlohmann::json::array();
    nlohmann::json execution = nlohmann::json::object();

    void add_item(nlohmann::json item) { items.push_back(std::move(item)); }
    bool all_pass() const;

    nlohmann::json canonical() const;
    nlohmann::json full() const;
};

} // namespace subring::cli

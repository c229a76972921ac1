#include "subring/cli/report.hpp"

namespace subring::cli {

bool Report::all_pass() const
{
    for (const auto& item : items)
        if (!item.value("pass", true))
            return false;
    return true;
}

nlohmann::json Report::canonical() const
{
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["engine_version"] = kEngineVersion;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["items"] = items;
    return j;
}

nlohmann::json Report::full() const
{
    nlohmann::json j = canonical();
    j["execution"] = execution;
    return j;
}

} // namespace subring::cli

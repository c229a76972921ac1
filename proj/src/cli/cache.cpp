#include "subring/cli/cache.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <json.hpp>

namespace subring::cli {

using nlohmann::json;

namespace {

json to_json(const CacheRecord& r)
{
    json j;
    j["key"] = r.key;
    j["value"] = to_string(r.value);
    j["method"] = r.method;
    j["engine_version"] = r.engine_version;
    j["timestamp"] = r.timestamp;
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

CacheRecord from_json(const json& j)
{
    CacheRecord r;
    r.key = j.at("key").get<std::string>();
    r.value = ExactInt(j.at("value").get<std::string>());
    r.method = j.at("method").get<std::string>();
    r.engine_version = j.value("engine_version", "");
    r.timestamp = j.value("timestamp", "");
    r.note = j.value("note", "");
    return r;
}

} // namespace

CountCache::CountCache(std::string path) : path_(std::move(path))
{
    std::ifstream in(path_);
    if (!in)
        return;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        CacheRecord r;
        try {
            r = from_json(json::parse(line));
        } catch (const std::exception& ex) {
            throw CacheIntegrityError(path_ + ":" + std::to_string(line_no) + ": unreadable cache record (" + ex.what() + ")");
        }
        auto [it, inserted] = records_.emplace(r.key, r);
        if (!inserted && it->second.value != r.value)
            throw CacheIntegrityError(path_ + ":" + std::to_string(line_no) + ": key " + r.key + " holds both " +
                                      to_string(it->second.value) + " and " + to_string(r.value));
    }
}

std::optional<std::string> CountCache::path_from_environment()
{
    const char* value = std::getenv(kCacheEnvVar);
    if (value == nullptr || *value == '\0')
        return std::nullopt;
    return std::string(value);
}

std::optional<CacheRecord> CountCache::lookup(const std::string& key) const
{
    std::lock_guard lock(mutex_);
    auto it = records_.find(key);
    if (it == records_.end())
        return std::nullopt;
    return it->second;
}

void CountCache::record(const CacheRecord& record)
{
    std::lock_guard lock(mutex_);
    auto it = records_.find(record.key);
    if (it != records_.end()) {
        if (it->second.value != record.value)
            throw CacheIntegrityError("cache key " + record.key + " holds " + to_string(it->second.value) +
                                      " but recomputation gave " + to_string(record.value));
        return;
    }
    std::ofstream out(path_, std::ios::app);
    if (!out)
        throw std::runtime_error("cannot append to cache file " + path_);
    out << to_json(record).dump() << '\n';
    out.flush();
    if (!out)
        throw std::runtime_error("write to cache file " + path_ + " failed");
    records_.emplace(record.key, record);
}

std::size_t CountCache::size() const
{
    std::lock_guard lock(mutex_);
    return records_.size();
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace subring::cli

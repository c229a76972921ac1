#pragma once

// Append-only JSON-lines store of computed counts. Every record is checked
// against what is already on file; two different values for one key are an
// integrity error, never silently resolved.

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "subring/arith.hpp"

namespace subring::cli {

inline constexpr const char* kCacheEnvVar = "SUBRING_CACHE";

struct CacheRecord {
    std::string key;
    ExactInt value;
    /// enumerated, closed-form or recurrence.
    std::string method;
    std::string engine_version;
    std::string timestamp;
    /// Free-form provenance, e.g. the composition before leading 1s were removed.
    std::string note;
};

class CacheIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CountCache {
public:
    /// Loads every line of `path` (a missing file is an empty cache). Throws
    /// CacheIntegrityError on malformed lines or conflicting values.
    explicit CountCache(std::string path);

    /// The path named by SUBRING_CACHE, if set and nonempty.
    static std::optional<std::string> path_from_environment();

    std::optional<CacheRecord> lookup(const std::string& key) const;

    /// Appends `record` unless its key is present with the same value; a
    /// different value throws CacheIntegrityError and leaves the file untouched.
    void record(const CacheRecord& record);

    const std::string& path() const { return path_; }
    std::size_t size() const;

private:
    std::string path_;
    mutable std::mutex mutex_;
    std::map<std::string, CacheRecord> records_;
};

std::string utc_timestamp();

} // namespace subring::cli

#pragma once

// Machine-readable artifact plumbing shared by the CLI and the tests: every
// JSON artifact carries a header with the tool version, a content hash of
// the generating configuration, and the seed, so downstream stages can
// detect stale caches instead of silently mixing runs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace glsurf::artifacts {

inline constexpr const char* kToolVersion = "0.1.0";  // mirrors the build

// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Canonical hash of a configuration object: nlohmann keeps object keys
// sorted, so dump() is order-independent for equal configs.
std::string config_hash(const nlohmann::json& config);

// {version, config_hash, seed, config}
nlohmann::json make_header(const nlohmann::json& config, std::uint64_t seed);

enum class CacheState {
  Fresh,    // header present, hash matches the config
  Stale,    // header present, hash differs
  Foreign,  // no header to judge by
};
CacheState check_reusable(const nlohmann::json& existing,
                          const nlohmann::json& config);

// Pretty-printed with trailing newline; throws on I/O failure.
void write_json(const std::filesystem::path& path,
                const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

// Cache root: $GLSURF_CACHE_DIR when set, else .glsurf-cache under the
// current directory.  cache_path appends "<stage>-<hash>.json".
std::filesystem::path cache_root();
std::filesystem::path cache_path(const std::string& stage,
                                 const nlohmann::json& config);

// Plot-ready CSV: one "# glsurf <version> config <hash> seed <seed>" comment
// line, the column header, then rows (already formatted by the caller).
// The column order of every schema is frozen within a major version.
void write_csv(const std::filesystem::path& path,
               const nlohmann::json& header,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

// Shortest round-trip decimal formatting for CSV cells.
std::string format_double(double x);

}  // namespace glsurf::artifacts

#include "glsurf/artifacts.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace glsurf::artifacts {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string config_hash(const nlohmann::json& config) {
  return fnv1a_hex(config.dump());
}

nlohmann::json make_header(const nlohmann::json& config, std::uint64_t seed) {
  return nlohmann::json{{"version", kToolVersion},
                        {"config_hash", config_hash(config)},
                        {"seed", seed},
                        {"config", config}};
}

CacheState check_reusable(const nlohmann::json& existing,
                          const nlohmann::json& config) {
  if (!existing.is_object() || !existing.contains("header") ||
      !existing["header"].is_object() ||
      !existing["header"].contains("config_hash"))
    return CacheState::Foreign;
  return existing["header"]["config_hash"] == config_hash(config)
             ? CacheState::Fresh
             : CacheState::Stale;
}

void write_json(const std::filesystem::path& path,
                const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_json: cannot open " + path.string());
  out << doc.dump(2) << '\n';
  if (!out)
    throw std::runtime_error("write_json: write to " + path.string() +
                             " failed");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("read_json: cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("read_json: " + path.string() + ": " + e.what());
  }
}

std::filesystem::path cache_root() {
  if (const char* env = std::getenv("GLSURF_CACHE_DIR");
      env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  return std::filesystem::path(".glsurf-cache");
}

std::filesystem::path cache_path(const std::string& stage,
                                 const nlohmann::json& config) {
  return cache_root() / (stage + "-" + config_hash(config) + ".json");
}

void write_csv(const std::filesystem::path& path,
               const nlohmann::json& header,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_csv: cannot open " + path.string());
  out << "# glsurf " << header.value("version", std::string("?"))
      << " config " << header.value("config_hash", std::string("?"))
      << " seed " << header.value("seed", std::uint64_t{0}) << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument(
          "write_csv: row with " + std::to_string(row.size()) +
          " cells under " + std::to_string(columns.size()) + " columns");
    for (std::size_t c = 0; c < row.size(); ++c)
      out << row[c] << (c + 1 < row.size() ? ',' : '\n');
  }
  if (!out)
    throw std::runtime_error("write_csv: write to " + path.string() +
                             " failed");
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace glsurf::artifacts

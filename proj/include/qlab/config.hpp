#pragma once

// Flat key = value configuration. Lines are "key = value"; blank lines and
// lines starting with '#' are ignored. Later sources override earlier ones:
// config file, then QLAB_MASTER_SEED from the environment, then --set and
// per-scenario command-line flags.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlab::config {

using KeyValues = std::map<std::string, std::string>;

/// Throws ConfigError on a line without '=' or an empty key. Duplicate keys
/// are an error within one file.
KeyValues parse(std::string_view text);
KeyValues parse_file(const std::string& path);

/// "key=value" as given to --set.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

struct Param {
    std::string key;
    std::optional<std::string> default_value;  // nullopt: required
    std::string help;
};

/// Keys every scenario accepts.
const std::vector<Param>& common_params();

/// Validated view of one scenario's settings.
class Settings {
public:
    /// Fills defaults, rejects keys outside common_params() + params, and
    /// reports the first missing required key.
    Settings(const std::vector<Param>& params, const KeyValues& given);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& text(const std::string& key) const;
    std::uint64_t u64(const std::string& key) const;
    std::int64_t i64(const std::string& key) const;
    double real(const std::string& key) const;
    std::vector<std::uint64_t> u64_list(const std::string& key) const;

    /// Sorted "key = value" lines.
    std::string echo() const;

private:
    KeyValues values_;
};

/// Parses an unsigned integer in decimal, 0x-hex or scientific notation with
/// an integral value (1e5). Throws ConfigError naming `what`.
std::uint64_t to_u64(const std::string& text, const std::string& what);

}  // namespace qlab::config

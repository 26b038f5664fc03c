#include "qlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qlab/errors.hpp"

namespace qlab::config {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_real(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigError("'" + what + "' expects a number, got '" + text + "'");
    }
    return v;
}

}  // namespace

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(text) + "'");
    auto key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key in '" + std::string(text) + "'");
    return {std::move(key), trim(text.substr(eq + 1))};
}

KeyValues parse(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        try {
            auto [k, v] = parse_assignment(line);
            if (!out.emplace(k, v).second) throw ConfigError("duplicate key '" + k + "'");
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

KeyValues parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const std::vector<Param>& common_params() {
    static const std::vector<Param> params{
        {"master_seed", "1", "64-bit seed every trial seed is derived from"},
        {"workers", "1", "worker threads; output does not depend on it"},
    };
    return params;
}

Settings::Settings(const std::vector<Param>& params, const KeyValues& given) {
    std::vector<const Param*> all;
    for (const auto& p : common_params()) all.push_back(&p);
    for (const auto& p : params) all.push_back(&p);
    for (const auto& [k, v] : given) {
        const bool known = std::any_of(all.begin(), all.end(), [&](const Param* p) { return p->key == k; });
        if (!known) throw ConfigError("unknown key '" + k + "'");
    }
    for (const Param* p : all) {
        if (const auto it = given.find(p->key); it != given.end()) {
            values_[p->key] = it->second;
        } else if (p->default_value) {
            values_[p->key] = *p->default_value;
        } else {
            throw ConfigError("missing required field '" + p->key + "'");
        }
    }
}

const std::string& Settings::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw InternalError("setting '" + key + "' is not declared");
    return it->second;
}

std::uint64_t to_u64(const std::string& text, const std::string& what) {
    if (text.empty()) throw ConfigError("'" + what + "' is empty");
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) {
        std::uint64_t v = 0;
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data() + 2, end, v, 16);
        if (ec == std::errc{} && ptr == end && text.size() > 2) return v;
        throw ConfigError("'" + what + "' expects an unsigned integer, got '" + text + "'");
    }
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec == std::errc{} && ptr == end) return v;
    const double d = to_real(text, what);
    if (d < 0 || d != std::floor(d) || d >= 0x1p64) {
        throw ConfigError("'" + what + "' expects an unsigned integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(d);
}

std::uint64_t Settings::u64(const std::string& key) const { return to_u64(text(key), key); }

std::int64_t Settings::i64(const std::string& key) const {
    const auto& t = text(key);
    std::int64_t v = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + t + "'");
    }
    return v;
}

double Settings::real(const std::string& key) const { return to_real(text(key), key); }

std::vector<std::uint64_t> Settings::u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_u64(trim(item), key));
    if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated list");
    return out;
}

std::string Settings::echo() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        if (k != "workers") out += k + " = " + v + "\n";
    }
    return out;
}

}  // namespace qlab::config

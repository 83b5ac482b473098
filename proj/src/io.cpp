#include "chainspill/io.hpp"

#include "chainspill/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chainspill::io {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::Io, "short write to '" + path.string() + "'");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) noexcept {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        auto line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        start = pos + 1;
    }
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data());
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "NA";
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return std::string(buf.data());
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty() || text == "NA" || text == "nan" || text == "NaN") return std::nan("");
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(ErrorCode::InvalidArgument, "bad number '" + std::string(text) + "'");
    return v;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    fail(ErrorCode::SchemaMismatch, "missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text, std::string_view expected_header, std::string_view origin) {
    CsvTable table;
    const auto all = lines(text);
    std::size_t i = 0;
    while (i < all.size() && trim(all[i]).empty()) ++i;
    if (i == all.size()) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": empty file, expected header");
    if (all[i] != expected_header) {
        fail(ErrorCode::SchemaMismatch, std::string(origin) + ": header '" + std::string(all[i]) + "' != '" +
                                            std::string(expected_header) + "'");
    }
    for (auto h : split(all[i], ',')) table.header.emplace_back(h);
    for (++i; i < all.size(); ++i) {
        if (trim(all[i]).empty()) continue;
        auto fields = split(all[i], ',');
        if (fields.size() != table.header.size()) {
            fail(ErrorCode::SchemaMismatch, std::string(origin) + ": line " + std::to_string(i + 1) + " has " +
                                                std::to_string(fields.size()) + " fields");
        }
        std::vector<std::string> row;
        row.reserve(fields.size());
        for (auto f : fields) row.emplace_back(f);
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path, std::string_view expected_header) {
    return parse_csv(read_file(path), expected_header, path.string());
}

std::vector<std::string> parse_list(std::string_view value) {
    value = trim(value);
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    std::vector<std::string> out;
    if (trim(value).empty()) return out;
    for (auto item : split(value, ',')) {
        item = trim(item);
        if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
        if (!item.empty()) out.emplace_back(item);
    }
    return out;
}

Config Config::parse(std::string_view text) {
    Config cfg;
    std::string section;
    std::size_t n = 0;
    for (auto raw : lines(text)) {
        ++n;
        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCode::InvalidArgument, "config line " + std::to_string(n) + ": expected key = value");
        }
        auto key = std::string(trim(line.substr(0, eq)));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) fail(ErrorCode::InvalidArgument, "config line " + std::to_string(n) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        cfg.values_[full] = std::string(value);
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? parse_double(*v) : fallback;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    long long out = 0;
    const auto s = trim(*v);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail(ErrorCode::InvalidArgument, "config '" + key + "': expected integer, got '" + *v + "'");
    }
    return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    fail(ErrorCode::InvalidArgument, "config '" + key + "': expected boolean, got '" + *v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    const auto v = get(key);
    return v ? parse_list(*v) : std::vector<std::string>{};
}

std::map<std::string, std::string> Config::section(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    const std::string p = prefix + ".";
    for (auto it = values_.lower_bound(p); it != values_.end() && it->first.starts_with(p); ++it) {
        out.emplace(it->first.substr(p.size()), it->second);
    }
    return out;
}

}  // namespace chainspill::io

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chainspill::io {

/// Reads a whole file; throws Error{Io} if it cannot be opened.
[[nodiscard]] std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for a batch tool: truncate and write, LF endings.
void write_file(const std::filesystem::path& path, std::string_view contents);

[[nodiscard]] std::vector<std::string_view> split(std::string_view line, char sep);
[[nodiscard]] std::string_view trim(std::string_view s) noexcept;
[[nodiscard]] std::vector<std::string_view> lines(std::string_view text);

/// Shortest round-trip representation ("%.17g"); "NA" for NaN.
[[nodiscard]] std::string format_double(double v);
/// Fixed decimals for human-facing tables.
[[nodiscard]] std::string format_fixed(double v, int decimals);
[[nodiscard]] double parse_double(std::string_view text);  // "NA"/"" -> NaN

/// Minimal header-checked CSV table (no quoting; fields never contain commas).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// Parses CSV text and requires the header to equal `expected_header` exactly
/// (throws Error{SchemaMismatch} otherwise). `origin` labels error messages.
[[nodiscard]] CsvTable parse_csv(std::string_view text, std::string_view expected_header, std::string_view origin);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path, std::string_view expected_header);

/// Plain-text configuration: `[section]` headers, `key = value` lines, `#`
/// comments, list values written as `[a, b, c]`. Keys are flattened to
/// `section.key`; a dotted key outside any section (`exclusion.stablecoin = [...]`)
/// is equivalent to the same key inside its section.
class Config {
public:
    Config() = default;
    [[nodiscard]] static Config parse(std::string_view text);
    [[nodiscard]] static Config load(const std::filesystem::path& path);

    [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
    [[nodiscard]] std::string get_or(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] long long get_int(const std::string& key, long long fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<std::string> get_list(const std::string& key) const;
    /// All keys that start with `prefix` + '.', with the prefix stripped.
    [[nodiscard]] std::map<std::string, std::string> section(const std::string& prefix) const;

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

private:
    std::map<std::string, std::string> values_;
};

[[nodiscard]] std::vector<std::string> parse_list(std::string_view value);

}  // namespace chainspill::io

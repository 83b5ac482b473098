#include "chainspill/error.hpp"
#include "chainspill/ingest.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <thread>

namespace chainspill::ingest {

namespace {

class FixtureSource final : public SourceClient {
public:
    explicit FixtureSource(std::filesystem::path path) : path_(std::move(path)) {}

    std::optional<std::string> request(std::size_t page) override {
        if (page > 0) return std::nullopt;
        if (!std::filesystem::exists(path_)) {
            fail(ErrorCode::SourceUnavailable, "fixture '" + path_.string() + "' not found");
        }
        return io::read_file(path_);
    }

private:
    std::filesystem::path path_;
};

class HttpSource final : public SourceClient {
public:
    explicit HttpSource(const SourceDescriptor& source) : source_(source) {
        const std::string& uri = source.uri;
        const auto scheme_end = uri.find("://");
        if (scheme_end == std::string::npos) fail(ErrorCode::InvalidArgument, "bad endpoint uri '" + uri + "'");
        const auto path_start = uri.find('/', scheme_end + 3);
        origin_ = uri.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : uri.substr(path_start);
    }

    std::optional<std::string> request(std::size_t page) override {
        throttle();
        httplib::Client client(origin_);
        client.set_connection_timeout(std::chrono::seconds{3});
        client.set_read_timeout(std::chrono::seconds{10});
        httplib::Headers headers;
        if (source_.credentials) headers.emplace("x-api-key", *source_.credentials);
        const char sep = path_.find('?') == std::string::npos ? '?' : '&';
        auto res = client.Get(path_ + sep + "page=" + std::to_string(page), headers);
        if (!res) {
            fail(ErrorCode::SourceUnavailable,
                 source_.uri + ": " + httplib::to_string(res.error()));
        }
        if (res->status == 404 || res->status == 204) {
            if (page == 0) fail(ErrorCode::SourceUnavailable, source_.uri + ": HTTP " + std::to_string(res->status));
            return std::nullopt;
        }
        if (res->status != 200) {
            fail(ErrorCode::SourceUnavailable, source_.uri + ": HTTP " + std::to_string(res->status));
        }
        if (io::trim(res->body).empty()) return std::nullopt;
        return res->body;
    }

private:
    void throttle() {
        if (source_.rate_limit <= 0.0) return;
        const auto gap = std::chrono::duration<double>(1.0 / source_.rate_limit);
        const auto now = std::chrono::steady_clock::now();
        if (last_ && now - *last_ < gap) std::this_thread::sleep_for(gap - (now - *last_));
        last_ = std::chrono::steady_clock::now();
    }

    SourceDescriptor source_;
    std::string origin_;
    std::string path_;
    std::optional<std::chrono::steady_clock::time_point> last_;
};

std::string require_string(const nlohmann::json& obj, const char* field, std::string_view origin, std::size_t line) {
    const auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) {
        fail(ErrorCode::SchemaMismatch, std::string(origin) + ": record " + std::to_string(line) + " lacks string field '" +
                                            field + "'");
    }
    return it->get<std::string>();
}

AssetRecord decode_asset(const nlohmann::json& obj, std::string_view origin, std::size_t line) {
    if (!obj.is_object()) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": record " + std::to_string(line));
    AssetRecord r;
    r.asset_id = require_string(obj, "asset_id", origin, line);
    const auto chain_name = require_string(obj, "chain", origin, line);
    const auto chain = parse_chain(chain_name);
    if (!chain) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": unknown chain '" + chain_name + "'");
    r.chain = *chain;
    r.address = require_string(obj, "address", origin, line);
    r.symbol = require_string(obj, "symbol", origin, line);
    r.logical_id = require_string(obj, "logical_id", origin, line);
    if (const auto it = obj.find("cex_listing_date"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": bad cex_listing_date");
        r.cex_listing_date = parse_date(it->get<std::string>());
    }
    const auto tags = obj.find("tags");
    if (tags == obj.end() || !tags->is_array()) {
        fail(ErrorCode::SchemaMismatch, std::string(origin) + ": record " + std::to_string(line) + " lacks 'tags'");
    }
    for (const auto& t : *tags) {
        if (!t.is_string()) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": non-string tag");
        r.tags.push_back(t.get<std::string>());
        if (r.exclusion == ExclusionClass::None) {
            if (auto cls = parse_exclusion(r.tags.back()); cls) r.exclusion = *cls;
        }
    }
    // Canonical stores carry the derived fields; raw feeds do not.
    if (const auto it = obj.find("exclusion"); it != obj.end() && it->is_string()) {
        if (auto cls = parse_exclusion(it->get<std::string>()); cls) r.exclusion = *cls;
    }
    if (const auto it = obj.find("multi_chain"); it != obj.end() && it->is_boolean()) r.multi_chain = it->get<bool>();
    return r;
}

}  // namespace

SourceDescriptor SourceDescriptor::with_env_credentials() const {
    SourceDescriptor out = *this;
    if (out.credentials || out.name.empty()) return out;
    std::string var = "CHAINSPILL_API_KEY_";
    for (char c : name) var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* key = std::getenv(var.c_str()); key != nullptr && *key != '\0') out.credentials = key;
    return out;
}

std::unique_ptr<SourceClient> open_source(const SourceDescriptor& source) {
    switch (source.kind) {
        case SourceKind::FixtureFile: return std::make_unique<FixtureSource>(source.uri);
        case SourceKind::HttpEndpoint: return std::make_unique<HttpSource>(source.with_env_credentials());
    }
    fail(ErrorCode::InvalidArgument, "unknown source kind");
}

std::vector<AssetRecord> parse_assets(std::string_view payload, std::string_view origin) {
    std::vector<AssetRecord> out;
    const auto trimmed = io::trim(payload);
    if (trimmed.empty()) return out;
    try {
        if (trimmed.front() == '[') {
            const auto arr = nlohmann::json::parse(trimmed);
            for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(decode_asset(arr[i], origin, i + 1));
            return out;
        }
        std::size_t n = 0;
        for (auto line : io::lines(payload)) {
            ++n;
            if (io::trim(line).empty()) continue;
            out.push_back(decode_asset(nlohmann::json::parse(line), origin, n));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::SchemaMismatch, std::string(origin) + ": " + e.what());
    }
    return out;
}

std::string format_assets_jsonl(std::span<const AssetRecord> records) {
    std::string out;
    for (const auto& r : records) {
        nlohmann::json obj;
        obj["asset_id"] = r.asset_id;
        obj["chain"] = std::string(to_string(r.chain));
        obj["address"] = r.address;
        obj["symbol"] = r.symbol;
        obj["logical_id"] = r.logical_id;
        obj["tags"] = r.tags;
        if (r.cex_listing_date) obj["cex_listing_date"] = format_date(*r.cex_listing_date);
        obj["exclusion"] = std::string(to_string(r.exclusion));
        obj["multi_chain"] = r.multi_chain;
        out += obj.dump() + "\n";
    }
    return out;
}

std::vector<AssetRecord> fetch_universe_all(const SourceDescriptor& source) {
    auto client = open_source(source);
    std::vector<AssetRecord> records;
    for (std::size_t page = 0;; ++page) {
        auto payload = client->request(page);
        if (!payload) break;
        auto batch = parse_assets(*payload, source.uri);
        records.insert(records.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
    }
    mark_multi_chain(records);
    return records;
}

std::vector<AssetRecord> fetch_universe(const SourceDescriptor& source, Chain chain) {
    auto all = fetch_universe_all(source);
    std::vector<AssetRecord> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [chain](const AssetRecord& r) { return r.chain == chain; });
    return out;
}

}  // namespace chainspill::ingest

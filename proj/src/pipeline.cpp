#include "chainspill/pipeline.hpp"

#include "chainspill/covariates.hpp"
#include "chainspill/econometrics/diagnostics.hpp"
#include "chainspill/error.hpp"
#include "chainspill/ingest.hpp"
#include "chainspill/kernels.hpp"
#include "chainspill/portfolio.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

namespace chainspill::pipeline {

namespace fs = std::filesystem;

namespace {

HalfDayId parse_endpoint(std::string_view text, Half whole_day) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return {parse_date(text), whole_day};
    return {parse_date(text.substr(0, slash)), parse_half(text.substr(slash + 1))};
}

void log(const std::string& msg) { std::cerr << "chainspill: " << msg << '\n'; }

ingest::SeriesStore load_store(const fs::path& path) {
    return ingest::parse_series_csv(io::read_file(path), path.string());
}

std::map<std::string, Series> store_to_grid(const ingest::SeriesStore& store, const HalfDayRange& grid) {
    std::map<std::string, Series> out;
    for (const auto& [id, points] : store) out.emplace(id, ingest::to_half_day_series(id, points).reindex(grid));
    return out;
}

ingest::SeriesStore grid_to_store(const std::map<std::string, Series>& series) {
    ingest::SeriesStore store;
    for (const auto& [id, s] : series) {
        auto& points = store[id];
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (is_missing(s.value(i))) continue;
            points.push_back({s.coverage()[i].date, s.coverage()[i].half, s.value(i)});
        }
    }
    return store;
}

ingest::SourceDescriptor asset_source(const Options& opts) {
    ingest::SourceDescriptor src;
    src.name = opts.config.get_or("sources.assets_name", "ASSETS");
    const std::string uri = opts.config.get_or("sources.assets", "raw/assets.jsonl");
    if (uri.rfind("http://", 0) == 0 || uri.rfind("https://", 0) == 0) {
        src.kind = ingest::SourceKind::HttpEndpoint;
        src.uri = uri;
    } else {
        src.kind = ingest::SourceKind::FixtureFile;
        const fs::path p(uri);
        src.uri = (p.is_absolute() ? p : opts.layout.root / p).string();
    }
    src.rate_limit = opts.config.get_double("sources.rate_limit", 0.0);
    return src.with_env_credentials();
}

}  // namespace

HalfDayRange parse_window(std::string_view text) {
    const auto sep = text.find("..");
    if (sep == std::string_view::npos) fail(ErrorCode::InvalidArgument, "window must look like start..end");
    const HalfDayId a = parse_endpoint(io::trim(text.substr(0, sep)), Half::H1);
    const HalfDayId b = parse_endpoint(io::trim(text.substr(sep + 2)), Half::H2);
    if (b < a) fail(ErrorCode::InvalidArgument, "window end precedes its start");
    return HalfDayRange::between(a, b);
}

HalfDayRange resolve_grid(const Options& opts) {
    const auto start = opts.config.get("grid.start");
    const auto end = opts.config.get("grid.end");
    if (start && end) {
        return HalfDayRange::between(parse_endpoint(*start, Half::H1), parse_endpoint(*end, Half::H2));
    }
    const fs::path prices = opts.layout.canonical() / "prices.csv";
    if (!fs::exists(prices)) fail(ErrorCode::InvalidArgument, "no [grid] in config and no canonical prices to infer it");
    std::optional<HalfDayId> lo, hi;
    for (const auto& [id, points] : load_store(prices)) {
        for (const auto& p : points) {
            const HalfDayId t{p.date, p.half.value_or(Half::H1)};
            if (!lo || t < *lo) lo = t;
            if (!hi || *hi < t) hi = t;
        }
    }
    if (!lo) fail(ErrorCode::NoTrades, "canonical prices are empty");
    return HalfDayRange::between(*lo, *hi);
}

StudyConfig study_config(const Options& opts, const HalfDayRange& grid) {
    const io::Config& c = opts.config;
    StudyConfig s;
    if (opts.window) {
        s.window = *opts.window;
    } else if (const auto w = c.get("study.window")) {
        s.window = parse_window(*w);
    } else {
        s.window = grid;
    }
    if (!opts.variants.empty()) {
        s.variants = opts.variants;
    } else if (c.has("study.variants")) {
        s.variants.clear();
        for (const auto& name : c.get_list("study.variants")) {
            const auto v = parse_variant(name);
            if (!v) fail(ErrorCode::InvalidArgument, "unknown variant '" + name + "'");
            s.variants.push_back(*v);
        }
    }
    s.tail = opts.tail.value_or(c.get_double("study.tail", s.tail));
    s.jobs = opts.jobs > 0 ? opts.jobs : static_cast<int>(c.get_int("study.jobs", kernels::default_jobs()));
    auto& b = s.bounds;
    b.p_min = static_cast<int>(c.get_int("garch.p_min", b.p_min));
    b.p_max = static_cast<int>(c.get_int("garch.p_max", b.p_max));
    b.o_min = static_cast<int>(c.get_int("garch.o_min", b.o_min));
    b.o_max = static_cast<int>(c.get_int("garch.o_max", b.o_max));
    b.q_min = static_cast<int>(c.get_int("garch.q_min", b.q_min));
    b.q_max = static_cast<int>(c.get_int("garch.q_max", b.q_max));
    s.garch.restarts = static_cast<int>(c.get_int("garch.restarts", s.garch.restarts));
    s.garch.seed = opts.seed.value_or(static_cast<std::uint64_t>(c.get_int("garch.seed", 0)));
    s.garch.robust = c.get_bool("garch.robust", false);
    s.garch.two_step = c.get_bool("garch.two_step", false);
    return s;
}

void run_ingest(const Options& opts) {
    const Layout& L = opts.layout;
    const bool strict = opts.strict || opts.config.get_bool("ingest.strict", false);

    std::vector<AssetRecord> assets = ingest::fetch_universe_all(asset_source(opts));
    const std::size_t overridden = apply_exclusion_overrides(assets, opts.config);
    std::sort(assets.begin(), assets.end(), [](const auto& a, const auto& b) { return a.asset_id < b.asset_id; });
    log("ingest: " + std::to_string(assets.size()) + " assets (" + std::to_string(overridden) + " exclusion overrides)");

    // Trades: decoded swaps.csv and/or raw event logs with pool metadata.
    std::vector<ingest::SwapTrade> trades;
    std::map<std::string, std::string> pool_asset;
    if (fs::exists(L.raw() / "swaps.csv")) {
        trades = ingest::parse_swaps_csv(io::read_file(L.raw() / "swaps.csv"), (L.raw() / "swaps.csv").string());
    }
    if (fs::exists(L.raw() / "swap_events.log")) {
        const auto records = ingest::read_swap_event_log(L.raw() / "swap_events.log");
        const auto pools = ingest::read_pools_csv(L.raw() / "pools.csv");
        const auto policy = strict ? ingest::DecodePolicy::Strict : ingest::DecodePolicy::Lenient;
        for (const auto& pool : pools) {
            pool_asset[pool.pool_id] = pool.asset_id;
            auto decoded = ingest::decode_swap_events(records, pool, policy);
            for (const auto& issue : decoded.issues) {
                log("ingest: pool " + pool.pool_id + " record " + std::to_string(issue.record_index) + ": " + issue.reason);
            }
            trades.insert(trades.end(), decoded.trades.begin(), decoded.trades.end());
        }
    }
    for (const auto& [key, value] : opts.config.section("pools")) pool_asset[key] = value;

    std::map<std::string, std::vector<ingest::SwapTrade>> by_asset;
    for (auto& t : trades) {
        const auto it = pool_asset.find(t.pool_id);
        by_asset[it == pool_asset.end() ? t.pool_id : it->second].push_back(std::move(t));
    }
    for (auto& [id, ts] : by_asset) {
        std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return a.ts < b.ts; });
    }

    Options grid_opts = opts;
    HalfDayRange grid;
    if (opts.config.has("grid.start") && opts.config.has("grid.end")) {
        grid = resolve_grid(grid_opts);
    } else {
        std::optional<HalfDayId> lo, hi;
        for (const auto& [id, ts] : by_asset) {
            for (const auto& t : ts) {
                const HalfDayId h = half_day_index(t.ts);
                if (!lo || h < *lo) lo = h;
                if (!hi || *hi < h) hi = h;
            }
        }
        if (!lo) fail(ErrorCode::NoTrades, "no swap trades found under " + L.raw().string());
        grid = HalfDayRange::between(*lo, *hi);
    }

    const auto staleness = opts.config.get_int("ingest.staleness_limit", ingest::kDefaultStalenessLimit);
    std::map<std::string, Series> prices;
    for (const auto& a : assets) {
        if (a.exclusion != ExclusionClass::None) continue;
        const auto it = by_asset.find(a.asset_id);
        if (it == by_asset.end()) {
            if (strict) fail(ErrorCode::NoTrades, "asset " + a.asset_id + " has no trades");
            log("ingest: asset " + a.asset_id + " has no trades; skipped");
            continue;
        }
        try {
            prices.emplace(a.asset_id, ingest::reconstruct_price_series(it->second, grid, staleness, a.asset_id));
        } catch (const Error& e) {
            if (strict || e.code() != ErrorCode::NoTrades) throw;
            log(std::string("ingest: ") + e.what());
        }
    }

    std::map<std::string, Series> caps;
    if (fs::exists(L.raw() / "caps.csv")) {
        std::map<std::string, std::vector<ingest::RawCapObservation>> obs;
        for (auto& o : ingest::parse_caps_csv(io::read_file(L.raw() / "caps.csv"), (L.raw() / "caps.csv").string())) {
            obs[o.asset_id].push_back(std::move(o));
        }
        for (const auto& [id, list] : obs) caps.emplace(id, ingest::merge_market_cap(list));
    }

    const ingest::SeriesStore series =
        fs::exists(L.raw() / "series.csv") ? load_store(L.raw() / "series.csv") : ingest::SeriesStore{};

    io::write_file(L.canonical() / "assets.jsonl", ingest::format_assets_jsonl(assets));
    io::write_file(L.canonical() / "prices.csv", ingest::format_series_csv(grid_to_store(prices)));
    io::write_file(L.canonical() / "caps.csv", ingest::format_series_csv(grid_to_store(caps)));
    io::write_file(L.canonical() / "series.csv", ingest::format_series_csv(series));
    log("ingest: " + std::to_string(prices.size()) + " price series over " + std::to_string(grid.size()) +
        " half-days");
}

void run_build(const Options& opts) {
    const Layout& L = opts.layout;
    const HalfDayRange grid = resolve_grid(opts);
    const auto assets = ingest::parse_assets(io::read_file(L.canonical() / "assets.jsonl"), "canonical/assets.jsonl");
    const auto prices = store_to_grid(load_store(L.canonical() / "prices.csv"), grid);
    const auto caps = store_to_grid(load_store(L.canonical() / "caps.csv"), grid);
    const auto series = load_store(L.canonical() / "series.csv");

    ClassifyOptions copts;
    if (const auto f = opts.config.get("universe.freeze_cex_at")) copts.freeze_cex_at = parse_endpoint(*f, Half::H1);
    const auto memberships = membership_timeline(assets, grid, copts);
    PanelSet panels;
    for (Chain c : kAllChains) panels.emplace(c, build_chain_panel(c, memberships, prices, caps, grid));

    CovariateOptions cov_opts;
    cov_opts.jobs = opts.jobs > 0 ? opts.jobs : kernels::default_jobs();
    cov_opts.bounds.p_max = static_cast<int>(opts.config.get_int("covariates.p_max", cov_opts.bounds.p_max));
    cov_opts.bounds.d_max = static_cast<int>(opts.config.get_int("covariates.d_max", cov_opts.bounds.d_max));
    cov_opts.bounds.q_max = static_cast<int>(opts.config.get_int("covariates.q_max", cov_opts.bounds.q_max));
    const Covariates cov = build_covariates(series, grid, cov_opts);

    io::write_file(L.build() / "panel.csv", format_panel_csv(panels));
    io::write_file(L.build() / "covariates.csv", format_covariates_csv(cov));
    io::write_file(L.build() / "arima_report.csv", format_arima_report(cov.arima));
    log("build: panels for " + std::to_string(panels.size()) + " chains, " + std::to_string(cov.series.size()) +
        " covariates");
}

namespace {

std::string describe_row(const std::string& name, const std::vector<double>& x, const std::string& arima,
                         const std::string& aic) {
    const econ::Moments m = econ::describe(x);
    std::string jb = "NA", adf = "NA";
    try {
        const auto j = econ::jarque_bera(x);
        jb = econ::format_with_stars(j.statistic, 4, j.level);
    } catch (const Error&) {
    }
    try {
        const auto a = econ::adf_test(x);
        adf = econ::format_with_stars(a.statistic, 4, a.level);
    } catch (const Error&) {
    }
    return name + ',' + io::format_fixed(m.mean, 6) + ',' + io::format_fixed(m.std, 6) + ',' +
           io::format_fixed(m.skewness, 4) + ',' + io::format_fixed(m.excess_kurtosis, 4) + ',' + jb + ',' + adf + ',' +
           arima + ',' + aic + '\n';
}

}  // namespace

void run_describe(const Options& opts) {
    const Layout& L = opts.layout;
    const PanelSet panels = parse_panel_csv(io::read_file(L.build() / "panel.csv"), "build/panel.csv");
    const auto cov = parse_covariates_csv(io::read_file(L.build() / "covariates.csv"), "build/covariates.csv");
    std::map<std::string, std::pair<std::string, std::string>> arima;
    const auto report =
        io::parse_csv(io::read_file(L.build() / "arima_report.csv"), "series_id,p,d,q,aic", "build/arima_report.csv");
    for (const auto& row : report.rows) arima[row[0]] = {"(" + row[1] + ";" + row[2] + ";" + row[3] + ")", row[4]};

    std::ostringstream os;
    os << kDescribeHeader << '\n';
    const auto emit = [&](const std::string& name, const Series& s, const std::string& order, const std::string& aic) {
        const auto x = s.present_values();
        if (x.size() < 2) return;
        os << describe_row(name, x, order, aic);
    };
    for (PortfolioKind kind : kAllKinds) {
        for (const auto& [chain, panel] : panels) emit(panel.get(kind).id(), panel.get(kind), "", "");
    }
    for (const auto& sym : kNativeSymbols) {
        if (const auto it = cov.find(native_return_id(sym)); it != cov.end()) emit(it->first, it->second, "", "");
    }
    for (EquityMarket m : {EquityMarket::SP500, EquityMarket::HangSeng, EquityMarket::FTSE100}) {
        if (const auto it = cov.find(equity_return_id(m)); it != cov.end()) emit(it->first, it->second, "", "");
    }
    // Activity and rate rows describe the levels, with the ARIMA order used for their innovations.
    const HalfDayRange grid = resolve_grid(opts);
    const auto store = load_store(L.canonical() / "series.csv");
    const auto level_row = [&](const std::string& name, const std::string& source) {
        const auto it = store.find(source);
        if (it == store.end()) return;
        const Series level = half_day_rate_series(ingest::to_daily(source, it->second), grid, name);
        const auto a = arima.find(name);
        emit(name, level, a == arima.end() ? "" : a->second.first, a == arima.end() ? "" : a->second.second);
    };
    for (Chain c : kAllChains) level_row(activity_id(c), "staking." + std::string(to_string(c)));
    for (const auto& name : kRateNames) level_row(name, "rate." + name);
    io::write_file(L.build() / "describe.csv", os.str());
    log("describe: wrote build/describe.csv");
}

void check_fresh(const Layout& L) {
    const std::vector<fs::path> inputs{L.canonical() / "assets.jsonl", L.canonical() / "prices.csv",
                                       L.canonical() / "caps.csv", L.canonical() / "series.csv"};
    const std::vector<fs::path> outputs{L.build() / "panel.csv", L.build() / "covariates.csv"};
    std::optional<fs::file_time_type> newest_input;
    for (const auto& p : inputs) {
        if (!fs::exists(p)) continue;
        const auto t = fs::last_write_time(p);
        if (!newest_input || *newest_input < t) newest_input = t;
    }
    for (const auto& p : outputs) {
        if (!fs::exists(p)) fail(ErrorCode::StaleArtifacts, p.string() + " is missing; run `chainspill build`");
        if (newest_input && fs::last_write_time(p) < *newest_input) {
            fail(ErrorCode::StaleArtifacts, p.string() + " is older than its inputs; run `chainspill build`");
        }
    }
}

StudyReport run_estimate(const Options& opts) {
    const Layout& L = opts.layout;
    check_fresh(L);
    const PanelSet panels = parse_panel_csv(io::read_file(L.build() / "panel.csv"), "build/panel.csv");
    Covariates cov;
    cov.series = parse_covariates_csv(io::read_file(L.build() / "covariates.csv"), "build/covariates.csv");
    const HalfDayRange grid = resolve_grid(opts);
    const StudyConfig cfg = study_config(opts, grid);
    StudyReport report = run_study(panels, cov, cfg);
    io::write_file(L.report() / "report.csv", format_report_csv(report));
    io::write_file(L.report() / "report.md", format_report_md(report));
    log("estimate: " + std::to_string(report.cells.size() - report.failures()) + "/" +
        std::to_string(report.cells.size()) + " cells fitted");
    for (const auto& c : report.cells) {
        if (!c.fit) {
            log("estimate: " + std::string(to_string(c.variant)) + " " + std::string(to_string(c.chain)) + " " +
                std::string(to_string(c.kind)) + ": " + c.error);
        }
    }
    return report;
}

void run_report(const Options& opts) {
    const Layout& L = opts.layout;
    const StudyReport report = parse_report_csv(io::read_file(L.report() / "report.csv"), "report/report.csv");
    io::write_file(L.report() / "report.md", format_report_md(report));
    log("report: wrote report/report.md");
}

synth::SynthData run_synth(const Options& opts) {
    synth::DgpConfig cfg = synth::config_from(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    synth::SynthData data = synth::generate_panel(cfg);
    synth::write_dataset(data, opts.layout.root);
    log("synth: " + std::to_string(cfg.T) + " half-days, seed " + std::to_string(cfg.seed) + " -> " +
        opts.layout.root.string());
    return data;
}

}  // namespace chainspill::pipeline

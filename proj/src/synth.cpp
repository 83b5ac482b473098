#include "chainspill/synth.hpp"

#include "chainspill/error.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace chainspill::synth {

namespace {

constexpr std::size_t kChains = 5;

std::size_t idx(Chain c) { return static_cast<std::size_t>(c); }

econ::GjrParams default_gjr() {
    econ::GjrParams g;
    g.omega = 2e-5;
    g.alpha = {0.05};
    g.gamma = {0.05};
    g.beta = {0.85};
    return g;
}

std::vector<double> doubles(const io::Config& cfg, const std::string& key, std::vector<double> fallback) {
    if (!cfg.has(key)) return fallback;
    std::vector<double> out;
    for (const auto& s : cfg.get_list(key)) out.push_back(io::parse_double(s));
    return out;
}

Chain require_chain(const std::string& name) {
    const auto c = parse_chain(name);
    if (!c) fail(ErrorCode::InvalidArgument, "unknown chain '" + name + "'");
    return *c;
}

void read_matrix(const io::Config& cfg, const std::string& prefix, ChainMatrix& m) {
    for (const auto& [key, value] : cfg.section(prefix)) {
        const auto dot = key.find('.');
        if (dot == std::string::npos) fail(ErrorCode::InvalidArgument, prefix + "." + key + ": expected Target.Source");
        const Chain target = require_chain(key.substr(0, dot));
        const Chain source = require_chain(key.substr(dot + 1));
        m[idx(target)][idx(source)] = io::parse_double(value);
    }
}

Eigen::MatrixXd to_eigen(const ChainMatrix& m) {
    Eigen::MatrixXd out(kChains, kChains);
    for (std::size_t i = 0; i < kChains; ++i) {
        for (std::size_t j = 0; j < kChains; ++j) out(i, j) = m[i][j];
    }
    return out;
}

}  // namespace

DgpConfig default_config() {
    DgpConfig c;
    c.garch.fill(default_gjr());
    return c;
}

DgpConfig config_from(const io::Config& cfg, DgpConfig base) {
    DgpConfig c = std::move(base);
    c.n_chains = static_cast<int>(cfg.get_int("synth.n_chains", c.n_chains));
    c.T = static_cast<std::size_t>(cfg.get_int("synth.T", static_cast<long long>(c.T)));
    if (const auto s = cfg.get("synth.start")) c.start = parse_date(*s);
    c.seed = static_cast<std::uint64_t>(cfg.get_int("synth.seed", static_cast<long long>(c.seed)));
    c.own_lag = cfg.get_double("synth.own_lag", c.own_lag);
    c.cex_loading = cfg.get_double("synth.cex_loading", c.cex_loading);
    c.cex_sd = cfg.get_double("synth.cex_sd", c.cex_sd);
    c.idio_sd = cfg.get_double("synth.idio_sd", c.idio_sd);

    auto& a = c.activity;
    a.staking_mean = cfg.get_double("synth.activity.staking_mean", a.staking_mean);
    a.staking_phi = cfg.get_double("synth.activity.staking_phi", a.staking_phi);
    a.staking_sd = cfg.get_double("synth.activity.staking_sd", a.staking_sd);
    a.rate_mean = cfg.get_double("synth.activity.rate_mean", a.rate_mean);
    a.rate_phi = cfg.get_double("synth.activity.rate_phi", a.rate_phi);
    a.rate_sd = cfg.get_double("synth.activity.rate_sd", a.rate_sd);
    a.native_sd = cfg.get_double("synth.activity.native_sd", a.native_sd);
    a.equity_sd = cfg.get_double("synth.activity.equity_sd", a.equity_sd);

    for (std::size_t i = 0; i < kChains; ++i) {
        const std::string chain(to_string(kAllChains[i]));
        for (const std::string& prefix : {std::string("synth.garch"), "synth.garch." + chain}) {
            auto& g = c.garch[i];
            g.omega = cfg.get_double(prefix + ".omega", g.omega);
            g.alpha = doubles(cfg, prefix + ".alpha", g.alpha);
            g.gamma = doubles(cfg, prefix + ".gamma", g.gamma);
            g.beta = doubles(cfg, prefix + ".beta", g.beta);
        }
    }
    read_matrix(cfg, "synth.spillover", c.spillover);
    read_matrix(cfg, "synth.dummy_effect", c.dummy_effect);

    // Chain@YYYY-MM-DD/H1:magnitude
    for (const auto& item : cfg.get_list("synth.events")) {
        const auto at = item.find('@');
        const auto colon = item.rfind(':');
        const auto slash = item.find('/');
        if (at == std::string::npos || colon == std::string::npos || slash == std::string::npos || colon < slash) {
            fail(ErrorCode::InvalidArgument, "event '" + item + "': expected Chain@YYYY-MM-DD/H1:magnitude");
        }
        ExtremeEvent e;
        e.chain = require_chain(item.substr(0, at));
        e.at = HalfDayId{parse_date(item.substr(at + 1, slash - at - 1)), parse_half(item.substr(slash + 1, colon - slash - 1))};
        e.magnitude = io::parse_double(item.substr(colon + 1));
        c.events.push_back(e);
    }
    return c;
}

double spectral_radius(const DgpConfig& cfg) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(kChains, kChains);
    double radius = 0.0;
    for (const Eigen::MatrixXd& B : {to_eigen(cfg.spillover), Eigen::MatrixXd(to_eigen(cfg.spillover) + to_eigen(cfg.dummy_effect))}) {
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(I - B);
        if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
        const Eigen::MatrixXd companion = cfg.own_lag * lu.inverse();
        const Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
        radius = std::max(radius, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return radius;
}

void validate(const DgpConfig& cfg) {
    if (cfg.n_chains != static_cast<int>(kChains)) {
        fail(ErrorCode::InvalidArgument, "the generator covers exactly five chains");
    }
    if (cfg.T < 10) fail(ErrorCode::InvalidArgument, "T must be at least 10 half-days");
    for (std::size_t i = 0; i < kChains; ++i) {
        if (cfg.spillover[i][i] != 0.0 || cfg.dummy_effect[i][i] != 0.0) {
            fail(ErrorCode::InvalidArgument, "spillover diagonal must be zero (own dynamics use own_lag)");
        }
        const auto& g = cfg.garch[i];
        const std::string chain(to_string(kAllChains[i]));
        if (!(g.omega > 0.0)) fail(ErrorCode::UnstableConfig, chain + ": omega must be positive");
        for (double a : g.alpha) {
            if (a < 0.0) fail(ErrorCode::UnstableConfig, chain + ": negative alpha");
        }
        for (double b : g.beta) {
            if (b < 0.0) fail(ErrorCode::UnstableConfig, chain + ": negative beta");
        }
        for (std::size_t j = 0; j < g.gamma.size(); ++j) {
            if (g.gamma[j] + (j < g.alpha.size() ? g.alpha[j] : 0.0) < 0.0) {
                fail(ErrorCode::UnstableConfig, chain + ": alpha + gamma must be non-negative");
            }
        }
        if (!(g.persistence() < 1.0)) fail(ErrorCode::UnstableConfig, chain + ": GJR persistence >= 1");
    }
    const double rho = spectral_radius(cfg);
    if (!(rho < 1.0)) fail(ErrorCode::UnstableConfig, "spectral radius " + std::to_string(rho) + " >= 1");
    if (std::abs(cfg.activity.staking_phi) >= 1.0 || std::abs(cfg.activity.rate_phi) >= 1.0) {
        fail(ErrorCode::UnstableConfig, "activity AR(1) coefficients must lie inside (-1, 1)");
    }
}

namespace {

// Recursion state of one GJR process.
class GjrState {
public:
    explicit GjrState(const econ::GjrParams& g) : g_(g), uncond_(g.unconditional_variance()) {}

    double step(std::normal_distribution<double>& normal, std::mt19937_64& rng, double* s2_out = nullptr) {
        const std::size_t n = e_.size();
        double s = g_.omega;
        for (std::size_t i = 1; i <= g_.alpha.size(); ++i) s += g_.alpha[i - 1] * (n >= i ? e_[n - i] * e_[n - i] : uncond_);
        for (std::size_t j = 1; j <= g_.gamma.size(); ++j) {
            const double v = n >= j ? (e_[n - j] < 0.0 ? e_[n - j] * e_[n - j] : 0.0) : 0.5 * uncond_;
            s += g_.gamma[j - 1] * v;
        }
        for (std::size_t k = 1; k <= g_.beta.size(); ++k) s += g_.beta[k - 1] * (n >= k ? s2_[n - k] : uncond_);
        const double e = std::sqrt(s) * normal(rng);
        e_.push_back(e);
        s2_.push_back(s);
        if (s2_out) *s2_out = s;
        return e;
    }

private:
    const econ::GjrParams& g_;
    double uncond_;
    std::vector<double> e_;
    std::vector<double> s2_;
};

struct AssetState {
    AssetRecord record;
    double price = 1.0;
    double cap = 1.0;
    double cap_anchor = 1.0;
};

std::vector<AssetState> make_assets(const DgpConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Date listed_early = cfg.start - std::chrono::days(30);
    const Date listed_mid = cfg.start + std::chrono::days(static_cast<int>(cfg.T / 4));
    std::vector<AssetRecord> recs;
    int serial = 0;
    const auto add = [&](Chain chain, const std::string& suffix, std::optional<Date> listing, std::string logical,
                         std::vector<std::string> tags) {
        AssetRecord r;
        r.chain = chain;
        r.asset_id = std::string(to_string(chain)) + "-" + suffix;
        r.logical_id = logical.empty() ? r.asset_id : std::move(logical);
        char addr[43];
        std::snprintf(addr, sizeof addr, "0x%040x", ++serial);
        r.address = addr;
        r.symbol = suffix;
        r.cex_listing_date = listing;
        r.tags = std::move(tags);
        if (!r.tags.empty()) r.exclusion = parse_exclusion(r.tags.front()).value_or(ExclusionClass::None);
        recs.push_back(std::move(r));
    };
    for (Chain c : kAllChains) {
        add(c, "C1", listed_early, "", {});
        add(c, "C2", listed_early, "", {});
        add(c, "N1", std::nullopt, "", {});
        add(c, "N2", std::nullopt, "", {});
        add(c, "N3", std::nullopt, "", {});
    }
    // Listed on a centralised exchange a quarter of the way through the sample.
    add(Chain::Ethereum, "L1", listed_mid, "", {});
    // One logical asset bridged to two chains: kept out of the Local portfolios.
    add(Chain::Ethereum, "BR", std::nullopt, "bridged-BR", {});
    add(Chain::Arbitrum, "BR", std::nullopt, "bridged-BR", {});
    // Excluded from every portfolio.
    add(Chain::Ethereum, "USD", listed_early, "", {"stablecoin"});
    mark_multi_chain(recs);
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.asset_id < b.asset_id; });

    std::vector<AssetState> out;
    for (auto& r : recs) {
        AssetState s;
        s.price = r.exclusion == ExclusionClass::Stablecoin ? 1e-3 : std::exp(-3.0 + 4.0 * unif(rng));
        // Comparable caps keep the CEX share away from 0 and 1, so the implied nonCEX return stays tame.
        s.cap = std::exp(std::log(1e6) + 0.5 * unif(rng));
        s.cap_anchor = s.cap;
        s.record = std::move(r);
        out.push_back(std::move(s));
    }
    return out;
}

bool is_weekday(Date d) { return !is_weekend(d); }

}  // namespace

SynthData generate_panel(const DgpConfig& cfg) {
    validate(cfg);
    SynthData out;
    out.config = cfg;
    out.grid = HalfDayRange(HalfDayId{cfg.start, Half::H1}, cfg.T);
    const HalfDayRange& grid = out.grid;
    const std::size_t T = cfg.T;
    const std::size_t n_days = (T + 1) / 2;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<AssetState> assets = make_assets(cfg, rng);
    for (const auto& a : assets) out.assets.push_back(a.record);

    std::set<std::pair<std::size_t, std::size_t>> event_at;  // (chain, t)
    std::vector<std::vector<double>> event_shock(kChains, std::vector<double>(T, 0.0));
    for (const auto& e : cfg.events) {
        const auto t = grid.index_of(e.at);
        if (!t) fail(ErrorCode::InvalidArgument, "event at " + e.at.to_string() + " lies outside the sample");
        event_shock[idx(e.chain)][*t] += e.magnitude;
        event_at.insert({idx(e.chain), *t});
    }

    // Truth containers.
    for (Chain c : kAllChains) {
        ChainPanel p;
        p.chain = c;
        for (PortfolioKind k : kAllKinds) p.get(k) = ReturnSeries(panel_series_id(c, k), grid);
        out.truth_panels.emplace(c, std::move(p));
        out.sigma2[c].assign(T, kMissing);
    }

    std::vector<GjrState> gjr;
    for (std::size_t i = 0; i < kChains; ++i) gjr.emplace_back(cfg.garch[i]);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(kChains, kChains);
    const Eigen::MatrixXd B = to_eigen(cfg.spillover);
    const Eigen::MatrixXd D = to_eigen(cfg.dummy_effect);
    Eigen::VectorXd r_prev = Eigen::VectorXd::Zero(kChains);

    const auto record_prices = [&](std::size_t t) {
        const HalfDayId h = grid[t];
        const Instant ts = h.start() + std::chrono::hours(1);
        for (const auto& a : assets) {
            out.swaps.push_back({a.record.asset_id, ts, 1.0, a.price, ingest::Direction::Buy});
            out.caps.push_back({a.record.asset_id, h, ingest::CapSource::ProviderA, a.cap});
            out.caps.push_back({a.record.asset_id, h, ingest::CapSource::Computed, a.cap});
        }
    };
    record_prices(0);

    for (std::size_t t = 1; t < T; ++t) {
        const Date day = grid[t].date;
        Eigen::VectorXd c(kChains), rhs(kChains);
        for (std::size_t i = 0; i < kChains; ++i) c[i] = cfg.cex_sd * normal(rng);
        for (std::size_t i = 0; i < kChains; ++i) {
            double s2 = 0.0;
            const double e = gjr[i].step(normal, rng, &s2);
            out.sigma2[kAllChains[i]][t] = s2;
            rhs[i] = cfg.own_lag * r_prev[i] + cfg.cex_loading * c[i] + e + event_shock[i][t];
        }
        Eigen::MatrixXd Bt = B;
        for (std::size_t j = 0; j < kChains; ++j) {
            if (event_at.contains({j, t})) Bt.col(static_cast<Eigen::Index>(j)) += D.col(static_cast<Eigen::Index>(j));
        }
        const Eigen::VectorXd r = (I - Bt).partialPivLu().solve(rhs);

        for (std::size_t i = 0; i < kChains; ++i) {
            const Chain chain = kAllChains[i];
            std::vector<AssetState*> cex, non, excluded;
            for (auto& a : assets) {
                if (a.record.chain != chain) continue;
                if (a.record.exclusion != ExclusionClass::None) {
                    excluded.push_back(&a);
                } else if (a.record.cex_listing_date && *a.record.cex_listing_date <= day) {
                    cex.push_back(&a);
                } else {
                    non.push_back(&a);
                }
            }
            double total = 0.0, cex_total = 0.0;
            for (auto* a : cex) cex_total += a->cap;
            total = cex_total;
            for (auto* a : non) total += a->cap;
            const double s = cex_total / total;
            const double n_ret = (r[i] - s * c[i]) / (1.0 - s);

            // Idiosyncratic noise with zero cap-weighted mean inside each group.
            const auto draw_group = [&](const std::vector<AssetState*>& group, double base, std::vector<double>& x) {
                x.clear();
                double wsum = 0.0, wmean = 0.0;
                for (auto* a : group) {
                    x.push_back(cfg.idio_sd * normal(rng));
                    wsum += a->cap;
                    wmean += a->cap * x.back();
                }
                wmean /= wsum;
                for (double& v : x) v = base + (v - wmean);
            };
            std::vector<double> x_cex, x_non;
            draw_group(cex, c[i], x_cex);
            draw_group(non, n_ret, x_non);

            // Local truth uses caps at t-1, before this step's update.
            double local_w = 0.0, local_sum = 0.0;
            const auto accumulate_local = [&](const std::vector<AssetState*>& group, const std::vector<double>& x) {
                for (std::size_t k = 0; k < group.size(); ++k) {
                    if (group[k]->record.multi_chain) continue;
                    local_w += group[k]->cap;
                    local_sum += group[k]->cap * x[k];
                }
            };
            accumulate_local(cex, x_cex);
            accumulate_local(non, x_non);

            // Supply drifts back toward the initial cap, otherwise the CEX share can wander
            // near 1 and the implied nonCEX return explodes.
            const auto apply = [](const std::vector<AssetState*>& group, const std::vector<double>& x) {
                for (std::size_t k = 0; k < group.size(); ++k) {
                    AssetState& a = *group[k];
                    a.price *= std::exp(x[k]);
                    const double dev = std::log(a.cap / a.cap_anchor) + x[k];
                    a.cap = a.cap_anchor * std::exp(0.97 * dev);
                }
            };
            apply(cex, x_cex);
            apply(non, x_non);
            for (auto* a : excluded) a->price *= std::exp(1e-4 * normal(rng));

            ChainPanel& panel = out.truth_panels.at(chain);
            panel.get(PortfolioKind::All).set_index(t, r[i]);
            panel.get(PortfolioKind::CEX).set_index(t, c[i]);
            panel.get(PortfolioKind::NonCEX).set_index(t, n_ret);
            panel.get(PortfolioKind::Local).set_index(t, local_sum / local_w);
        }
        record_prices(t);
        r_prev = r;
    }

    // Native tokens and bitcoin: half-day prices.
    for (const auto& sym : kNativeSymbols) {
        ReturnSeries truth(native_return_id(sym), grid);
        auto& points = out.series["native." + sym];
        double p = std::exp(2.0 + 4.0 * unif(rng));
        for (std::size_t t = 0; t < T; ++t) {
            if (t > 0) {
                const double x = cfg.activity.native_sd * normal(rng);
                p *= std::exp(x);
                truth.set_index(t, x);
            }
            points.push_back({grid[t].date, grid[t].half, p});
        }
        out.truth_covariates.emplace(truth.id(), std::move(truth));
    }

    // Daily AR(1) levels; the truth innovation sits on H1 of the publication day.
    const auto level_series = [&](const std::string& series_id, const std::string& truth_id, double mean, double phi,
                                  double sd, bool weekdays_only) {
        ReturnSeries truth(truth_id, grid);
        auto& points = out.series[series_id];
        double level = mean;
        bool first = true;
        for (std::size_t d = 0; d < n_days; ++d) {
            const Date day = cfg.start + std::chrono::days(static_cast<int>(d));
            if (weekdays_only && !is_weekday(day)) continue;
            double shock = 0.0;
            if (!first) {
                shock = sd * normal(rng);
                level = mean + phi * (level - mean) + shock;
            }
            first = false;
            points.push_back({day, std::nullopt, level});
            truth.set(HalfDayId{day, Half::H1}, shock);
            if (grid.contains(HalfDayId{day, Half::H2})) truth.set(HalfDayId{day, Half::H2}, 0.0);
        }
        out.truth_covariates.emplace(truth_id, std::move(truth));
    };
    for (Chain c : kAllChains) {
        level_series("staking." + std::string(to_string(c)), activity_id(c), cfg.activity.staking_mean,
                     cfg.activity.staking_phi, cfg.activity.staking_sd, false);
    }
    for (const auto& name : kRateNames) {
        level_series("rate." + name, name, cfg.activity.rate_mean, cfg.activity.rate_phi, cfg.activity.rate_sd, true);
    }

    // Equity bars on weekdays, with occasional market holidays.
    for (EquityMarket m : {EquityMarket::SP500, EquityMarket::HangSeng, EquityMarket::FTSE100}) {
        const std::string base = "equity." + std::string(to_string(m));
        auto& opens = out.series[base + ".open"];
        auto& closes = out.series[base + ".close"];
        ReturnSeries truth(equity_return_id(m), grid);
        double close = 1000.0 * std::exp(2.0 * unif(rng));
        bool have_prev = false;
        for (std::size_t d = 0; d < n_days; ++d) {
            const Date day = cfg.start + std::chrono::days(static_cast<int>(d));
            const bool open_day = is_weekday(day) && unif(rng) >= 0.02;
            double overnight = 0.0, intraday = 0.0;
            bool defined = true;
            if (open_day) {
                overnight = 0.3 * cfg.activity.equity_sd * normal(rng);
                intraday = cfg.activity.equity_sd * normal(rng);
                const double open = close * std::exp(overnight);
                close = open * std::exp(intraday);
                opens.push_back({day, std::nullopt, open});
                closes.push_back({day, std::nullopt, close});
                defined = have_prev;
                have_prev = true;
            }
            for (Half h : {Half::H1, Half::H2}) {
                const HalfDayId id{day, h};
                if (!grid.contains(id)) continue;
                const bool asia = m == EquityMarket::HangSeng;
                const bool is_overnight = (h == Half::H1) != asia;
                if (!open_day) {
                    truth.set(id, 0.0);
                } else if (is_overnight ? defined : true) {
                    truth.set(id, is_overnight ? overnight : intraday);
                }
            }
        }
        out.truth_covariates.emplace(truth.id(), std::move(truth));
    }
    return out;
}

std::string truth_json(const SynthData& data) {
    using nlohmann::json;
    const DgpConfig& c = data.config;
    json j;
    j["seed"] = c.seed;
    j["T"] = c.T;
    j["n_chains"] = c.n_chains;
    j["start"] = format_date(c.start);
    j["grid"] = {{"first", data.grid.first().to_string()}, {"last", data.grid.last().to_string()}};
    j["own_lag"] = c.own_lag;
    j["cex_loading"] = c.cex_loading;
    j["cex_sd"] = c.cex_sd;
    j["idio_sd"] = c.idio_sd;
    json spill = json::object(), dummy = json::object(), garch = json::object();
    for (std::size_t i = 0; i < kChains; ++i) {
        const std::string target(to_string(kAllChains[i]));
        for (std::size_t k = 0; k < kChains; ++k) {
            const std::string source(to_string(kAllChains[k]));
            spill[target][source] = c.spillover[i][k];
            dummy[target][source] = c.dummy_effect[i][k];
        }
        const auto& g = c.garch[i];
        garch[target] = {{"omega", g.omega}, {"alpha", g.alpha}, {"gamma", g.gamma}, {"beta", g.beta},
                         {"unconditional_variance", g.unconditional_variance()}};
    }
    j["spillover"] = spill;
    j["dummy_effect"] = dummy;
    j["garch"] = garch;
    const auto& a = c.activity;
    j["activity"] = {{"staking_mean", a.staking_mean}, {"staking_phi", a.staking_phi}, {"staking_sd", a.staking_sd},
                     {"rate_mean", a.rate_mean},       {"rate_phi", a.rate_phi},       {"rate_sd", a.rate_sd},
                     {"native_sd", a.native_sd},       {"equity_sd", a.equity_sd}};
    json events = json::array();
    for (const auto& e : c.events) {
        events.push_back({{"chain", std::string(to_string(e.chain))},
                          {"half_day", e.at.to_string()},
                          {"timestamp", format_rfc3339(e.at.start())},
                          {"magnitude", e.magnitude}});
    }
    j["events"] = events;
    json assets = json::array();
    for (const auto& r : data.assets) {
        assets.push_back({{"asset_id", r.asset_id},
                          {"chain", std::string(to_string(r.chain))},
                          {"cex_listing_date", r.cex_listing_date ? json(format_date(*r.cex_listing_date)) : json()},
                          {"multi_chain", r.multi_chain},
                          {"exclusion", std::string(to_string(r.exclusion))}});
    }
    j["assets"] = assets;
    return j.dump(2) + "\n";
}

void write_dataset(const SynthData& data, const std::filesystem::path& dir) {
    io::write_file(dir / "raw" / "assets.jsonl", ingest::format_assets_jsonl(data.assets));
    io::write_file(dir / "raw" / "swaps.csv", ingest::format_swaps_csv(data.swaps));
    io::write_file(dir / "raw" / "caps.csv", ingest::format_caps_csv(data.caps));
    io::write_file(dir / "raw" / "series.csv", ingest::format_series_csv(data.series));
    io::write_file(dir / "synth" / "panel.csv", format_panel_csv(data.truth_panels));
    Covariates truth;
    truth.series = data.truth_covariates;
    io::write_file(dir / "synth" / "covariates.csv", format_covariates_csv(truth));
    io::write_file(dir / "synth" / "truth.json", truth_json(data));

    const HalfDayRange& g = data.grid;
    std::string ini;
    ini += "# generated by `chainspill synth`\n";
    ini += "[grid]\n";
    ini += "start = " + g.first().to_string() + "\n";
    ini += "end = " + g.last().to_string() + "\n\n";
    ini += "[study]\n";
    // Two leading half-days: the first has no return, the second no lagged return.
    ini += "window = " + g[2].to_string() + ".." + g.last().to_string() + "\n";
    io::write_file(dir / "chainspill.ini", ini);
}

std::vector<double> simulate_gjr(std::size_t T, const econ::GjrParams& params, std::mt19937_64& rng,
                                 std::vector<double>* sigma2) {
    constexpr std::size_t burn = 500;
    std::normal_distribution<double> normal(0.0, 1.0);
    GjrState state(params);
    std::vector<double> e;
    e.reserve(T);
    if (sigma2) sigma2->clear();
    for (std::size_t t = 0; t < burn + T; ++t) {
        double s2 = 0.0;
        const double v = state.step(normal, rng, &s2);
        if (t < burn) continue;
        e.push_back(v);
        if (sigma2) sigma2->push_back(s2);
    }
    return e;
}

econ::DesignMatrix simulate_gjr_regression(std::size_t T, double b, const econ::GjrParams& params,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::vector<double> e = simulate_gjr(T, params, rng);
    econ::DesignMatrix d;
    d.y_name = "y";
    d.names = {"x"};
    d.labels = {"x"};
    d.X.resize(static_cast<Eigen::Index>(T), 1);
    d.y.resize(static_cast<Eigen::Index>(T));
    for (std::size_t t = 0; t < T; ++t) {
        const double x = normal(rng);
        d.X(static_cast<Eigen::Index>(t), 0) = x;
        d.y[static_cast<Eigen::Index>(t)] = b * x + e[t];
    }
    return d;
}

}  // namespace chainspill::synth

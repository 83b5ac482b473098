#pragma once

#include "chainspill/covariates.hpp"
#include "chainspill/econometrics/garch.hpp"
#include "chainspill/ingest.hpp"
#include "chainspill/io.hpp"
#include "chainspill/portfolio.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace chainspill::synth {

using ChainMatrix = std::array<std::array<double, 5>, 5>;  // [target][source]

struct ActivityConfig {
    double staking_mean = 5.0;  // annualised percent
    double staking_phi = 0.95;
    double staking_sd = 0.05;
    double rate_mean = 4.0;
    double rate_phi = 0.98;
    double rate_sd = 0.02;
    double native_sd = 0.02;  // half-day log-return sd of native tokens and BTC
    double equity_sd = 0.01;  // daily close-to-close
};

/// Adds `magnitude` to the chain's return shock at one half-day.
struct ExtremeEvent {
    Chain chain = Chain::Ethereum;
    HalfDayId at;
    double magnitude = 0.0;
};

/// Half-day panel DGP. Per chain i and half-day t, with c the CEX return and e
/// a GJR shock, the All-portfolio returns solve
///   (I - B_t) r_t = own_lag r_{t-1} + cex_loading c_t + e_t + events_t,
/// where B_t = spillover plus dummy_effect on the columns of chains that have
/// an event at t. Asset-level prices and caps are then drawn so that the
/// cap-weighted portfolios reproduce c and r exactly.
struct DgpConfig {
    int n_chains = 5;
    std::size_t T = 1000;
    Date start = parse_date("2023-01-02");
    ChainMatrix spillover{};
    double own_lag = 0.0;
    double cex_loading = 0.5;
    double cex_sd = 0.015;
    std::array<econ::GjrParams, 5> garch;
    ActivityConfig activity;
    std::vector<ExtremeEvent> events;
    ChainMatrix dummy_effect{};
    double idio_sd = 0.01;
    std::uint64_t seed = 1;
};

[[nodiscard]] DgpConfig default_config();
/// Reads `synth.*` keys over `base`.
[[nodiscard]] DgpConfig config_from(const io::Config& cfg, DgpConfig base = default_config());

/// Largest modulus among the eigenvalues of own_lag (I - B)^-1, over B with and
/// without the event exposures.
[[nodiscard]] double spectral_radius(const DgpConfig& cfg);
/// Throws UnstableConfig (or InvalidArgument for malformed fields).
void validate(const DgpConfig& cfg);

struct SynthData {
    DgpConfig config;
    HalfDayRange grid;
    PanelSet truth_panels;
    std::map<std::string, ReturnSeries> truth_covariates;
    std::map<Chain, std::vector<double>> sigma2;
    std::vector<AssetRecord> assets;
    std::vector<ingest::SwapTrade> swaps;
    std::vector<ingest::RawCapObservation> caps;
    ingest::SeriesStore series;
};

[[nodiscard]] SynthData generate_panel(const DgpConfig& cfg);

/// Every generator parameter plus asset list and event timestamps, as JSON text.
[[nodiscard]] std::string truth_json(const SynthData& data);

/// Writes raw/{assets.jsonl,swaps.csv,caps.csv,series.csv},
/// synth/{panel.csv,covariates.csv,truth.json} and chainspill.ini under `dir`.
void write_dataset(const SynthData& data, const std::filesystem::path& dir);

/// GJR shocks after a burn-in, pre-sample values at the unconditional variance.
[[nodiscard]] std::vector<double> simulate_gjr(std::size_t T, const econ::GjrParams& params, std::mt19937_64& rng,
                                               std::vector<double>* sigma2 = nullptr);

/// y_t = b x_t + e_t with x_t ~ N(0, 1) and GJR errors e_t; one regressor "x".
[[nodiscard]] econ::DesignMatrix simulate_gjr_regression(std::size_t T, double b, const econ::GjrParams& params,
                                                         std::uint64_t seed);

}  // namespace chainspill::synth

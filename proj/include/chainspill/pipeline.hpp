#pragma once

#include "chainspill/io.hpp"
#include "chainspill/study.hpp"
#include "chainspill/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace chainspill::pipeline {

/// On-disk layout of a data directory.
struct Layout {
    std::filesystem::path root;

    [[nodiscard]] std::filesystem::path raw() const { return root / "raw"; }
    [[nodiscard]] std::filesystem::path canonical() const { return root / "canonical"; }
    [[nodiscard]] std::filesystem::path build() const { return root / "build"; }
    [[nodiscard]] std::filesystem::path report() const { return root / "report"; }
};

struct Options {
    Layout layout;
    io::Config config;
    std::optional<HalfDayRange> window;
    std::vector<Variant> variants;
    std::optional<double> tail;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    bool strict = false;
};

/// `a..b` where each end is YYYY-MM-DD (whole day) or YYYY-MM-DD/H1|H2.
[[nodiscard]] HalfDayRange parse_window(std::string_view text);

/// `[grid] start/end` from the config, else the hull of canonical prices.
[[nodiscard]] HalfDayRange resolve_grid(const Options& opts);

[[nodiscard]] StudyConfig study_config(const Options& opts, const HalfDayRange& grid);

/// raw/ -> canonical/{assets.jsonl,prices.csv,caps.csv,series.csv}
void run_ingest(const Options& opts);
/// canonical/ -> build/{panel.csv,covariates.csv,arima_report.csv}
void run_build(const Options& opts);
/// build/ -> build/describe.csv
void run_describe(const Options& opts);
/// build/ -> report/{report.csv,report.md}; refuses stale build outputs.
[[nodiscard]] StudyReport run_estimate(const Options& opts);
/// report/report.csv -> report/report.md
void run_report(const Options& opts);
/// Synthetic raw inputs plus truth under the data directory.
synth::SynthData run_synth(const Options& opts);

/// Throws StaleArtifacts when a build output is missing or older than an input.
void check_fresh(const Layout& layout);

inline constexpr std::string_view kDescribeHeader = "series,Mean,Std,Skewness,Kurtosis,Jarque-Bera,ADF,ARIMA,AIC";

}  // namespace chainspill::pipeline

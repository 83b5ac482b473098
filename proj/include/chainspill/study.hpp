#pragma once

#include "chainspill/covariates.hpp"
#include "chainspill/econometrics/garch.hpp"
#include "chainspill/portfolio.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chainspill {

enum class Variant {
    LinearBaseline,
    LinearMacro,
    LinearMacroActivity,
    NonlinearBaseline,
    NonlinearMacro,
    NonlinearExtreme,
};

inline constexpr std::array<Variant, 6> kAllVariants{Variant::LinearBaseline,    Variant::LinearMacro,
                                                     Variant::LinearMacroActivity, Variant::NonlinearBaseline,
                                                     Variant::NonlinearMacro,    Variant::NonlinearExtreme};

[[nodiscard]] std::string_view to_string(Variant v) noexcept;
[[nodiscard]] std::optional<Variant> parse_variant(std::string_view text) noexcept;
[[nodiscard]] bool is_linear(Variant v) noexcept;

/// Dependent-variable panels estimated by the study.
inline constexpr std::array<PortfolioKind, 3> kStudyKinds{PortfolioKind::All, PortfolioKind::NonCEX,
                                                          PortfolioKind::Local};

struct RegressionSpec {
    Chain chain = Chain::Ethereum;
    PortfolioKind kind = PortfolioKind::All;
    Variant variant = Variant::LinearBaseline;
    HalfDayRange window;
};

/// Per rival chain, extreme-return dummies of its All-portfolio return.
using StudyDummies = std::map<Chain, DummyPair>;

[[nodiscard]] StudyDummies compute_dummies(const PanelSet& panels, const HalfDayRange& window, double tail);

struct ColumnPlanEntry {
    std::string name;
    std::string label;
    std::function<double(HalfDayId)> value;
};

/// Ordered regressors of a specification (the intercept is implicit).
[[nodiscard]] std::vector<ColumnPlanEntry> column_plan(const RegressionSpec& spec, const PanelSet& panels,
                                                       const Covariates& covariates,
                                                       const StudyDummies* dummies = nullptr);

/// Evaluates the plan over the window and applies listwise deletion.
[[nodiscard]] econ::DesignMatrix build_design(const RegressionSpec& spec, const PanelSet& panels,
                                              const Covariates& covariates, const StudyDummies* dummies = nullptr);
[[nodiscard]] econ::DesignMatrix build_linear_spec(const RegressionSpec& spec, const PanelSet& panels,
                                                   const Covariates& covariates);
[[nodiscard]] econ::DesignMatrix build_nonlinear_spec(const RegressionSpec& spec, const PanelSet& panels,
                                                      const Covariates& covariates, const StudyDummies* dummies);

struct StudyConfig {
    std::vector<Variant> variants{Variant::LinearBaseline};
    HalfDayRange window;
    double tail = 0.05;
    econ::OrderBounds bounds;
    econ::GarchOptions garch;
    int jobs = 1;
};

struct CellResult {
    Variant variant = Variant::LinearBaseline;
    Chain chain = Chain::Ethereum;
    PortfolioKind kind = PortfolioKind::All;
    std::optional<econ::FitResult> fit;
    std::vector<std::string> labels;  // one per regressor
    std::size_t dropped = 0;
    std::string error;
};

struct StudyReport {
    std::vector<CellResult> cells;  // variant, then kind, then chain order

    [[nodiscard]] std::size_t failures() const noexcept;
};

[[nodiscard]] StudyReport run_study(const PanelSet& panels, const Covariates& covariates, const StudyConfig& config);

/// Paper-style panel label of a dependent portfolio: "Panel A: R^All" etc.
[[nodiscard]] std::string panel_label(PortfolioKind kind);

/// `report.csv`: `variant,chain,panel,coef_name,estimate,tstat,stars,p,o,q,r2,n_obs`.
[[nodiscard]] std::string format_report_csv(const StudyReport& report);
[[nodiscard]] std::string format_report_md(const StudyReport& report);
/// Rebuilds the reportable part of a study (estimates, t-stats, order, R², N)
/// from `report.csv`; adjusted R² is recomputed from R², N and the column count.
[[nodiscard]] StudyReport parse_report_csv(std::string_view text, std::string_view origin = "report.csv");

}  // namespace chainspill

#include "chainspill/study.hpp"

#include "chainspill/econometrics/diagnostics.hpp"
#include "chainspill/error.hpp"
#include "chainspill/io.hpp"
#include "chainspill/kernels.hpp"

#include <set>
#include <sstream>

namespace chainspill {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::LinearBaseline: return "linear_baseline";
        case Variant::LinearMacro: return "linear_macro";
        case Variant::LinearMacroActivity: return "linear_macro_activity";
        case Variant::NonlinearBaseline: return "nonlinear_baseline";
        case Variant::NonlinearMacro: return "nonlinear_macro";
        case Variant::NonlinearExtreme: return "nonlinear_extreme";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept {
    for (Variant v : kAllVariants) {
        if (to_string(v) == text) return v;
    }
    return std::nullopt;
}

bool is_linear(Variant v) noexcept {
    return v == Variant::LinearBaseline || v == Variant::LinearMacro || v == Variant::LinearMacroActivity;
}

StudyDummies compute_dummies(const PanelSet& panels, const HalfDayRange& window, double tail) {
    StudyDummies out;
    for (const auto& [chain, panel] : panels) {
        out.emplace(chain, extreme_dummies(panel.get(PortfolioKind::All).reindex(window), tail));
    }
    return out;
}

namespace {

const ChainPanel& panel_of(const PanelSet& panels, Chain chain) {
    const auto it = panels.find(chain);
    if (it == panels.end()) fail(ErrorCode::MissingSeries, "no panel for chain " + std::string(to_string(chain)));
    return it->second;
}

std::string chain_name(Chain c) { return std::string(to_string(c)); }

std::string kind_name(PortfolioKind k) { return std::string(to_string(k)); }

// Series captured by pointer: the plan never outlives its inputs.
std::function<double(HalfDayId)> at(const Series& s) {
    return [p = &s](HalfDayId t) { return p->at(t); };
}

std::function<double(HalfDayId)> lagged(const Series& s) {
    return [p = &s](HalfDayId t) { return p->at(t.prev()); };
}

std::function<double(HalfDayId)> product(std::function<double(HalfDayId)> a, std::function<double(HalfDayId)> b) {
    return [a = std::move(a), b = std::move(b)](HalfDayId t) { return a(t) * b(t); };
}

void append_macro(std::vector<ColumnPlanEntry>& cols, const Covariates& cov) {
    for (const char* id : {"FTSER", "HSR", "SPR", "EURIBOR", "HIBOR", "TREA"}) {
        cols.push_back({"theta[" + std::string(id) + "]", id, at(cov.get(id))});
    }
}

}  // namespace

std::vector<ColumnPlanEntry> column_plan(const RegressionSpec& spec, const PanelSet& panels,
                                         const Covariates& cov, const StudyDummies* dummies) {
    const ChainPanel& own = panel_of(panels, spec.chain);
    const Series& own_y = own.get(spec.kind);
    const Series& own_cex = own.get(PortfolioKind::CEX);
    const std::string own_name = chain_name(spec.chain);
    const std::string kind = kind_name(spec.kind);
    const auto rival_chains = rivals(spec.chain);
    std::vector<ColumnPlanEntry> cols;

    if (is_linear(spec.variant)) {
        cols.push_back({"alpha_1", "R^" + kind + "_" + own_name + ",t-1", lagged(own_y)});
        cols.push_back({"beta_0", "R^CEX_" + own_name + ",t", at(own_cex)});
        for (std::size_t i = 0; i < rival_chains.size(); ++i) {
            const Chain r = rival_chains[i];
            cols.push_back({"beta_" + std::to_string(i + 1) + "[" + chain_name(r) + "]",
                            "R^All_" + chain_name(r) + ",t", at(panel_of(panels, r).get(PortfolioKind::All))});
        }
        if (spec.variant != Variant::LinearBaseline) append_macro(cols, cov);
        if (spec.variant == Variant::LinearMacroActivity) {
            cols.push_back({"gamma[R_BTC]", "R_BTC,t", at(cov.get(native_return_id("BTC")))});
            for (Chain c : kAllChains) {
                const std::string id = native_return_id(std::string(native_token(c)));
                cols.push_back({"gamma[" + id + "]", id + ",t", at(cov.get(id))});
            }
            for (Chain c : kAllChains) {
                const std::string id = activity_id(c);
                cols.push_back({"gamma[" + id + "]", id + ",t", at(cov.get(id))});
            }
        }
    } else {
        const Series& own_sr = cov.get(activity_id(spec.chain));
        const Series& own_native = cov.get(native_return_id(std::string(native_token(spec.chain))));
        cols.push_back({"alpha_1", "R^CEX_" + own_name + ",t", at(own_cex)});
        const std::string lag_label = "R^" + kind + "_" + own_name + ",t-1";
        cols.push_back({"beta_00", lag_label, lagged(own_y)});
        cols.push_back({"beta_01", lag_label + " x SR_" + own_name + ",t-1", product(lagged(own_y), lagged(own_sr))});
        cols.push_back({"beta_02", lag_label + " x R_" + std::string(native_token(spec.chain)) + ",t-1",
                        product(lagged(own_y), lagged(own_native))});
        if (spec.variant == Variant::NonlinearExtreme && !dummies) {
            fail(ErrorCode::MissingDummies, "nonlinear_extreme needs extreme-return dummies");
        }
        for (std::size_t i = 0; i < rival_chains.size(); ++i) {
            const Chain r = rival_chains[i];
            const std::string rn = chain_name(r);
            const std::string tag = "[" + rn + "]";
            const std::string idx = "beta_" + std::to_string(i + 1);
            const Series& rr = panel_of(panels, r).get(PortfolioKind::All);
            const Series& sr = cov.get(activity_id(r));
            const std::string native = std::string(native_token(r));
            const Series& rn_ret = cov.get(native_return_id(native));
            const std::string base = "R^All_" + rn + ",t";
            cols.push_back({idx + "0" + tag, base, at(rr)});
            cols.push_back({idx + "1" + tag, base + " x SR_" + rn + ",t", product(at(rr), at(sr))});
            cols.push_back({idx + "2" + tag, base + " x R_" + native + ",t", product(at(rr), at(rn_ret))});
            if (spec.variant == Variant::NonlinearExtreme) {
                const auto d = dummies->find(r);
                if (d == dummies->end()) fail(ErrorCode::MissingDummies, "no extreme-return dummies for " + rn);
                cols.push_back({idx + "3" + tag, base + " x DU_" + rn + ",t", product(at(rr), at(d->second.upper))});
                cols.push_back({idx + "4" + tag, base + " x DL_" + rn + ",t", product(at(rr), at(d->second.lower))});
            }
        }
        if (spec.variant != Variant::NonlinearBaseline) append_macro(cols, cov);
    }

    std::set<std::string> seen;
    for (const auto& c : cols) {
        if (!seen.insert(c.name).second) fail(ErrorCode::InvalidArgument, "duplicate column " + c.name);
    }
    return cols;
}

econ::DesignMatrix build_design(const RegressionSpec& spec, const PanelSet& panels, const Covariates& cov,
                                const StudyDummies* dummies) {
    if (spec.window.size() < 2) fail(ErrorCode::WindowTooShort, "estimation window has fewer than two half-days");
    const auto cols = column_plan(spec, panels, cov, dummies);
    const Series& y = panel_of(panels, spec.chain).get(spec.kind);

    econ::DesignMatrix d;
    d.y_name = panel_series_id(spec.chain, spec.kind);
    for (const auto& c : cols) {
        d.names.push_back(c.name);
        d.labels.push_back(c.label);
    }
    const auto k = static_cast<Eigen::Index>(cols.size());
    std::vector<double> row(cols.size());
    std::vector<double> xs;
    std::vector<double> ys;
    for (HalfDayId t : spec.window) {
        const double yt = y.at(t);
        bool ok = !is_missing(yt);
        for (std::size_t j = 0; ok && j < cols.size(); ++j) {
            row[j] = cols[j].value(t);
            ok = std::isfinite(row[j]);
        }
        if (!ok) {
            ++d.dropped;
            continue;
        }
        d.rows.push_back(t);
        ys.push_back(yt);
        xs.insert(xs.end(), row.begin(), row.end());
    }
    const auto n = static_cast<Eigen::Index>(ys.size());
    if (n <= k + 1) {
        fail(ErrorCode::WindowTooShort, d.y_name + ": " + std::to_string(n) + " complete rows for " +
                                            std::to_string(k) + " regressors (" + std::to_string(d.dropped) +
                                            " dropped)");
    }
    d.y = Eigen::Map<const econ::Vector>(ys.data(), n);
    d.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(xs.data(), n, k);
    return d;
}

econ::DesignMatrix build_linear_spec(const RegressionSpec& spec, const PanelSet& panels, const Covariates& cov) {
    if (!is_linear(spec.variant)) fail(ErrorCode::InvalidArgument, "not a linear variant");
    return build_design(spec, panels, cov);
}

econ::DesignMatrix build_nonlinear_spec(const RegressionSpec& spec, const PanelSet& panels, const Covariates& cov,
                                        const StudyDummies* dummies) {
    if (is_linear(spec.variant)) fail(ErrorCode::InvalidArgument, "not a nonlinear variant");
    return build_design(spec, panels, cov, dummies);
}

std::size_t StudyReport::failures() const noexcept {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.fit ? 0 : 1;
    return n;
}

StudyReport run_study(const PanelSet& panels, const Covariates& cov, const StudyConfig& config) {
    StudyReport report;
    std::optional<StudyDummies> dummies;
    std::string dummy_error;
    for (Variant v : config.variants) {
        if (v != Variant::NonlinearExtreme || dummies || !dummy_error.empty()) continue;
        try {
            dummies = compute_dummies(panels, config.window, config.tail);
        } catch (const Error& e) {
            dummy_error = std::string("MissingDummies: ") + e.what();
        }
    }

    for (Variant v : config.variants) {
        const std::size_t base = report.cells.size();
        for (PortfolioKind kind : kStudyKinds) {
            for (Chain chain : kAllChains) report.cells.push_back({v, chain, kind, std::nullopt, {}, 0, {}});
        }
        kernels::parallel_for(report.cells.size() - base, config.jobs, [&](std::size_t i) {
            CellResult& cell = report.cells[base + i];
            try {
                if (v == Variant::NonlinearExtreme && !dummies) fail(ErrorCode::MissingDummies, dummy_error);
                const RegressionSpec spec{cell.chain, cell.kind, v, config.window};
                const econ::DesignMatrix d = build_design(spec, panels, cov, dummies ? &*dummies : nullptr);
                cell.labels = d.labels;
                cell.dropped = d.dropped;
                cell.fit = econ::select_garch_order(d, config.bounds, config.garch, 1).fit;
            } catch (const Error& e) {
                cell.error = e.what();
            }
        });
    }
    return report;
}

std::string panel_label(PortfolioKind kind) {
    switch (kind) {
        case PortfolioKind::All: return "Panel A: R^All";
        case PortfolioKind::NonCEX: return "Panel B: R^nonCEX";
        case PortfolioKind::Local: return "Panel C: R^Local";
        case PortfolioKind::CEX: break;
    }
    return "R^" + kind_name(kind);
}

std::string format_report_csv(const StudyReport& report) {
    std::ostringstream os;
    os << "variant,chain,panel,coef_name,estimate,tstat,stars,p,o,q,r2,n_obs\n";
    for (const auto& c : report.cells) {
        const std::string prefix =
            std::string(to_string(c.variant)) + ',' + chain_name(c.chain) + ',' + kind_name(c.kind) + ',';
        if (!c.fit) {
            os << prefix << "—,NA,NA,,NA,NA,NA,NA,NA\n";
            continue;
        }
        const econ::FitResult& f = *c.fit;
        const std::string tail = ',' + std::to_string(f.order.p) + ',' + std::to_string(f.order.o) + ',' +
                                 std::to_string(f.order.q) + ',' + io::format_double(f.r2) + ',' +
                                 std::to_string(f.n_obs) + '\n';
        for (std::size_t i = 0; i < f.mean_names.size(); ++i) {
            const auto j = static_cast<Eigen::Index>(i);
            os << prefix << "mean." << f.mean_names[i] << ',' << io::format_double(f.mean_coefficients[j]) << ','
               << io::format_double(f.mean_tstats[j]) << ','
               << econ::stars(econ::significance_from_t(f.mean_tstats[j])) << tail;
        }
        for (std::size_t i = 0; i < f.variance_names.size(); ++i) {
            const auto j = static_cast<Eigen::Index>(i);
            os << prefix << "variance." << f.variance_names[i] << ','
               << io::format_double(f.variance_coefficients[j]) << ',' << io::format_double(f.variance_tstats[j])
               << ',' << econ::stars(econ::significance_from_t(f.variance_tstats[j])) << tail;
        }
    }
    return os.str();
}

namespace {

// Row key shared across columns: the rival tag is dropped, so beta_1 means
// "first rival" in every column as in the paper's tables.
std::string row_key(const std::string& name) { return name.substr(0, name.find('[')); }

std::string estimate_cell(double est, double t) {
    return io::format_fixed(est, 4) + econ::stars(econ::significance_from_t(t));
}

}  // namespace

std::string format_report_md(const StudyReport& report) {
    std::ostringstream os;
    os << "# Estimation report\n";
    std::vector<Variant> variants;
    for (const auto& c : report.cells) {
        if (variants.empty() || variants.back() != c.variant) variants.push_back(c.variant);
    }
    for (Variant v : variants) {
        os << "\n## " << to_string(v) << "\n";
        const bool adjusted = v != Variant::LinearBaseline && v != Variant::NonlinearBaseline;
        for (PortfolioKind kind : kStudyKinds) {
            std::vector<const CellResult*> cells;
            for (const auto& c : report.cells) {
                if (c.variant == v && c.kind == kind) cells.push_back(&c);
            }
            if (cells.empty()) continue;
            os << "\n### " << panel_label(kind) << "_chain,t as the dependent variable\n\n";
            os << "| |";
            for (const auto* c : cells) os << ' ' << chain_name(c->chain) << " |";
            os << "\n|---|";
            for (std::size_t i = 0; i < cells.size(); ++i) os << "---|";
            os << '\n';

            std::vector<std::string> rows;
            for (const auto* c : cells) {
                if (!c->fit) continue;
                for (const auto& n : c->fit->mean_names) {
                    const std::string key = row_key(n);
                    if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
                }
            }
            for (const auto& key : rows) {
                std::string est_line = "| " + key + " |";
                std::string t_line = "| |";
                for (const auto* c : cells) {
                    std::optional<std::size_t> idx;
                    if (c->fit) {
                        for (std::size_t i = 0; i < c->fit->mean_names.size(); ++i) {
                            if (row_key(c->fit->mean_names[i]) == key) idx = i;
                        }
                    }
                    if (!idx) {
                        est_line += c->fit ? " |" : " — |";
                        t_line += " |";
                        continue;
                    }
                    const auto j = static_cast<Eigen::Index>(*idx);
                    const double est = c->fit->mean_coefficients[j];
                    const double t = c->fit->mean_tstats[j];
                    est_line += ' ' + estimate_cell(est, t) + " |";
                    t_line += " (" + io::format_fixed(t, 3) + ") |";
                }
                os << est_line << '\n' << t_line << '\n';
            }
            const auto stat_row = [&](const std::string& label, const std::function<std::string(const econ::FitResult&)>& f) {
                os << "| " << label << " |";
                for (const auto* c : cells) os << ' ' << (c->fit ? f(*c->fit) : "—") << " |";
                os << '\n';
            };
            stat_row("p", [](const econ::FitResult& f) { return std::to_string(f.order.p); });
            stat_row("o", [](const econ::FitResult& f) { return std::to_string(f.order.o); });
            stat_row("q", [](const econ::FitResult& f) { return std::to_string(f.order.q); });
            if (adjusted) {
                stat_row("Adjusted R²", [](const econ::FitResult& f) { return io::format_fixed(f.adj_r2, 3); });
            } else {
                stat_row("R²", [](const econ::FitResult& f) { return io::format_fixed(f.r2, 3); });
            }
            stat_row("N", [](const econ::FitResult& f) { return std::to_string(f.n_obs); });

            bool any_error = false;
            for (const auto* c : cells) any_error = any_error || !c->fit;
            if (any_error) {
                os << '\n';
                for (const auto* c : cells) {
                    if (!c->fit) os << "- " << chain_name(c->chain) << ": " << c->error << '\n';
                }
            }
        }
    }
    return os.str();
}

StudyReport parse_report_csv(std::string_view text, std::string_view origin) {
    const io::CsvTable table =
        io::parse_csv(text, "variant,chain,panel,coef_name,estimate,tstat,stars,p,o,q,r2,n_obs", origin);
    StudyReport report;
    for (const auto& row : table.rows) {
        const auto v = parse_variant(row[0]);
        const auto chain = parse_chain(row[1]);
        const auto kind = parse_portfolio_kind(row[2]);
        if (!v || !chain || !kind) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": bad cell key");
        if (report.cells.empty() || report.cells.back().variant != *v || report.cells.back().chain != *chain ||
            report.cells.back().kind != *kind) {
            report.cells.push_back({*v, *chain, *kind, std::nullopt, {}, 0, {}});
            if (row[3] == "—") {
                report.cells.back().error = "estimation failed";
                continue;
            }
            econ::FitResult f;
            f.order = {std::stoi(row[7]), std::stoi(row[8]), std::stoi(row[9])};
            f.r2 = io::parse_double(row[10]);
            f.n_obs = static_cast<std::size_t>(std::stoull(row[11]));
            report.cells.back().fit = std::move(f);
        }
        auto& f = *report.cells.back().fit;
        const double est = io::parse_double(row[4]);
        const double t = io::parse_double(row[5]);
        const auto push = [&](std::vector<std::string>& names, econ::Vector& coef, econ::Vector& tstat,
                              econ::Vector& se, const std::string& name) {
            names.push_back(name);
            const auto n = coef.size();
            coef.conservativeResize(n + 1);
            tstat.conservativeResize(n + 1);
            se.conservativeResize(n + 1);
            coef[n] = est;
            tstat[n] = t;
            se[n] = est / t;
        };
        if (row[3].rfind("mean.", 0) == 0) {
            push(f.mean_names, f.mean_coefficients, f.mean_tstats, f.mean_std_errors, row[3].substr(5));
        } else if (row[3].rfind("variance.", 0) == 0) {
            push(f.variance_names, f.variance_coefficients, f.variance_tstats, f.variance_std_errors, row[3].substr(9));
        } else {
            fail(ErrorCode::SchemaMismatch, std::string(origin) + ": bad coefficient name '" + row[3] + "'");
        }
    }
    for (auto& c : report.cells) {
        if (!c.fit) continue;
        auto& f = *c.fit;
        const double n = static_cast<double>(f.n_obs);
        const double k = static_cast<double>(f.mean_names.size()) - 1.0;
        f.adj_r2 = 1.0 - (1.0 - f.r2) * (n - 1.0) / (n - k - 1.0);
    }
    return report;
}

}  // namespace chainspill

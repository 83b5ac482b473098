#include "chainspill/cli.hpp"

#include "chainspill/error.hpp"
#include "chainspill/kernels.hpp"
#include "chainspill/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace chainspill::cli {

namespace {

struct Flags {
    std::string config;
    std::string data_dir;
    std::string window;
    std::vector<std::string> variants;
    std::optional<double> tail;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    bool strict = false;
};

pipeline::Options make_options(const Flags& f) {
    pipeline::Options o;
    std::string dir = f.data_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("CHAINSPILL_DATA_DIR")) dir = env;
    }
    if (dir.empty()) dir = ".";
    o.layout.root = dir;
    if (!f.config.empty()) {
        o.config = io::Config::load(f.config);
    } else if (std::filesystem::exists(o.layout.root / "chainspill.ini")) {
        o.config = io::Config::load(o.layout.root / "chainspill.ini");
    }
    if (!f.window.empty()) o.window = pipeline::parse_window(f.window);
    for (const auto& name : f.variants) {
        const auto v = parse_variant(name);
        if (!v) fail(ErrorCode::InvalidArgument, "unknown variant '" + name + "'");
        o.variants.push_back(*v);
    }
    o.tail = f.tail;
    o.seed = f.seed;
    o.jobs = f.jobs;
    o.strict = f.strict;
    if (f.jobs > 0) kernels::set_default_jobs(f.jobs);
    return o;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Cross-chain spillover study pipeline", "chainspill"};
    app.require_subcommand(1, 1);
    Flags flags;
    app.add_option("--config", flags.config, "INI config file (default: <data-dir>/chainspill.ini)");
    app.add_option("--data-dir", flags.data_dir, "Data directory (default: $CHAINSPILL_DATA_DIR or .)");
    app.add_option("--window", flags.window, "Estimation window start..end (dates or half-day ids)");
    app.add_option("--variant", flags.variants, "Model variants, comma separated")->delimiter(',');
    app.add_option("--tail", flags.tail, "Extreme-dummy tail probability");
    app.add_option("--seed", flags.seed, "RNG seed");
    app.add_option("--jobs", flags.jobs, "Worker count (default: logical cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--strict", flags.strict, "Fail on malformed swap records instead of skipping");

    const char* verbs[][2] = {{"ingest", "Fetch and canonicalize raw inputs"},
                              {"build", "Build portfolio panels and covariates"},
                              {"describe", "Descriptive statistics for panels and covariates"},
                              {"estimate", "Run the spillover study"},
                              {"synth", "Generate a synthetic dataset with known truth"},
                              {"report", "Render report.md from report.csv"}};
    for (const auto& v : verbs) app.add_subcommand(v[0], v[1])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        const pipeline::Options opts = make_options(flags);
        if (verb == "ingest") {
            pipeline::run_ingest(opts);
        } else if (verb == "build") {
            pipeline::run_build(opts);
        } else if (verb == "describe") {
            pipeline::run_describe(opts);
        } else if (verb == "estimate") {
            const StudyReport report = pipeline::run_estimate(opts);
            if (report.failures() > 0) return kExitPartial;
        } else if (verb == "synth") {
            pipeline::run_synth(opts);
        } else if (verb == "report") {
            pipeline::run_report(opts);
        }
    } catch (const Error& e) {
        std::cerr << "chainspill: " << to_string(e.code()) << ": " << e.what() << '\n';
        return kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "chainspill: " << e.what() << '\n';
        return kExitFatal;
    }
    return kExitOk;
}

}  // namespace chainspill::cli

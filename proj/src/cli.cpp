#include "mgc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mgc/error.hpp"
#include "mgc/random_models.hpp"
#include "mgc/report.hpp"
#include "mgc/scenario_io.hpp"
#include "mgc/simulator.hpp"

namespace mgc::cli {
namespace {

enum class Level { Quiet, Warn, Info, Debug };

Level level_from_env() {
    const char* v = std::getenv("MGC_LOG");
    if (!v) return Level::Warn;
    const std::string s(v);
    if (s == "quiet" || s == "0") return Level::Quiet;
    if (s == "info" || s == "2") return Level::Info;
    if (s == "debug" || s == "3") return Level::Debug;
    return Level::Warn;
}

class Log {
public:
    explicit Log(std::ostream& err) : err_(err), level_(level_from_env()) {}
    void info(const std::string& msg) const { emit(Level::Info, "info", msg); }
    void debug(const std::string& msg) const { emit(Level::Debug, "debug", msg); }

private:
    void emit(Level at, const char* tag, const std::string& msg) const {
        if (level_ >= at) err_ << "[" << tag << "] " << msg << '\n';
    }
    std::ostream& err_;
    Level level_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw Error("cannot write " + path.string());
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
    std::ostringstream csv;
    write_csv(trace, csv);
    write_file(path, csv.str());
}

SimulationOptions sim_options(const RunConfig& cfg) {
    SimulationOptions o;
    o.dt = cfg.dt;
    o.omega_c = cfg.omega_c;
    o.stride = cfg.stride;
    o.raw_removal = cfg.raw_removal;
    return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int simulate_cmd(const RunConfig& cfg, std::ostream& out, const Log& log) {
    if (!cfg.scenario) throw ParseError("simulate requires --scenario");
    const auto sc = load_scenario(*cfg.scenario);
    log.info("loaded scenario '" + sc.name + "' with " + std::to_string(sc.dgus.size()) + " DGUs");
    const auto t0 = std::chrono::steady_clock::now();
    const auto trace = simulate(sc, sim_options(cfg));
    log.info("simulated " + std::to_string(trace.samples.size()) + " samples in " +
             std::to_string(seconds_since(t0)) + " s");
    const auto eval = evaluate(trace, sc);
    const auto text = checks_text(eval);
    write_trace(cfg.out_dir / (sc.name + ".csv"), trace);
    write_file(cfg.out_dir / (sc.name + "_checks.txt"), text);
    out << text;
    return eval.all_passed() ? kExitOk : kExitCheckFailed;
}

RandomRegime parse_regime(const std::string& s) {
    if (s == "d_identity") return RandomRegime::DIdentity;
    if (s == "commuting") return RandomRegime::Commuting;
    if (s == "neither") return RandomRegime::Neither;
    throw ParseError("regime must be d_identity, commuting or neither");
}

int analyze_cmd(const RunConfig& cfg, std::ostream& out, const Log& log) {
    SpectralReport report;
    std::string stem;
    if (cfg.scenario) {
        auto sc = load_scenario(*cfg.scenario);
        if (cfg.omega_c) sc.settings.omega_c = *cfg.omega_c;
        report = analyze_with_rates(full_grid(sc).model());
        stem = sc.name;
    } else {
        Rng rng(cfg.seed);
        const auto model = random_model(rng, cfg.random_nodes, parse_regime(cfg.random_regime), PrimaryMode::FirstOrder,
                                        cfg.omega_c.value_or(kDefaultOmegaC));
        log.info("random " + cfg.random_regime + " model, N = " + std::to_string(cfg.random_nodes) +
                 ", seed = " + std::to_string(cfg.seed));
        report = analyze_with_rates(model);
        stem = "random_" + std::to_string(cfg.seed);
    }
    const auto json = spectral_json(report);
    out << (cfg.json ? json : spectral_text(report));
    if (cfg.out_dir != ".") write_file(cfg.out_dir / (stem + "_spectrum.json"), json);
    return kExitOk;
}

int counterexample_cmd(const RunConfig& cfg, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = counterexample_appendix_c();
    const auto published = counterexample_published_eigenvalues();
    const double err = max_matching_error(published, report.eigenvalues);
    const double elapsed = seconds_since(t0);

    out << "Counterexample: D != I and LDM != MDL, both graphs connected\n\n";
    out << spectral_text(report) << '\n';
    out << "published eigenvalues:\n";
    for (const auto& z : published) out << "  " << format_complex(z) << '\n';
    char line[128];
    std::snprintf(line, sizeof line, "max deviation from published values: %.2e (tolerance 2.0e-03)\n", err);
    out << line;
    std::snprintf(line, sizeof line, "elapsed: %.3f s\n", elapsed);
    out << line;
    if (cfg.out_dir != ".") write_file(cfg.out_dir / "counterexample_spectrum.json", spectral_json(report));
    return err <= 2e-3 ? kExitOk : kExitCheckFailed;
}

int stages_cmd(const RunConfig& cfg, std::ostream& out, const Log& log) {
    const auto first_order = builtin_stage_scenario();
    auto unit_gain = first_order;
    unit_gain.name = first_order.name + "_unit_gain";
    unit_gain.settings.mode = PrimaryMode::UnitGain;
    const auto opts = sim_options(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    // The unit-gain cross-check runs on a worker with its own copy of everything.
    auto cross = std::async(std::launch::async, [&unit_gain, opts] { return simulate(unit_gain, opts); });
    const auto trace = simulate(first_order, opts);
    const auto cross_trace = cross.get();
    log.info("stages simulated in " + std::to_string(seconds_since(t0)) + " s");

    const auto eval = evaluate(trace, first_order);
    const auto cross_eval = evaluate(cross_trace, unit_gain);
    write_trace(cfg.out_dir / (first_order.name + ".csv"), trace);
    write_trace(cfg.out_dir / (unit_gain.name + ".csv"), cross_trace);

    std::ostringstream text;
    text << "first-order primary loops:\n" << checks_text(eval) << "\nunit-gain primary loops:\n"
         << checks_text(cross_eval);
    write_file(cfg.out_dir / (first_order.name + "_checks.txt"), text.str());
    out << text.str();
    return eval.all_passed() && cross_eval.all_passed() ? kExitOk : kExitCheckFailed;
}

int dispatch(const RunConfig& cfg, std::ostream& out, const Log& log) {
    switch (cfg.command) {
        case Command::Simulate: return simulate_cmd(cfg, out, log);
        case Command::Analyze: return analyze_cmd(cfg, out, log);
        case Command::Counterexample: return counterexample_cmd(cfg, out);
        case Command::Stages: return stages_cmd(cfg, out, log);
    }
    return kExitParse;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"DC microgrid current sharing and voltage balancing"};
    app.require_subcommand(1);

    auto add_sim_flags = [&cfg](CLI::App* sub) {
        sub->add_option("--dt", cfg.dt, "fixed integration step, s")->check(CLI::PositiveNumber);
        sub->add_option("--omega-c", cfg.omega_c, "primary loop bandwidth, rad/s")->check(CLI::PositiveNumber);
        sub->add_option("--stride", cfg.stride, "sample every N integration steps")->check(CLI::PositiveNumber);
        sub->add_flag("--raw-removal", cfg.raw_removal, "unplug without redistributing dV");
    };

    auto* sim = app.add_subcommand("simulate", "run a scenario file, write trace CSV and check report");
    sim->add_option("--scenario", cfg.scenario, "scenario file")->required();
    sim->add_option("--out", cfg.out_dir, "output directory");
    add_sim_flags(sim);

    auto* ana = app.add_subcommand("analyze", "spectral report of the fully connected scenario network");
    ana->add_option("--scenario", cfg.scenario, "scenario file");
    ana->add_option("--out", cfg.out_dir, "output directory for the JSON report");
    ana->add_option("--omega-c", cfg.omega_c, "primary loop bandwidth, rad/s")->check(CLI::PositiveNumber);
    ana->add_option("--seed", cfg.seed, "seed for a random model when no scenario is given");
    ana->add_option("--nodes", cfg.random_nodes, "size of the random model")->check(CLI::Range(2, 200));
    ana->add_option("--regime", cfg.random_regime, "d_identity, commuting or neither")
        ->check(CLI::IsMember({"d_identity", "commuting", "neither"}));
    ana->add_flag("--json", cfg.json, "print JSON instead of text");

    auto* cex = app.add_subcommand("counterexample", "recompute the non-commuting counterexample spectrum");
    cex->add_option("--out", cfg.out_dir, "output directory for the JSON report");

    auto* stg = app.add_subcommand("stages", "run the builtin seven-DGU staged scenario");
    stg->add_option("--out", cfg.out_dir, "output directory");
    add_sim_flags(stg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }
    if (*sim) cfg.command = Command::Simulate;
    else if (*ana) cfg.command = Command::Analyze;
    else if (*cex) cfg.command = Command::Counterexample;
    else cfg.command = Command::Stages;

    const Log log(err);
    try {
        return dispatch(cfg, out, log);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const AssumptionError& e) {
        err << "assumption violated: " << e.what() << '\n';
        return kExitAssumption;
    } catch (const UnsupportedRegime& e) {
        err << "assumption violated: " << e.what() << '\n';
        return kExitAssumption;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"mgc"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mgc::cli

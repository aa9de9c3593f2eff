// mrc-grid: sweep / optimize / simulate / verify / compare front end.
//
// Data goes to --out (stdout when omitted); diagnostics go to stderr.
// Exit status: 0 success, 1 verify found failing properties, 2 error.

#include "mrc/mrc.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    bool log = false;

    std::vector<double> values() const {
        return log ? mrc::log_grid(lo, hi, count) : mrc::linear_grid(lo, hi, count);
    }
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double to_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument(what + ": not a number: '" + text + "'");
    return v;
}

GridSpec parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3 && parts.size() != 4) throw std::invalid_argument("--grid expects lo:hi:count[:log]");
    GridSpec g;
    g.lo = to_double(parts[0], "--grid lo");
    g.hi = to_double(parts[1], "--grid hi");
    const double count = to_double(parts[2], "--grid count");
    if (count < 1 || count != static_cast<double>(static_cast<std::size_t>(count))) {
        throw std::invalid_argument("--grid count must be a positive integer");
    }
    g.count = static_cast<std::size_t>(count);
    if (parts.size() == 4) {
        if (parts[3] != "log" && parts[3] != "lin") throw std::invalid_argument("--grid spacing must be 'log' or 'lin'");
        g.log = parts[3] == "log";
    }
    return g;
}

/// "x2=7.5,x3=7.5" style assignments with 1-based receiver indices.
std::vector<std::pair<std::size_t, double>> parse_assignments(const std::string& text, char prefix,
                                                              const std::string& flag, std::size_t receivers) {
    std::vector<std::pair<std::size_t, double>> out;
    if (text.empty()) return out;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq < 2 || item[0] != prefix) {
            throw std::invalid_argument(flag + ": expected " + prefix + "<n>=<value>, got '" + item + "'");
        }
        const double index = to_double(item.substr(1, eq - 1), flag + " index");
        if (index < 1 || index > static_cast<double>(receivers) || index != static_cast<std::size_t>(index)) {
            throw std::invalid_argument(flag + ": receiver index out of range in '" + item + "'");
        }
        out.emplace_back(static_cast<std::size_t>(index) - 1, to_double(item.substr(eq + 1), flag + " value"));
    }
    return out;
}

mrc::SystemScenario apply_pmin(mrc::SystemScenario scenario, const std::string& text) {
    for (const auto& [n, value] : parse_assignments(text, 'p', "--pmin", scenario.size())) {
        scenario = scenario.with_p_min(n, value);
    }
    return scenario;
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    std::string name() const { return path_.empty() ? "-" : path_; }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

mrc::RunManifest manifest(const std::string& subcommand, const std::string& scenario) {
    mrc::RunManifest m;
    m.subcommand = subcommand;
    m.scenario = scenario;
    m.version = mrc::tool_version();
    m.timestamp = mrc::utc_timestamp();
    return m;
}

std::string fmt(double v) { return mrc::format_number(v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-receiver magnetic resonant coupling WPT: analysis, load optimisation, protocol simulation"};
    app.set_version_flag("--version", mrc::tool_version());
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Powers versus one receiver's load");
    std::size_t receiver = 1;
    std::string grid_text = "0.1:100:1000";
    std::string fixed_text;
    sweep->add_option("--scenario", scenario_path, "Scenario JSON file or bundled name")->required();
    sweep->add_option("--receiver", receiver, "Swept receiver (1-based)")->check(CLI::PositiveNumber);
    sweep->add_option("--grid", grid_text, "lo:hi:count[:log]");
    sweep->add_option("--fixed", fixed_text, "Loads of the other receivers, e.g. x2=7.5,x3=7.5");
    sweep->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Minimum transmit power by z-sweep");
    double dz = 1e-3;
    std::string pmin_text;
    optimize->add_option("--scenario", scenario_path, "Scenario JSON file or bundled name")->required();
    optimize->add_option("--dz", dz, "z step");
    optimize->add_option("--pmin", pmin_text, "Override power floors, e.g. p3=30");
    optimize->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Distributed one-bit-feedback protocol");
    double dx = 1e-3;
    std::size_t k_max = 100000;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::string trace_path;
    std::string trials_path;
    bool until_feasible = false;
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file or bundled name")->required();
    simulate->add_option("--dx", dx, "Load step");
    simulate->add_option("--kmax", k_max, "Iteration cap")->check(CLI::PositiveNumber);
    simulate->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "First seed; trial t uses seed + t");
    simulate->add_option("--pmin", pmin_text, "Override power floors, e.g. p3=30");
    simulate->add_option("--trace", trace_path, "Per-iteration CSV of the first trial");
    simulate->add_option("--trials-out", trials_path, "Per-trial CSV");
    simulate->add_flag("--until-feasible", until_feasible, "Count only converged feasible trials toward --trials");
    simulate->add_option("--out", out_path, "Summary CSV (stdout if omitted)");

    // verify
    auto* verify = app.add_subcommand("verify", "Randomised property checks on a scenario");
    std::size_t verify_trials = 1000;
    verify->add_option("--scenario", scenario_path, "Scenario JSON file or bundled name")->required();
    verify->add_option("--trials", verify_trials, "Random load vectors")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--out", out_path, "JSON report (stdout if omitted)");

    // compare
    auto* compare = app.add_subcommand("compare", "Centralised versus distributed transmit power over a p_min sweep");
    std::string values_text = "5:50:10";
    compare->add_option("--scenario", scenario_path, "Scenario JSON file or bundled name")->required();
    compare->add_option("--receiver", receiver, "Receiver whose p_min is swept (1-based)")->check(CLI::PositiveNumber);
    compare->add_option("--values", values_text, "p_min grid lo:hi:count[:log]");
    compare->add_option("--dz", dz, "z step");
    compare->add_option("--dx", dx, "Load step");
    compare->add_option("--kmax", k_max, "Iteration cap")->check(CLI::PositiveNumber);
    compare->add_option("--trials", trials, "Feasible trials per point")->check(CLI::PositiveNumber);
    compare->add_option("--seed", seed, "First seed");
    compare->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (trials == 0 || verify_trials == 0) throw std::invalid_argument("--trials must be >= 1");
        const mrc::SystemScenario base = mrc::load_scenario(scenario_path);

        if (sweep->parsed()) {
            if (receiver > base.size()) throw std::invalid_argument("--receiver out of range");
            const GridSpec grid = parse_grid(grid_text);
            mrc::LoadVector loads = base.nominal_loads();
            for (const auto& [n, value] : parse_assignments(fixed_text, 'x', "--fixed", base.size())) loads[n] = value;
            const auto rows = mrc::sweep(base, loads, receiver - 1, grid.values());

            Output out(out_path);
            auto m = manifest("sweep", scenario_path);
            m.parameters = {{"receiver", std::to_string(receiver)}, {"grid", grid_text}};
            for (std::size_t n = 0; n < base.size(); ++n) {
                if (n != receiver - 1) m.parameters["x" + std::to_string(n + 1)] = fmt(loads[n]);
            }
            m.outputs = {{"table", out.name()}};
            mrc::write_sweep_csv(out.stream(), m, base.size(), rows);
            return 0;
        }

        if (optimize->parsed()) {
            const mrc::SystemScenario scenario = apply_pmin(base, pmin_text);
            const auto result = mrc::minimize_ptx(scenario, dz);
            Output out(out_path);
            auto m = manifest("optimize", scenario_path);
            m.parameters = {{"dz", fmt(dz)}};
            if (!pmin_text.empty()) m.parameters["pmin"] = pmin_text;
            m.outputs = {{"result", out.name()}};
            mrc::write_optimization_csv(out.stream(), m, scenario.size(), result);
            if (result.status == mrc::OptimizationStatus::infeasible) {
                std::cerr << "mrc-grid: infeasible after " << result.iterations << " z steps\n";
            }
            return 0;
        }

        if (simulate->parsed()) {
            const mrc::SystemScenario scenario = apply_pmin(base, pmin_text);
            mrc::ProtocolConfig config;
            config.dx = dx;
            config.k_max = k_max;
            config.seed = seed;

            auto m = manifest("simulate", scenario_path);
            m.parameters = {{"dx", fmt(dx)},
                            {"kmax", std::to_string(k_max)},
                            {"trials", std::to_string(trials)},
                            {"seed", std::to_string(seed)},
                            {"generator", std::string(mrc::kInitialLoadGenerator)},
                            {"until_feasible", until_feasible ? "true" : "false"}};
            if (!pmin_text.empty()) m.parameters["pmin"] = pmin_text;

            if (!trace_path.empty()) {
                Output trace_out(trace_path);
                auto tm = m;
                tm.outputs = {{"trace", trace_out.name()}};
                const auto trace = mrc::run_protocol(scenario, config);
                mrc::write_trace_csv(trace_out.stream(), tm, scenario.size(), trace);
            }

            mrc::BatchOptions options;
            options.until_feasible = until_feasible;
            const auto summary = mrc::batch_run(scenario, config, trials, options);
            if (!trials_path.empty()) {
                Output trials_out(trials_path);
                auto tm = m;
                tm.outputs = {{"trials", trials_out.name()}};
                mrc::write_trials_csv(trials_out.stream(), tm, scenario.size(), summary);
            }
            Output out(out_path);
            m.outputs = {{"summary", out.name()}};
            if (!trace_path.empty()) m.outputs["trace"] = trace_path;
            mrc::write_batch_csv(out.stream(), m, summary);
            return 0;
        }

        if (verify->parsed()) {
            mrc::VerifyOptions options;
            options.seed = seed;
            const auto report = mrc::verify_scenario(base, verify_trials, options, scenario_path);
            Output out(out_path);
            out.stream() << report.to_json() << '\n';
            if (!report.pass()) {
                std::cerr << "mrc-grid: property failures in " << scenario_path << '\n';
                return 1;
            }
            return 0;
        }

        if (compare->parsed()) {
            if (receiver > base.size()) throw std::invalid_argument("--receiver out of range");
            const GridSpec values = parse_grid(values_text);
            Output out(out_path);
            auto m = manifest("compare", scenario_path);
            m.parameters = {{"receiver", std::to_string(receiver)}, {"values", values_text}, {"dz", fmt(dz)},
                            {"dx", fmt(dx)}, {"kmax", std::to_string(k_max)}, {"trials", std::to_string(trials)},
                            {"seed", std::to_string(seed)}};
            m.outputs = {{"table", out.name()}};
            auto& os = out.stream();
            os << m.header_line() << '\n';
            os << "p_min,central_p_tx,distributed_p_tx,gap,feasible_trials,infeasible_trials,non_converged_trials\n";
            for (double p : values.values()) {
                const auto scenario = base.with_p_min(receiver - 1, p);
                const auto central = mrc::minimize_ptx(scenario, dz);
                mrc::ProtocolConfig config{dx, k_max, seed};
                mrc::BatchOptions options;
                options.until_feasible = true;
                const auto summary = mrc::batch_run(scenario, config, trials, options);
                const bool ok = central.status == mrc::OptimizationStatus::optimal;
                os << fmt(p) << ',' << (ok ? fmt(central.p_tx) : "") << ',' << fmt(summary.mean_p_tx) << ','
                   << (ok ? fmt(summary.mean_p_tx / central.p_tx - 1.0) : "") << ',' << summary.feasible << ','
                   << summary.infeasible << ',' << summary.non_converged << '\n';
                std::cerr << "mrc-grid: p_min=" << p << " done (" << summary.trials << " trials)\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "mrc-grid: error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

#include "mrc/csv.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>

namespace mrc {

namespace {

void numbered_columns(std::ostream& out, const char* prefix, std::size_t count) {
    for (std::size_t n = 1; n <= count; ++n) out << ',' << prefix << n;
}

std::string feedback_field(const std::vector<bool>& bits, std::size_t active, std::size_t receivers) {
    // One character per receiver, '-' at the active receiver's own slot.
    std::string s(receivers, '-');
    std::size_t b = 0;
    for (std::size_t m = 0; m < receivers; ++m) {
        if (m == active) continue;
        s[m] = bits.at(b++) ? '1' : '0';
    }
    return s;
}

}  // namespace

std::string RunManifest::header_line() const {
    nlohmann::ordered_json doc;
    doc["subcommand"] = subcommand;
    doc["scenario"] = scenario;
    doc["parameters"] = parameters;
    doc["outputs"] = outputs;
    doc["version"] = version;
    if (!timestamp.empty()) doc["timestamp"] = timestamp;
    return "# " + doc.dump();
}

std::string tool_version() { return MRC_VERSION; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_sweep_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                     const std::vector<SweepRow>& rows) {
    out << manifest.header_line() << '\n';
    out << "x_n,p_tx";
    numbered_columns(out, "p_", receivers);
    out << ",p_sum\n";
    for (const auto& row : rows) {
        out << format_number(row.x) << ',' << format_number(row.report.p_tx);
        for (double p : row.report.p) out << ',' << format_number(p);
        out << ',' << format_number(row.report.p_sum) << '\n';
    }
}

void write_optimization_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                            const OptimizationResult& result) {
    out << manifest.header_line() << '\n';
    out << "status,z_star,p_tx";
    numbered_columns(out, "x_", receivers);
    numbered_columns(out, "p_", receivers);
    out << '\n';
    if (result.status == OptimizationStatus::infeasible) {
        out << "infeasible,,";
        for (std::size_t n = 0; n < 2 * receivers; ++n) out << ',';
        out << '\n';
        return;
    }
    out << "optimal," << format_number(result.z_star) << ',' << format_number(result.p_tx);
    for (double x : result.loads.values()) out << ',' << format_number(x);
    for (double p : result.report.p) out << ',' << format_number(p);
    out << '\n';
}

void write_trace_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                     const ProtocolTrace& trace) {
    out << manifest.header_line() << '\n';
    out << "iter,n,fb_bits,case";
    numbered_columns(out, "x_", receivers);
    out << ",p_tx";
    numbered_columns(out, "p_", receivers);
    out << '\n';
    for (const auto& rec : trace.records) {
        out << rec.iteration << ',' << rec.n + 1 << ',' << feedback_field(rec.feedback, rec.n, receivers) << ','
            << to_string(rec.update);
        for (double x : rec.loads.values()) out << ',' << format_number(x);
        out << ',' << format_number(rec.report.p_tx);
        for (double p : rec.report.p) out << ',' << format_number(p);
        out << '\n';
    }
}

void write_batch_csv(std::ostream& out, const RunManifest& manifest, const BatchSummary& summary) {
    out << manifest.header_line() << '\n';
    out << "trials,feasible,infeasible,non_converged,mean_p_tx\n";
    out << summary.trials << ',' << summary.feasible << ',' << summary.infeasible << ',' << summary.non_converged
        << ',' << format_number(summary.mean_p_tx) << '\n';
}

void write_trials_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                      const BatchSummary& summary) {
    out << manifest.header_line() << '\n';
    out << "seed,converged,feasible,iterations,p_tx";
    numbered_columns(out, "x_", receivers);
    out << '\n';
    for (const auto& t : summary.outcomes) {
        out << t.seed << ',' << (t.converged ? 1 : 0) << ',' << (t.feasible ? 1 : 0) << ',' << t.iterations << ','
            << format_number(t.p_tx);
        for (double x : t.final_loads.values()) out << ',' << format_number(x);
        out << '\n';
    }
}

}  // namespace mrc

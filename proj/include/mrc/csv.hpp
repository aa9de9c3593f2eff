#pragma once

// CSV emitters. Every file opens with one "# " comment line carrying the
// run manifest as compact JSON; the timestamp lives only there, so bodies
// of identical runs are byte-identical.

#include "mrc/analysis.hpp"
#include "mrc/centralized.hpp"
#include "mrc/distributed.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace mrc {

struct RunManifest {
    std::string subcommand;
    std::string scenario;
    std::map<std::string, std::string> parameters;  // resolved, already formatted
    std::map<std::string, std::string> outputs;
    std::string version;
    std::string timestamp;  // ISO-8601 UTC; empty to omit

    std::string header_line() const;
};

std::string tool_version();
std::string utc_timestamp();

/// %.12g
std::string format_number(double value);

void write_sweep_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                     const std::vector<SweepRow>& rows);

void write_optimization_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                            const OptimizationResult& result);

void write_trace_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                     const ProtocolTrace& trace);

void write_batch_csv(std::ostream& out, const RunManifest& manifest, const BatchSummary& summary);

/// One row per trial: seed, flags, iterations, final p_tx and loads.
void write_trials_csv(std::ostream& out, const RunManifest& manifest, std::size_t receivers,
                      const BatchSummary& summary);

}  // namespace mrc

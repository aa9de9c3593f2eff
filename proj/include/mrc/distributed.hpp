#pragma once

// Round-robin load adjustment driven by local power probes and one-bit
// feedback from the other receivers.
//
// Each iteration one receiver n is active. It reads FB_m = (p_m >= p_min,m)
// from every other receiver, probes its own power at x_n - dx, x_n and
// x_n + dx, and applies one of five update cases:
//
//   C1  p_n < p_min, below peak   -> x_n + dx (clamped to x_max)
//   C2  p_n < p_min, above peak   -> x_n - dx (clamped to x_min)
//   C3  p_n > p_min, off peak, some FB_m = 0 -> x_n + dx
//   C4  p_n > p_min, off peak, all FB_m = 1  -> x_n - dx
//   C5  anything else             -> no change

#include "mrc/circuit.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mrc {

enum class PeakPosition { below_peak, at_peak, above_peak };

enum class UpdateCase { c1 = 1, c2, c3, c4, c5 };

std::string_view to_string(PeakPosition position);
std::string_view to_string(UpdateCase update);

struct ProbeOutcome {
    double p_minus = 0.0;
    double p_centre = 0.0;
    double p_plus = 0.0;
};

/// The probe below x_n falls back to x_n / 2 when x_n - dx would not be
/// positive. Probes are evaluated even outside [x_min, x_max].
ProbeOutcome probe(const SystemScenario& scenario, const LoadVector& loads, std::size_t n, double dx);

/// Rising on both sides -> below peak, falling on both sides -> above peak,
/// anything else (a local maximum or a tie) -> at peak.
PeakPosition classify(const ProbeOutcome& probes);

PeakPosition classify_position(const SystemScenario& scenario, const LoadVector& loads, std::size_t n, double dx);

struct StepOutcome {
    double x = 0.0;  // updated x_n
    UpdateCase update = UpdateCase::c5;
    PeakPosition position = PeakPosition::at_peak;
    ProbeOutcome probes;
};

/// `feedback` holds the N-1 bits of the other receivers in index order.
StepOutcome agent_step(const SystemScenario& scenario, const LoadVector& loads, std::size_t n,
                       const std::vector<bool>& feedback, double dx);

/// FB_m for every receiver m at `loads`.
std::vector<bool> feedback_bits(const SystemScenario& scenario, const LoadVector& loads);

struct ProtocolConfig {
    double dx = 1e-3;
    std::size_t k_max = 100000;
    std::uint64_t seed = 0;
    /// Longest limit cycle (in full rounds) the convergence detector looks for.
    std::size_t cycle_window = 64;
};

void validate(const ProtocolConfig& config);

/// Initial loads drawn uniformly from [x_min, x_max] per receiver with
/// std::mt19937_64 seeded by `seed`, one 53-bit draw per receiver.
LoadVector initial_loads(const SystemScenario& scenario, std::uint64_t seed);

inline constexpr std::string_view kInitialLoadGenerator = "mt19937_64/53-bit-uniform";

struct IterationRecord {
    std::size_t iteration = 0;  // 1-based
    std::size_t n = 0;          // active receiver
    std::vector<bool> feedback;  // N-1 bits, other receivers in index order
    ProbeOutcome probes;
    PeakPosition position = PeakPosition::at_peak;
    UpdateCase update = UpdateCase::c5;
    double x_before = 0.0;
    double x_after = 0.0;
    LoadVector loads;  // after the update
    PowerReport report;  // after the update
};

struct ProtocolTrace {
    ProtocolConfig config;
    std::string generator{kInitialLoadGenerator};
    LoadVector initial;
    std::vector<IterationRecord> records;

    // The state sequence is periodic from some round on (a fixed point is a
    // cycle of one round). After detection the protocol keeps running for at
    // most one period and stops at the first state meeting every power floor.
    bool converged = false;
    std::size_t cycle_rounds = 0;  // detected period, 0 if none
    std::size_t converged_at = 0;  // iteration count when the cycle was detected
    bool feasible = false;         // every p_n >= p_min at the final loads
    LoadVector final_loads;
    PowerReport final_report;
};

ProtocolTrace run_protocol(const SystemScenario& scenario, const ProtocolConfig& config);

struct TraceAudit {
    std::size_t records = 0;
    std::size_t bounds_violations = 0;
    std::size_t mutator_violations = 0;
    std::size_t case_violations = 0;
    std::size_t feedback_violations = 0;
    std::size_t terminal_violations = 0;
    std::vector<std::string> messages;  // first few violations, for diagnostics

    std::size_t violations() const {
        return bounds_violations + mutator_violations + case_violations + feedback_violations +
               terminal_violations;
    }
    bool ok() const { return violations() == 0; }
};

/// Replays every record from the initial loads and checks bounds safety,
/// the single-mutator rule, case soundness, feedback truthfulness and the
/// terminal flags.
TraceAudit audit_trace(const SystemScenario& scenario, const ProtocolTrace& trace);

class NoFeasibleTrials : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    bool converged = false;
    bool feasible = false;
    std::size_t iterations = 0;
    double p_tx = 0.0;
    LoadVector final_loads;
};

struct BatchSummary {
    std::size_t trials = 0;
    std::size_t feasible = 0;        // converged with every floor met
    std::size_t infeasible = 0;      // converged, some floor missed
    std::size_t non_converged = 0;   // hit k_max first
    double mean_p_tx = 0.0;          // over feasible trials
    std::vector<TrialOutcome> outcomes;
    std::size_t audit_violations = 0;
};

struct BatchOptions {
    /// Keep drawing seeds until this many feasible trials, instead of
    /// running exactly `trials` seeds.
    bool until_feasible = false;
    std::size_t max_attempts = 0;  // 0 -> 20 * trials
    bool audit = false;            // run audit_trace on every trace
};

/// Seeds config.seed, config.seed + 1, ... Throws NoFeasibleTrials when no
/// trial ends converged and feasible.
BatchSummary batch_run(const SystemScenario& scenario, const ProtocolConfig& config, std::size_t trials,
                       const BatchOptions& options = {});

}  // namespace mrc

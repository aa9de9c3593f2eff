#include "mrc/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

namespace mrc {

namespace {

bool meets_floors(const SystemScenario& scenario, const PowerReport& report) {
    for (std::size_t m = 0; m < scenario.size(); ++m) {
        if (!(report.p[m] >= scenario.receiver(m).p_min)) return false;
    }
    return true;
}

bool same_state(const LoadVector& a, const LoadVector& b, double tol) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k] - b[k]) > tol) return false;
    }
    return true;
}

std::vector<bool> others(const std::vector<bool>& all, std::size_t n) {
    std::vector<bool> out;
    out.reserve(all.size() - 1);
    for (std::size_t m = 0; m < all.size(); ++m) {
        if (m != n) out.push_back(all[m]);
    }
    return out;
}

UpdateCase expected_case(double p_centre, double p_min, PeakPosition position, const std::vector<bool>& feedback) {
    if (p_centre < p_min) {
        if (position == PeakPosition::below_peak) return UpdateCase::c1;
        if (position == PeakPosition::above_peak) return UpdateCase::c2;
        return UpdateCase::c5;
    }
    if (p_centre > p_min && position != PeakPosition::at_peak) {
        const bool all_met = std::all_of(feedback.begin(), feedback.end(), [](bool b) { return b; });
        return all_met ? UpdateCase::c4 : UpdateCase::c3;
    }
    return UpdateCase::c5;
}

double state_tolerance(double dx) { return 1e-6 * dx; }

}  // namespace

std::string_view to_string(PeakPosition position) {
    switch (position) {
        case PeakPosition::below_peak: return "below-peak";
        case PeakPosition::at_peak: return "at-peak";
        case PeakPosition::above_peak: return "above-peak";
    }
    return "?";
}

std::string_view to_string(UpdateCase update) {
    switch (update) {
        case UpdateCase::c1: return "C1";
        case UpdateCase::c2: return "C2";
        case UpdateCase::c3: return "C3";
        case UpdateCase::c4: return "C4";
        case UpdateCase::c5: return "C5";
    }
    return "?";
}

ProbeOutcome probe(const SystemScenario& scenario, const LoadVector& loads, std::size_t n, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("dx must be > 0");
    if (n >= scenario.size()) throw std::out_of_range("receiver index out of range");
    LoadVector x = loads;
    const double centre = loads[n];
    ProbeOutcome out;
    out.p_centre = load_power(scenario, x, n);
    x[n] = centre + dx;
    out.p_plus = load_power(scenario, x, n);
    x[n] = centre - dx > 0.0 ? centre - dx : 0.5 * centre;
    out.p_minus = load_power(scenario, x, n);
    return out;
}

PeakPosition classify(const ProbeOutcome& probes) {
    const bool up_right = probes.p_plus > probes.p_centre;
    const bool down_right = probes.p_plus < probes.p_centre;
    const bool up_left = probes.p_minus > probes.p_centre;
    const bool down_left = probes.p_minus < probes.p_centre;
    if (up_right && down_left) return PeakPosition::below_peak;
    if (down_right && up_left) return PeakPosition::above_peak;
    return PeakPosition::at_peak;
}

PeakPosition classify_position(const SystemScenario& scenario, const LoadVector& loads, std::size_t n, double dx) {
    check_loads(scenario, loads);
    return classify(probe(scenario, loads, n, dx));
}

std::vector<bool> feedback_bits(const SystemScenario& scenario, const LoadVector& loads) {
    std::vector<bool> bits(scenario.size());
    for (std::size_t m = 0; m < scenario.size(); ++m) {
        bits[m] = load_power(scenario, loads, m) >= scenario.receiver(m).p_min;
    }
    return bits;
}

StepOutcome agent_step(const SystemScenario& scenario, const LoadVector& loads, std::size_t n,
                       const std::vector<bool>& feedback, double dx) {
    if (n >= scenario.size()) throw std::out_of_range("receiver index out of range");
    if (feedback.size() + 1 != scenario.size()) {
        throw std::invalid_argument("feedback must carry one bit per other receiver");
    }
    const auto& rx = scenario.receiver(n);
    StepOutcome out;
    out.probes = probe(scenario, loads, n, dx);
    out.position = classify(out.probes);
    out.update = expected_case(out.probes.p_centre, rx.p_min, out.position, feedback);
    const double x = loads[n];
    switch (out.update) {
        case UpdateCase::c1:
        case UpdateCase::c3: out.x = std::min(rx.x_max, x + dx); break;
        case UpdateCase::c2:
        case UpdateCase::c4: out.x = std::max(rx.x_min, x - dx); break;
        case UpdateCase::c5: out.x = x; break;
    }
    return out;
}

void validate(const ProtocolConfig& config) {
    if (!std::isfinite(config.dx) || config.dx <= 0.0) throw std::invalid_argument("dx must be finite and > 0");
    if (config.k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (config.cycle_window < 1) throw std::invalid_argument("cycle_window must be >= 1");
}

LoadVector initial_loads(const SystemScenario& scenario, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<double> x(scenario.size());
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const auto& rx = scenario.receiver(n);
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        x[n] = std::clamp(rx.x_min + u * (rx.x_max - rx.x_min), rx.x_min, rx.x_max);
    }
    return LoadVector(std::move(x));
}

ProtocolTrace run_protocol(const SystemScenario& scenario, const ProtocolConfig& config) {
    validate(config);
    const std::size_t count = scenario.size();
    const double tol = state_tolerance(config.dx);

    ProtocolTrace trace;
    trace.config = config;
    trace.initial = initial_loads(scenario, config.seed);
    trace.records.reserve(std::min<std::size_t>(config.k_max, 1u << 20));

    LoadVector x = trace.initial;
    PowerReport report = solve_closed_form(scenario, x);
    std::deque<LoadVector> round_starts;
    std::size_t silent = 0;
    std::size_t stop_at = 0;

    for (std::size_t k = 0; k < config.k_max; ++k) {
        const std::size_t n = k % count;
        if (n == 0 && !trace.converged) {
            for (std::size_t back = 1; back <= round_starts.size(); ++back) {
                if (same_state(round_starts[round_starts.size() - back], x, tol)) {
                    trace.converged = true;
                    trace.cycle_rounds = back;
                    trace.converged_at = k;
                    stop_at = k + back * count;
                    break;
                }
            }
            if (trace.converged && meets_floors(scenario, report)) break;
            round_starts.push_back(x);
            if (round_starts.size() > config.cycle_window) round_starts.pop_front();
        }

        const std::vector<bool> received = others(feedback_bits(scenario, x), n);
        const StepOutcome step = agent_step(scenario, x, n, received, config.dx);

        IterationRecord rec;
        rec.iteration = k + 1;
        rec.n = n;
        rec.feedback = received;
        rec.probes = step.probes;
        rec.position = step.position;
        rec.update = step.update;
        rec.x_before = x[n];
        rec.x_after = step.x;
        x[n] = step.x;
        report = solve_closed_form(scenario, x);
        rec.loads = x;
        rec.report = report;
        trace.records.push_back(std::move(rec));

        if (!trace.converged) {
            silent = step.update == UpdateCase::c5 ? silent + 1 : 0;
            if (silent >= count) {
                trace.converged = true;
                trace.cycle_rounds = 1;
                trace.converged_at = k + 1;
                break;
            }
        } else if (meets_floors(scenario, report) || k + 1 >= stop_at) {
            break;
        }
    }

    trace.final_loads = x;
    trace.final_report = report;
    trace.feasible = meets_floors(scenario, report);
    return trace;
}

TraceAudit audit_trace(const SystemScenario& scenario, const ProtocolTrace& trace) {
    TraceAudit audit;
    const std::size_t count = scenario.size();
    const double dx = trace.config.dx;
    auto note = [&](std::size_t& counter, std::size_t iteration, const std::string& what) {
        ++counter;
        if (audit.messages.size() < 16) {
            audit.messages.push_back("iteration " + std::to_string(iteration) + ": " + what);
        }
    };
    auto in_bounds = [&](const LoadVector& x) {
        for (std::size_t k = 0; k < count; ++k) {
            const auto& rx = scenario.receiver(k);
            if (x[k] < rx.x_min || x[k] > rx.x_max) return false;
        }
        return true;
    };

    if (trace.initial.size() != count || !in_bounds(trace.initial)) {
        note(audit.bounds_violations, 0, "initial loads outside bounds");
        return audit;
    }
    if (trace.initial != initial_loads(scenario, trace.config.seed)) {
        note(audit.terminal_violations, 0, "initial loads do not match the seeded generator");
    }

    LoadVector x = trace.initial;
    std::vector<LoadVector> round_starts;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& rec = trace.records[i];
        ++audit.records;
        const std::size_t n = i % count;
        if (n == 0) round_starts.push_back(x);
        if (rec.iteration != i + 1 || rec.n != n) {
            note(audit.case_violations, rec.iteration, "out-of-order record");
        }

        const std::vector<bool> truth = others(feedback_bits(scenario, x), n);
        if (truth != rec.feedback) note(audit.feedback_violations, rec.iteration, "feedback bit mismatch");

        const auto& rx = scenario.receiver(n);
        if (classify(rec.probes) != rec.position ||
            expected_case(rec.probes.p_centre, rx.p_min, rec.position, rec.feedback) != rec.update) {
            note(audit.case_violations, rec.iteration, "recorded case inconsistent with recorded probes");
        }
        const StepOutcome replay = agent_step(scenario, x, n, truth, dx);
        if (replay.update != rec.update || replay.x != rec.x_after || replay.position != rec.position) {
            note(audit.case_violations, rec.iteration,
                 std::string("replay took ") + std::string(to_string(replay.update)) + ", record says " +
                     std::string(to_string(rec.update)));
        }

        if (rec.loads.size() != count) {
            note(audit.mutator_violations, rec.iteration, "load vector has wrong size");
            break;
        }
        for (std::size_t m = 0; m < count; ++m) {
            if (m != n && rec.loads[m] != x[m]) note(audit.mutator_violations, rec.iteration, "inactive load changed");
        }
        const double before = x[n];
        const double after = rec.loads[n];
        const bool legal = after == before || after == before + dx || after == before - dx ||
                           after == rx.x_min || after == rx.x_max;
        if (!legal || rec.x_before != before || rec.x_after != after) {
            note(audit.mutator_violations, rec.iteration, "active load moved by something other than dx or a clamp");
        }
        if (!in_bounds(rec.loads)) note(audit.bounds_violations, rec.iteration, "load outside bounds");
        x = rec.loads;
    }

    const std::size_t last = trace.records.size();
    if (!(trace.final_loads == x)) note(audit.terminal_violations, last, "final loads differ from last record");
    const bool feasible = meets_floors(scenario, solve_closed_form(scenario, x));
    if (feasible != trace.feasible) note(audit.terminal_violations, last, "feasible flag is wrong");
    if (trace.converged) {
        const std::size_t at = trace.converged_at;
        bool justified = false;
        if (trace.cycle_rounds >= 1 && at % count == 0) {
            const std::size_t round = at / count;
            // A cycle detected at the start of `round` compares against an earlier round start.
            if (round >= trace.cycle_rounds && round <= round_starts.size()) {
                const LoadVector& now = round == round_starts.size() ? x : round_starts[round];
                justified = same_state(round_starts[round - trace.cycle_rounds], now, state_tolerance(dx));
            }
        }
        if (!justified && at >= count && at <= last) {
            justified = std::all_of(trace.records.begin() + static_cast<std::ptrdiff_t>(at - count),
                                    trace.records.begin() + static_cast<std::ptrdiff_t>(at),
                                    [](const auto& r) { return r.update == UpdateCase::c5; });
        }
        if (!justified) note(audit.terminal_violations, last, "convergence claim not reproducible");
    }
    return audit;
}

BatchSummary batch_run(const SystemScenario& scenario, const ProtocolConfig& config, std::size_t trials,
                       const BatchOptions& options) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    validate(config);
    const std::size_t attempts = options.until_feasible
                                     ? (options.max_attempts ? options.max_attempts : 20 * trials)
                                     : trials;

    BatchSummary summary;
    double total = 0.0;
    for (std::size_t t = 0; t < attempts; ++t) {
        if (options.until_feasible && summary.feasible >= trials) break;
        ProtocolConfig run = config;
        run.seed = config.seed + t;
        const ProtocolTrace trace = run_protocol(scenario, run);
        if (options.audit) summary.audit_violations += audit_trace(scenario, trace).violations();

        TrialOutcome outcome;
        outcome.seed = run.seed;
        outcome.converged = trace.converged;
        outcome.feasible = trace.converged && trace.feasible;
        outcome.iterations = trace.records.size();
        outcome.p_tx = trace.final_report.p_tx;
        outcome.final_loads = trace.final_loads;

        ++summary.trials;
        if (!trace.converged) {
            ++summary.non_converged;
        } else if (trace.feasible) {
            ++summary.feasible;
            total += outcome.p_tx;
        } else {
            ++summary.infeasible;
        }
        summary.outcomes.push_back(std::move(outcome));
    }

    if (summary.feasible == 0) {
        std::ostringstream os;
        os << "no feasible trial among " << summary.trials << " (" << summary.infeasible << " infeasible, "
           << summary.non_converged << " non-converged)";
        throw NoFeasibleTrials(os.str());
    }
    summary.mean_p_tx = total / static_cast<double>(summary.feasible);
    return summary;
}

}  // namespace mrc

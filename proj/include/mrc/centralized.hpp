#pragma once

// Minimum transmit power subject to per-load power floors.
//
// The source sees an input resistance 1/z, so p_tx = |v_tx|^2 z / 2 and the
// problem reduces to finding the smallest z for which some admissible load
// vector both meets every power floor and produces exactly that z. For a
// fixed z each floor becomes a window [x_L, x_U] on x_n, and the z equation
// becomes a hyperplane in y_n = 1/(r_n + x_n). The search sweeps z upward in
// fixed steps from its lower bound.

#include "mrc/circuit.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mrc {

struct ZBracket {
    double z_lo = 0.0;  // z with every load at x_min
    double z_hi = 0.0;  // z with every load at x_max
    double dz = 0.0;
};

/// Throws std::invalid_argument unless dz > 0.
ZBracket z_bracket(const SystemScenario& scenario, double dz);

struct ReceiverWindow {
    double alpha = 0.0;  // |v_tx|^2 w^2 h_n^2 / (2 p_min)
    bool c1 = false;     // alpha z^2 / 4 >= r_n
    // The fields below are only meaningful when c1 holds.
    std::optional<bool> c2;  // [x_min, x_max] and [x_L, x_U] overlap
    double x_lower = 0.0;    // x_L
    double x_upper = 0.0;    // x_U
    double y_lo = 0.0;       // 1/(r_n + min(x_max, x_U))
    double y_hi = 0.0;       // 1/(r_n + max(x_min, x_L))
};

struct FeasibilityVerdict {
    double z = 0.0;
    std::vector<ReceiverWindow> receivers;
    /// Unset when some receiver fails C1 or C2.
    std::optional<bool> c3;
    double y_target = 0.0;  // 1/z - r_tx
    double y_sum_lo = 0.0;  // w^2 sum h_k^2 y_lo_k
    double y_sum_hi = 0.0;  // w^2 sum h_k^2 y_hi_k

    bool all_c1() const;
    bool all_c2() const;
    bool feasible() const { return c3.value_or(false); }
};

/// Relative slack on the C3 envelope comparison.
inline constexpr double kHyperplaneTolerance = 1e-12;

FeasibilityVerdict check_feasibility(const SystemScenario& scenario, double z);

/// Greedy fill from the lower y envelope, in receiver order, until the
/// hyperplane is met. Throws std::logic_error when the verdict is not
/// feasible.
LoadVector pick_feasible_point(const FeasibilityVerdict& verdict, const SystemScenario& scenario);

enum class OptimizationStatus { optimal, infeasible };

struct OptimizationResult {
    OptimizationStatus status = OptimizationStatus::infeasible;
    double z_star = 0.0;
    double p_tx = 0.0;  // |v_tx|^2 z_star / 2
    LoadVector loads;
    PowerReport report;
    std::size_t iterations = 0;  // z values examined
};

/// z-sweep: z_lo, z_lo + dz, ... while z <= z_hi, then z_hi itself if the
/// last grid point fell short of it.
OptimizationResult minimize_ptx(const SystemScenario& scenario, double dz);

struct FeasibilityProfile {
    std::vector<double> z;
    std::vector<bool> feasible;
    /// z values that fail after an earlier z already passed.
    std::vector<double> regressions;
};

/// Evaluates every z of the sweep grid, not stopping at the first pass.
FeasibilityProfile feasibility_profile(const SystemScenario& scenario, double dz);

}  // namespace mrc

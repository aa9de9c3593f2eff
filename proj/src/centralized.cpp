#include "mrc/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrc {

namespace {

double z_at(const SystemScenario& scenario, const LoadVector& loads) {
    return 1.0 / input_resistance(scenario, loads);
}

template <typename Visit>
void for_each_sweep_z(const ZBracket& bracket, Visit&& visit) {
    double last = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double z = bracket.z_lo + bracket.dz * static_cast<double>(k);
        if (z > bracket.z_hi) break;
        last = z;
        if (!visit(z)) return;
    }
    if (last < bracket.z_hi) visit(bracket.z_hi);
}

}  // namespace

bool FeasibilityVerdict::all_c1() const {
    return std::all_of(receivers.begin(), receivers.end(), [](const auto& w) { return w.c1; });
}

bool FeasibilityVerdict::all_c2() const {
    return std::all_of(receivers.begin(), receivers.end(), [](const auto& w) { return w.c2.value_or(false); });
}

ZBracket z_bracket(const SystemScenario& scenario, double dz) {
    if (!std::isfinite(dz) || dz <= 0.0) throw std::invalid_argument("dz must be finite and > 0");
    return {z_at(scenario, scenario.lower_bounds()), z_at(scenario, scenario.upper_bounds()), dz};
}

FeasibilityVerdict check_feasibility(const SystemScenario& scenario, double z) {
    if (!std::isfinite(z) || z <= 0.0) throw std::invalid_argument("z must be finite and > 0");

    FeasibilityVerdict verdict;
    verdict.z = z;
    verdict.y_target = 1.0 / z - scenario.transmitter().r;
    verdict.receivers.reserve(scenario.size());

    bool windows_ok = true;
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const auto& rx = scenario.receiver(n);
        ReceiverWindow w;
        w.alpha = scenario.source_power_scale() * scenario.coupling(n) / (2.0 * rx.p_min);
        // Same expression as the square-root radicand divided by alpha.
        const double slack = w.alpha * z * z / 4.0 - rx.r;
        w.c1 = slack >= 0.0;
        if (w.c1) {
            const double centre = w.alpha * z * z / 2.0 - rx.r;
            const double half_width = z * std::sqrt(w.alpha * slack);
            w.x_upper = centre + half_width;
            // The roots multiply to r_n^2; dividing avoids cancellation in the smaller one.
            w.x_lower = w.x_upper > 0.0 ? rx.r * rx.r / w.x_upper : centre - half_width;
            const double lo = std::max(rx.x_min, w.x_lower);
            const double hi = std::min(rx.x_max, w.x_upper);
            w.c2 = lo <= hi;
            w.y_lo = 1.0 / (rx.r + hi);
            w.y_hi = 1.0 / (rx.r + lo);
            if (*w.c2) {
                verdict.y_sum_lo += scenario.coupling(n) * w.y_lo;
                verdict.y_sum_hi += scenario.coupling(n) * w.y_hi;
            }
        }
        windows_ok = windows_ok && w.c1 && w.c2.value_or(false);
        verdict.receivers.push_back(w);
    }

    if (windows_ok) {
        // Relative slack so the bracket ends, where the target equals an envelope sum, survive rounding.
        const double slack = kHyperplaneTolerance * std::max(std::abs(verdict.y_target), verdict.y_sum_hi);
        verdict.c3 = verdict.y_sum_lo - slack <= verdict.y_target && verdict.y_target <= verdict.y_sum_hi + slack;
    } else {
        verdict.y_sum_lo = verdict.y_sum_hi = 0.0;
    }
    return verdict;
}

LoadVector pick_feasible_point(const FeasibilityVerdict& verdict, const SystemScenario& scenario) {
    if (!verdict.feasible()) throw std::logic_error("pick_feasible_point: verdict is not feasible");
    if (verdict.receivers.size() != scenario.size()) {
        throw std::logic_error("pick_feasible_point: verdict does not belong to this scenario");
    }

    std::vector<double> x(scenario.size());
    double remaining = verdict.y_target - verdict.y_sum_lo;
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const auto& w = verdict.receivers[n];
        const auto& rx = scenario.receiver(n);
        const double g = scenario.coupling(n);
        const double capacity = g * (w.y_hi - w.y_lo);
        double y;
        if (remaining <= 0.0) {
            y = w.y_lo;
        } else if (remaining >= capacity) {
            y = w.y_hi;
            remaining -= capacity;
        } else {
            y = w.y_lo + remaining / g;
            remaining = 0.0;
        }
        const double lo = std::max(rx.x_min, w.x_lower);
        const double hi = std::min(rx.x_max, w.x_upper);
        if (y == w.y_lo) {
            x[n] = hi;
        } else if (y == w.y_hi) {
            x[n] = lo;
        } else {
            x[n] = std::clamp(1.0 / y - rx.r, lo, hi);
        }
    }
    return LoadVector(std::move(x));
}

OptimizationResult minimize_ptx(const SystemScenario& scenario, double dz) {
    const ZBracket bracket = z_bracket(scenario, dz);
    OptimizationResult result;
    for_each_sweep_z(bracket, [&](double z) {
        ++result.iterations;
        const FeasibilityVerdict verdict = check_feasibility(scenario, z);
        if (!verdict.feasible()) return true;
        result.status = OptimizationStatus::optimal;
        result.z_star = z;
        result.p_tx = 0.5 * scenario.source_power_scale() * z;
        result.loads = pick_feasible_point(verdict, scenario);
        result.report = solve_closed_form(scenario, result.loads);
        return false;
    });
    return result;
}

FeasibilityProfile feasibility_profile(const SystemScenario& scenario, double dz) {
    const ZBracket bracket = z_bracket(scenario, dz);
    FeasibilityProfile profile;
    bool passed = false;
    for_each_sweep_z(bracket, [&](double z) {
        const bool ok = check_feasibility(scenario, z).feasible();
        profile.z.push_back(z);
        profile.feasible.push_back(ok);
        if (passed && !ok) profile.regressions.push_back(z);
        passed = passed || ok;
        return true;
    });
    return profile;
}

}  // namespace mrc

#include "mrc/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrc {

namespace {

void check_index(const SystemScenario& scenario, std::size_t n) {
    if (n >= scenario.size()) {
        throw std::out_of_range("receiver index " + std::to_string(n) + " out of range for N = " +
                                std::to_string(scenario.size()));
    }
}

void check_grid_args(double lo, double hi, std::size_t count) {
    if (count == 0) throw std::invalid_argument("grid: count must be >= 1");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("grid: bounds must be finite");
}

}  // namespace

ReceiverSensitivity sensitivity(const SystemScenario& scenario, const LoadVector& loads, std::size_t n) {
    check_index(scenario, n);
    if (loads.size() != scenario.size()) throw InvalidScenario("loads: size does not match receiver count");

    ReceiverSensitivity s;
    s.n = n;
    for (std::size_t k = 0; k < scenario.size(); ++k) {
        if (k == n) continue;
        if (!(loads[k] > 0.0)) throw InvalidScenario("loads[" + std::to_string(k) + "]: must be > 0");
        const double rk = scenario.receiver(k).r + loads[k];
        s.phi += scenario.coupling(k) / rk;
        s.varphi += scenario.coupling(k) * loads[k] / (rk * rk);
    }

    const double r_tx = scenario.transmitter().r;
    const double r_n = scenario.receiver(n).r;
    const double g_n = scenario.coupling(n);
    const double base = r_tx + s.phi;
    s.x_dot = (r_n * base + g_n) / base;

    const double denom = base - 2.0 * s.varphi;
    if (denom <= 0.0) {
        s.x_ddot = Monotone{};
    } else {
        s.x_ddot = (r_n * base + g_n + 2.0 * r_n * s.varphi) / denom;
    }
    return s;
}

double peak_load(const SystemScenario& scenario, const LoadVector& loads, std::size_t n) {
    return sensitivity(scenario, loads, n).x_dot;
}

SumPeak sum_peak_load(const SystemScenario& scenario, const LoadVector& loads, std::size_t n) {
    return sensitivity(scenario, loads, n).x_ddot;
}

std::vector<SweepRow> sweep(const SystemScenario& scenario, const LoadVector& loads, std::size_t n,
                            std::span<const double> grid) {
    check_index(scenario, n);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    LoadVector x = loads;
    for (double value : grid) {
        if (!std::isfinite(value) || value <= 0.0) {
            throw std::invalid_argument("sweep: grid value must be finite and > 0, got " + std::to_string(value));
        }
        x[n] = value;
        rows.push_back({value, solve_closed_form(scenario, x)});
    }
    return rows;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    check_grid_args(lo, hi, count);
    if (count == 1) return {lo};
    std::vector<double> grid(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    check_grid_args(lo, hi, count);
    if (lo <= 0.0 || hi <= 0.0) throw std::invalid_argument("log grid: bounds must be > 0");
    if (count == 1) return {lo};
    std::vector<double> grid(count);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = std::exp(a + step * static_cast<double>(i));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace mrc

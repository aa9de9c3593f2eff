#pragma once

// Single-coordinate structure of the power functions: where load n's own
// power peaks, and whether the total delivered power peaks at all.

#include "mrc/circuit.hpp"

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace mrc {

/// Total delivered power increases without bound in x_n; there is no peak.
struct Monotone {
    friend bool operator==(Monotone, Monotone) = default;
};

using SumPeak = std::variant<Monotone, double>;

struct ReceiverSensitivity {
    std::size_t n = 0;
    double phi = 0.0;     // w^2 sum_{k!=n} h_k^2 / (r_k + x_k)
    double varphi = 0.0;  // w^2 sum_{k!=n} h_k^2 x_k / (r_k + x_k)^2
    double x_dot = 0.0;   // maximiser of p_n over x_n
    SumPeak x_ddot;       // maximiser of p_sum over x_n, if one exists
};

/// Throws std::out_of_range for n >= N. x_n itself is not read.
ReceiverSensitivity sensitivity(const SystemScenario& scenario, const LoadVector& loads, std::size_t n);

double peak_load(const SystemScenario& scenario, const LoadVector& loads, std::size_t n);

SumPeak sum_peak_load(const SystemScenario& scenario, const LoadVector& loads, std::size_t n);

struct SweepRow {
    double x = 0.0;
    PowerReport report;
};

/// One closed-form evaluation per grid value with every other load held at
/// `loads`. Rows come back in grid order.
std::vector<SweepRow> sweep(const SystemScenario& scenario, const LoadVector& loads, std::size_t n,
                            std::span<const double> grid);

std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace mrc

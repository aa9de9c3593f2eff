#pragma once

// One-transmitter, N-receiver magnetic resonant coupling circuit.
//
// All coils are series-compensated at the operating frequency, so the
// self-reactances cancel and only resistances and the transmitter-receiver
// mutual reactances w*h_n remain in the mesh equations. Receiver-receiver
// coupling is not representable.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrc {

using Complex = std::complex<double>;

/// Thrown when a scenario or a load vector violates its invariants.
class InvalidScenario : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when the generic linear solve meets a singular impedance matrix.
class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TransmitterSpec {
    double v_mag = 0.0;    // source voltage magnitude (V)
    double v_phase = 0.0;  // source voltage phase (rad)
    double r = 0.0;        // coil resistance (ohm)
    double l = 0.0;        // coil self-inductance (H)

    Complex voltage() const { return std::polar(v_mag, v_phase); }
};

struct ReceiverSpec {
    double r = 0.0;      // coil resistance (ohm)
    double l = 0.0;      // coil self-inductance (H)
    double h = 0.0;      // mutual inductance with the transmitter (H)
    double x_min = 0.0;  // load lower limit (ohm)
    double x_max = 0.0;  // load upper limit (ohm)
    double p_min = 0.0;  // required load power (W)
    std::optional<double> x_nominal;  // default load for sweeps; midpoint of the bounds if unset
};

class LoadVector {
public:
    LoadVector() = default;
    explicit LoadVector(std::vector<double> x) : x_(std::move(x)) {}
    LoadVector(std::initializer_list<double> x) : x_(x) {}

    std::size_t size() const { return x_.size(); }
    double operator[](std::size_t n) const { return x_[n]; }
    double& operator[](std::size_t n) { return x_[n]; }
    std::span<const double> values() const { return x_; }

    /// Copy with coordinate n replaced.
    LoadVector with(std::size_t n, double value) const {
        LoadVector out = *this;
        out.x_.at(n) = value;
        return out;
    }

    friend bool operator==(const LoadVector&, const LoadVector&) = default;

private:
    std::vector<double> x_;
};

/// Validated electrical description. Immutable after construction.
class SystemScenario {
public:
    SystemScenario(double omega, TransmitterSpec tx, std::vector<ReceiverSpec> receivers);

    double omega() const { return omega_; }
    const TransmitterSpec& transmitter() const { return tx_; }
    std::span<const ReceiverSpec> receivers() const { return receivers_; }
    const ReceiverSpec& receiver(std::size_t n) const { return receivers_.at(n); }
    std::size_t size() const { return receivers_.size(); }

    /// |v_tx|^2
    double source_power_scale() const { return tx_.v_mag * tx_.v_mag; }
    /// w^2 h_n^2, the squared mutual reactance.
    double coupling(std::size_t n) const { return coupling_[n]; }

    double tx_capacitance() const { return 1.0 / (tx_.l * omega_ * omega_); }
    double rx_capacitance(std::size_t n) const {
        return 1.0 / (receiver(n).l * omega_ * omega_);
    }

    LoadVector nominal_loads() const;
    LoadVector lower_bounds() const;
    LoadVector upper_bounds() const;

    /// Copy with receiver n's power threshold replaced.
    SystemScenario with_p_min(std::size_t n, double p_min) const;

private:
    double omega_;
    TransmitterSpec tx_;
    std::vector<ReceiverSpec> receivers_;
    std::vector<double> coupling_;
};

struct PowerReport {
    Complex i_tx;
    std::vector<Complex> i;
    double p_tx = 0.0;
    std::vector<double> p;
    double p_sum = 0.0;
};

enum class BoundsCheck { positive_only, enforce };

/// Throws InvalidScenario unless loads has one finite positive entry per
/// receiver (and, with BoundsCheck::enforce, lies inside the load limits).
void check_loads(const SystemScenario& scenario, const LoadVector& loads,
                 BoundsCheck bounds = BoundsCheck::positive_only);

/// (N+1)x(N+1) mesh impedance matrix at resonance.
Eigen::MatrixXcd impedance_matrix(const SystemScenario& scenario, const LoadVector& loads);

/// Product form of det(A); strictly positive.
double impedance_determinant(const SystemScenario& scenario, const LoadVector& loads);

/// r_tx + w^2 sum_k h_k^2 / (r_k + x_k), the resistance seen by the source.
double input_resistance(const SystemScenario& scenario, const LoadVector& loads);

/// First column of A^{-1} from its closed form.
Eigen::VectorXcd admittance_column(const SystemScenario& scenario, const LoadVector& loads);

/// Currents and powers from the closed-form expressions.
PowerReport solve_closed_form(const SystemScenario& scenario, const LoadVector& loads);

/// Currents from a dense LU solve of A i = v; powers from their definitions.
PowerReport solve_oracle(const SystemScenario& scenario, const LoadVector& loads);

/// Closed-form power delivered to load n only.
double load_power(const SystemScenario& scenario, const LoadVector& loads, std::size_t n);

}  // namespace mrc

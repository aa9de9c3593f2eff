#include "mrc/circuit.hpp"

#include <cmath>
#include <sstream>

namespace mrc {

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << field << ": " << what << " (got " << value << ")";
    throw InvalidScenario(os.str());
}

void require_positive(const std::string& field, double value) {
    if (!std::isfinite(value) || value <= 0.0) reject(field, "must be finite and > 0", value);
}

std::string receiver_field(std::size_t n, const char* name) {
    return "receivers[" + std::to_string(n) + "]." + name;
}

}  // namespace

SystemScenario::SystemScenario(double omega, TransmitterSpec tx, std::vector<ReceiverSpec> receivers)
    : omega_(omega), tx_(tx), receivers_(std::move(receivers)) {
    require_positive("omega", omega_);
    require_positive("transmitter.v_tx_mag", tx_.v_mag);
    if (!std::isfinite(tx_.v_phase)) reject("transmitter.v_tx_phase", "must be finite", tx_.v_phase);
    require_positive("transmitter.r_tx", tx_.r);
    require_positive("transmitter.l_tx", tx_.l);
    if (receivers_.empty()) throw InvalidScenario("receivers: at least one receiver is required");

    coupling_.reserve(receivers_.size());
    for (std::size_t n = 0; n < receivers_.size(); ++n) {
        const auto& rx = receivers_[n];
        require_positive(receiver_field(n, "r"), rx.r);
        require_positive(receiver_field(n, "l"), rx.l);
        // h = 0 is the decoupled limit; scenario files require h > 0.
        if (!std::isfinite(rx.h) || rx.h < 0.0) reject(receiver_field(n, "h"), "must be finite and >= 0", rx.h);
        const double h_max = std::sqrt(rx.l * tx_.l);
        if (rx.h > h_max) {
            std::ostringstream os;
            os.precision(17);
            os << receiver_field(n, "h") << ": exceeds sqrt(l * l_tx) = " << h_max << " (got " << rx.h << ")";
            throw InvalidScenario(os.str());
        }
        require_positive(receiver_field(n, "x_min"), rx.x_min);
        if (!std::isfinite(rx.x_max) || rx.x_max < rx.x_min) {
            reject(receiver_field(n, "x_max"), "must be finite and >= x_min", rx.x_max);
        }
        require_positive(receiver_field(n, "p_min"), rx.p_min);
        if (rx.x_nominal) require_positive(receiver_field(n, "x_nominal"), *rx.x_nominal);
        const double wh = omega_ * rx.h;
        coupling_.push_back(wh * wh);
    }
}

LoadVector SystemScenario::nominal_loads() const {
    std::vector<double> x;
    x.reserve(size());
    for (const auto& rx : receivers_) x.push_back(rx.x_nominal.value_or(0.5 * (rx.x_min + rx.x_max)));
    return LoadVector(std::move(x));
}

LoadVector SystemScenario::lower_bounds() const {
    std::vector<double> x;
    for (const auto& rx : receivers_) x.push_back(rx.x_min);
    return LoadVector(std::move(x));
}

LoadVector SystemScenario::upper_bounds() const {
    std::vector<double> x;
    for (const auto& rx : receivers_) x.push_back(rx.x_max);
    return LoadVector(std::move(x));
}

SystemScenario SystemScenario::with_p_min(std::size_t n, double p_min) const {
    auto rx = receivers_;
    rx.at(n).p_min = p_min;
    return SystemScenario(omega_, tx_, std::move(rx));
}

void check_loads(const SystemScenario& scenario, const LoadVector& loads, BoundsCheck bounds) {
    if (loads.size() != scenario.size()) {
        throw InvalidScenario("loads: expected " + std::to_string(scenario.size()) + " entries, got " +
                              std::to_string(loads.size()));
    }
    for (std::size_t n = 0; n < loads.size(); ++n) {
        const std::string field = "loads[" + std::to_string(n) + "]";
        require_positive(field, loads[n]);
        if (bounds == BoundsCheck::enforce) {
            const auto& rx = scenario.receiver(n);
            if (loads[n] < rx.x_min || loads[n] > rx.x_max) reject(field, "outside [x_min, x_max]", loads[n]);
        }
    }
}

Eigen::MatrixXcd impedance_matrix(const SystemScenario& scenario, const LoadVector& loads) {
    check_loads(scenario, loads);
    const auto size = static_cast<Eigen::Index>(scenario.size() + 1);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(size, size);
    a(0, 0) = scenario.transmitter().r;
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const auto k = static_cast<Eigen::Index>(n + 1);
        const Complex mutual(0.0, -scenario.omega() * scenario.receiver(n).h);
        a(0, k) = mutual;
        a(k, 0) = mutual;
        a(k, k) = scenario.receiver(n).r + loads[n];
    }
    return a;
}

double input_resistance(const SystemScenario& scenario, const LoadVector& loads) {
    double sum = 0.0;
    for (std::size_t k = 0; k < scenario.size(); ++k) {
        sum += scenario.coupling(k) / (scenario.receiver(k).r + loads[k]);
    }
    return scenario.transmitter().r + sum;
}

double impedance_determinant(const SystemScenario& scenario, const LoadVector& loads) {
    check_loads(scenario, loads);
    double product = 1.0;
    for (std::size_t k = 0; k < scenario.size(); ++k) product *= scenario.receiver(k).r + loads[k];
    return input_resistance(scenario, loads) * product;
}

Eigen::VectorXcd admittance_column(const SystemScenario& scenario, const LoadVector& loads) {
    check_loads(scenario, loads);
    const double z = 1.0 / input_resistance(scenario, loads);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(scenario.size() + 1));
    b(0) = z;
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const double wh = scenario.omega() * scenario.receiver(n).h;
        b(static_cast<Eigen::Index>(n + 1)) = Complex(0.0, wh / (scenario.receiver(n).r + loads[n]) * z);
    }
    return b;
}

PowerReport solve_closed_form(const SystemScenario& scenario, const LoadVector& loads) {
    check_loads(scenario, loads);
    const Complex v = scenario.transmitter().voltage();
    const double half_v2 = 0.5 * scenario.source_power_scale();
    const double z = 1.0 / input_resistance(scenario, loads);

    PowerReport out;
    out.i_tx = z * v;
    out.p_tx = half_v2 * z;
    out.i.reserve(scenario.size());
    out.p.reserve(scenario.size());
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const double rx = scenario.receiver(n).r + loads[n];
        const double wh = scenario.omega() * scenario.receiver(n).h;
        out.i.push_back(Complex(0.0, wh / rx * z) * v);
        const double p = half_v2 * scenario.coupling(n) * loads[n] / (rx * rx) * z * z;
        out.p.push_back(p);
        out.p_sum += p;
    }
    return out;
}

PowerReport solve_oracle(const SystemScenario& scenario, const LoadVector& loads) {
    const Eigen::MatrixXcd a = impedance_matrix(scenario, loads);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(a.rows());
    v(0) = scenario.transmitter().voltage();

    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    if (!lu.isInvertible()) throw SingularMatrix("impedance matrix is singular");
    const Eigen::VectorXcd current = lu.solve(v);

    PowerReport out;
    out.i_tx = current(0);
    out.p_tx = 0.5 * std::real(v(0) * std::conj(current(0)));
    for (std::size_t n = 0; n < scenario.size(); ++n) {
        const Complex i_n = current(static_cast<Eigen::Index>(n + 1));
        out.i.push_back(i_n);
        const double p = 0.5 * loads[n] * std::norm(i_n);
        out.p.push_back(p);
        out.p_sum += p;
    }
    return out;
}

double load_power(const SystemScenario& scenario, const LoadVector& loads, std::size_t n) {
    const double z = 1.0 / input_resistance(scenario, loads);
    const double rx = scenario.receiver(n).r + loads[n];
    return 0.5 * scenario.source_power_scale() * scenario.coupling(n) * loads[n] / (rx * rx) * z * z;
}

}  // namespace mrc

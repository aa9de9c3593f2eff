#include "mrc/property_suite.hpp"

#include "mrc/analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mrc {

namespace {

double rel(double a, double b) {
    const double scale = std::max(std::abs(b), 1e-300);
    return std::abs(a - b) / scale;
}

double rel(Complex a, Complex b) {
    const double scale = std::max(std::abs(b), 1e-300);
    return std::abs(a - b) / scale;
}

class Tally {
public:
    Tally(std::string name, double tolerance) { result_.name = std::move(name), result_.tolerance = tolerance; }

    void deviation(double value) {
        ++result_.samples;
        result_.worst = std::max(result_.worst, value);
        if (!(value <= result_.tolerance)) ++result_.failures;
    }

    void check(bool ok, double magnitude = 0.0) {
        ++result_.samples;
        if (!ok) {
            ++result_.failures;
            result_.worst = std::max(result_.worst, magnitude);
        }
    }

    PropertyResult take() { return std::move(result_); }

private:
    PropertyResult result_;
};

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool VerifyReport::pass() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass(); });
}

const PropertyResult& VerifyReport::property(const std::string& name) const {
    for (const auto& p : properties) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("no property named " + name);
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["scenario"] = scenario;
    doc["trials"] = trials;
    doc["seed"] = seed;
    doc["pass"] = pass();
    auto& list = doc["properties"] = nlohmann::ordered_json::array();
    for (const auto& p : properties) {
        list.push_back({{"name", p.name},
                        {"samples", p.samples},
                        {"failures", p.failures},
                        {"worst", p.worst},
                        {"tolerance", p.tolerance},
                        {"pass", p.pass()}});
    }
    return doc.dump(2);
}

VerifyReport verify_scenario(const SystemScenario& scenario, std::size_t trials, const VerifyOptions& options,
                             const std::string& label) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t count = scenario.size();

    Tally oracle("oracle-equivalence", kOracleTolerance);
    Tally conservation("energy-conservation", kConservationTolerance);
    Tally ordering("p_sum-below-p_tx", 0.0);
    Tally determinant("determinant", kDeterminantTolerance);
    Tally column("admittance-column", kOracleTolerance);
    Tally phase("phase-invariance", kPhaseTolerance);
    Tally tx_monotone("p_tx-increasing", 0.0);
    Tally cross_monotone("cross-power-increasing", 0.0);
    Tally own_peak("own-power-single-peak", 0.0);
    Tally sum_peak("sum-power-peak", 0.0);

    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> draw(count);
        for (std::size_t n = 0; n < count; ++n) {
            const auto& rx = scenario.receiver(n);
            const double a = std::log(rx.x_min);
            draw[n] = std::clamp(std::exp(a + unit(rng) * (std::log(rx.x_max) - a)), rx.x_min, rx.x_max);
        }
        const LoadVector x(std::move(draw));

        PowerReport closed = solve_closed_form(scenario, x);
        if (options.closed_form_perturbation != 0.0) {
            const double f = 1.0 + options.closed_form_perturbation;
            closed.p_tx *= f;
            for (double& p : closed.p) p *= f;
            closed.p_sum *= f;
        }
        const PowerReport generic = solve_oracle(scenario, x);

        double worst = std::max(rel(closed.i_tx, generic.i_tx), rel(closed.p_tx, generic.p_tx));
        worst = std::max(worst, rel(closed.p_sum, generic.p_sum));
        for (std::size_t n = 0; n < count; ++n) {
            worst = std::max({worst, rel(closed.i[n], generic.i[n]), rel(closed.p[n], generic.p[n])});
        }
        oracle.deviation(worst);

        double dissipated = 0.5 * std::norm(closed.i_tx) * scenario.transmitter().r;
        for (std::size_t n = 0; n < count; ++n) {
            dissipated += 0.5 * std::norm(closed.i[n]) * (scenario.receiver(n).r + x[n]);
        }
        conservation.deviation(rel(closed.p_tx, dissipated));
        ordering.check(closed.p_sum < closed.p_tx, closed.p_sum / closed.p_tx);

        const Eigen::MatrixXcd a = impedance_matrix(scenario, x);
        const Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
        const Complex det_lu = lu.determinant();
        const double det_closed = impedance_determinant(scenario, x);
        determinant.deviation(det_closed > 0.0 ? rel(Complex(det_closed, 0.0), det_lu) : 1.0);

        const Eigen::VectorXcd b_closed = admittance_column(scenario, x);
        const Eigen::VectorXcd b_generic = lu.inverse().col(0);
        double worst_b = 0.0;
        for (Eigen::Index k = 0; k < b_closed.size(); ++k) worst_b = std::max(worst_b, rel(b_closed(k), b_generic(k)));
        column.deviation(worst_b);

        auto tx = scenario.transmitter();
        tx.v_phase += 2.0 * M_PI * unit(rng);
        const SystemScenario rotated(scenario.omega(), tx,
                                     std::vector<ReceiverSpec>(scenario.receivers().begin(), scenario.receivers().end()));
        const PowerReport turned = solve_closed_form(rotated, x);
        double worst_phase = rel(turned.p_tx, generic.p_tx);
        for (std::size_t n = 0; n < count; ++n) worst_phase = std::max(worst_phase, rel(turned.p[n], generic.p[n]));
        phase.deviation(worst_phase);

        for (std::size_t n = 0; n < count; ++n) {
            const double delta = monotonicity_step(x[n]);
            const PowerReport base = solve_closed_form(scenario, x);
            const PowerReport moved = solve_closed_form(scenario, x.with(n, x[n] + delta));
            tx_monotone.check(moved.p_tx > base.p_tx, rel(moved.p_tx, base.p_tx));
            for (std::size_t m = 0; m < count; ++m) {
                if (m != n) cross_monotone.check(moved.p[m] > base.p[m], rel(moved.p[m], base.p[m]));
            }

            const ReceiverSensitivity s = sensitivity(scenario, x, n);
            if (std::abs(s.x_dot - x[n]) > 10.0 * delta) {
                own_peak.check(sign(moved.p[n] - base.p[n]) == sign(s.x_dot - x[n]), std::abs(s.x_dot - x[n]));
            }
            const double dsum = moved.p_sum - base.p_sum;
            if (std::holds_alternative<Monotone>(s.x_ddot)) {
                sum_peak.check(dsum > 0.0, std::abs(dsum));
            } else {
                const double peak = std::get<double>(s.x_ddot);
                if (std::abs(peak - x[n]) > 10.0 * delta) {
                    sum_peak.check(sign(dsum) == sign(peak - x[n]), std::abs(peak - x[n]));
                }
            }
        }
    }

    VerifyReport report;
    report.scenario = label;
    report.trials = trials;
    report.seed = options.seed;
    for (Tally* t : {&oracle, &conservation, &ordering, &determinant, &column, &phase, &tx_monotone, &cross_monotone,
                     &own_peak, &sum_peak}) {
        report.properties.push_back(t->take());
    }
    return report;
}

}  // namespace mrc

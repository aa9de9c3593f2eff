#pragma once

// On-demand property checks for one scenario: random load vectors drawn
// log-uniformly inside the load limits, each run through the closed form,
// the generic linear solve, and finite-difference monotonicity probes.

#include "mrc/circuit.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mrc {

struct PropertyResult {
    std::string name;
    std::size_t samples = 0;
    std::size_t failures = 0;
    double worst = 0.0;  // largest observed deviation (relative unless noted)
    double tolerance = 0.0;
    bool pass() const { return failures == 0; }
};

struct VerifyReport {
    std::string scenario;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;

    bool pass() const;
    const PropertyResult& property(const std::string& name) const;
    std::string to_json() const;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    /// Relative error injected into the closed-form powers (fault injection).
    double closed_form_perturbation = 0.0;
};

inline constexpr double kOracleTolerance = 1e-9;
inline constexpr double kConservationTolerance = 1e-10;
inline constexpr double kDeterminantTolerance = 1e-12;
inline constexpr double kPhaseTolerance = 1e-12;

/// Finite-difference step for monotonicity probes at load x.
inline double monotonicity_step(double x) { return 1e-6 * (x > 1.0 ? x : 1.0); }

/// Throws std::invalid_argument when trials == 0.
VerifyReport verify_scenario(const SystemScenario& scenario, std::size_t trials, const VerifyOptions& options = {},
                             const std::string& label = "");

}  // namespace mrc

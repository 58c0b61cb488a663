#pragma once

#include <cstddef>
#include <optional>

#include "mgc/scenario.hpp"
#include "mgc/trace.hpp"

namespace mgc {

struct SimulationOptions {
    std::optional<double> dt;           // overrides the scenario and the default step rule
    std::optional<double> omega_c;      // overrides the scenario bandwidth
    std::optional<std::size_t> stride;  // sample every `stride` nominal steps
    bool raw_removal = false;           // unplug without redistributing dV
};

/// Integrates the scenario piecewise between events with fixed-step RK4.
/// Every step lands exactly on event times; events at the same instant apply
/// in listed order. Event instants are sampled twice, before and after the
/// events are applied.
///
/// Throws ParseError (invalid scenario), AssumptionError (reference voltage,
/// connectivity, regime) or NumericalError (non-finite state).
[[nodiscard]] Trace simulate(const Scenario& scenario, const SimulationOptions& options = {});

}  // namespace mgc

#pragma once

#include <vector>

#include "mgc/dynamics.hpp"
#include "mgc/grid.hpp"

namespace mgc {

/// A DGU joining or leaving the secondary layer at `time`.
struct PlugEvent {
    enum class Kind { PlugIn, Unplug };

    Kind kind = Kind::PlugIn;
    DguSpec dgu;                           // only the id is used for Unplug
    std::vector<PowerLine> electrical_links;  // lines to already-connected DGUs
    std::vector<CommLink> comm_links;      // explicit a_ij; D = I regime only
    double time = 0.0;
};

struct PnpResult {
    Microgrid grid;
    SimState state;
};

/// Connects a DGU and starts its consensus integrator with dV_i = 0 (V_i = V_ref
/// in first-order mode), so the average of dV is unchanged.
///
/// Under the commuting regime the communication neighbours are the electrical
/// ones with a_ij = mu / R_ij and payload coefficients are rejected. Under
/// D = I the payload links are used as given (a_ji = a_ij).
///
/// Throws AssumptionError for a mismatched reference voltage, a scaling that
/// violates the regime, or a disconnected result.
[[nodiscard]] PnpResult plug_in(const Microgrid& grid, const SimState& state, const PlugEvent& event);

/// Disconnects a DGU. Unless `raw_removal` is set, its correction dV_j is
/// spread evenly over its communication neighbours first, which keeps the
/// average of the remaining corrections at zero.
[[nodiscard]] PnpResult unplug(const Microgrid& grid, const SimState& state, const PlugEvent& event,
                               bool raw_removal = false);

}  // namespace mgc

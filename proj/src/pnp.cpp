#include "mgc/pnp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mgc/error.hpp"

namespace mgc {
namespace {

using Kind = AssumptionError::Kind;

void require_stable_regime(const Microgrid& grid) {
    // With some DGUs outside the secondary layer the product is not expected to commute.
    if (!grid.all_secondary() || grid.size() < 2) return;
    const auto model = grid.model();
    if (classify_assumptions(model.l, model.scaling, model.m) == AssumptionStatus::Neither) {
        throw AssumptionError(Kind::StabilityRegime, "resulting model satisfies neither D = I nor LDM = MDL");
    }
}

}  // namespace

PnpResult plug_in(const Microgrid& grid, const SimState& state, const PlugEvent& event) {
    const auto& spec = event.dgu;
    const auto& settings = grid.settings();
    if (grid.contains(spec.id)) {
        throw AssumptionError(Kind::Malformed, "DGU " + std::to_string(spec.id) + " is already connected");
    }
    if (std::abs(spec.v_ref - settings.v_ref) > 1e-12 * std::max(1.0, std::abs(settings.v_ref))) {
        throw AssumptionError(Kind::ReferenceVoltage, "DGU " + std::to_string(spec.id) +
                                                          " uses a different voltage reference");
    }
    if (settings.regime == Regime::DIdentity && std::abs(spec.scale_current - 1.0) > 1e-12) {
        throw AssumptionError(Kind::StabilityRegime, "D = I regime requires unit scaling currents");
    }
    if (settings.regime == Regime::Commuting && !event.comm_links.empty()) {
        throw AssumptionError(Kind::StabilityRegime,
                              "commuting regime derives a_ij = mu / R_ij; explicit coefficients are rejected");
    }

    PnpResult out{grid, state};
    const auto before = grid.ids();
    try {
        out.grid.add_node({spec, true});
        for (const auto& line : event.electrical_links) {
            if (line.from != spec.id && line.to != spec.id) {
                throw GraphError("plug-in line must end at the entering DGU");
            }
            out.grid.add_line(line);
        }
        for (const auto& link : event.comm_links) {
            if (link.a != spec.id && link.b != spec.id) {
                throw GraphError("plug-in communication link must end at the entering DGU");
            }
            out.grid.add_comm_link(link);
        }
    } catch (const GraphError& e) {
        throw AssumptionError(Kind::Malformed, e.what());
    }
    out.grid.check_connectivity();
    require_stable_regime(out.grid);

    out.state = remap_state(state, before, out.grid.ids(), settings.v_ref);
    out.state.t = event.time;
    const auto idx = static_cast<Eigen::Index>(*out.grid.index_of(spec.id));
    out.state.delta_v(idx) = 0.0;
    out.state.v(idx) = spec.v_ref;
    return out;
}

PnpResult unplug(const Microgrid& grid, const SimState& state, const PlugEvent& event, bool raw_removal) {
    const DguId j = event.dgu.id;
    const auto j_idx = grid.index_of(j);
    if (!j_idx) throw AssumptionError(Kind::Malformed, "DGU " + std::to_string(j) + " is not connected");

    SimState adjusted = state;
    if (!raw_removal) {
        const double scale = std::max(1.0, state.delta_v.cwiseAbs().maxCoeff());
        if (std::abs(state.delta_v.mean()) > 1e-9 * scale) {
            throw AssumptionError(Kind::Malformed, "unplug redistribution needs zero-mean corrections");
        }
        const auto neighbors = grid.communication().neighbors(j);
        const double dv_j = state.delta_v(static_cast<Eigen::Index>(*j_idx));
        if (neighbors.empty()) {
            // A DGU outside the secondary layer holds a constant correction; only zero can be dropped.
            if (grid.size() > 1 && std::abs(dv_j) > 1e-12 * scale) {
                throw AssumptionError(Kind::Malformed, "DGU " + std::to_string(j) +
                                                           " has no communication neighbours to absorb its correction");
            }
        } else {
            const double share = dv_j / static_cast<double>(neighbors.size());
            for (DguId i : neighbors) adjusted.delta_v(static_cast<Eigen::Index>(*grid.index_of(i))) += share;
        }
    }

    PnpResult out{grid, {}};
    const auto before = grid.ids();
    out.grid.remove_node(j);
    out.grid.check_connectivity();
    out.state = remap_state(adjusted, before, out.grid.ids(), grid.settings().v_ref);
    out.state.t = event.time;
    return out;
}

}  // namespace mgc

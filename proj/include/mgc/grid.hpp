#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mgc/dynamics.hpp"
#include "mgc/graph.hpp"
#include "mgc/model.hpp"

namespace mgc {

/// Per-DGU physical and control parameters.
struct DguSpec {
    DguId id = 0;
    double scale_current = 1.0;  // I_ti^s, A
    double v_ref = 48.0;         // V
    double load_current = 0.0;   // I_Li, A

    friend bool operator==(const DguSpec&, const DguSpec&) = default;
};

/// Which stability condition the secondary layer is designed for.
///  - DIdentity: D = I, communication topology chosen freely.
///  - Commuting: communication graph mirrors the closed power lines with a_ij = mu / R_ij.
enum class Regime { DIdentity, Commuting };

struct GridSettings {
    Regime regime = Regime::Commuting;
    double mu = 1.0;
    double gain = 1.0;  // k_I
    PrimaryMode mode = PrimaryMode::FirstOrder;
    double omega_c = kDefaultOmegaC;
    double v_ref = 48.0;

    friend bool operator==(const GridSettings&, const GridSettings&) = default;
};

struct GridNode {
    DguSpec spec;
    bool secondary = false;  // consensus integrator running
};

/// Structural state of a run: connected DGUs (sorted by id), closed lines and
/// explicit communication links. Matrices are rebuilt on demand.
class Microgrid {
public:
    Microgrid() = default;
    Microgrid(GridSettings settings, std::vector<GridNode> nodes, std::vector<PowerLine> lines,
              std::vector<CommLink> comm_links);

    [[nodiscard]] const GridSettings& settings() const noexcept { return settings_; }
    [[nodiscard]] const std::vector<GridNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<PowerLine>& lines() const noexcept { return lines_; }
    [[nodiscard]] const std::vector<CommLink>& comm_links() const noexcept { return comm_links_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::vector<DguId> ids() const;
    [[nodiscard]] std::optional<std::size_t> index_of(DguId id) const;
    [[nodiscard]] bool contains(DguId id) const { return index_of(id).has_value(); }
    [[nodiscard]] bool any_secondary() const;
    [[nodiscard]] bool all_secondary() const;

    [[nodiscard]] ElectricalNetwork electrical() const;
    /// Over every connected DGU; links only between DGUs running the secondary layer.
    [[nodiscard]] CommNetwork communication() const;
    [[nodiscard]] ScalingMatrix scaling() const;
    [[nodiscard]] CoupledModel model() const;
    [[nodiscard]] Inputs inputs() const;

    /// Electrical graph over all DGUs and communication graph over the secondary-enabled ones
    /// must be connected once any DGU runs the secondary layer. Throws AssumptionError.
    void check_connectivity() const;

    void add_node(GridNode node);
    void remove_node(DguId id);
    void add_line(const PowerLine& line);
    void add_comm_link(const CommLink& link);
    void set_load(DguId id, double load_current);
    void set_secondary(DguId id, bool enabled);

private:
    GridNode& node(DguId id);

    GridSettings settings_;
    std::vector<GridNode> nodes_;
    std::vector<PowerLine> lines_;
    std::vector<CommLink> comm_links_;
};

/// Reorders/extends `state` from the node order `from` to `to`. New ids get dV = 0 and V = v_ref.
[[nodiscard]] SimState remap_state(const SimState& state, const std::vector<DguId>& from,
                                   const std::vector<DguId>& to, double v_ref);

}  // namespace mgc

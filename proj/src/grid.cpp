#include "mgc/grid.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "mgc/error.hpp"

namespace mgc {

Microgrid::Microgrid(GridSettings settings, std::vector<GridNode> nodes, std::vector<PowerLine> lines,
                     std::vector<CommLink> comm_links)
    : settings_(settings) {
    for (auto& n : nodes) add_node(std::move(n));
    for (const auto& line : lines) add_line(line);
    for (const auto& link : comm_links) add_comm_link(link);
}

std::vector<DguId> Microgrid::ids() const {
    std::vector<DguId> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.spec.id);
    return out;
}

std::optional<std::size_t> Microgrid::index_of(DguId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const GridNode& n, DguId key) { return n.spec.id < key; });
    if (it == nodes_.end() || it->spec.id != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

bool Microgrid::any_secondary() const {
    return std::any_of(nodes_.begin(), nodes_.end(), [](const GridNode& n) { return n.secondary; });
}

bool Microgrid::all_secondary() const {
    return std::all_of(nodes_.begin(), nodes_.end(), [](const GridNode& n) { return n.secondary; });
}

ElectricalNetwork Microgrid::electrical() const { return ElectricalNetwork(ids(), lines_); }

CommNetwork Microgrid::communication() const {
    auto enabled = [&](DguId id) { return nodes_[*index_of(id)].secondary; };
    std::vector<CommLink> links;
    if (settings_.regime == Regime::Commuting) {
        for (const auto& line : lines_) {
            if (enabled(line.from) && enabled(line.to)) {
                links.push_back({line.from, line.to, settings_.mu / line.resistance});
            }
        }
    } else {
        for (const auto& link : comm_links_) {
            if (enabled(link.a) && enabled(link.b)) links.push_back(link);
        }
    }
    return CommNetwork(ids(), std::move(links), settings_.gain);
}

ScalingMatrix Microgrid::scaling() const {
    std::vector<double> s;
    s.reserve(nodes_.size());
    for (const auto& n : nodes_) s.push_back(n.spec.scale_current);
    return ScalingMatrix::from_scale_currents(s);
}

CoupledModel Microgrid::model() const {
    return CoupledModel::assemble(electrical(), communication(), scaling(), settings_.mode, settings_.omega_c);
}

Inputs Microgrid::inputs() const {
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    Inputs in{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        in.load_current(i) = nodes_[static_cast<std::size_t>(i)].spec.load_current;
        in.v_ref(i) = nodes_[static_cast<std::size_t>(i)].spec.v_ref;
    }
    return in;
}

void Microgrid::check_connectivity() const {
    if (!any_secondary()) return;
    if (!is_connected(electrical())) {
        throw AssumptionError(AssumptionError::Kind::Connectivity, "electrical graph is not weakly connected");
    }
    std::vector<DguId> enabled;
    for (const auto& n : nodes_) {
        if (n.secondary) enabled.push_back(n.spec.id);
    }
    const CommNetwork full = communication();
    if (!is_connected(CommNetwork(enabled, full.links(), full.gain()))) {
        throw AssumptionError(AssumptionError::Kind::Connectivity,
                              "communication graph among secondary-enabled DGUs is not connected");
    }
}

void Microgrid::add_node(GridNode node) {
    if (contains(node.spec.id)) throw GraphError("DGU " + std::to_string(node.spec.id) + " is already connected");
    if (!(node.spec.scale_current > 0.0)) throw GraphError("scaling current must be positive");
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node.spec.id,
                               [](const GridNode& n, DguId key) { return n.spec.id < key; });
    nodes_.insert(it, std::move(node));
}

void Microgrid::remove_node(DguId id) {
    const auto idx = index_of(id);
    if (!idx) throw GraphError("DGU " + std::to_string(id) + " is not connected");
    nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(*idx));
    std::erase_if(lines_, [id](const PowerLine& l) { return l.from == id || l.to == id; });
    std::erase_if(comm_links_, [id](const CommLink& l) { return l.a == id || l.b == id; });
}

void Microgrid::add_line(const PowerLine& line) {
    if (!contains(line.from) || !contains(line.to)) {
        throw GraphError("line " + std::to_string(line.from) + "-" + std::to_string(line.to) +
                         " touches a DGU that is not connected");
    }
    if (!(line.resistance > 0.0)) throw GraphError("line resistance must be positive");
    for (const auto& l : lines_) {
        if ((l.from == line.from && l.to == line.to) || (l.from == line.to && l.to == line.from)) {
            throw GraphError("line " + std::to_string(line.from) + "-" + std::to_string(line.to) +
                             " is already closed");
        }
    }
    lines_.push_back(line);
}

void Microgrid::add_comm_link(const CommLink& link) {
    if (!contains(link.a) || !contains(link.b)) throw GraphError("communication link touches an unknown DGU");
    if (link.a == link.b || !(link.weight > 0.0)) throw GraphError("invalid communication link");
    for (const auto& l : comm_links_) {
        if ((l.a == link.a && l.b == link.b) || (l.a == link.b && l.b == link.a)) {
            throw GraphError("duplicate communication link");
        }
    }
    comm_links_.push_back(link);
}

GridNode& Microgrid::node(DguId id) {
    const auto idx = index_of(id);
    if (!idx) throw GraphError("DGU " + std::to_string(id) + " is not connected");
    return nodes_[*idx];
}

void Microgrid::set_load(DguId id, double load_current) { node(id).spec.load_current = load_current; }

void Microgrid::set_secondary(DguId id, bool enabled) { node(id).secondary = enabled; }

SimState remap_state(const SimState& state, const std::vector<DguId>& from, const std::vector<DguId>& to,
                     double v_ref) {
    SimState out;
    out.t = state.t;
    const auto n = static_cast<Eigen::Index>(to.size());
    out.delta_v = Eigen::VectorXd::Zero(n);
    out.v = Eigen::VectorXd::Constant(n, v_ref);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto it = std::find(from.begin(), from.end(), to[static_cast<std::size_t>(i)]);
        if (it == from.end()) continue;
        const auto j = static_cast<Eigen::Index>(it - from.begin());
        out.delta_v(i) = state.delta_v(j);
        out.v(i) = state.v(j);
    }
    return out;
}

}  // namespace mgc

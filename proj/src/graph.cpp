#include "mgc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "mgc/error.hpp"

namespace mgc {
namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> rank_;
};

void check_unique_nodes(const std::vector<DguId>& nodes) {
    std::set<DguId> seen;
    for (DguId id : nodes) {
        if (!seen.insert(id).second) throw GraphError("duplicate node id " + std::to_string(id));
    }
}

std::pair<DguId, DguId> unordered(DguId a, DguId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::optional<std::size_t> position(const std::vector<DguId>& nodes, DguId id) {
    auto it = std::find(nodes.begin(), nodes.end(), id);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
}

}  // namespace

ElectricalNetwork::ElectricalNetwork(std::vector<DguId> nodes, std::vector<PowerLine> lines)
    : nodes_(std::move(nodes)), lines_(std::move(lines)) {
    check_unique_nodes(nodes_);
    std::set<std::pair<DguId, DguId>> pairs;
    for (const auto& line : lines_) {
        if (line.from == line.to) throw GraphError("self-loop at node " + std::to_string(line.from));
        if (!index_of(line.from) || !index_of(line.to)) {
            throw GraphError("line " + std::to_string(line.from) + "-" + std::to_string(line.to) +
                             " references an unknown node");
        }
        if (!(line.resistance > 0.0)) {
            throw GraphError("line " + std::to_string(line.from) + "-" + std::to_string(line.to) +
                             " has non-positive resistance");
        }
        if (!pairs.insert(unordered(line.from, line.to)).second) {
            throw GraphError("duplicate line between " + std::to_string(line.from) + " and " +
                             std::to_string(line.to));
        }
    }
}

std::optional<std::size_t> ElectricalNetwork::index_of(DguId id) const { return position(nodes_, id); }

Eigen::VectorXd ElectricalNetwork::conductances() const {
    Eigen::VectorXd g(static_cast<Eigen::Index>(lines_.size()));
    for (std::size_t k = 0; k < lines_.size(); ++k) g(static_cast<Eigen::Index>(k)) = 1.0 / lines_[k].resistance;
    return g;
}

std::vector<Edge> ElectricalNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(lines_.size());
    for (const auto& line : lines_) out.push_back({*index_of(line.from), *index_of(line.to)});
    return out;
}

CommNetwork::CommNetwork(std::vector<DguId> nodes, std::vector<CommLink> links, double gain)
    : nodes_(std::move(nodes)), links_(std::move(links)), gain_(gain) {
    check_unique_nodes(nodes_);
    if (!(gain_ > 0.0)) throw GraphError("consensus gain k_I must be positive");
    std::set<std::pair<DguId, DguId>> pairs;
    for (const auto& link : links_) {
        if (link.a == link.b) throw GraphError("communication self-loop at node " + std::to_string(link.a));
        if (!position(nodes_, link.a) || !position(nodes_, link.b)) {
            throw GraphError("communication link references an unknown node");
        }
        if (!(link.weight > 0.0)) throw GraphError("communication coefficients must be positive");
        if (!pairs.insert(unordered(link.a, link.b)).second) {
            throw GraphError("duplicate communication link between " + std::to_string(link.a) + " and " +
                             std::to_string(link.b));
        }
    }
}

double CommNetwork::coefficient(DguId i, DguId j) const {
    for (const auto& link : links_) {
        if ((link.a == i && link.b == j) || (link.a == j && link.b == i)) return link.weight;
    }
    return 0.0;
}

std::vector<DguId> CommNetwork::neighbors(DguId id) const {
    std::vector<DguId> out;
    for (const auto& link : links_) {
        if (link.a == id) out.push_back(link.b);
        if (link.b == id) out.push_back(link.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::MatrixXd CommNetwork::laplacian() const {
    std::vector<Edge> edges;
    Eigen::VectorXd w(static_cast<Eigen::Index>(links_.size()));
    for (std::size_t k = 0; k < links_.size(); ++k) {
        edges.push_back({*position(nodes_, links_[k].a), *position(nodes_, links_[k].b)});
        w(static_cast<Eigen::Index>(k)) = gain_ * links_[k].weight;
    }
    return mgc::laplacian(incidence_matrix(nodes_.size(), edges), w);
}

Eigen::MatrixXd incidence_matrix(std::size_t node_count, std::span<const Edge> edges) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(node_count),
                                              static_cast<Eigen::Index>(edges.size()));
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        if (e.source >= node_count || e.target >= node_count) throw GraphError("edge endpoint out of range");
        if (e.source == e.target) throw GraphError("edge endpoints coincide");
        const auto col = static_cast<Eigen::Index>(k);
        b(static_cast<Eigen::Index>(e.source), col) = 1.0;
        b(static_cast<Eigen::Index>(e.target), col) = -1.0;
    }
    return b;
}

Eigen::MatrixXd incidence_matrix(const ElectricalNetwork& net) {
    const auto edges = net.edges();
    return incidence_matrix(net.size(), edges);
}

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& incidence, const Eigen::VectorXd& weights) {
    if (incidence.cols() != weights.size()) {
        throw DimensionError("laplacian: " + std::to_string(incidence.cols()) + " edges but " +
                             std::to_string(weights.size()) + " weights");
    }
    Eigen::MatrixXd a = incidence * weights.asDiagonal() * incidence.transpose();
    // B W B^T is symmetric in exact arithmetic; remove rounding asymmetry.
    return 0.5 * (a + a.transpose());
}

LaplacianPair laplacians(const ElectricalNetwork& el, const CommNetwork& comm) {
    if (el.node_ids() != comm.node_ids()) {
        throw DimensionError("electrical and communication networks list different nodes");
    }
    return {laplacian(incidence_matrix(el), el.conductances()), comm.laplacian()};
}

bool is_connected(std::size_t node_count, std::span<const Edge> edges) {
    if (node_count <= 1) return true;
    DisjointSets sets(node_count);
    std::size_t components = node_count;
    for (const auto& e : edges) {
        if (sets.unite(e.source, e.target)) --components;
    }
    return components == 1;
}

bool is_connected(const ElectricalNetwork& net) {
    const auto edges = net.edges();
    return is_connected(net.size(), edges);
}

bool is_connected(const CommNetwork& net) {
    std::vector<Edge> edges;
    for (const auto& link : net.links()) {
        edges.push_back({*position(net.node_ids(), link.a), *position(net.node_ids(), link.b)});
    }
    return is_connected(net.size(), edges);
}

ConnectivityVerdict check_connectivity(const ElectricalNetwork& el, const CommNetwork& comm) {
    return {is_connected(el), is_connected(comm)};
}

CommNetwork comm_from_electrical(const ElectricalNetwork& el, double mu, double gain) {
    if (!(mu > 0.0)) throw GraphError("mu must be positive");
    std::vector<CommLink> links;
    links.reserve(el.line_count());
    for (const auto& line : el.lines()) links.push_back({line.from, line.to, mu / line.resistance});
    return CommNetwork(el.node_ids(), std::move(links), gain);
}

double zero_tolerance(const Eigen::MatrixXd& a) {
    const double inf_norm = a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
    return 1e-9 * std::max(1.0, inf_norm);
}

}  // namespace mgc

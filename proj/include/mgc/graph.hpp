#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mgc {

using DguId = int;

/// Oriented edge between node positions. The source gets +1 in the incidence column.
struct Edge {
    std::size_t source;
    std::size_t target;
};

/// Resistive power line. Orientation (from -> to) is the reference direction of
/// positive line current. Inductance is kept for bookkeeping only.
struct PowerLine {
    DguId from;
    DguId to;
    double resistance;       // Ohm
    double inductance = 0.0; // H

    friend bool operator==(const PowerLine&, const PowerLine&) = default;
};

class ElectricalNetwork {
public:
    ElectricalNetwork() = default;
    ElectricalNetwork(std::vector<DguId> nodes, std::vector<PowerLine> lines);

    [[nodiscard]] const std::vector<DguId>& node_ids() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<PowerLine>& lines() const noexcept { return lines_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t line_count() const noexcept { return lines_.size(); }
    [[nodiscard]] std::optional<std::size_t> index_of(DguId id) const;

    /// Line conductances 1/R in line order.
    [[nodiscard]] Eigen::VectorXd conductances() const;
    [[nodiscard]] std::vector<Edge> edges() const;

private:
    std::vector<DguId> nodes_;
    std::vector<PowerLine> lines_;
};

struct CommLink {
    DguId a;
    DguId b;
    double weight;  // a_ij = a_ji > 0

    friend bool operator==(const CommLink&, const CommLink&) = default;
};

/// Undirected communication graph with a common consensus gain k_I.
class CommNetwork {
public:
    CommNetwork() = default;
    CommNetwork(std::vector<DguId> nodes, std::vector<CommLink> links, double gain);

    [[nodiscard]] const std::vector<DguId>& node_ids() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<CommLink>& links() const noexcept { return links_; }
    [[nodiscard]] double gain() const noexcept { return gain_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    /// a_ij, zero when i and j do not communicate.
    [[nodiscard]] double coefficient(DguId i, DguId j) const;
    [[nodiscard]] std::vector<DguId> neighbors(DguId id) const;

    /// k_I * L(G_c) in node order.
    [[nodiscard]] Eigen::MatrixXd laplacian() const;

private:
    std::vector<DguId> nodes_;
    std::vector<CommLink> links_;
    double gain_ = 1.0;
};

struct LaplacianPair {
    Eigen::MatrixXd electrical;     // M = B W B^T
    Eigen::MatrixXd communication;  // L = k_I * L(G_c)
};

/// N x M signed incidence matrix: +1 at the source row, -1 at the target row.
[[nodiscard]] Eigen::MatrixXd incidence_matrix(std::size_t node_count, std::span<const Edge> edges);
[[nodiscard]] Eigen::MatrixXd incidence_matrix(const ElectricalNetwork& net);

/// B diag(w) B^T.
[[nodiscard]] Eigen::MatrixXd laplacian(const Eigen::MatrixXd& incidence, const Eigen::VectorXd& weights);

/// Laplacians of both graphs. The communication network must list the same nodes in the same order.
[[nodiscard]] LaplacianPair laplacians(const ElectricalNetwork& el, const CommNetwork& comm);

struct ConnectivityVerdict {
    bool electrical = false;
    bool communication = false;

    [[nodiscard]] bool ok() const noexcept { return electrical && communication; }
};

[[nodiscard]] bool is_connected(std::size_t node_count, std::span<const Edge> edges);
[[nodiscard]] bool is_connected(const ElectricalNetwork& net);
[[nodiscard]] bool is_connected(const CommNetwork& net);
[[nodiscard]] ConnectivityVerdict check_connectivity(const ElectricalNetwork& el, const CommNetwork& comm);

/// Communication graph with the electrical topology and a_ij = mu / R_ij, so that L = gain * mu * M.
[[nodiscard]] CommNetwork comm_from_electrical(const ElectricalNetwork& el, double mu, double gain = 1.0);

/// |lambda| below this counts as zero: 1e-9 * max(1, ||A||_inf).
[[nodiscard]] double zero_tolerance(const Eigen::MatrixXd& a);

}  // namespace mgc

#include "mgc/random_models.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "mgc/error.hpp"

namespace mgc {
namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Spanning tree by attaching each node of a random permutation to an earlier one,
// then extra pairs.
std::vector<std::pair<DguId, DguId>> random_pairs(Rng& rng, int n, double extra_edge_prob) {
    std::vector<DguId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    std::set<std::pair<DguId, DguId>> seen;
    std::vector<std::pair<DguId, DguId>> pairs;
    auto add = [&](DguId a, DguId b) {
        if (seen.insert({std::min(a, b), std::max(a, b)}).second) pairs.emplace_back(a, b);
    };
    for (std::size_t i = 1; i < order.size(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        add(order[pick(rng)], order[i]);
    }
    std::bernoulli_distribution extra(extra_edge_prob);
    for (DguId a = 1; a <= n; ++a) {
        for (DguId b = a + 1; b <= n; ++b) {
            if (extra(rng)) add(a, b);
        }
    }
    return pairs;
}

std::vector<DguId> ids_of(int n) {
    std::vector<DguId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 1);
    return ids;
}

}  // namespace

ElectricalNetwork random_electrical(Rng& rng, int n, double extra_edge_prob) {
    if (n < 1) throw DimensionError("network needs at least one node");
    std::vector<PowerLine> lines;
    for (const auto& [a, b] : random_pairs(rng, n, extra_edge_prob)) {
        lines.push_back({a, b, uniform(rng, 0.05, 1.0), uniform(rng, 1e-6, 1e-4)});
    }
    return {ids_of(n), std::move(lines)};
}

CommNetwork random_comm(Rng& rng, const std::vector<DguId>& ids, double gain, double extra_edge_prob) {
    const int n = static_cast<int>(ids.size());
    std::vector<CommLink> links;
    for (const auto& [a, b] : random_pairs(rng, n, extra_edge_prob)) {
        links.push_back({ids[static_cast<std::size_t>(a - 1)], ids[static_cast<std::size_t>(b - 1)],
                         uniform(rng, 0.2, 2.0)});
    }
    return {ids, std::move(links), gain};
}

ScalingMatrix random_scaling(Rng& rng, std::size_t n) {
    std::vector<double> scale(n);
    for (auto& s : scale) s = uniform(rng, 1.0, 10.0);
    return ScalingMatrix::from_scale_currents(scale);
}

CoupledModel random_model(Rng& rng, int n, RandomRegime regime, PrimaryMode mode, double omega_c) {
    auto el = random_electrical(rng, n);
    const auto size = static_cast<std::size_t>(n);
    switch (regime) {
        case RandomRegime::DIdentity: {
            auto comm = random_comm(rng, el.node_ids());
            return CoupledModel::assemble(std::move(el), std::move(comm), ScalingMatrix::identity(size), mode, omega_c);
        }
        case RandomRegime::Commuting: {
            const double mu = uniform(rng, 0.2, 5.0);
            auto comm = comm_from_electrical(el, mu);
            return CoupledModel::assemble(std::move(el), std::move(comm), random_scaling(rng, size), mode, omega_c);
        }
        case RandomRegime::Neither: {
            auto comm = random_comm(rng, el.node_ids());
            return CoupledModel::assemble(std::move(el), std::move(comm), random_scaling(rng, size), mode, omega_c);
        }
    }
    throw DimensionError("unknown regime");
}

}  // namespace mgc

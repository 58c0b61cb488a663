#include <doctest.h>

#include <algorithm>

#include "mgc/equilibria.hpp"
#include "mgc/error.hpp"
#include "mgc/pnp.hpp"
#include "mgc/random_models.hpp"
#include "mgc/spectral.hpp"
#include "support/oracles.hpp"

using namespace mgc;

namespace {

Eigen::VectorXd gaussian(Rng& rng, Eigen::Index n, double mean = 0.0, double sd = 1.0) {
    std::normal_distribution<double> g(mean, sd);
    Eigen::VectorXd v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

}  // namespace

TEST_CASE("generated laplacians are connected-graph laplacians") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 11;
        const auto el = random_electrical(rng, n);
        REQUIRE(is_connected(el));
        const auto m = laplacian(incidence_matrix(el), el.conductances());
        const double tol = 1e-9 * std::max(1.0, m.cwiseAbs().rowwise().sum().maxCoeff());
        CHECK((m * Eigen::VectorXd::Ones(n)).norm() <= tol);
        CHECK((Eigen::RowVectorXd::Ones(n) * m).norm() <= tol);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        CHECK(es.eigenvalues()(0) >= -tol);
        CHECK(std::abs(es.eigenvalues()(0)) <= tol);
        CHECK(es.eigenvalues()(1) > tol);

        // Zero-mean right-hand sides have a unique zero-mean solution.
        const Eigen::VectorXd b = project_h1(gaussian(rng, n)).hat;
        const Eigen::VectorXd x = oracle::zero_mean_lsq(m, b);
        CHECK((m * x - b).norm() <= 1e-9 * std::max(1.0, b.norm()) * std::max(1.0, m.norm()));
    }
}

TEST_CASE("H1 projection is linear and idempotent with orthogonal parts") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 1 + trial % 12;
        const Eigen::VectorXd u = gaussian(rng, n), v = gaussian(rng, n);
        const auto s = project_h1(u);
        CHECK(std::abs(s.hat.dot(s.bar)) <= 1e-12 * u.squaredNorm() + 1e-15);
        CHECK((project_h1(s.hat).hat - s.hat).norm() <= 1e-14 * (1.0 + u.norm()));
        CHECK((project_h1(2.0 * u - v).hat - (2.0 * s.hat - project_h1(v).hat)).norm() <= 1e-12 * (1.0 + u.norm() + v.norm()));
    }
}

TEST_CASE("Q keeps its structure under both stability regimes") {
    Rng rng(202);
    for (auto regime : {RandomRegime::DIdentity, RandomRegime::Commuting}) {
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 2 + trial % 11;
            const auto model = random_model(rng, n, regime);
            const auto r = model.analyze();
            CHECK(r.structure_holds);
            CHECK(r.inertia.zero == 1);
            CHECK(r.complex_count == 0);
            CHECK(r.kernel_residual <= r.zero_tolerance);
            CHECK(r.range_residual <= r.zero_tolerance);
            if (regime == RandomRegime::Commuting) {
                CHECK(congruent_inertia(model.l, model.scaling, model.m) == r.inertia);
            }
        }
    }
}

TEST_CASE("neither-regime triples are analyzed without failing") {
    Rng rng(303);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = random_model(rng, 3 + trial % 8, RandomRegime::Neither);
        SpectralReport r;
        CHECK_NOTHROW(r = model.analyze());
        CHECK(r.assumption_status == AssumptionStatus::Neither);
        CHECK(r.eigenvalues.size() == model.size());
    }
}

TEST_CASE("the first-order matrix preserves H1 x H1 and its complement") {
    Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 9;
        const auto model = random_model(rng, n, trial % 2 ? RandomRegime::Commuting : RandomRegime::Neither,
                                        PrimaryMode::FirstOrder, 50.0 + trial);
        const auto a = first_order_system_matrix(model.q, model.omega_c);
        Eigen::VectorXd x(2 * n);
        x << project_h1(gaussian(rng, n)).hat, project_h1(gaussian(rng, n)).hat;
        const Eigen::VectorXd y = a * x;
        const double scale = a.norm() * x.norm();
        CHECK(std::abs(y.head(n).sum()) <= 1e-12 * scale);
        CHECK(std::abs(y.tail(n).sum()) <= 1e-12 * scale);

        Eigen::VectorXd c(2 * n);
        c << Eigen::VectorXd::Constant(n, 1.3), Eigen::VectorXd::Constant(n, -0.4);
        const Eigen::VectorXd z = a * c;
        CHECK(project_h1(z.head(n)).hat.norm() <= 1e-12 * a.norm() * c.norm());
        CHECK(project_h1(z.tail(n)).hat.norm() <= 1e-12 * a.norm() * c.norm());
    }
}

TEST_CASE("equilibria share current and balance voltage") {
    Rng rng(505);
    for (auto regime : {RandomRegime::DIdentity, RandomRegime::Commuting}) {
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 2 + trial % 11;
            const auto model = random_model(rng, n, regime);
            const Eigen::VectorXd il = gaussian(rng, n, 5.0, 2.0);
            const Eigen::VectorXd vref = Eigen::VectorXd::Constant(n, 48.0);
            const auto eq = solve_equilibrium_unit_gain(model, il, vref);
            const double scale = model.q.norm() * (eq.delta_v.norm() + vref.norm()) + model.ld.norm() * il.norm();
            CHECK(equilibrium_residual(model, eq.delta_v, il, vref) <= 1e-8 * scale);
            const Eigen::VectorXd pu = model.scaling.diagonal().cwiseProduct(eq.i_t_star);
            CHECK(pu.maxCoeff() - pu.minCoeff() <= 1e-8 * std::abs(pu.mean()));
            CHECK(std::abs(eq.v_star.mean() - 48.0) <= 1e-8 * 48.0);
        }
    }
}

TEST_CASE("first-order spectra match the quadratic construction") {
    Rng rng(606);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 9;
        const double wc = std::uniform_real_distribution<double>(5.0, 2000.0)(rng);
        const auto model =
            random_model(rng, n, trial % 2 ? RandomRegime::Commuting : RandomRegime::DIdentity, PrimaryMode::FirstOrder, wc);
        const auto predicted = first_order_spectrum(model.analyze(), wc);
        CHECK(oracle::multiset_relative_error(predicted, oracle::eigenvalues(first_order_system_matrix(model.q, wc))) <=
              1e-6);
    }
}

TEST_CASE("random plug-and-play sequences keep the average correction at zero") {
    Rng rng(707);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + trial % 5;
        const auto el = random_electrical(rng, n, 0.6);
        GridSettings settings;
        settings.regime = Regime::Commuting;
        settings.mode = PrimaryMode::UnitGain;
        std::vector<GridNode> nodes;
        std::uniform_real_distribution<double> scale(1.0, 10.0);
        for (DguId id : el.node_ids()) nodes.push_back({{id, scale(rng), 48.0, 2.0}, true});
        Microgrid grid(settings, nodes, el.lines(), {});
        SimState st{0.0, project_h1(gaussian(rng, n)).hat, Eigen::VectorXd::Constant(n, 48.0)};

        for (int k = 0; k < 6; ++k) {
            const auto ids = grid.ids();
            const DguId victim = ids[static_cast<std::size_t>(rng() % ids.size())];
            const auto before_lines = grid.lines();
            try {
                auto res = unplug(grid, st, {PlugEvent::Kind::Unplug, {victim}, {}, {}, 0.0});
                CHECK(std::abs(res.state.delta_v.mean()) <= 1e-9);
                CHECK(res.grid.model().analyze().assumption_status != AssumptionStatus::Neither);

                // Plugging the same DGU back through the same lines restores the topology.
                PlugEvent back;
                back.dgu = nodes[static_cast<std::size_t>(victim - 1)].spec;
                for (const auto& l : before_lines) {
                    if (l.from == victim || l.to == victim) back.electrical_links.push_back(l);
                }
                auto again = plug_in(res.grid, res.state, back);
                CHECK(std::abs(again.state.delta_v.mean()) <= 1e-9);
                auto sorted = [](std::vector<PowerLine> v) {
                    std::sort(v.begin(), v.end(), [](const PowerLine& a, const PowerLine& b) {
                        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
                    });
                    return v;
                };
                CHECK(sorted(again.grid.lines()) == sorted(before_lines));
                CHECK(again.grid.ids() == ids);
                grid = again.grid;
                st = again.state;
            } catch (const AssumptionError& e) {
                // Removing a cut vertex disconnects the network; that is the documented outcome.
                CHECK(e.kind() == AssumptionError::Kind::Connectivity);
            }
        }
    }
}

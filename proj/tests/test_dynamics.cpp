#include <doctest.h>

#include <cmath>
#include <limits>

#include "mgc/dynamics.hpp"
#include "mgc/equilibria.hpp"
#include "mgc/error.hpp"
#include "mgc/random_models.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mgc;
using fixtures::vec;

TEST_CASE("unit-gain right-hand side vanishes on kernel vectors") {
    const auto model = fixtures::two_node(0.1);
    const auto r = rhs_unit_gain(Eigen::VectorXd::Constant(2, 0.7), vec({3, 3}), vec({48, 48}), model);
    CHECK(r.norm() <= 1e-12);
}

TEST_CASE("unit-gain right-hand side vanishes at the solved equilibrium") {
    const auto model = fixtures::seven_dgu(PrimaryMode::UnitGain);
    const auto loads = vec({4, 4, 4, 2, 2, 1.5, 1.5});
    const Eigen::VectorXd vref = Eigen::VectorXd::Constant(7, 48.0);
    const auto eq = solve_equilibrium_unit_gain(model, loads, vref);
    CHECK(rhs_unit_gain(eq.delta_v, loads, vref, model).norm() <= 1e-9);
}

TEST_CASE("right-hand sides keep the average of the corrections fixed") {
    Rng rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 8;
        const auto model = random_model(rng, n, RandomRegime::Neither, PrimaryMode::FirstOrder, 300.0);
        Eigen::VectorXd dv(n), il(n), v(n);
        for (int i = 0; i < n; ++i) {
            dv(i) = g(rng);
            il(i) = 5.0 + g(rng);
            v(i) = 48.0 + g(rng);
        }
        const Eigen::VectorXd vref = Eigen::VectorXd::Constant(n, 48.0);
        const double scale = model.q.norm() * (dv.norm() + v.norm()) + model.ld.norm() * il.norm();
        CHECK(std::abs(rhs_unit_gain(dv, il, vref, model).sum()) <= 1e-12 * scale);
        const auto x = rhs_first_order({0.0, dv, v}, il, vref, model);
        CHECK(std::abs(x.head(n).sum()) <= 1e-12 * scale);
    }
}

TEST_CASE("first-order right-hand side") {
    const auto model = fixtures::two_node(0.1, PrimaryMode::FirstOrder, 100.0);
    SUBCASE("vanishes at the equilibrium") {
        const auto eq = solve_equilibrium_first_order(model, vec({2, 4}), vec({48, 48}));
        CHECK(rhs_first_order({0.0, eq.delta_v, eq.v_star}, vec({2, 4}), vec({48, 48}), model).norm() <= 1e-9);
    }
    SUBCASE("voltage relaxes toward dV + V_ref at rate omega_c") {
        const SimState s{0.0, vec({0.5, -0.5}), vec({47.0, 47.0})};
        const auto x = rhs_first_order(s, vec({0, 0}), vec({48, 48}), model);
        CHECK(x(2) == doctest::Approx(100.0 * (0.5 - 47.0 + 48.0)));
        CHECK(x(3) == doctest::Approx(100.0 * (-0.5 - 47.0 + 48.0)));
    }
}

TEST_CASE("RK4 leaves the state unchanged under a zero field") {
    const auto x = vec({1.0, -2.0, 3.0});
    const auto y = rk4_step([](double, const Eigen::VectorXd& z) { return Eigen::VectorXd::Zero(z.size()); }, 0.0, x, 0.1);
    CHECK((x - y).norm() == 0.0);
}

TEST_CASE("RK4 on a linear system converges at fourth order") {
    Eigen::Matrix3d a;
    a << -2.0, 1.0, 0.0, 0.5, -3.0, 0.5, 0.0, 1.0, -1.0;
    const Eigen::Vector3d c(1.0, 0.0, -1.0);
    const Eigen::VectorXd x0 = vec({1.0, 2.0, -1.0});
    const auto exact = oracle::affine_flow(a, c, x0, 1.0);
    auto run = [&](double h) {
        Eigen::VectorXd x = x0;
        const int steps = static_cast<int>(std::lround(1.0 / h));
        for (int k = 0; k < steps; ++k) {
            x = rk4_step([&](double, const Eigen::VectorXd& z) -> Eigen::VectorXd { return a * z + c; }, k * h, x, h);
        }
        return (x - exact).norm();
    };
    const double e1 = run(1e-2);
    const double e2 = run(5e-3);
    CHECK(run(1e-3) <= 1e-11);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("step integrates the unit-gain loop like the matrix exponential") {
    const auto model = fixtures::seven_dgu(PrimaryMode::UnitGain);
    const Inputs in{vec({4, 4, 4, 2, 2, 1.5, 1.5}), Eigen::VectorXd::Constant(7, 48.0)};
    SimState s = rest_state(in);
    const double h = default_time_step(model);
    const int steps = 200;
    for (int k = 0; k < steps; ++k) s = step(model, s, h, in);
    const Eigen::VectorXd exact =
        oracle::affine_flow(-model.q, -model.ld * in.load_current - model.q * in.v_ref, Eigen::VectorXd::Zero(7), steps * h);
    CHECK((s.delta_v - exact).norm() <= 1e-9 * std::max(1.0, exact.norm()));
    CHECK((s.v - (s.delta_v + in.v_ref)).norm() <= 1e-12);
    CHECK(s.t == doctest::Approx(steps * h));
}

TEST_CASE("step integrates the first-order loop like the matrix exponential") {
    const auto model = fixtures::seven_dgu(PrimaryMode::FirstOrder);
    const Inputs in{vec({4, 4, 4, 2, 2, 1.5, 1.5}), Eigen::VectorXd::Constant(7, 48.0)};
    SimState s = rest_state(in);
    const double h = default_time_step(model);
    const int steps = 300;
    for (int k = 0; k < steps; ++k) s = step(model, s, h, in);

    Eigen::VectorXd c(14);
    c.head(7) = -model.ld * in.load_current;
    c.tail(7) = model.omega_c * in.v_ref;
    Eigen::VectorXd x0(14);
    x0.head(7).setZero();
    x0.tail(7) = in.v_ref;
    const auto exact = oracle::affine_flow(first_order_system_matrix(model.q, model.omega_c), c, x0, steps * h);
    CHECK((s.delta_v - exact.head(7)).norm() <= 1e-9 * std::max(1.0, exact.head(7).norm()));
    CHECK((s.v - exact.tail(7)).norm() <= 1e-9 * exact.tail(7).norm());
}

TEST_CASE("step reports non-finite states") {
    const auto model = fixtures::two_node(0.1);
    const Inputs in{vec({1, std::numeric_limits<double>::quiet_NaN()}), vec({48, 48})};
    CHECK_THROWS_AS((void)step(model, rest_state(in), 1e-3, in), NumericalError);
    const Inputs ok{vec({1, 1}), vec({48, 48})};
    CHECK_THROWS_AS((void)step(model, rest_state(ok), 0.0, ok), DimensionError);
}

TEST_CASE("output currents") {
    const ElectricalNetwork el({1, 2}, {{1, 2, 0.1, 0.0}});
    const auto d = ScalingMatrix::identity(2);
    SUBCASE("flat voltage profile") {
        const auto out = compute_outputs(vec({48, 48}), vec({2, 5}), el, d);
        CHECK(out.i_line.norm() == 0.0);
        CHECK((out.i_t - vec({2, 5})).norm() == 0.0);
        CHECK(out.v_avg == 48.0);
    }
    SUBCASE("Ohm's law along the line") {
        const auto out = compute_outputs(vec({48.1, 47.9}), vec({0, 0}), el, d);
        CHECK(std::abs(out.i_line(0)) == doctest::Approx(2.0));
        // Current flows from the higher voltage: DGU 1 supplies, DGU 2 absorbs.
        CHECK(out.i_t(0) == doctest::Approx(2.0));
        CHECK(out.i_t(1) == doctest::Approx(-2.0));
    }
    SUBCASE("per-unit currents use the scaling") {
        const auto out = compute_outputs(vec({48, 48}), vec({2, 5}), el, ScalingMatrix::from_scale_currents({4, 10}));
        CHECK(out.i_pu(0) == doctest::Approx(0.5));
        CHECK(out.i_pu(1) == doctest::Approx(0.5));
    }
}

TEST_CASE("output currents conserve the total load") {
    Rng rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 10;
        const auto el = random_electrical(rng, n);
        Eigen::VectorXd v(n), il(n);
        for (int i = 0; i < n; ++i) {
            v(i) = 48.0 + g(rng);
            il(i) = 3.0 + g(rng);
        }
        const auto out = compute_outputs(v, il, el, ScalingMatrix::identity(static_cast<std::size_t>(n)));
        CHECK(std::abs(out.i_t.sum() - il.sum()) <= 1e-9 * std::max(1.0, il.cwiseAbs().sum()));
    }
}

TEST_CASE("default time step") {
    const auto model = fixtures::seven_dgu(PrimaryMode::FirstOrder);
    const double h = default_time_step(model);
    CHECK(h <= 1e-3);
    CHECK(h <= 0.1 / model.omega_c + 1e-15);
    const double rho = model.analyze().eigenvalues.front().real();
    CHECK(h <= 0.1 / rho + 1e-15);
}

#include <doctest.h>

#include <functional>

#include "mgc/error.hpp"
#include "mgc/pnp.hpp"
#include "mgc/scenario.hpp"
#include "support/fixtures.hpp"

using namespace mgc;
using fixtures::vec;

namespace {

GridSettings settings(Regime regime) {
    GridSettings s;
    s.regime = regime;
    s.mode = PrimaryMode::UnitGain;
    return s;
}

GridNode node(DguId id, double scale = 1.0, double load = 2.0) { return {{id, scale, 48.0, load}, true}; }

// Three DGUs on a path with a complete communication graph, D = I.
Microgrid triangle() {
    return Microgrid(settings(Regime::DIdentity), {node(1), node(2), node(3)},
                     {{1, 2, 0.1, 0.0}, {2, 3, 0.1, 0.0}}, {{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}});
}

SimState state_of(const Eigen::VectorXd& dv) { return {1.0, dv, dv + Eigen::VectorXd::Constant(dv.size(), 48.0)}; }

AssumptionError::Kind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const AssumptionError& e) {
        return e.kind();
    }
    FAIL("expected an AssumptionError");
    return AssumptionError::Kind::Malformed;
}

}  // namespace

TEST_CASE("plug-in keeps the average correction at zero") {
    const auto grid = triangle();
    const auto st = state_of(vec({0.2, -0.5, 0.3}));
    PlugEvent ev;
    ev.dgu = {4, 1.0, 48.0, 1.0};
    ev.electrical_links = {{3, 4, 0.2, 0.0}};
    ev.comm_links = {{4, 1, 0.5}};
    ev.time = 2.0;
    const auto res = plug_in(grid, st, ev);
    REQUIRE(res.grid.size() == 4);
    CHECK(res.state.delta_v.size() == 4);
    CHECK(res.state.delta_v(3) == 0.0);
    CHECK(res.state.v(3) == 48.0);
    CHECK(std::abs(res.state.delta_v.mean()) <= 1e-15);
    CHECK(res.state.t == 2.0);
    CHECK(res.grid.communication().coefficient(1, 4) == 0.5);
}

TEST_CASE("seven-DGU plug-in derives coefficients from the new lines") {
    const auto sc = builtin_stage_scenario();
    auto full = full_grid(sc);
    const auto before = full.ids();
    // Rebuild the grid without DGU 7, then plug it back through its catalog lines.
    full.remove_node(7);
    PlugEvent ev;
    ev.dgu = sc.find_dgu(7)->spec;
    ev.electrical_links = {sc.find_line(7, 4)->line, sc.find_line(7, 5)->line};
    const auto res = plug_in(full, rest_state(full.inputs()), ev);
    const auto comm = res.grid.communication();
    CHECK(comm.coefficient(4, 7) == doctest::Approx(1.0 / 0.09));
    CHECK(comm.coefficient(5, 7) == doctest::Approx(1.0 / 0.05));
    CHECK(res.grid.ids() == before);
    CHECK(res.grid.model().analyze().assumption_status == AssumptionStatus::Commuting);
}

TEST_CASE("a single DGU gains a neighbour") {
    const Microgrid grid(settings(Regime::DIdentity), {node(1)}, {}, {});
    const auto single = grid.model();
    CHECK(single.q.rows() == 1);
    CHECK(single.q(0, 0) == 0.0);

    PlugEvent ev;
    ev.dgu = {2, 1.0, 48.0, 1.0};
    ev.electrical_links = {{1, 2, 0.1, 0.0}};
    ev.comm_links = {{1, 2, 1.0}};
    const auto res = plug_in(grid, rest_state(grid.inputs()), ev);
    const auto q = res.grid.model().q;
    CHECK(q.rows() == 2);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(q);
    CHECK(lu.rank() == 1);
}

TEST_CASE("unplug spreads the correction over communication neighbours") {
    const auto res = unplug(triangle(), state_of(vec({0.2, -0.5, 0.3})), {PlugEvent::Kind::Unplug, {3}, {}, {}, 4.0});
    REQUIRE(res.state.delta_v.size() == 2);
    CHECK(res.state.delta_v(0) == doctest::Approx(0.35));
    CHECK(res.state.delta_v(1) == doctest::Approx(-0.35));
    CHECK(res.grid.ids() == std::vector<DguId>{1, 2});
    CHECK(res.state.t == 4.0);
}

TEST_CASE("unplugging a DGU with zero correction leaves the others unchanged") {
    const auto res = unplug(triangle(), state_of(vec({0.4, -0.4, 0.0})), {PlugEvent::Kind::Unplug, {3}, {}, {}, 0.0});
    CHECK(res.state.delta_v(0) == 0.4);
    CHECK(res.state.delta_v(1) == -0.4);
}

TEST_CASE("raw removal drops the correction") {
    const auto res =
        unplug(triangle(), state_of(vec({0.2, -0.5, 0.3})), {PlugEvent::Kind::Unplug, {3}, {}, {}, 0.0}, true);
    CHECK(res.state.delta_v(0) == 0.2);
    CHECK(res.state.delta_v(1) == -0.5);
    CHECK(res.state.delta_v.mean() == doctest::Approx(-0.15));
}

TEST_CASE("unplug failures") {
    const auto grid = triangle();
    SUBCASE("unknown DGU") {
        CHECK(kind_of([&] { (void)unplug(grid, state_of(vec({0, 0, 0})), {PlugEvent::Kind::Unplug, {9}, {}, {}, 0}); }) ==
              AssumptionError::Kind::Malformed);
    }
    SUBCASE("nonzero average") {
        CHECK(kind_of([&] { (void)unplug(grid, state_of(vec({1, 0, 0})), {PlugEvent::Kind::Unplug, {3}, {}, {}, 0}); }) ==
              AssumptionError::Kind::Malformed);
    }
    SUBCASE("removing the middle of a path disconnects it") {
        CHECK(kind_of([&] { (void)unplug(grid, state_of(vec({0, 0, 0})), {PlugEvent::Kind::Unplug, {2}, {}, {}, 0}); }) ==
              AssumptionError::Kind::Connectivity);
    }
}

TEST_CASE("plug-in failures") {
    const auto grid = triangle();
    const auto st = state_of(vec({0, 0, 0}));
    PlugEvent ev;
    ev.dgu = {4, 1.0, 48.0, 1.0};
    ev.electrical_links = {{3, 4, 0.2, 0.0}};
    ev.comm_links = {{4, 3, 1.0}};

    SUBCASE("reference mismatch") {
        ev.dgu.v_ref = 24.0;
        CHECK(kind_of([&] { (void)plug_in(grid, st, ev); }) == AssumptionError::Kind::ReferenceVoltage);
    }
    SUBCASE("non-unit scaling under D = I") {
        ev.dgu.scale_current = 5.0;
        CHECK(kind_of([&] { (void)plug_in(grid, st, ev); }) == AssumptionError::Kind::StabilityRegime);
    }
    SUBCASE("already connected") {
        ev.dgu.id = 2;
        CHECK(kind_of([&] { (void)plug_in(grid, st, ev); }) == AssumptionError::Kind::Malformed);
    }
    SUBCASE("no power line") {
        ev.electrical_links.clear();
        CHECK(kind_of([&] { (void)plug_in(grid, st, ev); }) == AssumptionError::Kind::Connectivity);
    }
    SUBCASE("no communication link") {
        ev.comm_links.clear();
        CHECK(kind_of([&] { (void)plug_in(grid, st, ev); }) == AssumptionError::Kind::Connectivity);
    }
    SUBCASE("line not touching the new DGU") {
        ev.electrical_links.push_back({1, 3, 0.2, 0.0});
        CHECK(kind_of([&] { (void)plug_in(grid, st, ev); }) == AssumptionError::Kind::Malformed);
    }
    SUBCASE("explicit coefficients under the commuting regime") {
        const Microgrid cgrid(settings(Regime::Commuting), {node(1, 10.0), node(2, 5.0)}, {{1, 2, 0.1, 0.0}}, {});
        ev.electrical_links = {{2, 4, 0.2, 0.0}};
        ev.comm_links = {{4, 2, 1.0}};
        ev.dgu.scale_current = 3.0;
        CHECK(kind_of([&] { (void)plug_in(cgrid, state_of(vec({0, 0})), ev); }) ==
              AssumptionError::Kind::StabilityRegime);
    }
}

TEST_CASE("remap keeps values by id") {
    const SimState s{0.5, vec({1, 2, 3}), vec({4, 5, 6})};
    const auto r = remap_state(s, {1, 3, 5}, {3, 4, 5}, 48.0);
    CHECK(r.delta_v == vec({2, 0, 3}));
    CHECK(r.v == vec({5, 48, 6}));
    CHECK(r.t == 0.5);
}

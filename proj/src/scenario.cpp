#include "mgc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "mgc/error.hpp"

namespace mgc {
namespace {

std::string str(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

}  // namespace

const DguEntry* Scenario::find_dgu(DguId id) const {
    auto it = std::find_if(dgus.begin(), dgus.end(), [id](const DguEntry& d) { return d.spec.id == id; });
    return it == dgus.end() ? nullptr : &*it;
}

const LineEntry* Scenario::find_line(DguId a, DguId b) const {
    auto it = std::find_if(lines.begin(), lines.end(), [a, b](const LineEntry& l) {
        return (l.line.from == a && l.line.to == b) || (l.line.from == b && l.line.to == a);
    });
    return it == lines.end() ? nullptr : &*it;
}

void validate(const Scenario& sc) {
    const auto& s = sc.settings;
    if (!(sc.horizon > 0.0)) fail("horizon must be positive");
    if (sc.dt && !(*sc.dt > 0.0)) fail("dt must be positive");
    if (!(s.omega_c > 0.0)) fail("omega_c must be positive");
    if (!(s.gain > 0.0)) fail("gain (k_I) must be positive");
    if (!(s.mu > 0.0)) fail("mu must be positive");
    if (sc.dgus.empty()) fail("scenario declares no DGUs");

    std::set<DguId> ids;
    for (const auto& d : sc.dgus) {
        if (!ids.insert(d.spec.id).second) fail("duplicate DGU id " + std::to_string(d.spec.id));
        if (!(d.spec.scale_current > 0.0)) fail("DGU " + std::to_string(d.spec.id) + ": scale current must be positive");
        if (!std::isfinite(d.spec.load_current)) fail("DGU " + std::to_string(d.spec.id) + ": load current not finite");
        if (d.secondary && !d.present) fail("DGU " + std::to_string(d.spec.id) + ": secondary on but not connected");
    }

    std::set<std::pair<DguId, DguId>> pairs;
    for (const auto& l : sc.lines) {
        const auto& line = l.line;
        const auto tag = "line " + std::to_string(line.from) + "-" + std::to_string(line.to);
        if (!ids.count(line.from) || !ids.count(line.to)) fail(tag + " references an unknown DGU");
        if (line.from == line.to) fail(tag + " is a self-loop");
        if (!(line.resistance > 0.0)) fail(tag + ": resistance must be positive");
        if (line.inductance < 0.0) fail(tag + ": inductance must be non-negative");
        if (!pairs.insert(std::minmax(line.from, line.to)).second) fail("duplicate " + tag);
        if (l.closed && (!sc.find_dgu(line.from)->present || !sc.find_dgu(line.to)->present)) {
            fail(tag + " is closed but touches a DGU that is not connected at t = 0");
        }
    }

    if (s.regime == Regime::Commuting && !sc.comm.empty()) {
        fail("[comm] is only allowed in the d_identity regime; commuting derives a_ij = mu / R_ij");
    }
    std::set<std::pair<DguId, DguId>> comm_pairs;
    for (const auto& c : sc.comm) {
        if (!ids.count(c.a) || !ids.count(c.b) || c.a == c.b) fail("invalid communication link");
        if (!(c.weight > 0.0)) fail("communication coefficients must be positive");
        if (!comm_pairs.insert(std::minmax(c.a, c.b)).second) fail("duplicate communication link");
    }

    double last = 0.0;
    std::set<std::tuple<double, DguId, DguId>> targets;
    auto claim = [&](double t, DguId a, DguId b) {
        if (!targets.insert({t, std::min(a, b), std::max(a, b)}).second) {
            fail("two events target the same element at t = " + str(t));
        }
    };
    auto known = [&](DguId id, const char* what) {
        if (!ids.count(id)) fail(std::string(what) + " references unknown DGU " + std::to_string(id));
    };
    for (const auto& e : sc.events) {
        if (!(e.time >= 0.0 && e.time <= sc.horizon)) fail("event time " + str(e.time) + " outside [0, horizon]");
        if (e.time < last) fail("events must be listed in time order");
        last = e.time;
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, ConnectLine>) {
                    if (!sc.find_line(a.a, a.b)) {
                        fail("connect_line " + std::to_string(a.a) + " " + std::to_string(a.b) + ": no such line");
                    }
                    claim(e.time, a.a, a.b);
                } else if constexpr (std::is_same_v<T, EnableSecondary>) {
                    if (a.dgus.empty()) fail("enable_secondary lists no DGUs");
                    for (DguId id : a.dgus) {
                        known(id, "enable_secondary");
                        claim(e.time, id, id);
                    }
                } else if constexpr (std::is_same_v<T, PlugIn>) {
                    known(a.dgu, "plug_in");
                    claim(e.time, a.dgu, a.dgu);
                    if (a.via.empty()) fail("plug_in " + std::to_string(a.dgu) + " lists no neighbours");
                    for (DguId n : a.via) {
                        if (!sc.find_line(a.dgu, n)) {
                            fail("plug_in " + std::to_string(a.dgu) + ": no line to " + std::to_string(n));
                        }
                    }
                    if (s.regime == Regime::Commuting && !a.comm.empty()) {
                        fail("plug_in " + std::to_string(a.dgu) + ": commuting regime rejects explicit coefficients");
                    }
                    for (const auto& c : a.comm) {
                        if (!(c.weight > 0.0)) fail("communication coefficients must be positive");
                    }
                } else if constexpr (std::is_same_v<T, Unplug>) {
                    known(a.dgu, "unplug");
                    claim(e.time, a.dgu, a.dgu);
                } else {
                    known(a.dgu, "load_step");
                    claim(e.time, a.dgu, a.dgu);
                    if (!std::isfinite(a.load_current)) fail("load_step: load current not finite");
                }
            },
            e.action);
    }

    for (const auto& c : sc.checks) {
        if (!(c.from <= c.to)) fail("check window must satisfy from <= to");
        if (c.metric.kind == MetricKind::CurrentRatio) {
            known(c.metric.a, "ratio check");
            known(c.metric.b, "ratio check");
        }
    }
}

Microgrid initial_grid(const Scenario& sc) {
    std::vector<GridNode> nodes;
    for (const auto& d : sc.dgus) {
        if (d.present) nodes.push_back({d.spec, d.secondary});
    }
    std::vector<PowerLine> lines;
    for (const auto& l : sc.lines) {
        if (l.closed) lines.push_back(l.line);
    }
    std::vector<CommLink> comm;
    for (const auto& c : sc.comm) {
        if (sc.find_dgu(c.a)->present && sc.find_dgu(c.b)->present) comm.push_back(c);
    }
    return Microgrid(sc.settings, std::move(nodes), std::move(lines), std::move(comm));
}

Microgrid full_grid(const Scenario& sc) {
    std::vector<GridNode> nodes;
    for (const auto& d : sc.dgus) nodes.push_back({d.spec, true});
    std::vector<PowerLine> lines;
    for (const auto& l : sc.lines) lines.push_back(l.line);
    std::vector<CommLink> comm = sc.comm;
    for (const auto& e : sc.events) {
        if (const auto* p = std::get_if<PlugIn>(&e.action)) comm.insert(comm.end(), p->comm.begin(), p->comm.end());
    }
    return Microgrid(sc.settings, std::move(nodes), std::move(lines), std::move(comm));
}

Scenario builtin_stage_scenario() {
    Scenario sc;
    sc.name = "stages";
    sc.settings.regime = Regime::Commuting;
    sc.settings.mu = 1.0;
    sc.settings.gain = 1.0;
    sc.settings.mode = PrimaryMode::FirstOrder;
    sc.settings.omega_c = kDefaultOmegaC;
    sc.settings.v_ref = 48.0;
    sc.horizon = 45.0;

    // Rated currents double as scaling currents. Load currents are defaults, not measured data.
    const double rated[] = {10.0, 10.0, 10.0, 5.0, 5.0, 3.33, 3.33};
    const double load[] = {4.0, 4.0, 4.0, 2.0, 2.0, 1.5, 1.5};
    for (int i = 0; i < 7; ++i) {
        sc.dgus.push_back({{i + 1, rated[i], 48.0, load[i]}, i < 6, false});
    }
    struct Row {
        DguId a, b;
        double r, l;  // ohm, H
    };
    const Row rows[] = {{1, 2, 0.05, 2.1e-6}, {1, 3, 0.07, 1.8e-6}, {3, 4, 0.06, 1.0e-6},
                        {2, 4, 0.04, 2.3e-6}, {4, 5, 0.08, 1.8e-6}, {1, 6, 0.1, 2.5e-6},
                        {5, 6, 0.08, 3.0e-6}, {4, 7, 0.09, 2.3e-6}, {7, 5, 0.05, 2.4e-6}};
    for (const auto& r : rows) sc.lines.push_back({{r.a, r.b, r.r, r.l}, false});

    for (const auto& r : rows) {
        if (r.a <= 6 && r.b <= 6) sc.events.push_back({2.0, ConnectLine{r.a, r.b}});
    }
    sc.events.push_back({5.0, EnableSecondary{{1, 2, 3, 4, 5, 6}}});
    sc.events.push_back({15.0, PlugIn{7, {4, 5}, {}}});
    sc.events.push_back({25.0, LoadStep{1, 2.0 * load[0]}});
    sc.events.push_back({35.0, Unplug{3}});

    const Metric cs{MetricKind::CurrentSharing};
    const Metric vb{MetricKind::VoltageBalancing};
    sc.checks.push_back({0.0, 4.99, cs, Comparison::Above, 0.05});
    for (double start : {13.0, 23.0, 33.0}) {
        sc.checks.push_back({start, start + 1.99, cs, Comparison::AtMost, 1e-2});
        sc.checks.push_back({start, start + 1.99, vb, Comparison::AtMost, 1e-3});
    }
    sc.checks.push_back({23.0, 24.99, {MetricKind::CurrentRatio, 1, 4, 2.0}, Comparison::AtMost, 1e-2});
    sc.checks.push_back({23.0, 24.99, {MetricKind::CurrentRatio, 1, 7, 3.0}, Comparison::AtMost, 1e-2});
    sc.checks.push_back({43.0, 45.0, cs, Comparison::AtMost, 1e-2});
    sc.checks.push_back({43.0, 45.0, vb, Comparison::AtMost, 1e-3});
    return sc;
}

std::string describe(const Metric& metric) {
    switch (metric.kind) {
        case MetricKind::CurrentSharing: return "cs_error";
        case MetricKind::VoltageBalancing: return "vb_error";
        case MetricKind::CurrentRatio: {
            std::ostringstream os;
            os << "ratio " << metric.a << ' ' << metric.b << ' ' << metric.factor;
            return os.str();
        }
    }
    return "?";
}

double metric_value(const Trace& trace, const TraceSample& sample, const Metric& metric) {
    switch (metric.kind) {
        case MetricKind::CurrentSharing: return sample.cs_error;
        case MetricKind::VoltageBalancing: return sample.vb_error;
        case MetricKind::CurrentRatio: {
            auto column = [&](DguId id) -> std::ptrdiff_t {
                auto it = std::find(trace.ids.begin(), trace.ids.end(), id);
                return it == trace.ids.end() ? -1 : it - trace.ids.begin();
            };
            const auto a = column(metric.a);
            const auto b = column(metric.b);
            if (a < 0 || b < 0) return std::numeric_limits<double>::quiet_NaN();
            const double ia = sample.i_t[static_cast<std::size_t>(a)];
            const double ib = sample.i_t[static_cast<std::size_t>(b)];
            return std::abs(ia - metric.factor * ib) / std::abs(ia);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

bool Evaluation::all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

Evaluation evaluate(const Trace& trace, const Scenario& scenario) { return evaluate(trace, scenario.checks); }

Evaluation evaluate(const Trace& trace, const std::vector<Check>& checks) {
    Evaluation out;
    if (checks.empty()) return out;
    if (trace.samples.empty()) throw Error("cannot evaluate checks on an empty trace");
    const double first = trace.samples.front().t;
    const double last = trace.samples.back().t;
    const double slack = 1e-9 * std::max(1.0, std::abs(last));
    for (const auto& check : checks) {
        if (check.from < first - slack || check.to > last + slack) {
            throw Error("check window [" + str(check.from) + ", " + str(check.to) + "] is outside the trace [" +
                        str(first) + ", " + str(last) + "]");
        }
        CheckResult r{check, false, 0.0, 0};
        const bool at_most = check.comparison == Comparison::AtMost;
        double acc = at_most ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        bool saw_nan = false;
        for (const auto& s : trace.samples) {
            if (s.t < check.from - slack || s.t > check.to + slack) continue;
            const double x = metric_value(trace, s, check.metric);
            ++r.samples;
            if (std::isnan(x)) {
                saw_nan = true;
                continue;
            }
            acc = at_most ? std::max(acc, x) : std::min(acc, x);
        }
        r.value = saw_nan ? std::numeric_limits<double>::quiet_NaN() : acc;
        r.passed = r.samples > 0 && !saw_nan && (at_most ? acc <= check.threshold : acc > check.threshold);
        out.results.push_back(r);
    }
    return out;
}

}  // namespace mgc

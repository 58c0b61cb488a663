#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mgc/graph.hpp"
#include "mgc/grid.hpp"
#include "mgc/trace.hpp"

namespace mgc {

struct DguEntry {
    DguSpec spec;
    bool present = true;     // connected at t = 0
    bool secondary = false;  // consensus running at t = 0

    friend bool operator==(const DguEntry&, const DguEntry&) = default;
};

/// Catalog line; `closed` lines are in service at t = 0.
struct LineEntry {
    PowerLine line;
    bool closed = false;

    friend bool operator==(const LineEntry&, const LineEntry&) = default;
};

struct ConnectLine {
    DguId a = 0;
    DguId b = 0;
    friend bool operator==(const ConnectLine&, const ConnectLine&) = default;
};

struct EnableSecondary {
    std::vector<DguId> dgus;
    friend bool operator==(const EnableSecondary&, const EnableSecondary&) = default;
};

/// Connect a catalog DGU through the catalog lines to `via`.
struct PlugIn {
    DguId dgu = 0;
    std::vector<DguId> via;
    std::vector<CommLink> comm;  // D = I regime only
    friend bool operator==(const PlugIn&, const PlugIn&) = default;
};

struct Unplug {
    DguId dgu = 0;
    friend bool operator==(const Unplug&, const Unplug&) = default;
};

struct LoadStep {
    DguId dgu = 0;
    double load_current = 0.0;
    friend bool operator==(const LoadStep&, const LoadStep&) = default;
};

using EventAction = std::variant<ConnectLine, EnableSecondary, PlugIn, Unplug, LoadStep>;

struct Event {
    double time = 0.0;
    EventAction action;
    friend bool operator==(const Event&, const Event&) = default;
};

enum class MetricKind { CurrentSharing, VoltageBalancing, CurrentRatio };

/// cs_error, vb_error, or |I_ta - factor * I_tb| / |I_ta|.
struct Metric {
    MetricKind kind = MetricKind::CurrentSharing;
    DguId a = 0;
    DguId b = 0;
    double factor = 1.0;
    friend bool operator==(const Metric&, const Metric&) = default;
};

enum class Comparison { AtMost, Above };

/// Over every sample with from <= t <= to: AtMost passes when max(metric) <= threshold,
/// Above when min(metric) > threshold.
struct Check {
    double from = 0.0;
    double to = 0.0;
    Metric metric;
    Comparison comparison = Comparison::AtMost;
    double threshold = 0.0;
    friend bool operator==(const Check&, const Check&) = default;
};

struct Scenario {
    std::string name = "scenario";
    GridSettings settings;
    double horizon = 1.0;
    std::optional<double> dt;
    std::vector<DguEntry> dgus;
    std::vector<LineEntry> lines;
    std::vector<CommLink> comm;  // D = I regime only
    std::vector<Event> events;
    std::vector<Check> checks;

    friend bool operator==(const Scenario&, const Scenario&) = default;

    [[nodiscard]] const DguEntry* find_dgu(DguId id) const;
    [[nodiscard]] const LineEntry* find_line(DguId a, DguId b) const;
};

/// Throws ParseError describing the first inconsistency.
void validate(const Scenario& scenario);

/// Microgrid at t = 0.
[[nodiscard]] Microgrid initial_grid(const Scenario& scenario);

/// Every catalog DGU present, every catalog line closed, secondary layer on everywhere.
[[nodiscard]] Microgrid full_grid(const Scenario& scenario);

/// Seven DGUs, nine lines; first-order primary loops; a_ij = 1/R_ij; six stages
/// (connect 1-6 at 2 s, secondary on at 5 s, plug DGU 7 at 15 s, double I_L1 at
/// 25 s, unplug DGU 3 at 35 s, end at 45 s).
[[nodiscard]] Scenario builtin_stage_scenario();

[[nodiscard]] std::string describe(const Metric& metric);

/// Value of `metric` at one sample; NaN when a referenced DGU is not connected.
[[nodiscard]] double metric_value(const Trace& trace, const TraceSample& sample, const Metric& metric);

struct CheckResult {
    Check check;
    bool passed = false;
    double value = 0.0;  // max (AtMost) or min (Above) over the window
    std::size_t samples = 0;
};

struct Evaluation {
    std::vector<CheckResult> results;

    [[nodiscard]] bool all_passed() const;
};

/// Evaluates every check of the scenario against the trace. Throws Error when a
/// window is not covered by the trace.
[[nodiscard]] Evaluation evaluate(const Trace& trace, const Scenario& scenario);
[[nodiscard]] Evaluation evaluate(const Trace& trace, const std::vector<Check>& checks);

}  // namespace mgc

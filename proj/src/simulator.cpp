#include "mgc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mgc/dynamics.hpp"
#include "mgc/error.hpp"
#include "mgc/pnp.hpp"

namespace mgc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Run {
public:
    Run(const Scenario& sc, const SimulationOptions& opts) : sc_(sc), opts_(opts) {
        if (opts_.omega_c) {
            if (!(*opts_.omega_c > 0.0)) throw ParseError("omega_c must be positive");
            sc_.settings.omega_c = *opts_.omega_c;
        }
        if (opts_.dt && !(*opts_.dt > 0.0)) throw ParseError("dt must be positive");
        validate(sc_);
        check_catalog();

        for (const auto& d : sc_.dgus) trace_.ids.push_back(d.spec.id);
        std::sort(trace_.ids.begin(), trace_.ids.end());

        const double base_dt = opts_.dt ? *opts_.dt : sc_.dt ? *sc_.dt : 1e-3;
        interval_ = opts_.stride ? static_cast<double>(*opts_.stride) * base_dt
                                 : std::max(base_dt, sc_.horizon / 1e4);

        grid_ = initial_grid(sc_);
        grid_.check_connectivity();
        state_ = rest_state(grid_.inputs());
    }

    Trace run() {
        record();
        next_sample_ = interval_;
        std::size_t next_event = 0;
        const auto& events = sc_.events;
        while (true) {
            bool applied = false;
            while (next_event < events.size() && events[next_event].time <= state_.t) {
                apply(events[next_event]);
                trace_.event_times.push_back(events[next_event].time);
                ++next_event;
                applied = true;
            }
            if (applied) record();
            if (state_.t >= sc_.horizon) break;
            const double stop = next_event < events.size() ? events[next_event].time : sc_.horizon;
            integrate_to(stop);
        }
        if (trace_.samples.back().t < sc_.horizon) record();
        return std::move(trace_);
    }

private:
    void check_catalog() const {
        const double vref = sc_.settings.v_ref;
        for (const auto& d : sc_.dgus) {
            if (std::abs(d.spec.v_ref - vref) > 1e-12 * std::max(1.0, std::abs(vref))) {
                throw AssumptionError(AssumptionError::Kind::ReferenceVoltage,
                                      "DGU " + std::to_string(d.spec.id) + " has a different voltage reference");
            }
            if (sc_.settings.regime == Regime::DIdentity && std::abs(d.spec.scale_current - 1.0) > 1e-12) {
                throw AssumptionError(AssumptionError::Kind::StabilityRegime,
                                      "d_identity regime requires unit scaling currents");
            }
        }
    }

    void integrate_to(double stop) {
        const double span = stop - state_.t;
        if (span <= 0.0) return;
        const CoupledModel model = grid_.model();
        const Inputs inputs = grid_.inputs();
        const double nominal = opts_.dt ? *opts_.dt : sc_.dt ? *sc_.dt : default_time_step(model);
        const auto steps = std::max<long long>(1, static_cast<long long>(std::ceil(span / nominal - 1e-9)));
        const double h = span / static_cast<double>(steps);
        const double start = state_.t;
        for (long long k = 1; k <= steps; ++k) {
            state_ = step(model, state_, h, inputs);
            state_.t = k == steps ? stop : start + static_cast<double>(k) * h;
            // Segment ends are always kept so event instants show the state before and after.
            if (k == steps || state_.t >= next_sample_ - 1e-9 * interval_) {
                record();
                while (next_sample_ <= state_.t + 1e-9 * interval_) next_sample_ += interval_;
            }
        }
    }

    void sync_voltage() {
        if (sc_.settings.mode == PrimaryMode::UnitGain) state_.v = state_.delta_v + grid_.inputs().v_ref;
    }

    void apply(const Event& event) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, ConnectLine>) {
                    try {
                        grid_.add_line(sc_.find_line(a.a, a.b)->line);
                    } catch (const GraphError& e) {
                        throw AssumptionError(AssumptionError::Kind::Malformed, e.what());
                    }
                    grid_.check_connectivity();
                } else if constexpr (std::is_same_v<T, EnableSecondary>) {
                    for (DguId id : a.dgus) {
                        const auto idx = grid_.index_of(id);
                        if (!idx) {
                            throw AssumptionError(AssumptionError::Kind::Malformed,
                                                  "enable_secondary: DGU " + std::to_string(id) + " is not connected");
                        }
                        if (grid_.nodes()[*idx].secondary) continue;
                        grid_.set_secondary(id, true);
                        state_.delta_v(static_cast<Eigen::Index>(*idx)) = 0.0;
                    }
                    grid_.check_connectivity();
                } else if constexpr (std::is_same_v<T, PlugIn>) {
                    PlugEvent pe;
                    pe.kind = PlugEvent::Kind::PlugIn;
                    pe.dgu = sc_.find_dgu(a.dgu)->spec;
                    pe.time = event.time;
                    for (DguId n : a.via) pe.electrical_links.push_back(sc_.find_line(a.dgu, n)->line);
                    pe.comm_links = a.comm;
                    auto res = plug_in(grid_, state_, pe);
                    grid_ = std::move(res.grid);
                    state_ = std::move(res.state);
                } else if constexpr (std::is_same_v<T, Unplug>) {
                    PlugEvent pe;
                    pe.kind = PlugEvent::Kind::Unplug;
                    pe.dgu.id = a.dgu;
                    pe.time = event.time;
                    auto res = unplug(grid_, state_, pe, opts_.raw_removal);
                    grid_ = std::move(res.grid);
                    state_ = std::move(res.state);
                } else {
                    if (!grid_.contains(a.dgu)) {
                        throw AssumptionError(AssumptionError::Kind::Malformed,
                                              "load_step: DGU " + std::to_string(a.dgu) + " is not connected");
                    }
                    grid_.set_load(a.dgu, a.load_current);
                }
            },
            event.action);
        sync_voltage();
    }

    void record() {
        const auto n_all = trace_.ids.size();
        TraceSample s;
        s.t = state_.t;
        s.v.assign(n_all, kNaN);
        s.i_t.assign(n_all, kNaN);
        s.i_pu.assign(n_all, kNaN);
        s.delta_v.assign(n_all, kNaN);

        const Inputs inputs = grid_.inputs();
        const Outputs out = compute_outputs(state_.v, inputs.load_current, grid_.electrical(), grid_.scaling());
        const auto ids = grid_.ids();
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto col = static_cast<std::size_t>(
                std::lower_bound(trace_.ids.begin(), trace_.ids.end(), ids[i]) - trace_.ids.begin());
            const auto k = static_cast<Eigen::Index>(i);
            s.v[col] = state_.v(k);
            s.i_t[col] = out.i_t(k);
            s.i_pu[col] = out.i_pu(k);
            s.delta_v[col] = state_.delta_v(k);
        }
        if (!ids.empty()) {
            s.v_avg = out.v_avg;
            s.cs_error = out.i_pu.maxCoeff() - out.i_pu.minCoeff();
            s.vb_error = std::abs(out.v_avg - sc_.settings.v_ref);
            s.mean_delta_v = state_.delta_v.mean();
            s.total_output = out.i_t.sum();
            s.total_load = inputs.load_current.sum();
        }
        trace_.samples.push_back(std::move(s));
    }

    Scenario sc_;
    SimulationOptions opts_;
    Microgrid grid_;
    SimState state_;
    Trace trace_;
    double interval_ = 1e-3;
    double next_sample_ = 0.0;
};

}  // namespace

Trace simulate(const Scenario& scenario, const SimulationOptions& options) { return Run(scenario, options).run(); }

}  // namespace mgc

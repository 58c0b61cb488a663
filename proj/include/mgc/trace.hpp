#pragma once

#include <ostream>
#include <vector>

#include "mgc/graph.hpp"

namespace mgc {

/// One recorded instant. Per-DGU vectors follow Trace::ids; DGUs that are not
/// connected at that instant hold NaN.
struct TraceSample {
    double t = 0.0;
    std::vector<double> v;
    std::vector<double> i_t;
    std::vector<double> i_pu;
    std::vector<double> delta_v;
    double v_avg = 0.0;
    double cs_error = 0.0;
    double vb_error = 0.0;
    double mean_delta_v = 0.0;
    double total_output = 0.0;  // sum of I_t over connected DGUs
    double total_load = 0.0;    // sum of I_L over connected DGUs
};

struct Trace {
    std::vector<DguId> ids;  // every DGU the scenario knows, in id order
    std::vector<TraceSample> samples;
    std::vector<double> event_times;
};

/// Header `t,V_1..V_N,It_1..It_N,Ipu_1..Ipu_N,Vavg,cs_error,vb_error`, LF endings,
/// shortest round-trip decimal formatting, `nan` for disconnected DGUs.
void write_csv(const Trace& trace, std::ostream& out);

}  // namespace mgc

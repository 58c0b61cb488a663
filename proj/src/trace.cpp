#include "mgc/trace.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace mgc {
namespace {

void put(std::ostream& out, double x) {
    if (std::isnan(x)) {
        out << "nan";
        return;
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(const Trace& trace, std::ostream& out) {
    out << 't';
    for (const char* prefix : {"V_", "It_", "Ipu_"}) {
        for (DguId id : trace.ids) out << ',' << prefix << id;
    }
    out << ",Vavg,cs_error,vb_error\n";
    for (const auto& s : trace.samples) {
        put(out, s.t);
        for (const auto* column : {&s.v, &s.i_t, &s.i_pu}) {
            for (double x : *column) {
                out << ',';
                put(out, x);
            }
        }
        out << ',';
        put(out, s.v_avg);
        out << ',';
        put(out, s.cs_error);
        out << ',';
        put(out, s.vb_error);
        out << '\n';
    }
}

}  // namespace mgc

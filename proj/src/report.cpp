#include "mgc/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "mgc/equilibria.hpp"

namespace mgc {
namespace {

std::string fixed(double x, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, x);
    return buf;
}

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

nlohmann::json optional_number(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace

SpectralReport analyze_with_rates(const CoupledModel& model) {
    auto report = model.analyze();
    if (report.structure_holds && report.smallest_positive_eig) {
        report.rate_unit_gain = convergence_rate_unit_gain(report);
        report.rate_first_order = convergence_rate_first_order(report, model.omega_c);
    }
    return report;
}

std::string format_complex(std::complex<double> z, int precision) {
    const double eps = 0.5 * std::pow(10.0, -precision);
    const double re = std::abs(z.real()) < eps ? 0.0 : z.real();
    if (std::abs(z.imag()) < eps) return fixed(re, precision);
    return fixed(re, precision) + (z.imag() < 0 ? " - " : " + ") + fixed(std::abs(z.imag()), precision) + "i";
}

std::string spectral_text(const SpectralReport& r) {
    std::ostringstream out;
    out << "assumption status: " << to_string(r.assumption_status) << " (||LDM - MDL||_F = " << sci(r.commutator_norm)
        << ")\n";
    out << "eigenvalues of Q (" << r.eigenvalues.size() << "):\n";
    for (const auto& z : r.eigenvalues) out << "  " << format_complex(z) << '\n';
    out << "inertia: +" << r.inertia.positive << " -" << r.inertia.negative << " 0:" << r.inertia.zero
        << ", complex: " << r.complex_count << '\n';
    out << "kernel residual ||Q1||: " << sci(r.kernel_residual) << "\nrange residual ||1'Q||: " << sci(r.range_residual)
        << '\n';
    out << "diagonalizable: " << (r.diagonalizable ? "yes" : "no")
        << ", eigenvector condition: " << sci(r.eigenvector_condition) << '\n';
    if (r.smallest_positive_eig) out << "smallest positive eigenvalue: " << sci(*r.smallest_positive_eig) << '\n';
    if (r.rate_unit_gain) out << "decay rate, unit-gain loop: " << sci(*r.rate_unit_gain) << " 1/s\n";
    if (r.rate_first_order) out << "decay rate, first-order loop: " << sci(*r.rate_first_order) << " 1/s\n";
    out << "structure: " << (r.structure_holds ? "holds" : "violated") << '\n';
    for (const auto& v : r.violations) out << "  - " << v << '\n';
    return out.str();
}

std::string spectral_json(const SpectralReport& r) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& z : r.eigenvalues) ev.push_back({z.real(), z.imag()});
    nlohmann::json j;
    j["eigenvalues"] = ev;
    j["inertia"] = {{"positive", r.inertia.positive}, {"negative", r.inertia.negative}, {"zero", r.inertia.zero}};
    j["assumption_status"] = to_string(r.assumption_status);
    j["smallest_positive_eig"] = optional_number(r.smallest_positive_eig);
    j["kernel_residual"] = r.kernel_residual;
    j["range_residual"] = r.range_residual;
    j["complex_count"] = r.complex_count;
    j["diagonalizable"] = r.diagonalizable;
    j["eigenvector_condition"] = r.eigenvector_condition;
    j["commutator_norm"] = r.commutator_norm;
    j["structure_holds"] = r.structure_holds;
    j["violations"] = r.violations;
    j["rate_unit_gain"] = optional_number(r.rate_unit_gain);
    j["rate_first_order"] = optional_number(r.rate_first_order);
    return j.dump(2) + '\n';
}

std::string checks_text(const Evaluation& evaluation) {
    std::ostringstream out;
    for (const auto& res : evaluation.results) {
        const auto& c = res.check;
        out << (res.passed ? "PASS " : "FAIL ") << '[' << fixed(c.from, 2) << ", " << fixed(c.to, 2) << "] "
            << describe(c.metric) << (c.comparison == Comparison::AtMost ? " <= " : " > ") << sci(c.threshold)
            << "  observed " << sci(res.value) << " over " << res.samples << " samples\n";
    }
    out << (evaluation.all_passed() ? "all checks passed" : "some checks failed") << '\n';
    return out.str();
}

}  // namespace mgc

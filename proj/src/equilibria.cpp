#include "mgc/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgc/error.hpp"

namespace mgc {
namespace {

void require_connected(const CoupledModel& model) {
    const auto verdict = check_connectivity(model.electrical, model.communication);
    if (!verdict.electrical) {
        throw AssumptionError(AssumptionError::Kind::Connectivity, "electrical graph is not weakly connected");
    }
    if (!verdict.communication) {
        throw AssumptionError(AssumptionError::Kind::Connectivity, "communication graph is not connected");
    }
}

void require_stable_regime(const SpectralReport& report) {
    if (report.assumption_status == AssumptionStatus::Neither) {
        throw UnsupportedRegime("convergence rate requires D = I or a commuting product LDM = MDL");
    }
}

}  // namespace

EquilibriumSolution solve_equilibrium_unit_gain(const CoupledModel& model, const Eigen::VectorXd& load_current,
                                                const Eigen::VectorXd& v_ref, double alpha) {
    const auto n = static_cast<Eigen::Index>(model.size());
    if (load_current.size() != n || v_ref.size() != n) throw DimensionError("equilibrium: input size mismatch");
    if (n == 0) throw DimensionError("equilibrium: empty network");
    require_connected(model);

    EquilibriumSolution sol;
    sol.delta_v_hat = Eigen::VectorXd::Zero(n);
    if (n > 1) {
        const Eigen::VectorXd rhs = -model.ld * load_current - model.q * v_ref;
        const Eigen::MatrixXd t = invariant_subspace_transform(static_cast<std::size_t>(n));
        const Eigen::PartialPivLU<Eigen::MatrixXd> t_lu(t);
        const Eigen::MatrixXd block = t_lu.solve(model.q * t);
        const Eigen::VectorXd c = t_lu.solve(rhs);
        // Drop the H1-perp coordinate: block(n-1, n-1) = 0 and c(n-1) = 0.
        const Eigen::FullPivLU<Eigen::MatrixXd> q11(block.topLeftCorner(n - 1, n - 1));
        if (!q11.isInvertible()) throw NumericalError("restriction of Q to H1 is singular");
        const Eigen::VectorXd y = q11.solve(c.head(n - 1));
        sol.delta_v_hat = t.leftCols(n - 1) * y;
    }
    sol.alpha = alpha;
    sol.delta_v = sol.delta_v_hat + Eigen::VectorXd::Constant(n, alpha);
    sol.v_star = sol.delta_v + v_ref;
    // I_t = I_L - B I_line = I_L + M V
    sol.i_t_star = load_current + model.m * sol.v_star;
    sol.shared_level = (model.scaling.diagonal().array() * sol.i_t_star.array()).mean();
    return sol;
}

EquilibriumSolution solve_equilibrium_first_order(const CoupledModel& model, const Eigen::VectorXd& load_current,
                                                  const Eigen::VectorXd& v_ref, double alpha) {
    if (!(model.omega_c > 0.0)) throw DimensionError("omega_c must be positive");
    return solve_equilibrium_unit_gain(model, load_current, v_ref, alpha);
}

double equilibrium_residual(const CoupledModel& model, const Eigen::VectorXd& delta_v,
                            const Eigen::VectorXd& load_current, const Eigen::VectorXd& v_ref) {
    return (model.q * delta_v + model.ld * load_current + model.q * v_ref).norm();
}

double convergence_rate_unit_gain(const SpectralReport& report) {
    require_stable_regime(report);
    if (!report.smallest_positive_eig) throw UnsupportedRegime("Q has no strictly positive eigenvalue");
    return *report.smallest_positive_eig;
}

std::pair<std::complex<double>, std::complex<double>> first_order_roots(double gamma, double omega_c) {
    // x^2 + w x + w g = 0
    const double disc = omega_c * omega_c - 4.0 * omega_c * gamma;
    if (disc >= 0.0) {
        const double big = -0.5 * (omega_c + std::sqrt(disc));
        const double small = omega_c * gamma / big;
        return {{big, 0.0}, {small, 0.0}};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {{-0.5 * omega_c, im}, {-0.5 * omega_c, -im}};
}

std::vector<std::complex<double>> first_order_spectrum(const SpectralReport& report, double omega_c) {
    require_stable_regime(report);
    if (!(omega_c > 0.0)) throw DimensionError("omega_c must be positive");
    std::vector<std::complex<double>> out{{0.0, 0.0}, {-omega_c, 0.0}};
    bool skipped_zero = false;
    for (const auto& z : report.eigenvalues) {
        if (!skipped_zero && std::abs(z) <= report.zero_tolerance) {
            skipped_zero = true;
            continue;
        }
        const auto [a, b] = first_order_roots(z.real(), omega_c);
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

double convergence_rate_first_order(const SpectralReport& report, double omega_c) {
    const auto spectrum = first_order_spectrum(report, omega_c);
    double max_re = -std::numeric_limits<double>::infinity();
    // spectrum[0] is the structural zero
    for (std::size_t k = 1; k < spectrum.size(); ++k) max_re = std::max(max_re, spectrum[k].real());
    return -max_re;
}

}  // namespace mgc

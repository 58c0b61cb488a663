#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mgc/model.hpp"
#include "mgc/spectral.hpp"

namespace mgc {

/// Steady state of either closed loop for constant inputs.
/// The full family is delta_v = delta_v_hat + alpha * 1; the fields below
/// are evaluated at the stored alpha.
struct EquilibriumSolution {
    Eigen::VectorXd delta_v_hat;  // unique zero-mean solution, V
    double alpha = 0.0;           // free component along 1, V
    Eigen::VectorXd delta_v;      // delta_v_hat + alpha * 1
    Eigen::VectorXd v_star;       // delta_v + v_ref
    Eigen::VectorXd i_t_star;     // A
    double shared_level = 0.0;    // common value of d_i * I_ti, p.u.
};

/// Solves Q dV = -L D I_L - Q V_ref on H1 in the coordinates of
/// invariant_subspace_transform(). Throws AssumptionError when either graph is
/// disconnected.
[[nodiscard]] EquilibriumSolution solve_equilibrium_unit_gain(const CoupledModel& model,
                                                              const Eigen::VectorXd& load_current,
                                                              const Eigen::VectorXd& v_ref, double alpha = 0.0);

/// Equilibrium of the first-order loop. Identical delta_v part; omega_c drops out.
[[nodiscard]] EquilibriumSolution solve_equilibrium_first_order(const CoupledModel& model,
                                                                const Eigen::VectorXd& load_current,
                                                                const Eigen::VectorXd& v_ref, double alpha = 0.0);

/// ||Q dV + L D I_L + Q V_ref||.
[[nodiscard]] double equilibrium_residual(const CoupledModel& model, const Eigen::VectorXd& delta_v,
                                          const Eigen::VectorXd& load_current, const Eigen::VectorXd& v_ref);

/// Decay constant of the unit-gain loop on H1: the smallest strictly positive eigenvalue of Q.
/// Throws UnsupportedRegime when neither D = I nor LDM = MDL holds.
[[nodiscard]] double convergence_rate_unit_gain(const SpectralReport& report);

/// Roots of x^2 / w_c + x + gamma = 0.
[[nodiscard]] std::pair<std::complex<double>, std::complex<double>> first_order_roots(double gamma, double omega_c);

/// Predicted spectrum of the 2N x 2N first-order matrix: {0, -w_c} plus both
/// roots for every positive eigenvalue gamma of Q.
[[nodiscard]] std::vector<std::complex<double>> first_order_spectrum(const SpectralReport& report, double omega_c);

/// Decay constant of the first-order loop: -max Re(lambda) over the nonzero
/// eigenvalues of the first-order matrix, reported as a positive number.
[[nodiscard]] double convergence_rate_first_order(const SpectralReport& report, double omega_c);

}  // namespace mgc

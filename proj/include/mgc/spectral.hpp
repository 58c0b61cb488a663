#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mgc/graph.hpp"

namespace mgc {

/// D = diag(1 / I_ti^s). Entries are strictly positive.
class ScalingMatrix {
public:
    ScalingMatrix() = default;
    explicit ScalingMatrix(Eigen::VectorXd diagonal);

    static ScalingMatrix identity(std::size_t n);
    /// d_i = 1 / scale_currents[i].
    static ScalingMatrix from_scale_currents(const std::vector<double>& scale_currents);

    [[nodiscard]] const Eigen::VectorXd& diagonal() const noexcept { return d_; }
    [[nodiscard]] Eigen::MatrixXd matrix() const { return d_.asDiagonal(); }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(d_.size()); }
    [[nodiscard]] bool is_identity() const;

private:
    Eigen::VectorXd d_;
};

enum class AssumptionStatus { DIdentity, Commuting, Neither };

[[nodiscard]] std::string_view to_string(AssumptionStatus status);

struct H1Split {
    Eigen::VectorXd hat;  // zero-mean part
    Eigen::VectorXd bar;  // <v> * 1
};

/// Unique split v = hat + bar with hat in H1 (zero mean) and bar in span(1).
[[nodiscard]] H1Split project_h1(const Eigen::VectorXd& v);

/// Q = L D M, in that order.
[[nodiscard]] Eigen::MatrixXd build_q(const Eigen::MatrixXd& comm_laplacian, const ScalingMatrix& d,
                                      const Eigen::MatrixXd& electrical_laplacian);

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

struct SpectralReport {
    std::vector<std::complex<double>> eigenvalues;  // sorted by descending real part, then imaginary part
    double zero_tolerance = 0.0;
    double kernel_residual = 0.0;  // ||Q 1||
    double range_residual = 0.0;   // ||1^T Q||
    Inertia inertia;               // over eigenvalues that are real within tolerance
    int complex_count = 0;         // eigenvalues with a significant imaginary part
    bool diagonalizable = false;
    double eigenvector_condition = 0.0;
    AssumptionStatus assumption_status = AssumptionStatus::Neither;
    double commutator_norm = 0.0;  // ||LDM - MDL||_F
    std::optional<double> smallest_positive_eig;
    /// Under D = I or a commuting product: every eigenvalue real, >= -tol, exactly one zero.
    bool structure_holds = false;
    std::vector<std::string> violations;

    std::optional<double> rate_unit_gain;
    std::optional<double> rate_first_order;
};

/// Eigenstructure of Q. Never throws on regime violations; those are reported.
[[nodiscard]] SpectralReport analyze_q(const Eigen::MatrixXd& q, const ScalingMatrix& d,
                                       const Eigen::MatrixXd& comm_laplacian,
                                       const Eigen::MatrixXd& electrical_laplacian);

[[nodiscard]] AssumptionStatus classify_assumptions(const Eigen::MatrixXd& comm_laplacian, const ScalingMatrix& d,
                                                    const Eigen::MatrixXd& electrical_laplacian,
                                                    double* commutator_norm = nullptr);

/// Inertia of Q as a real matrix (complex eigenvalues skipped).
[[nodiscard]] Inertia inertia_of(const std::vector<std::complex<double>>& eigenvalues, double tol);

/// Inertia of D^1/2 L D^1/2 * D^1/2 M D^1/2 after symmetrization. Equals the inertia
/// of Q only when LDM = MDL, where the product is already symmetric.
[[nodiscard]] Inertia congruent_inertia(const Eigen::MatrixXd& comm_laplacian, const ScalingMatrix& d,
                                        const Eigen::MatrixXd& electrical_laplacian);

/// T = [e1-e2 | e2-e3 | ... | e_{N-1}-e_N | 1]. The first N-1 columns span H1.
[[nodiscard]] Eigen::MatrixXd invariant_subspace_transform(std::size_t n);

/// Printed data of the negative-eigenvalue example: two 9-node graphs with
/// different topologies and a positive diagonal D.
struct CounterexampleFixture {
    std::vector<Edge> comm_edges;        // G1, 9 edges
    std::vector<Edge> electrical_edges;  // G2, 10 edges
    Eigen::VectorXd comm_weights;
    Eigen::VectorXd electrical_weights;
    ScalingMatrix scaling;

    [[nodiscard]] Eigen::MatrixXd comm_incidence() const;
    [[nodiscard]] Eigen::MatrixXd electrical_incidence() const;
    [[nodiscard]] Eigen::MatrixXd comm_laplacian() const;
    [[nodiscard]] Eigen::MatrixXd electrical_laplacian() const;
    [[nodiscard]] Eigen::MatrixXd q() const;
};

[[nodiscard]] const CounterexampleFixture& counterexample_fixture();

/// The nine eigenvalues as published (four decimals).
[[nodiscard]] std::vector<std::complex<double>> counterexample_published_eigenvalues();

[[nodiscard]] SpectralReport counterexample_appendix_c();

/// Largest distance from a published eigenvalue to its best unused match in `computed`.
[[nodiscard]] double max_matching_error(const std::vector<std::complex<double>>& published,
                                        const std::vector<std::complex<double>>& computed);

}  // namespace mgc

#include "mgc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mgc/error.hpp"

namespace mgc {
namespace {

// |Im| below this is rounding noise from the nonsymmetric eigensolver.
bool is_real(const std::complex<double>& z) { return std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z)); }

void sort_spectrum(std::vector<std::complex<double>>& ev) {
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

double frobenius(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.norm(); }

}  // namespace

ScalingMatrix::ScalingMatrix(Eigen::VectorXd diagonal) : d_(std::move(diagonal)) {
    for (Eigen::Index i = 0; i < d_.size(); ++i) {
        if (!(d_(i) > 0.0) || !std::isfinite(d_(i))) throw DimensionError("scaling entries must be positive and finite");
    }
}

ScalingMatrix ScalingMatrix::identity(std::size_t n) {
    return ScalingMatrix(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
}

ScalingMatrix ScalingMatrix::from_scale_currents(const std::vector<double>& scale_currents) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(scale_currents.size()));
    for (std::size_t i = 0; i < scale_currents.size(); ++i) {
        if (!(scale_currents[i] > 0.0)) throw DimensionError("scaling currents must be positive");
        d(static_cast<Eigen::Index>(i)) = 1.0 / scale_currents[i];
    }
    return ScalingMatrix(std::move(d));
}

bool ScalingMatrix::is_identity() const {
    return (d_.array() - 1.0).abs().maxCoeff() <= 1e-12;
}

std::string_view to_string(AssumptionStatus status) {
    switch (status) {
        case AssumptionStatus::DIdentity: return "D_identity";
        case AssumptionStatus::Commuting: return "commuting";
        case AssumptionStatus::Neither: return "neither";
    }
    return "neither";
}

H1Split project_h1(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw DimensionError("project_h1: empty vector");
    const double mean = v.mean();
    Eigen::VectorXd bar = Eigen::VectorXd::Constant(v.size(), mean);
    return {v - bar, bar};
}

Eigen::MatrixXd build_q(const Eigen::MatrixXd& comm_laplacian, const ScalingMatrix& d,
                        const Eigen::MatrixXd& electrical_laplacian) {
    const auto n = comm_laplacian.rows();
    if (comm_laplacian.cols() != n || electrical_laplacian.rows() != n || electrical_laplacian.cols() != n ||
        static_cast<Eigen::Index>(d.size()) != n) {
        throw DimensionError("build_q: L, D and M must all be N x N");
    }
    return comm_laplacian * d.diagonal().asDiagonal() * electrical_laplacian;
}

AssumptionStatus classify_assumptions(const Eigen::MatrixXd& comm_laplacian, const ScalingMatrix& d,
                                      const Eigen::MatrixXd& electrical_laplacian, double* commutator_norm) {
    const Eigen::MatrixXd ldm = build_q(comm_laplacian, d, electrical_laplacian);
    const Eigen::MatrixXd mdl = build_q(electrical_laplacian, d, comm_laplacian);
    const double comm = frobenius(ldm - mdl);
    if (commutator_norm) *commutator_norm = comm;
    if (d.is_identity()) return AssumptionStatus::DIdentity;
    if (comm <= 1e-9 * std::max(1.0, frobenius(ldm))) return AssumptionStatus::Commuting;
    return AssumptionStatus::Neither;
}

Inertia inertia_of(const std::vector<std::complex<double>>& eigenvalues, double tol) {
    Inertia out;
    for (const auto& z : eigenvalues) {
        if (!is_real(z)) continue;
        if (std::abs(z) <= tol) {
            ++out.zero;
        } else if (z.real() > 0.0) {
            ++out.positive;
        } else {
            ++out.negative;
        }
    }
    return out;
}

Inertia congruent_inertia(const Eigen::MatrixXd& comm_laplacian, const ScalingMatrix& d,
                          const Eigen::MatrixXd& electrical_laplacian) {
    const Eigen::VectorXd root = d.diagonal().cwiseSqrt();
    const Eigen::MatrixXd l = root.asDiagonal() * comm_laplacian * root.asDiagonal();
    const Eigen::MatrixXd m = root.asDiagonal() * electrical_laplacian * root.asDiagonal();
    const Eigen::MatrixXd lm = l * m;
    // Symmetric only when LDM commutes; the symmetric part is what Sylvester's law speaks about.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (lm + lm.transpose()), Eigen::EigenvaluesOnly);
    std::vector<std::complex<double>> ev;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) ev.emplace_back(solver.eigenvalues()(i), 0.0);
    return inertia_of(ev, zero_tolerance(lm));
}

SpectralReport analyze_q(const Eigen::MatrixXd& q, const ScalingMatrix& d, const Eigen::MatrixXd& comm_laplacian,
                         const Eigen::MatrixXd& electrical_laplacian) {
    const auto n = q.rows();
    if (q.cols() != n || comm_laplacian.rows() != n || electrical_laplacian.rows() != n ||
        static_cast<Eigen::Index>(d.size()) != n) {
        throw DimensionError("analyze_q: inconsistent dimensions");
    }
    SpectralReport report;
    report.zero_tolerance = zero_tolerance(q);
    report.assumption_status = classify_assumptions(comm_laplacian, d, electrical_laplacian, &report.commutator_norm);

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    report.kernel_residual = (q * ones).norm();
    report.range_residual = (ones.transpose() * q).norm();

    if (n == 0) return report;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(q, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigen decomposition of Q did not converge");
    const Eigen::VectorXcd values = solver.eigenvalues();
    Eigen::MatrixXcd vectors = solver.eigenvectors();

    for (Eigen::Index i = 0; i < n; ++i) {
        auto z = values(i);
        if (is_real(z)) {
            z = {z.real(), 0.0};
        } else {
            ++report.complex_count;
        }
        report.eigenvalues.push_back(z);
    }
    report.inertia = inertia_of(report.eigenvalues, report.zero_tolerance);

    for (const auto& z : report.eigenvalues) {
        if (z.imag() == 0.0 && z.real() > report.zero_tolerance) {
            if (!report.smallest_positive_eig || z.real() < *report.smallest_positive_eig) {
                report.smallest_positive_eig = z.real();
            }
        }
    }

    // Diagonalizability: each cluster of (numerically) repeated eigenvalues
    // must carry as many independent eigenvectors as its multiplicity.
    for (Eigen::Index j = 0; j < n; ++j) vectors.col(j).normalize();
    Eigen::JacobiSVD<Eigen::MatrixXcd> full_svd(vectors);
    const auto& sv = full_svd.singularValues();
    report.eigenvector_condition =
        sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();

    bool defective = false;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        std::vector<Eigen::Index> cluster{i};
        used[static_cast<std::size_t>(i)] = true;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double gap = std::abs(values(i) - values(j));
            const double scale = std::max(std::abs(values(i)), std::abs(values(j)));
            if (gap <= 1e-6 * scale + report.zero_tolerance) {
                cluster.push_back(j);
                used[static_cast<std::size_t>(j)] = true;
            }
        }
        if (cluster.size() < 2) continue;
        Eigen::MatrixXcd block(n, static_cast<Eigen::Index>(cluster.size()));
        for (std::size_t k = 0; k < cluster.size(); ++k) block.col(static_cast<Eigen::Index>(k)) = vectors.col(cluster[k]);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
        const auto& s = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            if (s(k) > 1e-8 * s(0)) ++rank;
        }
        if (rank < static_cast<Eigen::Index>(cluster.size())) defective = true;
    }
    report.diagonalizable = !defective;

    sort_spectrum(report.eigenvalues);

    if (report.assumption_status != AssumptionStatus::Neither) {
        if (report.complex_count > 0) report.violations.push_back("complex eigenvalues under a stable regime");
        for (const auto& z : report.eigenvalues) {
            if (z.real() < -report.zero_tolerance) {
                report.violations.push_back("negative eigenvalue under a stable regime");
                break;
            }
        }
        if (report.inertia.zero != 1) report.violations.push_back("zero eigenvalue is not simple");
        if (!report.diagonalizable) report.violations.push_back("Q appears defective");
        report.structure_holds = report.violations.empty();
    }
    return report;
}

Eigen::MatrixXd invariant_subspace_transform(std::size_t n) {
    if (n < 2) throw DimensionError("invariant_subspace_transform needs N >= 2");
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index k = 0; k + 1 < size; ++k) {
        t(k, k) = 1.0;
        t(k + 1, k) = -1.0;
    }
    t.col(size - 1).setOnes();
    return t;
}

Eigen::MatrixXd CounterexampleFixture::comm_incidence() const { return incidence_matrix(9, comm_edges); }
Eigen::MatrixXd CounterexampleFixture::electrical_incidence() const { return incidence_matrix(9, electrical_edges); }
Eigen::MatrixXd CounterexampleFixture::comm_laplacian() const { return laplacian(comm_incidence(), comm_weights); }
Eigen::MatrixXd CounterexampleFixture::electrical_laplacian() const {
    return laplacian(electrical_incidence(), electrical_weights);
}
Eigen::MatrixXd CounterexampleFixture::q() const { return build_q(comm_laplacian(), scaling, electrical_laplacian()); }

const CounterexampleFixture& counterexample_fixture() {
    // Edges are (source, target) with zero-based node positions; the source
    // carries +1 in the incidence column.
    static const CounterexampleFixture fixture = [] {
        CounterexampleFixture f;
        f.comm_edges = {{4, 0}, {4, 1}, {5, 2}, {8, 3}, {5, 4}, {6, 5}, {7, 5}, {6, 7}, {8, 6}};
        f.electrical_edges = {{1, 0}, {2, 1}, {3, 2}, {7, 2}, {3, 4}, {5, 3}, {4, 5}, {6, 5}, {7, 6}, {7, 8}};
        f.comm_weights.resize(9);
        f.comm_weights << 0.8842, 0.8676, 0.9167, 0.8456, 0.2113, 0.0038, 0.4139, 0.1918, 0.9815;
        f.electrical_weights.resize(10);
        f.electrical_weights << 0.6074, 0.9785, 0.8275, 0.3907, 0.4405, 0.2719, 0.1663, 0.8310, 0.3885, 0.8292;
        Eigen::VectorXd d(9);
        d << 0.5977, 0.4297, 0.4937, 0.0058, 0.4643, 0.0005, 0.6299, 0.8209, 0.3597;
        f.scaling = ScalingMatrix(d);
        return f;
    }();
    return fixture;
}

std::vector<std::complex<double>> counterexample_published_eigenvalues() {
    return {{1.3891, 0.1564}, {1.3891, -0.1564}, {0.9210, 0.0}, {0.5879, 0.0},  {0.4509, 0.0},
            {0.1057, 0.0},    {-0.0002, 0.0039}, {-0.0002, -0.0039}, {0.0, 0.0}};
}

SpectralReport counterexample_appendix_c() {
    const auto& f = counterexample_fixture();
    const Eigen::MatrixXd l = f.comm_laplacian();
    const Eigen::MatrixXd m = f.electrical_laplacian();
    return analyze_q(build_q(l, f.scaling, m), f.scaling, l, m);
}

double max_matching_error(const std::vector<std::complex<double>>& published,
                          const std::vector<std::complex<double>>& computed) {
    if (published.size() != computed.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> taken(computed.size(), false);
    double worst = 0.0;
    for (const auto& p : published) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        for (std::size_t k = 0; k < computed.size(); ++k) {
            if (taken[k]) continue;
            const double dist = std::abs(p - computed[k]);
            if (dist < best) {
                best = dist;
                best_index = k;
            }
        }
        taken[best_index] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace mgc

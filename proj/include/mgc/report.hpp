#pragma once

#include <string>

#include "mgc/model.hpp"
#include "mgc/scenario.hpp"
#include "mgc/spectral.hpp"

namespace mgc {

/// analyze() plus both decay constants when the spectral structure holds.
[[nodiscard]] SpectralReport analyze_with_rates(const CoupledModel& model);

[[nodiscard]] std::string format_complex(std::complex<double> z, int precision = 4);

[[nodiscard]] std::string spectral_text(const SpectralReport& report);

/// Keys: eigenvalues ([re, im] pairs), inertia, assumption_status,
/// smallest_positive_eig, kernel_residual, range_residual, plus the
/// diagnostics and rates (null when absent).
[[nodiscard]] std::string spectral_json(const SpectralReport& report);

/// One line per check: PASS/FAIL, window, metric, observed value.
[[nodiscard]] std::string checks_text(const Evaluation& evaluation);

}  // namespace mgc

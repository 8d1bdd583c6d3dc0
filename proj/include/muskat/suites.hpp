#pragma once

#include <vector>

#include "muskat/diagnostics.hpp"
#include "muskat/io.hpp"

namespace muskat {

/// Verification suites bundling the diagnostics checks.
///
/// operators — Fourier-side identities of the quadrature engine: the
///   constant-coefficient reduction against Lambda, the H^{1/2} form of the
///   D integral with its truncation-convergence study, the zero mean of
///   L_f[|f''|^p], structural consistency of the slope and curvature
///   equations with the evolution right side, and dilation covariance.
/// bounds — the pointwise nonlinear lower bounds on random band-limited
///   data, the modulus-of-continuity bound on data constructed to obey it,
///   the implicit-radius equation, and the remainder envelopes.
/// theorems — simulation-level conclusions: maximum principles, curvature
///   decay envelope, energy-inequality ledgers, and the twin-trajectory
///   divergence probe.
std::vector<CheckReport> suite_operators(const RunConfig& cfg);
std::vector<CheckReport> suite_bounds(const RunConfig& cfg);
std::vector<CheckReport> suite_theorems(const RunConfig& cfg);

std::vector<CheckReport> run_suite(const std::string& name, const RunConfig& cfg);

}  // namespace muskat

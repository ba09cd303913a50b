#pragma once

// Whole-metric checks surfaced by the CLI: the three conditions for constant
// flag curvature, the Bianchi conclusion, Hamel residuals, projective
// invariance of the curvature data, and the Beltrami equivalence.

#include "spraylab/catalog.hpp"
#include "spraylab/report.hpp"

namespace spraylab {

/// Points with cond(g) above this are excluded from verdicts and flagged.
inline constexpr double kConditionExclusion = 1e6;

/// Per-point isotropy, |d_J xi|, |d_h xi| and kappa; verdict "constant flag
/// curvature" iff all three residual maxima (with the dimension gating) and
/// the kappa spread are below tolerance. Axiom failures mark the report
/// invalid instead of throwing.
CheckReport cc_check(const MetricSpec& metric, const CheckConfig& config);

/// max |d_h xi| over samples for an isotropic spray, dim >= 3.
/// Throws PreconditionError for dim == 2 or when isotropy fails.
CheckReport bianchi_check(const MetricSpec& metric, const CheckConfig& config);

/// Hamel 2-form residual |d_h d_J P| of a factor against the metric's spray.
CheckReport hamel_check(const MetricSpec& metric, const FactorSpec& factor,
                        const CheckConfig& config);

/// Projective invariance of the curvature data under S -> S - 2PC:
/// (a) the horizontal projector shift, (b) the xi shift, (c) the d_J xi shift,
/// (d) invariance of d_h xi. Requires an isotropic base spray.
CheckReport projective_invariants_check(const MetricSpec& metric, const FactorSpec& factor,
                                        const CheckConfig& config);

/// Hamel verdict vs the deformed spray's own three conditions, with the
/// equivalence between them asserted. kappa of the deformed spray is reported
/// when a candidate normalization exists (flat base spray, positive factor).
CheckReport beltrami_check(const MetricSpec& metric, const FactorSpec& factor,
                           const CheckConfig& config);

/// Structural identity suite on one metric: projector algebra, the bracket
/// relations between Phi and R, fast-path vs bracket-route agreement,
/// semi-basicity, trace rules, metricity, reconstruction of R from xi, and
/// the constant-curvature identities where applicable.
CheckReport identity_suite(const MetricSpec& metric, const CheckConfig& config);

/// Informational kappa = rho / F^2 table with spread statistics.
CheckReport flag_curvature_report(const MetricSpec& metric, const CheckConfig& config);

/// Number of worker threads to use: config value, hardware concurrency when
/// zero, both capped by the SPRAYLAB_THREADS environment variable.
int effective_threads(const CheckConfig& config);

/// Index-parallel sweep; each index writes only its own slot, so results are
/// identical regardless of thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace spraylab

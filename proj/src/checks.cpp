#include "spraylab/checks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "spraylab/curvature.hpp"
#include "spraylab/fn_calculus.hpp"
#include "spraylab/sampling.hpp"

namespace spraylab {

namespace {

using Battery = std::vector<std::array<VecXd, 2>>;

template <typename Form1>
double form1_norm(const Form1& om, const PhasePointd& p, const Battery& battery) {
    double out = 0.0;
    for (const auto& pair : battery) out = std::max(out, std::abs(om(p, pair[0])));
    return out;
}

template <typename Form2>
double form2_norm(const Form2& om, const PhasePointd& p, const Battery& battery) {
    double out = 0.0;
    for (const auto& pair : battery) out = std::max(out, std::abs(om(p, pair[0], pair[1])));
    return out;
}

template <typename FormA, typename FormB>
double form1_residual(const FormA& a, const FormB& b, const PhasePointd& p, const Battery& battery) {
    double diff = 0.0, scale = 1.0;
    for (const auto& pair : battery) {
        const double va = a(p, pair[0]);
        const double vb = b(p, pair[0]);
        diff = std::max(diff, std::abs(va - vb));
        scale = std::max({scale, std::abs(va), std::abs(vb)});
    }
    return diff / scale;
}

template <typename FormA, typename FormB>
double form2_residual(const FormA& a, const FormB& b, const PhasePointd& p, const Battery& battery) {
    double diff = 0.0, scale = 1.0;
    for (const auto& pair : battery) {
        const double va = a(p, pair[0], pair[1]);
        const double vb = b(p, pair[0], pair[1]);
        diff = std::max(diff, std::abs(va - vb));
        scale = std::max({scale, std::abs(va), std::abs(vb)});
    }
    return diff / scale;
}

template <typename FormA, typename FormB>
double vform1_residual(const FormA& a, const FormB& b, const PhasePointd& p, const Battery& battery) {
    double diff = 0.0, scale = 1.0;
    for (const auto& pair : battery) {
        const VecXd va = a(p, pair[0]);
        const VecXd vb = b(p, pair[0]);
        diff = std::max(diff, (va - vb).cwiseAbs().maxCoeff());
        scale = std::max({scale, va.cwiseAbs().maxCoeff(), vb.cwiseAbs().maxCoeff()});
    }
    return diff / scale;
}

template <typename FormA, typename FormB>
double vform2_residual(const FormA& a, const FormB& b, const PhasePointd& p, const Battery& battery) {
    double diff = 0.0, scale = 1.0;
    for (const auto& pair : battery) {
        const VecXd va = a(p, pair[0], pair[1]);
        const VecXd vb = b(p, pair[0], pair[1]);
        diff = std::max(diff, (va - vb).cwiseAbs().maxCoeff());
        scale = std::max({scale, va.cwiseAbs().maxCoeff(), vb.cwiseAbs().maxCoeff()});
    }
    return diff / scale;
}

struct Aggregator {
    void add(const std::vector<PointRecord>& records, CheckReport& report) const {
        std::map<std::string, double> maxima, sums;
        std::map<std::string, int> counts;
        for (const auto& rec : records) {
            if (rec.excluded) continue;
            for (const auto& [key, value] : rec.values) {
                auto [it, fresh] = maxima.try_emplace(key, value);
                if (!fresh) it->second = std::max(it->second, value);
                sums[key] += value;
                counts[key] += 1;
            }
        }
        for (const auto& [key, value] : maxima) {
            report.aggregates["max_" + key] = value;
            report.aggregates["mean_" + key] = sums[key] / counts[key];
        }
    }
};

/// Sample standard deviation of one per-point value; also writes min/max.
double kappa_statistics(const std::vector<PointRecord>& records, const std::string& key,
                        CheckReport& report) {
    std::vector<double> vals;
    for (const auto& rec : records)
        if (!rec.excluded && rec.values.count(key)) vals.push_back(rec.values.at(key));
    if (vals.empty()) return 0.0;
    double mean = 0.0;
    for (const double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (const double v : vals) var += (v - mean) * (v - mean);
    var = vals.size() > 1 ? var / static_cast<double>(vals.size() - 1) : 0.0;
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    report.aggregates[key + "_mean"] = mean;
    report.aggregates[key + "_spread"] = std::sqrt(var);
    report.aggregates[key + "_min"] = *lo;
    report.aggregates[key + "_max"] = *hi;
    return std::sqrt(var);
}

double max_value(const std::vector<PointRecord>& records, const std::string& key) {
    double out = 0.0;
    for (const auto& rec : records)
        if (!rec.excluded && rec.values.count(key)) out = std::max(out, rec.values.at(key));
    return out;
}

/// Runs `body(i)` over all points, collecting the first evaluation error.
bool sweep(int count, const CheckConfig& config, const std::function<void(int)>& body,
           CheckReport& report) {
    std::mutex error_lock;
    std::string first_error;
    parallel_for(count, effective_threads(config), [&](int i) {
        try {
            body(i);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> guard(error_lock);
            if (first_error.empty()) first_error = e.what();
        }
    });
    if (!first_error.empty()) {
        report.invalid = true;
        report.invalid_reason = "evaluation failure: " + first_error;
        return false;
    }
    return true;
}

CheckReport base_report(std::string command, const MetricSpec& metric, const CheckConfig& config) {
    CheckReport report;
    report.command = std::move(command);
    report.metric = metric.name;
    report.dim = metric.dim;
    report.config = config;
    return report;
}

/// Finsler axiom precheck shared by the metric-level commands; marks the
/// report invalid on the first failing point.
bool axioms_hold(const MetricSpec& metric, const std::vector<PhasePointd>& points,
                 const CheckConfig& config, CheckReport& report) {
    for (const auto& p : points) {
        const AxiomRecord rec = finsler_axioms_at(metric, p);
        if (!rec.error.empty()) {
            report.invalid = true;
            report.invalid_reason = "axiom failure: " + rec.error;
            return false;
        }
        if (!rec.positive || rec.homogeneity_defect > config.tol.identity * 10.0) {
            report.invalid = true;
            report.invalid_reason = rec.positive
                                        ? "axiom failure: homogeneity defect above tolerance"
                                        : "axiom failure: metric not positive at a sample point";
            return false;
        }
    }
    return true;
}

void check_factor_homogeneity(const FactorSpec& factor, const std::vector<PhasePointd>& points) {
    for (const auto& p : points) {
        const double value = std::abs(factor(p));
        if (euler_defect(factor, p) > 1e-8 * std::max(1.0, value))
            throw PreconditionError("projective factor is not positively 1-homogeneous (Euler "
                                    "defect above 1e-8 at a sample point)");
    }
}

/// Deformed-or-plain CC sweep: fills per-point isotropy, dJxi, dhxi (and
/// kappa when a metric is supplied), then writes the gated verdicts under the
/// given key prefix. Returns the summary pass flag.
template <typename GF>
bool cc_sweep(const Spray<GF>& spray, const MetricSpec* metric_for_kappa,
              const std::vector<PhasePointd>& points, const Battery& battery,
              const CheckConfig& config, const std::string& prefix, CheckReport& report) {
    const int n = spray.dim;
    auto phi_m = jacobi_matrix(spray);
    auto xi = curvature_one_form(spray);
    auto h = horizontal_projector(spray);
    auto J = vertical_endo();
    auto dJxi = fn_derive(J, xi);
    auto dhxi = fn_derive(h, xi);

    const std::size_t base_index = report.points.size();
    report.points.resize(base_index + points.size());
    const bool ok = sweep(
        static_cast<int>(points.size()), config,
        [&](int i) {
            const PhasePointd& p = points[i];
            PointRecord rec;
            rec.x = p.x;
            rec.y = p.y;
            double cond = 0.0;
            if (metric_for_kappa) {
                const MetricTensor mt = metric_tensor(*metric_for_kappa, p);
                cond = mt.condition;
                rec.values[prefix + "cond_g"] = cond;
            }
            const IsotropyDecomposition iso = isotropy_decompose_at(phi_m, p);
            rec.values[prefix + "isotropy_residual"] = iso.residual;
            const double xi_scale = std::max(1.0, form1_norm(xi, p, battery));
            rec.values[prefix + "dJxi"] = form2_norm(dJxi, p, battery) / xi_scale;
            rec.values[prefix + "dhxi"] = form2_norm(dhxi, p, battery) / xi_scale;
            if (iso.residual > config.tol.curvature) rec.flag = "xi formal: isotropy residual above tolerance";
            if (metric_for_kappa) {
                const double f = (*metric_for_kappa)(p);
                rec.values[prefix + "kappa"] = iso.rho / (f * f);
            }
            if (cond > kConditionExclusion) {
                rec.excluded = true;
                rec.flag = "excluded: cond(g) above 1e6";
            }
            report.points[base_index + i] = std::move(rec);
        },
        report);
    if (!ok) return false;

    int usable = 0;
    for (std::size_t i = base_index; i < report.points.size(); ++i)
        if (!report.points[i].excluded) ++usable;
    if (usable == 0) {
        report.invalid = true;
        report.invalid_reason = "all points excluded (ill-conditioned fundamental tensor)";
        return false;
    }

    const double iso_max = max_value(report.points, prefix + "isotropy_residual");
    const double dJxi_max = max_value(report.points, prefix + "dJxi");
    const double dhxi_max = max_value(report.points, prefix + "dhxi");

    Verdict isotropy{iso_max < config.tol.curvature, iso_max, config.tol.curvature, ""};
    if (n == 2) {
        isotropy.pass = true;
        isotropy.note = "auto-pass: two-dimensional sprays are isotropic (residual still measured)";
    }
    Verdict dJ{dJxi_max < config.tol.xi, dJxi_max, config.tol.xi, ""};
    Verdict dh{dhxi_max < config.tol.xi, dhxi_max, config.tol.xi, ""};
    if (n > 2) {
        const bool measured_ok = dh.pass;
        dh.pass = true;
        dh.note = "auto-pass in dim > 2 (Bianchi conclusion; residual still measured)";
        // The conclusion only covers isotropic sprays; a violation there is an
        // internal inconsistency, not a property of the metric.
        if (!measured_ok && iso_max < config.tol.curvature)
            report.verdicts[prefix + "internal_consistency"] =
                Verdict{false, dhxi_max, config.tol.xi,
                        "d_h xi above tolerance on an isotropic spray in dim > 2"};
    }
    report.verdicts[prefix + "isotropy"] = isotropy;
    report.verdicts[prefix + "dJxi"] = dJ;
    report.verdicts[prefix + "dhxi"] = dh;

    bool summary = isotropy.pass && dJ.pass && dh.pass;
    if (metric_for_kappa) {
        const double spread = kappa_statistics(report.points, prefix + "kappa", report);
        Verdict kc{spread < config.tol.xi, spread, config.tol.xi,
                   "sample standard deviation of kappa over points"};
        report.verdicts[prefix + "kappa_spread"] = kc;
        summary = summary && kc.pass;
    }
    return summary;
}

}  // namespace

int effective_threads(const CheckConfig& config) {
    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char* cap_text = std::getenv("SPRAYLAB_THREADS")) {
        const int cap = std::atoi(cap_text);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return threads;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

CheckReport cc_check(const MetricSpec& metric, const CheckConfig& config) {
    CheckReport report = base_report("check-cc", metric, config);
    const auto points = sample_points(metric, config.points, config.seed);
    const auto battery = tangent_battery(metric.dim, config.battery_size, config.seed);
    if (!axioms_hold(metric, points, config, report)) return report;

    const auto spray = geodesic_spray(metric, metric.dim, metric.name);
    const bool summary = cc_sweep(spray, &metric, points, battery, config, "", report);
    if (report.invalid) return report;
    Aggregator{}.add(report.points, report);

    Verdict overall{summary, 0.0, config.tol.xi, "isotropy AND dJxi AND dhxi AND kappa_spread"};
    overall.max_residual = std::max({report.verdicts["isotropy"].max_residual,
                                     report.verdicts["dJxi"].max_residual,
                                     report.verdicts["dhxi"].max_residual});
    report.verdicts["constant_flag_curvature"] = overall;
    return report;
}

CheckReport bianchi_check(const MetricSpec& metric, const CheckConfig& config) {
    if (metric.dim < 3)
        throw PreconditionError(
            "bianchi check applies in dimension >= 3 only (the obstruction is nontrivial in 2D)");
    CheckReport report = base_report("bianchi", metric, config);
    const auto points = sample_points(metric, config.points, config.seed);
    const auto battery = tangent_battery(metric.dim, config.battery_size, config.seed);
    if (!axioms_hold(metric, points, config, report)) return report;

    const auto spray = geodesic_spray(metric, metric.dim, metric.name);
    auto phi_m = jacobi_matrix(spray);
    for (const auto& p : points) {
        const double residual = isotropy_decompose_at(phi_m, p).residual;
        if (residual > config.tol.curvature)
            throw PreconditionError("bianchi check requires an isotropic spray; isotropy residual " +
                                    decimal_string(residual) + " at a sample point");
    }

    auto xi = curvature_one_form(spray);
    auto dhxi = fn_derive(horizontal_projector(spray), xi);
    report.points.resize(points.size());
    if (!sweep(
            static_cast<int>(points.size()), config,
            [&](int i) {
                PointRecord rec;
                rec.x = points[i].x;
                rec.y = points[i].y;
                const double xi_scale = std::max(1.0, form1_norm(xi, points[i], battery));
                rec.values["dhxi"] = form2_norm(dhxi, points[i], battery) / xi_scale;
                report.points[i] = std::move(rec);
            },
            report))
        return report;

    Aggregator{}.add(report.points, report);
    const double dh_max = max_value(report.points, "dhxi");
    report.verdicts["dhxi"] = Verdict{dh_max < config.tol.xi, dh_max, config.tol.xi,
                                      "curvature 1-form of an isotropic spray, dim >= 3"};
    return report;
}

CheckReport hamel_check(const MetricSpec& metric, const FactorSpec& factor,
                        const CheckConfig& config) {
    CheckReport report = base_report("hamel", metric, config);
    report.factor = factor.name;
    const auto points = sample_points(metric, config.points, config.seed);
    const auto battery = tangent_battery(metric.dim, config.battery_size, config.seed);
    if (!axioms_hold(metric, points, config, report)) return report;
    check_factor_homogeneity(factor, points);

    const auto spray = geodesic_spray(metric, metric.dim, metric.name);
    auto h = horizontal_projector(spray);
    auto P = scalar_field([factor](const auto& p) { return factor(p); });
    auto dJP = fn_derive(vertical_endo(), P);
    auto hamel_form = fn_derive(h, dJP);

    report.points.resize(points.size());
    if (!sweep(
            static_cast<int>(points.size()), config,
            [&](int i) {
                PointRecord rec;
                rec.x = points[i].x;
                rec.y = points[i].y;
                const double scale = std::max(1.0, form1_norm(dJP, points[i], battery));
                rec.values["hamel_residual"] = form2_norm(hamel_form, points[i], battery) / scale;
                report.points[i] = std::move(rec);
            },
            report))
        return report;

    Aggregator{}.add(report.points, report);
    const double h_max = max_value(report.points, "hamel_residual");
    report.verdicts["hamel"] =
        Verdict{h_max < config.tol.curvature, h_max, config.tol.curvature, "max |d_h d_J P|"};
    return report;
}

CheckReport projective_invariants_check(const MetricSpec& metric, const FactorSpec& factor,
                                        const CheckConfig& config) {
    CheckReport report = base_report("projective-invariants", metric, config);
    report.factor = factor.name;
    const auto points = sample_points(metric, config.points, config.seed);
    const auto battery = tangent_battery(metric.dim, config.battery_size, config.seed);
    if (!axioms_hold(metric, points, config, report)) return report;
    check_factor_homogeneity(factor, points);

    const auto spray = geodesic_spray(metric, metric.dim, metric.name);
    auto phi_m = jacobi_matrix(spray);
    for (const auto& p : points) {
        const double residual = isotropy_decompose_at(phi_m, p).residual;
        if (residual > config.tol.curvature)
            throw PreconditionError("projective invariants require an isotropic base spray; "
                                    "isotropy residual " +
                                    decimal_string(residual) + " at a sample point");
    }

    auto P = scalar_field([factor](const auto& p) { return factor(p); });
    const auto deformed = deform_spray(spray, P);

    auto J = vertical_endo();
    auto C = liouville();
    auto h = horizontal_projector(spray);
    auto ht = horizontal_projector(deformed);
    auto xi = curvature_one_form(spray);
    auto xit = curvature_one_form(deformed);
    auto dJP = fn_derive(J, P);
    auto dhP = fn_derive(h, P);

    auto ht_formula = h - P * J - tensor(dJP, C);
    auto xit_formula = xi + P * dJP - dhP;
    auto dJxit = fn_derive(J, xit);
    auto dJxit_formula = fn_derive(J, xi) - fn_derive(J, dhP);
    auto dhtxit = fn_derive(ht, xit);
    auto dhxi = fn_derive(h, xi);

    report.points.resize(points.size());
    if (!sweep(
            static_cast<int>(points.size()), config,
            [&](int i) {
                const PhasePointd& p = points[i];
                PointRecord rec;
                rec.x = p.x;
                rec.y = p.y;
                rec.values["projector_shift"] = vform1_residual(ht, ht_formula, p, battery);
                rec.values["xi_shift"] = form1_residual(xit, xit_formula, p, battery);
                rec.values["dJxi_shift"] = form2_residual(dJxit, dJxit_formula, p, battery);
                rec.values["cotton_invariance"] = form2_residual(dhtxit, dhxi, p, battery);
                rec.values["dhxi_norm"] = form2_norm(dhxi, p, battery);
                report.points[i] = std::move(rec);
            },
            report))
        return report;

    Aggregator{}.add(report.points, report);
    for (const char* key : {"projector_shift", "xi_shift", "dJxi_shift", "cotton_invariance"}) {
        const double worst = max_value(report.points, key);
        report.verdicts[key] = Verdict{worst < config.tol.xi, worst, config.tol.xi, ""};
    }
    return report;
}

CheckReport beltrami_check(const MetricSpec& metric, const FactorSpec& factor,
                           const CheckConfig& config) {
    CheckReport report = base_report("beltrami", metric, config);
    report.factor = factor.name;

    const CheckReport base_cc = cc_check(metric, config);
    if (!base_cc.all_pass()) {
        report.invalid = true;
        report.invalid_reason =
            "precondition failure: the base metric does not pass the constant-curvature check";
        return report;
    }

    const auto points = sample_points(metric, config.points, config.seed);
    const auto battery = tangent_battery(metric.dim, config.battery_size, config.seed);
    check_factor_homogeneity(factor, points);

    const auto spray = geodesic_spray(metric, metric.dim, metric.name);
    auto P = scalar_field([factor](const auto& p) { return factor(p); });

    // Hamel residual of the factor against the base spray.
    auto h = horizontal_projector(spray);
    auto dJP = fn_derive(vertical_endo(), P);
    auto hamel_form = fn_derive(h, dJP);
    std::vector<double> hamel_values(points.size());
    if (!sweep(
            static_cast<int>(points.size()), config,
            [&](int i) {
                const double scale = std::max(1.0, form1_norm(dJP, points[i], battery));
                hamel_values[i] = form2_norm(hamel_form, points[i], battery) / scale;
            },
            report))
        return report;

    // The deformed spray's own three conditions, evaluated from scratch.
    const auto deformed = deform_spray(spray, P);
    const bool deformed_pass = cc_sweep(deformed, nullptr, points, battery, config, "deformed_", report);
    if (report.invalid) return report;
    for (std::size_t i = 0; i < points.size(); ++i)
        report.points[i].values["hamel_residual"] = hamel_values[i];

    const double hamel_max = max_value(report.points, "hamel_residual");
    const Verdict hamel{hamel_max < config.tol.curvature, hamel_max, config.tol.curvature,
                        "max |d_h d_J P| against the base spray"};
    report.verdicts["hamel"] = hamel;

    Verdict deformed_cc{deformed_pass, report.verdicts["deformed_dJxi"].max_residual, config.tol.xi,
                        "isotropy AND dJxi AND dhxi of the deformed spray; whether the deformed "
                        "spray is metrizable is not decided here"};
    report.verdicts["deformed_cc"] = deformed_cc;

    report.verdicts["beltrami_equivalence"] =
        Verdict{hamel.pass == deformed_cc.pass, std::abs(hamel_max), config.tol.curvature,
                "Hamel factor <=> deformed spray keeps constant-curvature conditions"};

    // kappa of the deformed spray, when a candidate normalization exists:
    // for a flat base spray and positive factor, 2P plays the metric.
    double g_scale = 0.0;
    double p_min = 1e300;
    for (const auto& p : points) {
        g_scale = std::max(g_scale, spray.coeffs(p).cwiseAbs().maxCoeff());
        p_min = std::min(p_min, factor(p));
    }
    if (g_scale < 1e-10 && p_min > 0.0) {
        auto rho_tilde = ricci_scalar(deformed);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double two_p = 2.0 * factor(points[i]);
            report.points[i].values["kappa_tilde"] = rho_tilde(points[i]) / (two_p * two_p);
        }
        kappa_statistics(report.points, "kappa_tilde", report);
        report.aggregates["kappa_tilde_normalization_2P"] = 1.0;
    }
    Aggregator{}.add(report.points, report);
    return report;
}

CheckReport flag_curvature_report(const MetricSpec& metric, const CheckConfig& config) {
    CheckReport report = base_report("flag-curvature", metric, config);
    const auto points = sample_points(metric, config.points, config.seed);
    if (!axioms_hold(metric, points, config, report)) return report;

    const auto spray = geodesic_spray(metric, metric.dim, metric.name);
    auto kappa = flag_curvature_field(spray, metric);
    report.points.resize(points.size());
    if (!sweep(
            static_cast<int>(points.size()), config,
            [&](int i) {
                PointRecord rec;
                rec.x = points[i].x;
                rec.y = points[i].y;
                rec.values["kappa"] = kappa(points[i]);
                rec.values["F"] = metric(points[i]);
                rec.values["cond_g"] = metric_tensor(metric, points[i]).condition;
                report.points[i] = std::move(rec);
            },
            report))
        return report;
    kappa_statistics(report.points, "kappa", report);
    return report;
}

CheckReport identity_suite(const MetricSpec& metric, const CheckConfig& config) {
    CheckReport report = base_report("invariants", metric, config);
    const int n = metric.dim;
    const auto points = sample_points(metric, config.points, config.seed);
    const auto battery = tangent_battery(n, config.battery_size, config.seed);
    if (!axioms_hold(metric, points, config, report)) return report;

    const auto spray = geodesic_spray(metric, n, metric.name);
    auto S = spray_field(spray);
    auto C = liouville();
    auto J = vertical_endo();
    auto Id = identity_endo();
    auto h = horizontal_projector(spray);
    auto v = vertical_projector(spray);
    auto Phi = jacobi_endomorphism(spray);
    auto phi_m = jacobi_matrix(spray);
    auto R = curvature_tensor(spray);
    auto xi = curvature_one_form(spray);
    auto rho = ricci_scalar(spray);
    auto F = scalar_field([metric](const auto& p) { return metric(p); });
    auto kappa = flag_curvature_field(spray, metric);

    auto h_fn = 0.5 * (Id - fn_bracket(S, J));
    auto phi_fn = compose_endo(v, fn_bracket(S, h));
    auto r_fn = 0.5 * fn_bracket(h, h);
    auto three_r = fn_bracket(J, Phi);
    auto phi_from_r = insert_field(S, R);
    auto dJxi = fn_derive(J, xi);
    auto dhxi = fn_derive(h, xi);
    auto dJF = fn_derive(J, F);
    auto dhF = fn_derive(h, F);
    auto reconstruction = wedge(xi, J) - tensor(dJxi, C);
    auto cfc = scalar_field([kappa, F](const auto& p) { return kappa(p) * F(p); });
    auto cfc_r = wedge(cfc * dJF, J);
    auto xi_cfc = cfc * dJF;
    auto dJkappa = fn_derive(J, kappa);
    auto dhkappa = fn_derive(h, kappa);
    auto wedge_kF = wedge(dJkappa, dJF);
    auto s_kappa = scalar_field([S, kappa](const auto& p) { return ddir(kappa, p, S(p)); });
    auto is_dh_identity = s_kappa * dJF - F * dhkappa;
    const FactorSpec rand_factor = factor_catalog("rand_homog", n, config.seed);
    auto P = scalar_field([rand_factor](const auto& p) { return rand_factor(p); });
    auto dJP = fn_derive(J, P);
    auto d_R_P = scalar_form<2>([R, P](const auto& p, const auto& args) {
        return ddir(P, p, R(p, args));
    });
    auto d_R_P_rule = wedge(xi, dJP) - P * dJxi;
    auto i_s_dhxi = insert_field(S, dhxi);
    auto tr_phi = semi_basic_trace(Phi);
    auto i_s_xi = insert_field(S, xi);

    // Gate the isotropy- and constant-curvature-only identities on measured data.
    double iso_max = 0.0;
    std::vector<double> kappas;
    for (const auto& p : points) {
        iso_max = std::max(iso_max, isotropy_decompose_at(phi_m, p).residual);
        kappas.push_back(kappa(p));
    }
    const bool isotropic = iso_max < config.tol.curvature;
    double kappa_spread = 0.0;
    for (const double k : kappas)
        kappa_spread = std::max(kappa_spread, std::abs(k - kappas.front()));
    const bool constant_curvature = isotropic && kappa_spread < config.tol.xi;

    report.points.resize(points.size());
    if (!sweep(
            static_cast<int>(points.size()), config,
            [&](int i) {
                const PhasePointd& p = points[i];
                PointRecord rec;
                rec.x = p.x;
                rec.y = p.y;
                auto& vals = rec.values;

                // algebraic identities
                double jj = 0.0, hv = 0.0, idem = 0.0, alt = 0.0, semib = 0.0;
                for (const auto& pair : battery) {
                    const VecXd& u = pair[0];
                    const VecXd& w = pair[1];
                    jj = std::max(jj, J(p, J(p, u)).cwiseAbs().maxCoeff());
                    hv = std::max(hv, (h(p, u) + v(p, u) - u).cwiseAbs().maxCoeff());
                    idem = std::max(idem, (h(p, h(p, u)) - h(p, u)).cwiseAbs().maxCoeff());
                    idem = std::max(idem, (v(p, v(p, u)) - v(p, u)).cwiseAbs().maxCoeff());
                    idem = std::max(idem, h(p, v(p, u)).cwiseAbs().maxCoeff());
                    alt = std::max(alt, (R(p, u, w) + R(p, w, u)).cwiseAbs().maxCoeff());
                    alt = std::max(alt, std::abs(dJxi(p, u, w) + dJxi(p, w, u)));
                    // semi-basicity: vertical insertions and horizontal output parts
                    VecXd vert = VecXd::Zero(2 * n);
                    vert.tail(n) = u.head(n);
                    semib = std::max(semib, Phi(p, vert).cwiseAbs().maxCoeff());
                    semib = std::max(semib, R(p, vert, w).cwiseAbs().maxCoeff());
                    semib = std::max(semib, std::abs(xi(p, vert)));
                    semib = std::max(semib, std::abs(dJxi(p, vert, w)));
                    semib = std::max(semib, Phi(p, u).head(n).cwiseAbs().maxCoeff());
                    semib = std::max(semib, R(p, u, w).head(n).cwiseAbs().maxCoeff());
                }
                vals["J_squared"] = jj;
                vals["projector_sum"] = hv;
                vals["projector_idempotent"] = idem;
                vals["alternation"] = alt;
                vals["semi_basicity"] = semib;
                {
                    double jjf = 0.0;
                    auto bracket_jj = fn_bracket(J, J);
                    for (const auto& pair : battery)
                        jjf = std::max(jjf, bracket_jj(p, pair[0], pair[1]).cwiseAbs().maxCoeff());
                    vals["bracket_JJ"] = jjf;
                }

                // spray axioms
                const VecXd js_c = (J(p, S(p)) - C(p)).eval();
                const VecXd cs_s = (lie_bracket(C, S)(p) - S(p)).eval();
                vals["spray_axioms"] =
                    std::max(js_c.cwiseAbs().maxCoeff(), cs_s.cwiseAbs().maxCoeff());
                vals["euler_F"] = euler_defect(F, p, 1.0) / std::max(1.0, std::abs(F(p)));
                {
                    const int m = p.dim();
                    VecXd dir = VecXd::Zero(2 * m);
                    dir.tail(m) = p.y;
                    auto coeffs = spray.coeffs;
                    const VecXd cg = ddir_vec(coeffs, p, dir);
                    const VecXd g2 = (2.0 * coeffs(p)).eval();
                    vals["homogeneity_G"] =
                        (cg - g2).cwiseAbs().maxCoeff() / std::max(1.0, g2.cwiseAbs().maxCoeff());
                }

                // bracket-route agreement and the curvature relations
                vals["h_vs_bracket_route"] = vform1_residual(h, h_fn, p, battery);
                vals["phi_vs_bracket_route"] = vform1_residual(Phi, phi_fn, p, battery);
                vals["R_vs_bracket_route"] = vform2_residual(R, r_fn, p, battery);
                vals["three_R_identity"] =
                    vform2_residual(three_r, 3.0 * R, p, battery);
                vals["phi_from_R"] = vform1_residual(phi_from_r, Phi, p, battery);
                vals["metricity"] = form1_norm(dhF, p, battery) / std::max(1.0, std::abs(F(p)));
                vals["trace_J"] = std::abs(semi_basic_trace(J)(p) - n);

                if (isotropic) {
                    vals["trace_phi_rule"] =
                        std::abs(tr_phi(p) - (n - 1) * i_s_xi(p)) /
                        std::max(1.0, std::abs(tr_phi(p)));
                    vals["reconstruction"] = vform2_residual(R, reconstruction, p, battery);
                    vals["d_R_factor_rule"] = form2_residual(d_R_P, d_R_P_rule, p, battery);
                    if (n >= 3) {
                        const double xs = std::max(1.0, form1_norm(xi, p, battery));
                        vals["iS_dhxi"] = form1_norm(i_s_dhxi, p, battery) / xs;
                    }
                }
                if (constant_curvature) {
                    vals["cfc_curvature"] = vform2_residual(R, cfc_r, p, battery);
                    vals["xi_constant_form"] = form1_residual(xi, xi_cfc, p, battery);
                    const double fs = std::max(1.0, std::abs(F(p)));
                    vals["dJkappa_wedge"] = form2_norm(wedge_kF, p, battery) / fs;
                    vals["iS_dh_kappa_identity"] = form1_norm(is_dh_identity, p, battery) / (fs * fs);
                }
                report.points[i] = std::move(rec);
            },
            report))
        return report;

    Aggregator{}.add(report.points, report);
    const auto add_verdict = [&](const std::string& key, double tol, const std::string& note = "") {
        const double worst = max_value(report.points, key);
        report.verdicts[key] = Verdict{worst < tol, worst, tol, note};
    };
    add_verdict("J_squared", config.tol.identity);
    add_verdict("projector_sum", config.tol.identity);
    add_verdict("projector_idempotent", config.tol.identity);
    add_verdict("alternation", config.tol.identity);
    add_verdict("semi_basicity", config.tol.identity);
    add_verdict("bracket_JJ", config.tol.identity);
    add_verdict("spray_axioms", config.tol.identity);
    add_verdict("euler_F", config.tol.identity);
    add_verdict("homogeneity_G", config.tol.curvature);
    add_verdict("trace_J", config.tol.identity);
    add_verdict("h_vs_bracket_route", config.tol.curvature);
    add_verdict("phi_vs_bracket_route", config.tol.curvature);
    add_verdict("R_vs_bracket_route", config.tol.curvature);
    add_verdict("three_R_identity", config.tol.curvature);
    add_verdict("phi_from_R", config.tol.curvature);
    add_verdict("metricity", config.tol.curvature);
    if (isotropic) {
        add_verdict("trace_phi_rule", config.tol.curvature);
        add_verdict("reconstruction", config.tol.xi);
        add_verdict("d_R_factor_rule", config.tol.xi,
                    "random 1-homogeneous factor, seed-matched");
        if (n >= 3) add_verdict("iS_dhxi", config.tol.xi);
    } else {
        report.verdicts["reconstruction"] =
            Verdict{true, iso_max, config.tol.curvature, "not applicable: spray is not isotropic"};
    }
    if (constant_curvature) {
        add_verdict("cfc_curvature", config.tol.xi);
        add_verdict("xi_constant_form", config.tol.xi);
        add_verdict("dJkappa_wedge", config.tol.xi);
        add_verdict("iS_dh_kappa_identity", config.tol.xi);
    }
    return report;
}

}  // namespace spraylab

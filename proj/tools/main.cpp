// spraylab: numerical checks of the curvature apparatus of Finsler sprays.
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed or evaluation broke,
// 2 bad usage.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spraylab/ad.hpp"
#include "spraylab/checks.hpp"

namespace {

using namespace spraylab;

struct CliOptions {
    std::string metric_name;
    std::string metric_file;
    std::string factor_name;
    std::string factor_file;
    int dim = 2;
    CheckConfig config;
    std::string json_path;
};

MetricSpec resolve_metric(const CliOptions& opt) {
    if (!opt.metric_file.empty()) return metric_from_file(opt.metric_file);
    if (opt.metric_name.empty()) throw ConfigError("a metric is required (--metric or --metric-file)");
    return metric_catalog(opt.metric_name, opt.dim, opt.config.seed);
}

FactorSpec resolve_factor(const CliOptions& opt) {
    if (!opt.factor_file.empty()) return factor_from_file(opt.factor_file);
    if (opt.factor_name.empty()) throw ConfigError("a factor is required (--factor or --factor-file)");
    return factor_catalog(opt.factor_name, opt.dim, opt.config.seed);
}

void add_common(CLI::App* cmd, CliOptions& opt, bool with_factor) {
    cmd->add_option("--metric", opt.metric_name, "catalog metric name");
    cmd->add_option("--metric-file", opt.metric_file, "metric expression file (dim=<n> header)");
    if (with_factor) {
        cmd->add_option("--factor", opt.factor_name, "catalog factor name");
        cmd->add_option("--factor-file", opt.factor_file, "factor expression file");
    }
    cmd->add_option("--dim", opt.dim, "base manifold dimension")->check(CLI::Range(2, kMaxDim));
    cmd->add_option("--points", opt.config.points, "number of sample points")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.config.seed, "sampling / generation seed");
    cmd->add_option("--tol-id", opt.config.tol.identity, "tolerance for algebraic identities");
    cmd->add_option("--tol-curv", opt.config.tol.curvature, "tolerance one curvature level up");
    cmd->add_option("--tol-xi", opt.config.tol.xi, "tolerance for xi-level residuals");
    cmd->add_option("--max-order", opt.config.max_jet_order, "max derivative order for the ad layer")
        ->check(CLI::Range(1, kMaxJetOrder));
    cmd->add_option("--json", opt.json_path, "write the JSON report to this path");
}

int emit(const CheckReport& report, const CliOptions& opt) {
    std::cout << report.to_text();
    if (!opt.json_path.empty()) {
        std::ofstream out(opt.json_path);
        if (!out) {
            std::cerr << "error: cannot write " << opt.json_path << "\n";
            return 1;
        }
        out << report.to_json();
    }
    if (report.invalid) {
        std::cerr << "error: " << report.invalid_reason << "\n";
        return 1;
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spraylab: curvature checks for Finsler sprays"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* cc = app.add_subcommand("check-cc", "three conditions for constant flag curvature");
    add_common(cc, opt, false);
    auto* bianchi = app.add_subcommand("bianchi", "d_h xi of an isotropic spray, dim >= 3");
    add_common(bianchi, opt, false);
    auto* hamel = app.add_subcommand("hamel", "Hamel 2-form residual of a projective factor");
    add_common(hamel, opt, true);
    auto* beltrami =
        app.add_subcommand("beltrami", "Hamel factor vs deformed-spray conditions equivalence");
    add_common(beltrami, opt, true);
    auto* invariants = app.add_subcommand("invariants", "structural identity suite on one metric");
    add_common(invariants, opt, false);
    auto* flag = app.add_subcommand("flag-curvature", "kappa table with spread statistics");
    add_common(flag, opt, false);
    auto* projective =
        app.add_subcommand("projective", "projective invariance of the curvature data");
    add_common(projective, opt, true);
    auto* catalog_cmd = app.add_subcommand("catalog", "list built-in metrics and factors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (catalog_cmd->parsed()) {
            std::cout << "metrics:\n";
            for (const auto& name : metric_catalog_names()) {
                const MetricSpec spec = metric_catalog(name, 2, 0);
                std::cout << "  " << name;
                if (spec.expected_curvature)
                    std::cout << "  (kappa = " << decimal_string(*spec.expected_curvature) << ")";
                std::cout << "  -- " << spec.note << "\n";
            }
            std::cout << "factors:\n";
            for (const auto& name : factor_catalog_names())
                std::cout << "  " << name << "  -- " << factor_catalog(name, 2, 0).note << "\n";
            return 0;
        }

        if (cc->parsed()) return emit(cc_check(resolve_metric(opt), opt.config), opt);
        if (bianchi->parsed()) return emit(bianchi_check(resolve_metric(opt), opt.config), opt);
        if (hamel->parsed())
            return emit(hamel_check(resolve_metric(opt), resolve_factor(opt), opt.config), opt);
        if (beltrami->parsed())
            return emit(beltrami_check(resolve_metric(opt), resolve_factor(opt), opt.config), opt);
        if (projective->parsed())
            return emit(projective_invariants_check(resolve_metric(opt), resolve_factor(opt),
                                                    opt.config),
                        opt);
        if (invariants->parsed()) return emit(identity_suite(resolve_metric(opt), opt.config), opt);
        if (flag->parsed()) return emit(flag_curvature_report(resolve_metric(opt), opt.config), opt);
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

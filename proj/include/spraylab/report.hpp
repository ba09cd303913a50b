#pragma once

// Check reports: per-point residual records, aggregates, verdicts, and their
// JSON serialization (machine-readable, deterministic modulo the timestamp).

#include <map>
#include <string>
#include <vector>

#include "spraylab/types.hpp"

namespace spraylab {

inline constexpr const char* kToolName = "spraylab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

/// Residual tolerance ladder: algebraic identities, one curvature level, and
/// xi-level quantities (two curvature levels).
struct Tolerances {
    double identity = 1e-9;
    double curvature = 1e-7;
    double xi = 1e-6;
};

struct CheckConfig {
    int points = 100;
    std::uint64_t seed = 42;
    Tolerances tol;
    int battery_size = 8;
    int max_jet_order = 5;
    int threads = 0;  // 0 = hardware default; SPRAYLAB_THREADS caps either way
};

struct Verdict {
    bool pass = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::string note;  // e.g. gating explanation
};

struct PointRecord {
    VecXd x, y;
    std::map<std::string, double> values;
    bool excluded = false;
    std::string flag;
};

struct CheckReport {
    std::string command;
    std::string metric;
    std::string factor;
    int dim = 0;
    CheckConfig config;
    std::vector<PointRecord> points;
    std::map<std::string, double> aggregates;
    std::map<std::string, Verdict> verdicts;
    bool invalid = false;
    std::string invalid_reason;

    bool all_pass() const;

    /// Render as JSON text (2-space indent, sorted keys, residuals as decimal
    /// strings). `with_timestamp` off yields fully deterministic bytes.
    std::string to_json(bool with_timestamp = true) const;

    /// One human-readable block on stdout: verdict lines plus aggregates.
    std::string to_text() const;
};

/// Shortest exact decimal rendering used for every residual in reports.
std::string decimal_string(double v);

}  // namespace spraylab

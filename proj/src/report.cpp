#include "spraylab/report.hpp"

#include <charconv>
#include <chrono>
#include <sstream>

#include <json.hpp>

namespace spraylab {

using nlohmann::json;

std::string decimal_string(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

json vec_to_json(const VecXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(decimal_string(v[i]));
    return arr;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

}  // namespace

bool CheckReport::all_pass() const {
    if (invalid) return false;
    for (const auto& [name, verdict] : verdicts)
        if (!verdict.pass) return false;
    return true;
}

std::string CheckReport::to_json(bool with_timestamp) const {
    json root;
    json cfg;
    cfg["command"] = command;
    cfg["metric"] = metric;
    if (!factor.empty()) cfg["factor"] = factor;
    cfg["dim"] = dim;
    cfg["points"] = config.points;
    cfg["seed"] = config.seed;
    cfg["battery_size"] = config.battery_size;
    cfg["max_jet_order"] = config.max_jet_order;
    cfg["tolerances"] = {{"identity", decimal_string(config.tol.identity)},
                         {"curvature", decimal_string(config.tol.curvature)},
                         {"xi", decimal_string(config.tol.xi)}};
    root["config"] = cfg;

    json per_point = json::array();
    for (const auto& rec : points) {
        json r;
        r["x"] = vec_to_json(rec.x);
        r["y"] = vec_to_json(rec.y);
        for (const auto& [key, value] : rec.values) r[key] = decimal_string(value);
        if (rec.excluded) r["excluded"] = true;
        if (!rec.flag.empty()) r["flag"] = rec.flag;
        per_point.push_back(std::move(r));
    }
    root["per_point"] = std::move(per_point);

    json agg;
    for (const auto& [key, value] : aggregates) agg[key] = decimal_string(value);
    root["aggregate"] = std::move(agg);

    json verd;
    for (const auto& [name, v] : verdicts) {
        json one;
        one["pass"] = v.pass;
        one["max_residual"] = decimal_string(v.max_residual);
        one["tolerance"] = decimal_string(v.tolerance);
        if (!v.note.empty()) one["note"] = v.note;
        verd[name] = std::move(one);
    }
    root["verdicts"] = std::move(verd);

    if (invalid) {
        root["invalid"] = true;
        root["invalid_reason"] = invalid_reason;
    }

    json versions;
    versions["name"] = kToolName;
    versions["version"] = kToolVersion;
    versions["schema"] = kReportSchema;
    if (with_timestamp) versions["timestamp"] = iso_timestamp();
    root["versions"] = std::move(versions);

    return root.dump(2) + "\n";
}

std::string CheckReport::to_text() const {
    std::ostringstream out;
    out << command << "  metric=" << metric;
    if (!factor.empty()) out << "  factor=" << factor;
    out << "  dim=" << dim << "  points=" << config.points << "  seed=" << config.seed << "\n";
    if (invalid) {
        out << "  INVALID: " << invalid_reason << "\n";
        return out.str();
    }
    for (const auto& [name, v] : verdicts) {
        out << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << name
            << "  max_residual=" << decimal_string(v.max_residual)
            << "  tol=" << decimal_string(v.tolerance);
        if (!v.note.empty()) out << "  (" << v.note << ")";
        out << "\n";
    }
    for (const auto& [key, value] : aggregates)
        out << "  " << key << " = " << decimal_string(value) << "\n";
    return out.str();
}

}  // namespace spraylab

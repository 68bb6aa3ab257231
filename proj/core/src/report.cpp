#include "tridge/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace tridge {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string report_to_json(const SimReport& report) {
    using nlohmann::ordered_json;
    const SimConfig& c = report.config;
    ordered_json doc;
    ordered_json cfg;
    cfg["family"] = std::string(to_string(c.family));
    cfg["n"] = c.n;
    cfg["p"] = c.p;
    cfg["k"] = c.k;
    cfg["snr"] = c.snr;
    cfg["replications"] = c.replications;
    cfg["seed"] = c.seed;
    ordered_json names = ordered_json::array();
    for (auto e : c.estimators) names.push_back(std::string(to_string(e)));
    cfg["estimators"] = names;
    doc["config"] = cfg;

    ordered_json ests = ordered_json::array();
    for (const auto& est : report.estimators) {
        ordered_json e;
        e["estimator"] = std::string(to_string(est.estimator));
        e["mean"] = est.mean;
        e["sd"] = est.sd;
        e["errors"] = est.errors;
        ests.push_back(e);
    }
    doc["estimators"] = ests;
    doc["replications_used"] = report.replications_used;
    ordered_json failures = ordered_json::array();
    for (std::size_t i = 0; i < report.failed_replications.size(); ++i) {
        failures.push_back({{"replication", report.failed_replications[i]},
                            {"message", report.failure_messages[i]}});
    }
    doc["failures"] = failures;
    doc["valid"] = report.valid;
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const SimReport& report) {
    const SimConfig& c = report.config;
    std::ostringstream out;
    out << "estimator,n,p,k,mean,sd\n";
    for (const auto& est : report.estimators) {
        out << to_string(est.estimator) << ',' << c.n << ',' << c.p << ','
            << format_double(c.k) << ',' << format_double(est.mean) << ','
            << format_double(est.sd) << '\n';
    }
    return out.str();
}

} // namespace tridge

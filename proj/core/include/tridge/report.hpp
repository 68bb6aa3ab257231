#pragma once

#include <string>

#include "tridge/sim.hpp"

namespace tridge {

/// Shortest round-trip decimal representation ("nan"/"inf" for non-finite).
std::string format_double(double value);

/// JSON document with the configuration, per-estimator mean/sd and raw
/// errors, and the failed replications. Runtime is deliberately excluded so
/// repeated runs are byte-identical.
std::string report_to_json(const SimReport& report);

/// Table rows `estimator,n,p,k,mean,sd` with a header line.
std::string report_to_csv(const SimReport& report);

} // namespace tridge

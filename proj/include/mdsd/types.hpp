#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace mdsd {

// Node identifiers are the external ids from graph files; internal dense
// indices are an implementation detail of Network.
using NodeId = std::int32_t;
using OrderId = std::int32_t;
using VehicleId = std::int32_t;

// All times are integer milliseconds. Input files use seconds; conversion
// happens at the parsing boundary.
using TimeMs = std::int64_t;

// Costs are in seconds-equivalent units (delay and travel time enter the
// objective in seconds, the rejection penalty is expressed in the same unit).
using Cost = double;

constexpr TimeMs kNoTime = std::numeric_limits<TimeMs>::min();
constexpr TimeMs kInfTime = std::numeric_limits<TimeMs>::max() / 4;
constexpr NodeId kNoNode = -1;
constexpr OrderId kNoOrder = -1;
constexpr VehicleId kNoVehicle = -1;

inline TimeMs seconds_to_ms(double s) {
    return static_cast<TimeMs>(s * 1000.0 + (s >= 0 ? 0.5 : -0.5));
}

inline double ms_to_seconds(TimeMs t) { return static_cast<double>(t) / 1000.0; }

// Trip cost (per-route form of the global objective): convex combination of
// summed delay and route travel time, both in seconds.
inline Cost route_cost(TimeMs theta_sum, TimeMs travel, double beta) {
    return (1.0 - beta) * ms_to_seconds(theta_sum) + beta * ms_to_seconds(travel);
}

}  // namespace mdsd

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdsd/types.hpp"

namespace mdsd {

// Demand peak used by the synthetic generator: a Gaussian bump on top of the
// uniform base rate. `weight` is relative to the other mixture components.
struct DemandPeak {
    double center_s = 0.0;
    double width_s = 1.0;
    double weight = 1.0;
};

// Full scenario parameterization. Durations are stored in milliseconds;
// the key-value file format uses seconds and mirrors the field names.
struct ScenarioConfig {
    TimeMs max_delay_real = 480'000;       // hard service guarantee per order
    TimeMs max_delay_heuristic = 480'000;  // planning deadline per window
    int fleet_size = 30;
    int capacity = 6;
    int depot_count = 20;
    double cost_weight = 1.0 / 3.0;  // beta: 0 = delay only, 1 = distance only
    int max_trip_size = 10;          // eta
    TimeMs service_time = 30'000;
    TimeMs load_time = 15'000;
    TimeMs epoch_length = 100'000;
    TimeMs quiet_tail = 600'000;  // no releases in the last quiet_tail of the day
    int depots_per_order = 3;     // x
    double speed = 10.0;          // meters/second, converts distance <-> time
    TimeMs tripgen_timeout = 50'000;  // per-vehicle wall clock budget
    TimeMs ilp_budget = 50'000;
    Cost reject_penalty = 10'000.0;  // alpha
    TimeMs day_end = 47'400'000;
    bool pre_empty_allowed = true;
    std::uint64_t seed = 0;
    int seq_exact_cap = 10;  // deliveries beyond this use insertion sequencing

    // Scenario inputs; `depots` empty means place depot_count depots by
    // k-center on the loaded graph. Demand comes from a file or, when
    // order_count is set, from the generator below.
    std::string network_file;
    std::string depots_file;
    std::string demand_file;
    std::optional<int> order_count;
    double base_rate = 0.0;  // orders/second of the uniform mixture component
    std::vector<DemandPeak> peaks;

    // Throws std::runtime_error naming the offending field.
    void validate() const;
};

ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

// Applies one `key=value` override (CLI flags, sweeps). Unknown key throws.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

}  // namespace mdsd

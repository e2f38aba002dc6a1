#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdsd/eventlog.hpp"
#include "mdsd/model.hpp"
#include "mdsd/network.hpp"

namespace mdsd {

struct EpochPoint {
    TimeMs time = 0;
    int open_orders = 0;  // placed and not yet picked up or ignored, at epoch time
    int pickups = 0;      // events within the following epoch window
    int dropoffs = 0;
    int ignored = 0;
};

struct HistogramBin {
    TimeMs bin_start = 0;
    long long count = 0;
};

struct KpiReport {
    int total_orders = 0;
    int delivered = 0;
    int ignored = 0;
    double service_rate = 0;  // percent

    // Means over delivered orders; absent when nothing was delivered.
    std::optional<double> mean_delivery_time_s;
    std::optional<double> mean_delay_s;
    std::optional<double> mean_time_on_vehicle_s;
    std::optional<double> mean_waiting_time_s;
    std::optional<double> max_delay_s;

    std::optional<double> mean_loaded_parcels;  // time average over the active day

    double total_distance_km = 0;
    double service_distance_km = 0;
    double relocation_distance_km = 0;
    std::vector<double> per_vehicle_km;
    std::vector<TimeMs> per_vehicle_drive_ms;

    std::vector<EpochPoint> epoch_series;
    std::vector<HistogramBin> delay_histogram;       // 30 s bins over delivered delays
    std::vector<long long> depot_rank_usage;          // index 0 = nearest depot, delivered only
    std::vector<long long> deliveries_per_reinsert;   // index = reinsertion count
    long long reinsertion_events = 0;
};

// Builds the report from the event log. The log must pass the lifecycle
// audit (legal per-order event sequences, capacity never exceeded); an
// inconsistent log throws naming the first bad event.
KpiReport compute_kpis(const EventLog& log, const std::vector<Order>& demand, const Network& net,
                       const ScenarioConfig& cfg);

// Flat CSV row with the headline columns; absent means are written as NA.
void write_kpi_csv(const KpiReport& r, const std::string& path);
// Everything, machine readable.
void write_kpi_json(const KpiReport& r, const std::string& path);
void write_epoch_series_csv(const KpiReport& r, const std::string& path);
void write_delay_histogram_csv(const KpiReport& r, const std::string& path);
void write_depot_rank_csv(const KpiReport& r, const std::string& path);

}  // namespace mdsd

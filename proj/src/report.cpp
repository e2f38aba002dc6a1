#include "mdsd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace mdsd {

namespace {

constexpr TimeMs kDelayBinMs = 30'000;

struct OrderTrace {
    TimeMs placed = kNoTime;
    TimeMs pickup = kNoTime;
    TimeMs dropoff = kNoTime;
    TimeMs ignored = kNoTime;
    NodeId pickup_node = kNoNode;
    VehicleId vehicle = kNoVehicle;
    int reinserted = 0;
};

[[noreturn]] void bad_event(const Event& e, const std::string& why) {
    throw std::runtime_error("eventlog audit: " + why + " (kind=" + to_string(e.kind) +
                             " time=" + std::to_string(ms_to_seconds(e.time)) +
                             " order=" + std::to_string(e.order) +
                             " vehicle=" + std::to_string(e.vehicle) + ")");
}

}  // namespace

KpiReport compute_kpis(const EventLog& log, const std::vector<Order>& demand, const Network& net,
                       const ScenarioConfig& cfg) {
    KpiReport r;
    r.total_orders = static_cast<int>(demand.size());

    std::map<OrderId, const Order*> by_id;
    for (const Order& o : demand) by_id[o.id] = &o;

    std::map<OrderId, OrderTrace> traces;
    std::map<VehicleId, int> vehicle_load;
    std::map<VehicleId, TimeMs> drive_ms;
    std::map<VehicleId, TimeMs> drive_reloc_ms;
    std::vector<TimeMs> epoch_times;

    TimeMs prev_time = 0;
    bool first = true;
    // load integral for the mean-loaded-parcels time average
    long long load_now = 0;
    double load_integral_ms = 0;
    TimeMs window_start = kNoTime, window_end = kNoTime;

    for (const Event& e : log.events()) {
        if (!first && e.time < prev_time) bad_event(e, "time goes backwards");
        if (!first && e.time > prev_time && load_now >= 0 && window_start != kNoTime)
            load_integral_ms += static_cast<double>(load_now) * (e.time - prev_time);
        prev_time = e.time;
        first = false;

        switch (e.kind) {
            case EventKind::Placed: {
                if (!by_id.count(e.order)) bad_event(e, "placed unknown order");
                auto& t = traces[e.order];
                if (t.placed != kNoTime) bad_event(e, "order placed twice");
                t.placed = e.time;
                if (window_start == kNoTime) window_start = e.time;
                break;
            }
            case EventKind::Pickup: {
                auto& t = traces[e.order];
                if (t.placed == kNoTime) bad_event(e, "pickup before placement");
                if (t.pickup != kNoTime) bad_event(e, "order picked up twice");
                if (t.ignored != kNoTime) bad_event(e, "pickup of ignored order");
                t.pickup = e.time;
                t.pickup_node = e.node;
                t.vehicle = e.vehicle;
                int& load = vehicle_load[e.vehicle];
                load += 1;
                load_now += 1;
                if (load > cfg.capacity) bad_event(e, "vehicle exceeds capacity");
                break;
            }
            case EventKind::Dropoff: {
                auto& t = traces[e.order];
                if (t.pickup == kNoTime) bad_event(e, "dropoff before pickup");
                if (t.dropoff != kNoTime) bad_event(e, "order dropped twice");
                if (e.vehicle != t.vehicle) bad_event(e, "dropoff by a different vehicle");
                t.dropoff = e.time;
                vehicle_load[e.vehicle] -= 1;
                load_now -= 1;
                if (vehicle_load[e.vehicle] < 0) bad_event(e, "negative vehicle load");
                window_end = e.time;
                break;
            }
            case EventKind::Ignored: {
                auto& t = traces[e.order];
                if (t.placed == kNoTime) bad_event(e, "ignoring an unplaced order");
                if (t.pickup != kNoTime) bad_event(e, "ignoring a picked-up order");
                if (t.ignored != kNoTime) bad_event(e, "order ignored twice");
                t.ignored = e.time;
                break;
            }
            case EventKind::Reinserted: {
                auto& t = traces[e.order];
                if (t.placed == kNoTime) bad_event(e, "reinserting an unplaced order");
                if (t.pickup != kNoTime) bad_event(e, "reinserting a picked-up order");
                t.reinserted += 1;
                r.reinsertion_events += 1;
                break;
            }
            case EventKind::Epoch:
                epoch_times.push_back(e.time);
                break;
            case EventKind::IdleReturn:
                break;
            case EventKind::Drive:
            case EventKind::Halt: {
                (e.reloc ? drive_reloc_ms : drive_ms)[e.vehicle] += e.drive_ms;
                break;
            }
        }
    }

    // Per-order aggregates.
    double sum_delivery = 0, sum_delay = 0, sum_on_vehicle = 0, sum_waiting = 0, max_delay = 0;
    std::map<TimeMs, long long> delay_bins;
    std::map<int, long long> per_reinsert;
    std::vector<long long> rank_usage;
    for (const auto& [id, t] : traces) {
        if (t.dropoff == kNoTime) {
            if (t.ignored != kNoTime) r.ignored += 1;
            continue;
        }
        const Order& o = *by_id.at(id);
        r.delivered += 1;
        TimeMs delivery = t.dropoff - o.release;
        Order anchored = o;
        anchored.effective_release = o.release;
        TimeMs ideal = ideal_time_original(anchored, net, cfg);
        TimeMs delay = t.dropoff - ideal;
        TimeMs waiting = (t.pickup - cfg.load_time) - o.release;
        TimeMs on_vehicle = (t.dropoff - cfg.service_time) - t.pickup;
        if (waiting < 0) bad_event(Event{t.pickup, EventKind::Pickup, id}, "pickup precedes release");
        if (delay < 0) bad_event(Event{t.dropoff, EventKind::Dropoff, id}, "negative delay");
        sum_delivery += ms_to_seconds(delivery);
        sum_delay += ms_to_seconds(delay);
        sum_waiting += ms_to_seconds(waiting);
        sum_on_vehicle += ms_to_seconds(on_vehicle);
        max_delay = std::max(max_delay, ms_to_seconds(delay));
        delay_bins[(delay / kDelayBinMs) * kDelayBinMs] += 1;
        per_reinsert[t.reinserted] += 1;

        // depot usage ranked by travel time to the destination
        std::vector<std::pair<TimeMs, NodeId>> ranked;
        for (NodeId d : net.depots()) ranked.push_back({net.travel_time(d, o.destination), d});
        std::sort(ranked.begin(), ranked.end());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (ranked[i].second == t.pickup_node) {
                if (rank_usage.size() <= i) rank_usage.resize(i + 1, 0);
                rank_usage[i] += 1;
                break;
            }
        }
    }
    r.service_rate = r.total_orders == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(r.delivered) / r.total_orders;
    if (r.delivered > 0) {
        r.mean_delivery_time_s = sum_delivery / r.delivered;
        r.mean_delay_s = sum_delay / r.delivered;
        r.mean_waiting_time_s = sum_waiting / r.delivered;
        r.mean_time_on_vehicle_s = sum_on_vehicle / r.delivered;
        r.max_delay_s = max_delay;
    }
    if (window_start != kNoTime && window_end != kNoTime && window_end > window_start &&
        cfg.fleet_size > 0) {
        // integral was accumulated across the whole log; restrict denominator
        // to the active window (load is zero outside it anyway)
        r.mean_loaded_parcels = load_integral_ms /
                                (static_cast<double>(window_end - window_start) * cfg.fleet_size);
    }

    for (const auto& [bin, count] : delay_bins) r.delay_histogram.push_back({bin, count});
    r.depot_rank_usage = rank_usage;
    if (!per_reinsert.empty()) {
        r.deliveries_per_reinsert.resize(per_reinsert.rbegin()->first + 1, 0);
        for (const auto& [k, c] : per_reinsert) r.deliveries_per_reinsert[k] = c;
    }

    // Distances: arc travel time times the constant speed.
    VehicleId max_vid = -1;
    for (const auto& [v, ms] : drive_ms) max_vid = std::max(max_vid, v);
    for (const auto& [v, ms] : drive_reloc_ms) max_vid = std::max(max_vid, v);
    r.per_vehicle_km.assign(std::max(cfg.fleet_size, max_vid + 1), 0.0);
    r.per_vehicle_drive_ms.assign(r.per_vehicle_km.size(), 0);
    auto add_km = [&](const std::map<VehicleId, TimeMs>& m, double& sink) {
        for (const auto& [v, ms] : m) {
            double km = ms_to_seconds(ms) * cfg.speed / 1000.0;
            r.per_vehicle_km[v] += km;
            r.per_vehicle_drive_ms[v] += ms;
            sink += km;
        }
    };
    add_km(drive_ms, r.service_distance_km);
    add_km(drive_reloc_ms, r.relocation_distance_km);
    r.total_distance_km = r.service_distance_km + r.relocation_distance_km;

    // Per-epoch series: open orders at the epoch instant, action counts in
    // the window up to the next epoch.
    for (std::size_t k = 0; k < epoch_times.size(); ++k) {
        EpochPoint p;
        p.time = epoch_times[k];
        TimeMs next = k + 1 < epoch_times.size() ? epoch_times[k + 1] : kInfTime;
        for (const auto& [id, t] : traces) {
            bool open = t.placed != kNoTime && t.placed <= p.time &&
                        (t.pickup == kNoTime || t.pickup > p.time) &&
                        (t.ignored == kNoTime || t.ignored > p.time);
            if (open) p.open_orders += 1;
            if (t.pickup != kNoTime && t.pickup > p.time && t.pickup <= next) p.pickups += 1;
            if (t.dropoff != kNoTime && t.dropoff > p.time && t.dropoff <= next) p.dropoffs += 1;
            if (t.ignored != kNoTime && t.ignored > p.time && t.ignored <= next) p.ignored += 1;
        }
        r.epoch_series.push_back(p);
    }
    return r;
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
    if (!v) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

}  // namespace

void write_kpi_csv(const KpiReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("kpi: cannot write " + path);
    out << "Service rate [%],Delivery time [s],Delay [s],Time on vehicle [s],Waiting time [s],"
           "Mean loaded parcels,Total distance [km]\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.service_rate);
    out << buf << "," << opt_cell(r.mean_delivery_time_s) << "," << opt_cell(r.mean_delay_s) << ","
        << opt_cell(r.mean_time_on_vehicle_s) << "," << opt_cell(r.mean_waiting_time_s) << ","
        << opt_cell(r.mean_loaded_parcels) << ",";
    std::snprintf(buf, sizeof buf, "%.6f", r.total_distance_km);
    out << buf << "\n";
}

void write_kpi_json(const KpiReport& r, const std::string& path) {
    nlohmann::json j;
    j["total_orders"] = r.total_orders;
    j["delivered"] = r.delivered;
    j["ignored"] = r.ignored;
    j["service_rate"] = r.service_rate;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    j["mean_delivery_time_s"] = opt(r.mean_delivery_time_s);
    j["mean_delay_s"] = opt(r.mean_delay_s);
    j["mean_time_on_vehicle_s"] = opt(r.mean_time_on_vehicle_s);
    j["mean_waiting_time_s"] = opt(r.mean_waiting_time_s);
    j["max_delay_s"] = opt(r.max_delay_s);
    j["mean_loaded_parcels"] = opt(r.mean_loaded_parcels);
    j["total_distance_km"] = r.total_distance_km;
    j["service_distance_km"] = r.service_distance_km;
    j["relocation_distance_km"] = r.relocation_distance_km;
    j["per_vehicle_km"] = r.per_vehicle_km;
    j["depot_rank_usage"] = r.depot_rank_usage;
    j["deliveries_per_reinsert"] = r.deliveries_per_reinsert;
    j["reinsertion_events"] = r.reinsertion_events;
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& b : r.delay_histogram)
        hist.push_back({{"bin_start_s", ms_to_seconds(b.bin_start)}, {"count", b.count}});
    j["delay_histogram"] = hist;
    nlohmann::json series = nlohmann::json::array();
    for (const auto& p : r.epoch_series)
        series.push_back({{"time_s", ms_to_seconds(p.time)},
                          {"open_orders", p.open_orders},
                          {"pickups", p.pickups},
                          {"dropoffs", p.dropoffs},
                          {"ignored", p.ignored}});
    j["epoch_series"] = series;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("kpi: cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_epoch_series_csv(const KpiReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("kpi: cannot write " + path);
    out << "time_s,open_orders,pickups,dropoffs,ignored\n";
    char buf[128];
    for (const auto& p : r.epoch_series) {
        std::snprintf(buf, sizeof buf, "%.1f,%d,%d,%d,%d\n", ms_to_seconds(p.time), p.open_orders,
                      p.pickups, p.dropoffs, p.ignored);
        out << buf;
    }
}

void write_delay_histogram_csv(const KpiReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("kpi: cannot write " + path);
    out << "bin_start,count\n";
    char buf[64];
    for (const auto& b : r.delay_histogram) {
        std::snprintf(buf, sizeof buf, "%.1f,%lld\n", ms_to_seconds(b.bin_start), b.count);
        out << buf;
    }
}

void write_depot_rank_csv(const KpiReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("kpi: cannot write " + path);
    out << "rank,count\n";
    for (std::size_t i = 0; i < r.depot_rank_usage.size(); ++i)
        out << (i + 1) << "," << r.depot_rank_usage[i] << "\n";
}

}  // namespace mdsd

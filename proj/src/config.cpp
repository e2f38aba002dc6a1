#include "mdsd/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mdsd {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad numeric value for '" + key + "': " + v);
    }
}

long parse_int(const std::string& key, const std::string& v) {
    double d = parse_number(key, v);
    long i = static_cast<long>(d);
    if (static_cast<double>(i) != d)
        throw std::runtime_error("config: expected integer for '" + key + "': " + v);
    return i;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: expected boolean for '" + key + "': " + v);
}

// Peaks are written as "center,width,weight[;center,width,weight...]" in seconds.
std::vector<DemandPeak> parse_peaks(const std::string& v) {
    std::vector<DemandPeak> out;
    if (trim(v).empty() || v == "none") return out;
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::stringstream ps(part);
        std::string c, w, a;
        if (!std::getline(ps, c, ',') || !std::getline(ps, w, ',') || !std::getline(ps, a, ','))
            throw std::runtime_error("config: bad peak spec '" + part + "' (want center,width,weight)");
        DemandPeak p;
        p.center_s = parse_number("peaks.center", trim(c));
        p.width_s = parse_number("peaks.width", trim(w));
        p.weight = parse_number("peaks.weight", trim(a));
        out.push_back(p);
    }
    return out;
}

std::string format_peaks(const std::vector<DemandPeak>& peaks) {
    std::string out;
    char buf[96];
    for (size_t i = 0; i < peaks.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.6g,%.6g,%.6g", i ? ";" : "", peaks[i].center_s,
                      peaks[i].width_s, peaks[i].weight);
        out += buf;
    }
    return out.empty() ? "none" : out;
}

}  // namespace

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::runtime_error("config: " + msg); };
    if (max_delay_real < 0 || max_delay_heuristic < 0) fail("delays must be >= 0");
    if (max_delay_heuristic <= 0) fail("max_delay_heuristic must be > 0");
    if (max_delay_real < max_delay_heuristic) fail("max_delay_real must be >= max_delay_heuristic");
    if (fleet_size < 1) fail("fleet_size must be >= 1");
    if (capacity < 1) fail("capacity must be >= 1");
    if (depot_count < 1) fail("depot_count must be >= 1");
    if (cost_weight < 0.0 || cost_weight > 1.0) fail("cost_weight must be in [0,1]");
    if (max_trip_size < 1) fail("max_trip_size must be >= 1");
    if (depots_per_order < 1) fail("depots_per_order must be >= 1");
    if (service_time < 0 || load_time < 0 || quiet_tail < 0) fail("durations must be >= 0");
    if (epoch_length <= 0) fail("epoch_length must be > 0");
    if (day_end <= 0) fail("day_end must be > 0");
    if (speed <= 0.0) fail("speed must be > 0");
    if (reject_penalty <= 0.0) fail("reject_penalty must be > 0");
    if (tripgen_timeout < 0 || ilp_budget < 0) fail("budgets must be >= 0");
    if (seq_exact_cap < 1) fail("seq_exact_cap must be >= 1");
    if (order_count && *order_count < 0) fail("order_count must be >= 0");
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "max_delay_real") cfg.max_delay_real = seconds_to_ms(parse_number(key, v));
    else if (key == "max_delay_heuristic") cfg.max_delay_heuristic = seconds_to_ms(parse_number(key, v));
    else if (key == "fleet_size") cfg.fleet_size = static_cast<int>(parse_int(key, v));
    else if (key == "capacity") cfg.capacity = static_cast<int>(parse_int(key, v));
    else if (key == "depot_count") cfg.depot_count = static_cast<int>(parse_int(key, v));
    else if (key == "cost_weight") cfg.cost_weight = parse_number(key, v);
    else if (key == "max_trip_size") cfg.max_trip_size = static_cast<int>(parse_int(key, v));
    else if (key == "service_time") cfg.service_time = seconds_to_ms(parse_number(key, v));
    else if (key == "load_time") cfg.load_time = seconds_to_ms(parse_number(key, v));
    else if (key == "epoch_length") cfg.epoch_length = seconds_to_ms(parse_number(key, v));
    else if (key == "quiet_tail") cfg.quiet_tail = seconds_to_ms(parse_number(key, v));
    else if (key == "depots_per_order") cfg.depots_per_order = static_cast<int>(parse_int(key, v));
    else if (key == "speed") cfg.speed = parse_number(key, v);
    else if (key == "tripgen_timeout") cfg.tripgen_timeout = seconds_to_ms(parse_number(key, v));
    else if (key == "ilp_budget") cfg.ilp_budget = seconds_to_ms(parse_number(key, v));
    else if (key == "reject_penalty") cfg.reject_penalty = parse_number(key, v);
    else if (key == "day_end") cfg.day_end = seconds_to_ms(parse_number(key, v));
    else if (key == "pre_empty_allowed") cfg.pre_empty_allowed = parse_bool(key, v);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "seq_exact_cap") cfg.seq_exact_cap = static_cast<int>(parse_int(key, v));
    else if (key == "network") cfg.network_file = v;
    else if (key == "depots") cfg.depots_file = v;
    else if (key == "demand") cfg.demand_file = v;
    else if (key == "order_count") cfg.order_count = static_cast<int>(parse_int(key, v));
    else if (key == "base_rate") cfg.base_rate = parse_number(key, v);
    else if (key == "peaks") cfg.peaks = parse_peaks(v);
    else throw std::runtime_error("config: unknown key '" + key + "'");
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: " + path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        apply_override(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    char buf[256];
    auto sec = [&](const char* key, TimeMs t) {
        std::snprintf(buf, sizeof buf, "%s = %.3f\n", key, ms_to_seconds(t));
        out << buf;
    };
    auto num = [&](const char* key, double d) {
        std::snprintf(buf, sizeof buf, "%s = %.12g\n", key, d);
        out << buf;
    };
    sec("max_delay_real", cfg.max_delay_real);
    sec("max_delay_heuristic", cfg.max_delay_heuristic);
    out << "fleet_size = " << cfg.fleet_size << "\n";
    out << "capacity = " << cfg.capacity << "\n";
    out << "depot_count = " << cfg.depot_count << "\n";
    num("cost_weight", cfg.cost_weight);
    out << "max_trip_size = " << cfg.max_trip_size << "\n";
    sec("service_time", cfg.service_time);
    sec("load_time", cfg.load_time);
    sec("epoch_length", cfg.epoch_length);
    sec("quiet_tail", cfg.quiet_tail);
    out << "depots_per_order = " << cfg.depots_per_order << "\n";
    num("speed", cfg.speed);
    sec("tripgen_timeout", cfg.tripgen_timeout);
    sec("ilp_budget", cfg.ilp_budget);
    num("reject_penalty", cfg.reject_penalty);
    sec("day_end", cfg.day_end);
    out << "pre_empty_allowed = " << (cfg.pre_empty_allowed ? "true" : "false") << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "seq_exact_cap = " << cfg.seq_exact_cap << "\n";
    if (!cfg.network_file.empty()) out << "network = " << cfg.network_file << "\n";
    if (!cfg.depots_file.empty()) out << "depots = " << cfg.depots_file << "\n";
    if (!cfg.demand_file.empty()) out << "demand = " << cfg.demand_file << "\n";
    if (cfg.order_count) out << "order_count = " << *cfg.order_count << "\n";
    if (cfg.base_rate != 0.0) num("base_rate", cfg.base_rate);
    if (!cfg.peaks.empty()) out << "peaks = " << format_peaks(cfg.peaks) << "\n";
}

}  // namespace mdsd

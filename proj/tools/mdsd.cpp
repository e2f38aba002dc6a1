#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdsd/baselines.hpp"
#include "mdsd/config.hpp"
#include "mdsd/demand.hpp"
#include "mdsd/engine.hpp"
#include "mdsd/network.hpp"
#include "mdsd/report.hpp"

namespace fs = std::filesystem;
using namespace mdsd;

namespace {

constexpr int kKCenterRestarts = 20;

struct Scenario {
    ScenarioConfig cfg;
    Network net;
    std::vector<Order> demand;
};

Scenario assemble(ScenarioConfig cfg) {
    cfg.validate();
    if (cfg.network_file.empty()) throw std::runtime_error("config: no network file given");
    Scenario sc;
    sc.net = load_network(cfg.network_file, cfg.speed);
    if (!cfg.depots_file.empty()) {
        auto depots = load_depots(cfg.depots_file, sc.net);
        if (static_cast<int>(depots.size()) != cfg.depot_count)
            cfg.depot_count = static_cast<int>(depots.size());
        sc.net.set_depots(std::move(depots));
    } else {
        sc.net.set_depots(k_center_depots(sc.net, cfg.depot_count, kKCenterRestarts, cfg.seed));
    }
    if (!cfg.demand_file.empty()) {
        sc.demand = load_demand(cfg.demand_file, sc.net, cfg.day_end, cfg.quiet_tail);
    } else if (cfg.order_count) {
        DemandProfile p;
        p.total_orders = *cfg.order_count;
        p.horizon = cfg.day_end;
        p.quiet_tail = cfg.quiet_tail;
        p.base_rate = cfg.base_rate;
        p.peaks = cfg.peaks;
        sc.demand = generate_demand(p, sc.net, cfg.seed);
    } else {
        throw std::runtime_error("config: neither a demand file nor order_count given");
    }
    sc.cfg = std::move(cfg);
    return sc;
}

void apply_sets(ScenarioConfig& cfg, const std::vector<std::string>& sets) {
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects key=value, got '" + s + "'");
        apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
}

int env_workers() {
    const char* w = std::getenv("MDSD_WORKERS");
    if (!w) return 1;
    int n = std::atoi(w);
    return n >= 1 ? n : 1;
}

void write_outputs(const fs::path& dir, const Scenario& sc, const DayResult& res,
                   bool log_drives) {
    fs::create_directories(dir);
    res.log.write_jsonl((dir / "events.jsonl").string(), log_drives);
    write_kpi_csv(res.kpis, (dir / "kpi.csv").string());
    write_kpi_json(res.kpis, (dir / "kpi.json").string());
    write_epoch_series_csv(res.kpis, (dir / "epoch_series.csv").string());
    write_delay_histogram_csv(res.kpis, (dir / "delay_histogram.csv").string());
    write_depot_rank_csv(res.kpis, (dir / "depot_rank.csv").string());
    save_config(sc.cfg, (dir / "resolved_config.cfg").string());
    save_depots(sc.net.depots(), (dir / "depots.txt").string());
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "objective %.6f (delay %.6f + travel %.6f + penalty %.6f), epochs %d, "
                  "optimal %d\n",
                  res.objective, res.delay_cost, res.travel_cost, res.penalty_cost, res.epochs,
                  res.optimal_epochs);
    std::ofstream(dir / "summary.txt") << buf;
}

DayResult run_strategy(const Scenario& sc, const std::string& strategy, const RunOptions& opts) {
    if (strategy == "full") return run_day(sc.cfg, sc.net, sc.demand, opts);
    if (strategy == "greedy") return run_greedy_day(sc.cfg, sc.net, sc.demand);
    throw CLI::ValidationError("--strategy", "unknown strategy '" + strategy + "'");
}

const std::vector<std::string> kSweepKeys = {
    "depots_per_order", "depot_count", "fleet_size", "order_count", "cost_weight",
    "max_delay_real"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-depot same-day delivery simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, strategy = "full";
    std::vector<std::string> sets;
    bool log_drives = false, dump_lp = false;
    int workers = env_workers();

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--strategy", strategy, "full | greedy");
    run->add_option("--set", sets, "config override key=value (repeatable)");
    run->add_option("--workers", workers, "trip generation workers");
    run->add_flag("--log-drives", log_drives, "include drive records in events.jsonl");
    run->add_flag("--dump-lp", dump_lp, "dump each epoch's assignment model in LP format");

    std::string param;
    std::string values_csv;
    auto* sweep = app.add_subcommand("sweep", "run one scenario per parameter value");
    sweep->add_option("--config", config_path, "scenario config file")->required();
    sweep->add_option("--out", out_dir, "output directory")->required();
    sweep->add_option("--param", param, "config key to sweep")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();
    sweep->add_option("--strategy", strategy, "full | greedy");
    sweep->add_option("--set", sets, "config override key=value (repeatable)");
    sweep->add_option("--workers", workers, "trip generation workers");

    std::string net_path, out_file;
    int orders = 0, kdepots = 0, restarts = kKCenterRestarts;
    double horizon_s = 0, quiet_s = 600, base_rate = 0, speed = 10.0;
    std::string peaks_spec;
    std::uint64_t seed = 0;
    auto* gen_demand = app.add_subcommand("gen-demand", "generate a synthetic demand file");
    gen_demand->add_option("--net", net_path)->required();
    gen_demand->add_option("--out", out_file)->required();
    gen_demand->add_option("--orders", orders)->required();
    gen_demand->add_option("--horizon", horizon_s, "seconds")->required();
    gen_demand->add_option("--quiet-tail", quiet_s, "seconds");
    gen_demand->add_option("--base-rate", base_rate, "orders/second");
    gen_demand->add_option("--peaks", peaks_spec, "center,width,weight[;...] in seconds");
    gen_demand->add_option("--seed", seed);
    gen_demand->add_option("--speed", speed, "m/s, for weightless arcs");
    gen_demand->add_option("--depots", config_path, "depots file (destinations avoid depots)");

    auto* gen_depots = app.add_subcommand("gen-depots", "place depots by k-center");
    gen_depots->add_option("--net", net_path)->required();
    gen_depots->add_option("--out", out_file)->required();
    gen_depots->add_option("--k", kdepots)->required();
    gen_depots->add_option("--restarts", restarts);
    gen_depots->add_option("--seed", seed);
    gen_depots->add_option("--speed", speed, "m/s, for weightless arcs");

    int rows = 0, cols = 0;
    double spacing = 100.0;
    auto* gen_grid = app.add_subcommand("gen-grid", "write a grid graph file");
    gen_grid->add_option("--rows", rows)->required();
    gen_grid->add_option("--cols", cols)->required();
    gen_grid->add_option("--spacing", spacing, "meters");
    gen_grid->add_option("--out", out_file)->required();

    auto* validate = app.add_subcommand("validate", "load and validate a scenario");
    validate->add_option("--config", config_path)->required();
    validate->add_option("--set", sets, "config override key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ScenarioConfig cfg = load_config(config_path);
            apply_sets(cfg, sets);
            Scenario sc = assemble(std::move(cfg));
            RunOptions opts;
            opts.workers = workers;
            if (dump_lp) {
                fs::create_directories(fs::path(out_dir) / "lp");
                opts.lp_dump_dir = (fs::path(out_dir) / "lp").string();
            }
            DayResult res = run_strategy(sc, strategy, opts);
            write_outputs(out_dir, sc, res, log_drives);
            std::cout << "service rate " << res.kpis.service_rate << "%, objective "
                      << res.objective << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            if (std::find(kSweepKeys.begin(), kSweepKeys.end(), param) == kSweepKeys.end())
                throw std::runtime_error("sweep: unknown parameter '" + param +
                                         "' (one of depots_per_order, depot_count, fleet_size, "
                                         "order_count, cost_weight, max_delay_real)");
            std::vector<std::string> values;
            std::stringstream ss(values_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) if (!tok.empty()) values.push_back(tok);
            if (values.empty()) throw std::runtime_error("sweep: empty value list");

            ScenarioConfig base = load_config(config_path);
            apply_sets(base, sets);
            if (param == "depot_count" && !base.depots_file.empty())
                throw std::runtime_error("sweep: depot_count sweep needs k-center placement; "
                                         "remove the depots file from the config");
            if (param == "order_count" && !base.demand_file.empty())
                throw std::runtime_error("sweep: order_count sweep needs generated demand; "
                                         "remove the demand file from the config");

            fs::create_directories(out_dir);
            std::ofstream combined(fs::path(out_dir) / "sweep.csv");
            combined << "value,Service rate [%],Delivery time [s],Delay [s],Time on vehicle [s],"
                        "Waiting time [s],Mean loaded parcels,Total distance [km]\n";
            for (const std::string& val : values) {
                ScenarioConfig cfg = base;
                apply_override(cfg, param, val);
                cfg.validate();
                Scenario sc = assemble(std::move(cfg));
                RunOptions opts;
                opts.workers = workers;
                DayResult res = run_strategy(sc, strategy, opts);
                fs::path sub = fs::path(out_dir) / (param + "_" + val);
                write_outputs(sub, sc, res, false);
                auto cell = [](const std::optional<double>& v) {
                    if (!v) return std::string("NA");
                    char b[64];
                    std::snprintf(b, sizeof b, "%.6f", *v);
                    return std::string(b);
                };
                char b[64];
                std::snprintf(b, sizeof b, "%.6f", res.kpis.service_rate);
                combined << val << "," << b << "," << cell(res.kpis.mean_delivery_time_s) << ","
                         << cell(res.kpis.mean_delay_s) << ","
                         << cell(res.kpis.mean_time_on_vehicle_s) << ","
                         << cell(res.kpis.mean_waiting_time_s) << ","
                         << cell(res.kpis.mean_loaded_parcels) << ",";
                std::snprintf(b, sizeof b, "%.6f", res.kpis.total_distance_km);
                combined << b << "\n";
                std::cout << param << "=" << val << ": service rate "
                          << res.kpis.service_rate << "%\n";
            }
            return 0;
        }
        if (gen_demand->parsed()) {
            Network net = load_network(net_path, speed);
            if (!config_path.empty()) net.set_depots(load_depots(config_path, net));
            DemandProfile p;
            p.total_orders = orders;
            p.horizon = seconds_to_ms(horizon_s);
            p.quiet_tail = seconds_to_ms(quiet_s);
            p.base_rate = base_rate;
            if (!peaks_spec.empty()) {
                ScenarioConfig tmp;
                apply_override(tmp, "peaks", peaks_spec);
                p.peaks = tmp.peaks;
            }
            save_demand(generate_demand(p, net, seed), out_file);
            std::cout << "wrote " << orders << " orders to " << out_file << "\n";
            return 0;
        }
        if (gen_depots->parsed()) {
            Network net = load_network(net_path, speed);
            save_depots(k_center_depots(net, kdepots, restarts, seed), out_file);
            std::cout << "wrote " << kdepots << " depots to " << out_file << "\n";
            return 0;
        }
        if (gen_grid->parsed()) {
            if (rows < 1 || cols < 1) throw std::runtime_error("gen-grid: rows/cols must be >= 1");
            std::ofstream out(out_file);
            if (!out) throw std::runtime_error("gen-grid: cannot write " + out_file);
            long n = static_cast<long>(rows) * cols;
            long m = 2L * ((rows - 1) * cols + rows * (cols - 1));
            out << "nodes " << n << " arcs " << m << "\n";
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    out << "N " << (r * cols + c) << " " << c * spacing << " " << r * spacing
                        << "\n";
            auto arc = [&](int a, int b) { out << "A " << a << " " << b << "\nA " << b << " " << a << "\n"; };
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) {
                    if (c + 1 < cols) arc(r * cols + c, r * cols + c + 1);
                    if (r + 1 < rows) arc(r * cols + c, (r + 1) * cols + c);
                }
            std::cout << "wrote " << rows << "x" << cols << " grid to " << out_file << "\n";
            return 0;
        }
        if (validate->parsed()) {
            ScenarioConfig cfg = load_config(config_path);
            apply_sets(cfg, sets);
            Scenario sc = assemble(std::move(cfg));
            std::cout << "ok: " << sc.net.node_count() << " nodes, " << sc.net.depots().size()
                      << " depots, " << sc.demand.size() << " orders\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

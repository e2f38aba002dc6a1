#include "mdsd/tripgen.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace mdsd {

std::vector<const Trip*> TripSet::flatten() const {
    std::vector<const Trip*> out;
    for (const auto& bucket : by_vehicle)
        for (const Trip& t : bucket) out.push_back(&t);
    return out;
}

std::vector<Candidate> candidates_for_order(const Order& o, const Network& net, int x) {
    if (x < 1) throw std::runtime_error("candidates: x must be >= 1");
    std::vector<std::pair<TimeMs, NodeId>> ranked;
    for (NodeId d : net.depots()) ranked.push_back({net.travel_time(d, o.destination), d});
    std::sort(ranked.begin(), ranked.end());
    std::vector<Candidate> out;
    for (const auto& [t, d] : ranked) {
        if (static_cast<int>(out.size()) >= x) break;
        out.push_back({o.id, d});
    }
    return out;
}

namespace {

// Exhaustive search over interleavings of mandatory deliveries, new-order
// deliveries, and one pickup stop. Tokens are explored in canonical stop
// order (pickup first, then deliveries by ascending order id), so the first
// best-cost sequence found is the lexicographically smallest one.
struct SequenceSearch {
    const SimState* state;
    const Network* net;
    const ScenarioConfig* cfg;
    const PlanningContext* ctx;
    SequenceStats* stats;

    NodeId depot = kNoNode;
    std::vector<OrderId> mandatory;
    std::vector<OrderId> new_orders;
    std::vector<NodeId> dest;        // mandatory then new
    std::vector<TimeMs> deadline;    // same indexing
    std::vector<TimeMs> ideal_orig;  // same indexing

    std::vector<int> seq;  // -1 = pickup stop, otherwise delivery index
    std::vector<int> best_seq;
    Cost best_cost = 0;
    bool found = false;

    int m() const { return static_cast<int>(mandatory.size()); }
    int q() const { return static_cast<int>(new_orders.size()); }

    TimeMs leg(bool at_start, NodeId pos, NodeId target) const {
        if (at_start) return ctx->travel_to(target, *net);
        return net->travel_time(pos, target);
    }

    void run() {
        seq.clear();
        dfs(true, kNoNode, ctx->depart, ctx->load, 0u, 0u, q() == 0, 0, 0);
    }

    void dfs(bool at_start, NodeId pos, TimeMs t, int load, unsigned done_mand,
             unsigned done_new, bool picked, TimeMs travel, TimeMs theta) {
        const unsigned all_mand = (1u << m()) - 1u;
        const unsigned all_new = (1u << q()) - 1u;
        if (done_mand == all_mand && done_new == all_new && picked) {
            if (stats) stats->sequences += 1;
            Cost c = route_cost(theta, travel, cfg->cost_weight);
            if (!found || c < best_cost) {
                found = true;
                best_cost = c;
                best_seq = seq;
            }
            return;
        }
        // pickup stop
        if (!picked) {
            if ((cfg->pre_empty_allowed || load == 0) && load + q() <= cfg->capacity) {
                TimeMs l = leg(at_start, pos, depot);
                TimeMs t2 = t + l + cfg->load_time * static_cast<TimeMs>(q());
                Cost partial = route_cost(theta, travel + l, cfg->cost_weight);
                if (stats || !found || partial < best_cost) {
                    seq.push_back(-1);
                    dfs(false, depot, t2, load + q(), done_mand, done_new, true, travel + l,
                        theta);
                    seq.pop_back();
                }
            }
        }
        // deliveries, merged by ascending order id
        int mi = 0, ni = 0;
        while (mi < m() || ni < q()) {
            bool take_new;
            if (mi >= m()) take_new = true;
            else if (ni >= q()) take_new = false;
            else take_new = new_orders[ni] < mandatory[mi];
            int idx;
            if (take_new) {
                idx = m() + ni;
                ++ni;
                if (!picked || (done_new >> (idx - m())) & 1u) continue;
            } else {
                idx = mi;
                ++mi;
                if ((done_mand >> idx) & 1u) continue;
            }
            TimeMs l = leg(at_start, pos, dest[idx]);
            TimeMs done_at = t + l + cfg->service_time;
            if (done_at > deadline[idx]) continue;
            TimeMs th = done_at - ideal_orig[idx];
            Cost partial = route_cost(theta + th, travel + l, cfg->cost_weight);
            if (!stats && found && partial >= best_cost) continue;
            seq.push_back(idx);
            if (take_new)
                dfs(false, dest[idx], done_at, load - 1, done_mand,
                    done_new | (1u << (idx - m())), picked, travel + l, theta + th);
            else
                dfs(false, dest[idx], done_at, load - 1, done_mand | (1u << idx), done_new,
                    picked, travel + l, theta + th);
            seq.pop_back();
        }
    }

    RoutePlan build(const std::vector<int>& tokens) const {
        RoutePlan plan;
        for (int tok : tokens) {
            Stop s;
            if (tok == -1) {
                s.location = depot;
                s.action = StopAction::Pickup;
                s.orders = new_orders;
            } else {
                s.location = dest[tok];
                s.action = StopAction::Deliver;
                s.orders = {tok < m() ? mandatory[tok] : new_orders[tok - m()]};
            }
            plan.stops.push_back(std::move(s));
        }
        return plan;
    }
};

std::optional<SequencedRoute> finish(SequenceSearch& ss, const SimState& state,
                                     const Network& net, const ScenarioConfig& cfg) {
    if (!ss.found) return std::nullopt;
    SequencedRoute out;
    out.route = ss.build(ss.best_seq);
    RouteEval ev = evaluate_route(out.route, *ss.ctx, state, net, cfg);
    if (!ev.feasible)
        throw std::logic_error("sequence search produced an infeasible route");
    out.cost = ev.cost;
    out.travel = ev.travel;
    out.theta_sum = ev.theta_sum;
    return out;
}

// Insertion construction for routes too large to enumerate: mandatory
// deliveries by ascending deadline, pickup tried at every legal position,
// new deliveries inserted one by one at their cheapest feasible spot.
std::optional<SequencedRoute> insertion_sequence(const PlanningContext& ctx,
                                                 const std::vector<Candidate>& cands,
                                                 const std::vector<OrderId>& new_orders,
                                                 NodeId depot, const SimState& state,
                                                 const Network& net, const ScenarioConfig& cfg,
                                                 SequenceStats* stats) {
    std::vector<OrderId> base = ctx.deliveries;
    std::sort(base.begin(), base.end(), [&](OrderId a, OrderId b) {
        TimeMs da = latest_dropoff(state.order(a), net, cfg);
        TimeMs db = latest_dropoff(state.order(b), net, cfg);
        return da != db ? da < db : a < b;
    });
    const int m = static_cast<int>(base.size());
    auto eval_tokens = [&](const std::vector<Stop>& stops, RoutePlan& plan) {
        plan.stops = stops;
        return evaluate_route(plan, ctx, state, net, cfg);
    };
    auto deliver_stop = [&](OrderId id) {
        Stop s;
        s.location = state.order(id).destination;
        s.action = StopAction::Deliver;
        s.orders = {id};
        return s;
    };

    std::optional<SequencedRoute> best;
    int dp_lo = cands.empty() ? m : (cfg.pre_empty_allowed ? 0 : m);
    for (int dp = dp_lo; dp <= m; ++dp) {
        std::vector<Stop> stops;
        for (int i = 0; i < dp; ++i) stops.push_back(deliver_stop(base[i]));
        if (!cands.empty()) {
            Stop pick;
            pick.location = depot;
            pick.action = StopAction::Pickup;
            pick.orders = new_orders;
            stops.push_back(pick);
        }
        for (int i = dp; i < m; ++i) stops.push_back(deliver_stop(base[i]));

        std::vector<OrderId> pending = new_orders;
        std::sort(pending.begin(), pending.end(), [&](OrderId a, OrderId b) {
            TimeMs da = latest_dropoff(state.order(a), net, cfg);
            TimeMs db = latest_dropoff(state.order(b), net, cfg);
            return da != db ? da < db : a < b;
        });
        bool ok = true;
        for (OrderId id : pending) {
            int pick_pos = cands.empty() ? -1 : dp;
            std::optional<std::pair<Cost, int>> pos_best;
            for (int pos = pick_pos + 1; pos <= static_cast<int>(stops.size()); ++pos) {
                std::vector<Stop> trial = stops;
                trial.insert(trial.begin() + pos, deliver_stop(id));
                RoutePlan plan;
                RouteEval ev = eval_tokens(trial, plan);
                if (ev.feasible && (!pos_best || ev.cost < pos_best->first))
                    pos_best = {ev.cost, pos};
            }
            if (!pos_best) {
                ok = false;
                break;
            }
            stops.insert(stops.begin() + pos_best->second, deliver_stop(id));
        }
        if (!ok) continue;
        RoutePlan plan;
        RouteEval ev = eval_tokens(stops, plan);
        if (!ev.feasible) continue;
        if (stats) stats->sequences += 1;
        if (!best || ev.cost < best->cost) {
            SequencedRoute r;
            r.route = std::move(plan);
            r.cost = ev.cost;
            r.travel = ev.travel;
            r.theta_sum = ev.theta_sum;
            best = std::move(r);
        }
    }
    return best;
}

}  // namespace

std::optional<SequencedRoute> best_sequence(const PlanningContext& ctx,
                                            const std::vector<Candidate>& cands,
                                            const SimState& state, const Network& net,
                                            const ScenarioConfig& cfg, SequenceStats* stats) {
    NodeId depot = kNoNode;
    std::vector<OrderId> new_orders;
    for (const Candidate& c : cands) {
        if (depot == kNoNode) depot = c.depot;
        else if (depot != c.depot)
            throw std::runtime_error("sequence: candidates span multiple depots");
        new_orders.push_back(c.order);
    }
    std::sort(new_orders.begin(), new_orders.end());
    if (std::adjacent_find(new_orders.begin(), new_orders.end()) != new_orders.end())
        throw std::runtime_error("sequence: two candidates of the same order");
    if (static_cast<int>(cands.size()) > cfg.capacity) return std::nullopt;

    const int total = static_cast<int>(ctx.deliveries.size() + new_orders.size());
    if (total > cfg.seq_exact_cap)
        return insertion_sequence(ctx, cands, new_orders, depot, state, net, cfg, stats);

    SequenceSearch ss;
    ss.state = &state;
    ss.net = &net;
    ss.cfg = &cfg;
    ss.ctx = &ctx;
    ss.stats = stats;
    ss.depot = depot;
    ss.mandatory = ctx.deliveries;
    ss.new_orders = new_orders;
    for (OrderId id : ss.mandatory) {
        const Order& o = state.order(id);
        ss.dest.push_back(o.destination);
        ss.deadline.push_back(latest_dropoff(o, net, cfg));
        ss.ideal_orig.push_back(ideal_time_original(o, net, cfg));
    }
    for (OrderId id : ss.new_orders) {
        const Order& o = state.order(id);
        ss.dest.push_back(o.destination);
        ss.deadline.push_back(latest_dropoff(o, net, cfg));
        ss.ideal_orig.push_back(ideal_time_original(o, net, cfg));
    }
    ss.run();
    return finish(ss, state, net, cfg);
}

std::optional<SequencedRoute> best_trip_sequence(const Vehicle& v,
                                                 const std::vector<Candidate>& cands,
                                                 const SimState& state, const Network& net,
                                                 const ScenarioConfig& cfg, SequenceStats* stats) {
    PlanningContext ctx = planning_context(v, state.clock);
    return best_sequence(ctx, cands, state, net, cfg, stats);
}

bool candidate_vehicle_feasible(const Vehicle& v, const Candidate& c, const SimState& state,
                                const Network& net, const ScenarioConfig& cfg) {
    return best_trip_sequence(v, {c}, state, net, cfg).has_value();
}

bool two_candidates_feasible(const Candidate& ci, const Candidate& cj, const SimState& state,
                             const Network& net, const ScenarioConfig& cfg) {
    if (ci.depot != cj.depot) return false;
    if (ci.order == cj.order) return false;
    PlanningContext ctx;
    ctx.node = ci.depot;
    ctx.depart = state.clock;
    return best_sequence(ctx, {ci, cj}, state, net, cfg).has_value();
}

namespace {

using Clock = std::chrono::steady_clock;

TimeMs elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

struct PairTable {
    // feasibility of same-depot candidate pairs, keyed by global indices i<j
    std::unordered_map<std::uint64_t, bool> ok;
    int n = 0;

    bool get(int i, int j) const {
        auto it = ok.find(static_cast<std::uint64_t>(i) * n + j);
        return it != ok.end() && it->second;
    }
};

void generate_for_vehicle(int slot, const std::vector<Candidate>& cands, const PairTable& pairs,
                          const SimState& state, const Network& net, const ScenarioConfig& cfg,
                          TripSet& out) {
    const Vehicle& v = state.fleet[slot];
    PlanningContext ctx = planning_context(v, state.clock);
    auto t0 = Clock::now();
    auto expired = [&] { return elapsed_ms(t0) > cfg.tripgen_timeout; };

    auto core = best_sequence(ctx, {}, state, net, cfg);
    if (!core)
        throw std::logic_error("tripgen: vehicle " + std::to_string(v.id) +
                               " cannot serve its own load");
    out.loaded_cost[slot] = core->cost;

    const int n = static_cast<int>(cands.size());
    const int eta = cfg.max_trip_size;
    // buckets[l-1]: trips of size l as sorted global candidate-index tuples
    std::vector<std::vector<std::pair<std::vector<int>, Trip>>> buckets(eta);
    bool truncated = false;

    // size 1
    for (int i = 0; i < n && !truncated; ++i) {
        if (expired()) { truncated = true; break; }
        auto r = best_sequence(ctx, {cands[i]}, state, net, cfg);
        if (!r) continue;
        Trip t;
        t.vehicle = v.id;
        t.candidates = {cands[i]};
        t.route = std::move(r->route);
        t.cost = r->cost;
        t.relative_cost = r->cost - out.loaded_cost[slot];
        buckets[0].push_back({{i}, std::move(t)});
    }
    // size 2
    if (eta >= 2 && !truncated) {
        const auto& t1 = buckets[0];
        for (std::size_t a = 0; a < t1.size() && !truncated; ++a) {
            for (std::size_t b = a + 1; b < t1.size(); ++b) {
                if (expired()) { truncated = true; break; }
                int i = t1[a].first[0], j = t1[b].first[0];
                if (cands[i].depot != cands[j].depot) continue;
                if (!pairs.get(i, j)) continue;
                auto r = best_sequence(ctx, {cands[i], cands[j]}, state, net, cfg);
                if (!r) continue;
                Trip t;
                t.vehicle = v.id;
                t.candidates = {cands[i], cands[j]};
                std::sort(t.candidates.begin(), t.candidates.end());
                t.route = std::move(r->route);
                t.cost = r->cost;
                t.relative_cost = r->cost - out.loaded_cost[slot];
                buckets[1].push_back({{i, j}, std::move(t)});
            }
        }
    }
    // sizes 3..eta by merging two (l-1)-trips
    for (int l = 3; l <= eta && !truncated; ++l) {
        const auto& prev = buckets[l - 2];
        if (prev.empty()) break;
        std::set<std::vector<int>> prev_keys;
        for (const auto& [key, trip] : prev) prev_keys.insert(key);
        std::set<std::vector<int>> attempted;
        for (std::size_t a = 0; a < prev.size() && !truncated; ++a) {
            for (std::size_t b = a + 1; b < prev.size(); ++b) {
                if (expired()) { truncated = true; break; }
                if (prev[a].second.depot() != prev[b].second.depot()) continue;
                std::vector<int> uni;
                std::set_union(prev[a].first.begin(), prev[a].first.end(),
                               prev[b].first.begin(), prev[b].first.end(),
                               std::back_inserter(uni));
                if (static_cast<int>(uni.size()) != l) continue;
                if (attempted.count(uni)) continue;
                attempted.insert(uni);
                bool closed = true;
                std::vector<int> sub(l - 1);
                for (int h = 0; h < l && closed; ++h) {
                    sub.clear();
                    for (int k = 0; k < l; ++k)
                        if (k != h) sub.push_back(uni[k]);
                    if (!prev_keys.count(sub)) closed = false;
                }
                if (!closed) continue;
                std::vector<Candidate> cs;
                for (int k : uni) cs.push_back(cands[k]);
                auto r = best_sequence(ctx, cs, state, net, cfg);
                if (!r) continue;
                Trip t;
                t.vehicle = v.id;
                t.candidates = cs;
                std::sort(t.candidates.begin(), t.candidates.end());
                t.route = std::move(r->route);
                t.cost = r->cost;
                t.relative_cost = r->cost - out.loaded_cost[slot];
                buckets[l - 1].push_back({uni, std::move(t)});
            }
        }
    }

    for (auto& bucket : buckets) {
        std::sort(bucket.begin(), bucket.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [key, trip] : bucket) out.by_vehicle[slot].push_back(std::move(trip));
    }
    out.elapsed[slot] = elapsed_ms(t0);
    out.truncated[slot] = truncated ? 1 : 0;
}

}  // namespace

TripSet generate_trips(const SimState& state, const std::vector<Candidate>& raw_cands,
                       const Network& net, const ScenarioConfig& cfg, int workers) {
    std::vector<Candidate> cands = raw_cands;
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    const int nveh = static_cast<int>(state.fleet.size());
    TripSet out;
    out.by_vehicle.resize(nveh);
    out.loaded_cost.assign(nveh, 0.0);
    out.elapsed.assign(nveh, 0);
    out.truncated.assign(nveh, 0);

    // Vehicle-independent pair feasibility, computed once and shared.
    PairTable pairs;
    const int n = static_cast<int>(cands.size());
    pairs.n = n;
    if (cfg.max_trip_size >= 2) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (cands[i].depot != cands[j].depot) continue;
                if (cands[i].order == cands[j].order) continue;
                pairs.ok[static_cast<std::uint64_t>(i) * n + j] =
                    two_candidates_feasible(cands[i], cands[j], state, net, cfg);
            }
        }
    }

    if (workers <= 1 || nveh <= 1) {
        for (int slot = 0; slot < nveh; ++slot)
            generate_for_vehicle(slot, cands, pairs, state, net, cfg, out);
    } else {
        int nw = std::min(workers, nveh);
        std::vector<std::future<void>> futs;
        for (int w = 0; w < nw; ++w) {
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (int slot = w; slot < nveh; slot += nw)
                    generate_for_vehicle(slot, cands, pairs, state, net, cfg, out);
            }));
        }
        for (auto& f : futs) f.get();
    }
    for (const auto& bucket : out.by_vehicle) out.generated_count += bucket.size();
    return out;
}

}  // namespace mdsd

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mdsd/model.hpp"
#include "mdsd/network.hpp"

namespace mdsd {

// Counts complete sequences evaluated by the exhaustive search. Passing a
// stats sink disables cost-bound pruning so the full feasible space is
// visited (feasibility pruning still applies).
struct SequenceStats {
    long long sequences = 0;
};

struct SequencedRoute {
    RoutePlan route;
    Cost cost = 0;
    TimeMs travel = 0;
    TimeMs theta_sum = 0;
};

struct TripSet {
    // Trips grouped per fleet slot, ordered by size then candidate tuple.
    std::vector<std::vector<Trip>> by_vehicle;
    std::vector<Cost> loaded_cost;     // per fleet slot, gamma of serving only the load
    std::vector<TimeMs> elapsed;       // per fleet slot, generation wall clock
    std::vector<char> truncated;       // per fleet slot, budget expired
    long long generated_count = 0;

    std::vector<const Trip*> flatten() const;
};

// The x depots nearest to the order's destination by depot->destination
// travel time, ascending; ties broken by lower depot node id.
std::vector<Candidate> candidates_for_order(const Order& o, const Network& net, int x);

// Minimum-cost feasible interleaving of the vehicle's committed deliveries
// with one pickup stop for `cands` (all sharing a depot). Enumerates every
// delivery permutation and pickup placement subject to pickup-before-delivery
// of the new orders; beyond cfg.seq_exact_cap deliveries a best-insertion
// construction is used instead. Empty result when no sequence is feasible.
std::optional<SequencedRoute> best_sequence(const PlanningContext& ctx,
                                            const std::vector<Candidate>& cands,
                                            const SimState& state, const Network& net,
                                            const ScenarioConfig& cfg,
                                            SequenceStats* stats = nullptr);

std::optional<SequencedRoute> best_trip_sequence(const Vehicle& v,
                                                 const std::vector<Candidate>& cands,
                                                 const SimState& state, const Network& net,
                                                 const ScenarioConfig& cfg,
                                                 SequenceStats* stats = nullptr);

bool candidate_vehicle_feasible(const Vehicle& v, const Candidate& c, const SimState& state,
                                const Network& net, const ScenarioConfig& cfg);

// Both candidates must share their pickup depot and belong to different
// orders; then a hypothetical empty vehicle standing at that depot now must
// be able to deliver both in at least one of the two sequences.
bool two_candidates_feasible(const Candidate& ci, const Candidate& cj, const SimState& state,
                             const Network& net, const ScenarioConfig& cfg);

// Anytime trip generation: size-1 trips from per-candidate feasibility,
// size-2 from combinable pairs, larger sizes by merging two (l-1)-trips whose
// union has l candidates and whose every (l-1)-subset is itself a trip. Each
// vehicle stops growing its set when the per-vehicle budget expires; whatever
// was built is kept and the vehicle marked truncated.
TripSet generate_trips(const SimState& state, const std::vector<Candidate>& cands,
                       const Network& net, const ScenarioConfig& cfg, int workers = 1);

}  // namespace mdsd

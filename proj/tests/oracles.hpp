#pragma once

// Independent reference implementations used only by tests. These retrace
// the spec'd quantities with straight-line logic (no pruning, no caching) so
// the production code can be checked against them.

#include <optional>
#include <vector>

#include "mdsd/assign.hpp"
#include "mdsd/model.hpp"
#include "mdsd/network.hpp"
#include "mdsd/tripgen.hpp"

namespace mdsd::oracle {

struct Edge {
    int from, to;
    TimeMs w;
};

// Bellman-Ford over a raw edge list; kInfTime marks unreachable nodes.
std::vector<TimeMs> bellman_ford(int n, const std::vector<Edge>& edges, int src);

struct SequenceResult {
    bool feasible = false;
    Cost cost = 0;
    long long feasible_sequences = 0;
};

// Full enumeration of delivery permutations and pickup-stop positions via
// std::next_permutation, timing each sequence from scratch.
SequenceResult best_sequence_by_enumeration(const PlanningContext& ctx,
                                            const std::vector<Candidate>& cands,
                                            const SimState& state, const Network& net,
                                            const ScenarioConfig& cfg);

// Exhaustive assignment: every vehicle takes each of its usable trips or
// none; returns the minimum objective.
Cost assignment_by_enumeration(const AssignmentModel& model);

// Candidate-set families per vehicle by direct subset enumeration (same
// depot, distinct orders, size <= eta), feasibility decided by the
// permutation oracle. Returns sorted families per fleet slot.
std::vector<std::vector<std::vector<Candidate>>> trip_families_by_enumeration(
    const SimState& state, const std::vector<Candidate>& cands, const Network& net,
    const ScenarioConfig& cfg);

// Exhaustive k=2 center search.
TimeMs k_center_two_exhaustive(const Network& net);

}  // namespace mdsd::oracle

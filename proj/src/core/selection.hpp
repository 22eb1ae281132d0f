#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/scoring.hpp"
#include "core/types.hpp"

namespace uaviov {

// One vehicle's submitted proposal, the unit the allocation sorts.
struct ProposalRecord {
  NodeAddress vehicle_address;
  double qov = 0.0;
  double requested_bandwidth = 0.0;  // RB, > 0
  double rank_key = 0.0;             // qov / sqrt(RB)
};

inline ProposalRecord make_proposal(const NodeAddress& vehicle, double qov,
                                    double rb) {
  return ProposalRecord{vehicle, qov, rb, qov / std::sqrt(rb)};
}

struct UavAllocation {
  NodeAddress uav_address;
  std::vector<NodeAddress> accepted_vehicles;
  double residual_bandwidth = 0.0;  // AB left after all accepts
};

struct SelectionOutcome {
  std::vector<UavAllocation> allocations;      // one entry per UAV, list order
  std::vector<NodeAddress> unmatched_vehicles; // proposal submitted, not accepted
};

// First stage: the vehicle scores every UAV in its zone and proposes to the
// QoU argmax. Strict ">" keeps the first maximum, so ties resolve to list
// order. Empty zone -> nullopt, the vehicle stays unmatched this round.
struct ProposalChoice {
  NodeAddress uav_address;
  double qou = 0.0;
};

std::optional<ProposalChoice> vehicle_propose(
    const VehicleInfo& v, const std::vector<UavInfo>& zone_uavs,
    const NormalizationBounds& b, const ScoringWeights& w);

// Second stage: per UAV in list order, proposals are ranked by QoV/sqrt(RB)
// descending (stable, ties keep arrival order) and accepted greedily while the
// requested bandwidth fits in the remaining capacity.
SelectionOutcome allocate_zone(
    const std::vector<UavInfo>& zone_uavs,
    const std::map<NodeAddress, std::vector<ProposalRecord>>& proposals);

// Nearest-neighbor matching baseline: vehicles are swept in registration
// order and paired with the capacity-feasible UAV in their zone minimizing
// |QoU - QoV|. Bandwidth is decremented exactly as in the main mechanism.
SelectionOutcome nnm_baseline(const std::vector<VehicleInfo>& vehicles,
                              const std::vector<UavInfo>& uavs,
                              const NormalizationBounds& b,
                              const ScoringWeights& w);

struct SelectionMetrics {
  double vehicles_per_selected_uav = 0.0;
  double pct_uavs_selected = 0.0;  // percent of UAVs with >= 1 vehicle
  double mean_qou = 0.0;           // over matched pairs
  double mean_qov = 0.0;           // over matched pairs
  std::size_t matched_vehicles = 0;
  bool empty = false;              // no UAV accepted any vehicle
};

SelectionMetrics selection_metrics(const SelectionOutcome& outcome,
                                   const std::vector<VehicleInfo>& vehicles,
                                   const std::vector<UavInfo>& uavs,
                                   const NormalizationBounds& b,
                                   const ScoringWeights& w);

}  // namespace uaviov

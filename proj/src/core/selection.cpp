#include "core/selection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace uaviov {

std::optional<ProposalChoice> vehicle_propose(
    const VehicleInfo& v, const std::vector<UavInfo>& zone_uavs,
    const NormalizationBounds& b, const ScoringWeights& w) {
  std::optional<ProposalChoice> best;
  double max_qou = 0.0;
  for (const UavInfo& u : zone_uavs) {
    const double qou = compute_qou(u, v, b, w);
    if (!best || qou > max_qou) {
      max_qou = qou;
      best = ProposalChoice{u.address, qou};
    }
  }
  return best;
}

SelectionOutcome allocate_zone(
    const std::vector<UavInfo>& zone_uavs,
    const std::map<NodeAddress, std::vector<ProposalRecord>>& proposals) {
  SelectionOutcome outcome;
  outcome.allocations.reserve(zone_uavs.size());
  std::unordered_set<std::string> matched;
  std::vector<const ProposalRecord*> all;

  for (const UavInfo& u : zone_uavs) {
    UavAllocation alloc;
    alloc.uav_address = u.address;
    alloc.residual_bandwidth = u.available_bandwidth;

    auto it = proposals.find(u.address);
    if (it != proposals.end()) {
      std::vector<ProposalRecord> ranked = it->second;
      for (const ProposalRecord& p : it->second) all.push_back(&p);
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const ProposalRecord& a, const ProposalRecord& b) {
                         return a.rank_key > b.rank_key;
                       });
      for (const ProposalRecord& p : ranked) {
        if (p.requested_bandwidth <= alloc.residual_bandwidth) {
          alloc.accepted_vehicles.push_back(p.vehicle_address);
          alloc.residual_bandwidth -= p.requested_bandwidth;
          matched.insert(p.vehicle_address);
        }
      }
    }
    outcome.allocations.push_back(std::move(alloc));
  }

  for (const ProposalRecord* p : all) {
    if (!matched.count(p->vehicle_address)) {
      outcome.unmatched_vehicles.push_back(p->vehicle_address);
    }
  }
  return outcome;
}

SelectionOutcome nnm_baseline(const std::vector<VehicleInfo>& vehicles,
                              const std::vector<UavInfo>& uavs,
                              const NormalizationBounds& b,
                              const ScoringWeights& w) {
  SelectionOutcome outcome;
  outcome.allocations.reserve(uavs.size());
  std::unordered_map<std::string, std::size_t> index;
  for (const UavInfo& u : uavs) {
    index.emplace(u.address, outcome.allocations.size());
    outcome.allocations.push_back(
        UavAllocation{u.address, {}, u.available_bandwidth});
  }

  for (const VehicleInfo& v : vehicles) {
    const UavInfo* best = nullptr;
    double best_gap = 0.0;
    for (const UavInfo& u : uavs) {
      if (u.zone_id != v.zone_id) continue;
      if (v.requested_bandwidth >
          outcome.allocations[index[u.address]].residual_bandwidth) {
        continue;
      }
      const double gap =
          std::abs(compute_qou(u, v, b, w) - compute_qov(u, v, b, w));
      if (!best || gap < best_gap) {
        best = &u;
        best_gap = gap;
      }
    }
    if (best) {
      UavAllocation& alloc = outcome.allocations[index[best->address]];
      alloc.accepted_vehicles.push_back(v.address);
      alloc.residual_bandwidth -= v.requested_bandwidth;
    } else {
      outcome.unmatched_vehicles.push_back(v.address);
    }
  }
  return outcome;
}

SelectionMetrics selection_metrics(const SelectionOutcome& outcome,
                                   const std::vector<VehicleInfo>& vehicles,
                                   const std::vector<UavInfo>& uavs,
                                   const NormalizationBounds& b,
                                   const ScoringWeights& w) {
  std::unordered_map<std::string, const VehicleInfo*> veh_by_addr;
  for (const VehicleInfo& v : vehicles) veh_by_addr.emplace(v.address, &v);
  std::unordered_map<std::string, const UavInfo*> uav_by_addr;
  for (const UavInfo& u : uavs) uav_by_addr.emplace(u.address, &u);

  SelectionMetrics m;
  std::size_t selected_uavs = 0;
  double qou_sum = 0.0, qov_sum = 0.0;
  for (const UavAllocation& alloc : outcome.allocations) {
    if (alloc.accepted_vehicles.empty()) continue;
    ++selected_uavs;
    const UavInfo* u = uav_by_addr.at(alloc.uav_address);
    for (const NodeAddress& va : alloc.accepted_vehicles) {
      const VehicleInfo* v = veh_by_addr.at(va);
      qou_sum += compute_qou(*u, *v, b, w);
      qov_sum += compute_qov(*u, *v, b, w);
      ++m.matched_vehicles;
    }
  }

  if (m.matched_vehicles == 0) {
    m.empty = true;
    return m;
  }
  m.vehicles_per_selected_uav =
      static_cast<double>(m.matched_vehicles) / selected_uavs;
  if (!outcome.allocations.empty()) {
    m.pct_uavs_selected =
        100.0 * static_cast<double>(selected_uavs) / outcome.allocations.size();
  }
  m.mean_qou = qou_sum / m.matched_vehicles;
  m.mean_qov = qov_sum / m.matched_vehicles;
  return m;
}

}  // namespace uaviov

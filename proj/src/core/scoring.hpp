#pragma once

#include <algorithm>

#include "core/types.hpp"

namespace uaviov {

// Normalized distance term shared by both scores. Distances beyond
// max_distance clamp to 1 so the proximity contribution bottoms out at 0.
inline double normalized_distance(const UavInfo& u, const VehicleInfo& v,
                                  const NormalizationBounds& b) {
  return std::min(euclidean_distance(u.position, v.position) / b.max_distance,
                  1.0);
}

// Quality-of-UAV: how attractive UAV u is to vehicle v. In [0, 100] for
// in-bounds inputs; rises with bandwidth, battery and reputation, falls with
// distance.
inline double compute_qou(const UavInfo& u, const VehicleInfo& v,
                          const NormalizationBounds& b,
                          const ScoringWeights& w) {
  b.validate();
  return 100.0 * (w.w1 * (u.available_bandwidth / b.max_ab) +
                  w.w2 * (u.battery_level / b.max_bl) +
                  w.w3 * (u.reputation / b.max_rep) +
                  w.w4 * (1.0 - normalized_distance(u, v, b)));
}

// Quality-of-Vehicle: how attractive vehicle v is to UAV u. Same shape with
// requested bandwidth, payment, reputation and distance.
inline double compute_qov(const UavInfo& u, const VehicleInfo& v,
                          const NormalizationBounds& b,
                          const ScoringWeights& w) {
  b.validate();
  return 100.0 * (w.w5 * (v.requested_bandwidth / b.max_rb) +
                  w.w6 * (v.pay_per_mbps / b.max_pay_per_mbps) +
                  w.w7 * (v.reputation / b.max_rep) +
                  w.w8 * (1.0 - normalized_distance(u, v, b)));
}

}  // namespace uaviov

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "core/errors.hpp"

namespace uaviov {

struct Position {
  double x = 0.0;  // km
  double y = 0.0;  // km
};

inline double euclidean_distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

using NodeAddress = std::string;
using ZoneId = std::int64_t;

struct VehicleInfo {
  NodeAddress address;
  Position position;
  double pay_per_mbps = 0.0;       // currency per Mbps
  double reputation = 0.0;         // [1, MaxRep]
  double requested_bandwidth = 0;  // RB, Mbps, > 0
  std::uint64_t timestamp = 0;     // logical clock tick
  ZoneId zone_id = 0;
};

struct UavInfo {
  NodeAddress address;
  Position position;
  double altitude = 0.0;           // km, carried but not scored
  double reputation = 0.0;         // [1, MaxRep]
  double battery_level = 0.0;      // BL, percent [1, MaxBL]
  double available_bandwidth = 0;  // AB, Mbps, >= 0
  std::uint64_t timestamp = 0;
  ZoneId zone_id = 0;
};

// Normalization constants for the quality scores. All strictly positive.
struct NormalizationBounds {
  double max_ab = 20.0;           // Mbps
  double max_bl = 100.0;          // percent
  double max_rep = 100.0;         // score
  double max_distance = 3.0;      // km
  double max_rb = 4.0;            // Mbps
  double max_pay_per_mbps = 7.0;  // currency

  void validate() const {
    if (max_ab <= 0 || max_bl <= 0 || max_rep <= 0 || max_distance <= 0 ||
        max_rb <= 0 || max_pay_per_mbps <= 0) {
      throw ConfigError("normalization bounds must be strictly positive");
    }
  }
};

// w1..w4 weight the QoU terms, w5..w8 the QoV terms. Each quadruple sums to 1.
struct ScoringWeights {
  double w1 = 0.25, w2 = 0.25, w3 = 0.25, w4 = 0.25;
  double w5 = 0.25, w6 = 0.25, w7 = 0.25, w8 = 0.25;

  void validate() const {
    const double tol = 1e-9;
    for (double w : {w1, w2, w3, w4, w5, w6, w7, w8}) {
      if (w < 0) throw ConfigError("scoring weights must be non-negative");
    }
    if (std::abs(w1 + w2 + w3 + w4 - 1.0) > tol) {
      throw ConfigError("QoU weights w1..w4 must sum to 1");
    }
    if (std::abs(w5 + w6 + w7 + w8 - 1.0) > tol) {
      throw ConfigError("QoV weights w5..w8 must sum to 1");
    }
  }
};

// Uniform rectangular tiling of the simulation area, row-major tile ids.
struct ZoneGrid {
  double area_w = 50.0;     // km
  double area_h = 50.0;     // km
  double tile_size = 10.0;  // km

  void validate() const {
    if (area_w <= 0 || area_h <= 0 || tile_size <= 0) {
      throw ConfigError("zone grid dimensions must be strictly positive");
    }
  }

  std::int64_t tiles_x() const {
    return static_cast<std::int64_t>(std::ceil(area_w / tile_size));
  }
  std::int64_t tiles_y() const {
    return static_cast<std::int64_t>(std::ceil(area_h / tile_size));
  }
};

// Maps a position to its rectangular tile id. Tiles are half-open,
// lower-inclusive: x = tile_size lands in tile 1.
inline ZoneId zone_of(const Position& p, const ZoneGrid& grid) {
  grid.validate();
  if (p.x < 0 || p.y < 0 || p.x >= grid.area_w || p.y >= grid.area_h) {
    throw DomainError("position outside the simulation area");
  }
  const auto zx = static_cast<std::int64_t>(p.x / grid.tile_size);
  const auto zy = static_cast<std::int64_t>(p.y / grid.tile_size);
  return zy * grid.tiles_x() + zx;
}

}  // namespace uaviov

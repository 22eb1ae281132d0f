#include <doctest.h>

#include "core/rng.hpp"
#include "core/scoring.hpp"

using namespace uaviov;

namespace {

UavInfo make_uav(double x, double y, double ab, double bl, double rep) {
  UavInfo u;
  u.address = "u";
  u.position = {x, y};
  u.available_bandwidth = ab;
  u.battery_level = bl;
  u.reputation = rep;
  return u;
}

VehicleInfo make_vehicle(double x, double y, double rb, double pay, double rep) {
  VehicleInfo v;
  v.address = "v";
  v.position = {x, y};
  v.requested_bandwidth = rb;
  v.pay_per_mbps = pay;
  v.reputation = rep;
  return v;
}

}  // namespace

TEST_CASE("euclidean distance") {
  CHECK(euclidean_distance({0, 0}, {0, 0}) == 0.0);
  CHECK(euclidean_distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
  // dx = 0.8, dy = 0.6 -> hypotenuse 1.0
  CHECK(euclidean_distance({1.2, 0.5}, {2.0, 1.1}) == doctest::Approx(1.0));
  // symmetry
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    Position a{rng.uniform(0, 50), rng.uniform(0, 50)};
    Position b{rng.uniform(0, 50), rng.uniform(0, 50)};
    CHECK(euclidean_distance(a, b) == euclidean_distance(b, a));
    CHECK(euclidean_distance(a, b) >= 0.0);
  }
}

TEST_CASE("qou extremes and hand-computed value") {
  NormalizationBounds b;
  ScoringWeights w;

  // saturated: AB = maxAB, BL = maxBL, Rep = maxRep, dist = 0
  CHECK(compute_qou(make_uav(0, 0, 20, 100, 100), make_vehicle(0, 0, 2, 3, 50),
                    b, w) == doctest::Approx(100.0));

  // vanishing: all terms zero, distance at the bound
  CHECK(compute_qou(make_uav(0, 0, 0, 0, 0), make_vehicle(3, 0, 2, 3, 50), b,
                    w) == doctest::Approx(0.0).epsilon(1e-12));

  // AB=10/20, BL=50/100, Rep=50/100, dist=1.5/3, equal weights -> 50
  CHECK(compute_qou(make_uav(0, 0, 10, 50, 50), make_vehicle(1.5, 0, 2, 3, 50),
                    b, w) == doctest::Approx(50.0));
}

TEST_CASE("qov extremes and hand-computed value") {
  NormalizationBounds b;
  ScoringWeights w;

  CHECK(compute_qov(make_uav(0, 0, 10, 50, 50), make_vehicle(0, 0, 4, 7, 100),
                    b, w) == doctest::Approx(100.0));
  CHECK(compute_qov(make_uav(3, 0, 10, 50, 50), make_vehicle(0, 0, 0, 0, 0), b,
                    w) == doctest::Approx(0.0).epsilon(1e-12));
  // RB=2/4, Pay=3.5/7, Rep=50/100, dist=1.5/3 -> 50
  CHECK(compute_qov(make_uav(1.5, 0, 10, 50, 50), make_vehicle(0, 0, 2, 3.5, 50),
                    b, w) == doctest::Approx(50.0));
}

TEST_CASE("distance beyond the bound clamps to zero contribution") {
  NormalizationBounds b;
  ScoringWeights w;
  const auto u = make_uav(0, 0, 10, 50, 50);
  const double at_bound =
      compute_qou(u, make_vehicle(3, 0, 2, 3, 50), b, w);
  const double beyond =
      compute_qou(u, make_vehicle(30, 0, 2, 3, 50), b, w);
  CHECK(at_bound == doctest::Approx(beyond));
}

TEST_CASE("invalid bounds rejected") {
  NormalizationBounds b;
  b.max_ab = 0.0;
  ScoringWeights w;
  CHECK_THROWS_AS(compute_qou(make_uav(0, 0, 10, 50, 50),
                              make_vehicle(0, 0, 2, 3, 50), b, w),
                  ConfigError);
}

TEST_CASE("weight validation") {
  ScoringWeights w;
  CHECK_NOTHROW(w.validate());
  w.w1 = 0.5;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  w = ScoringWeights{};
  w.w5 = -0.25;
  w.w6 = 0.75;
  CHECK_THROWS_AS(w.validate(), ConfigError);
}

TEST_CASE("scores stay in [0, 100] over random valid inputs") {
  NormalizationBounds b;
  ScoringWeights w;
  Rng rng(42);
  for (int i = 0; i < 20000; ++i) {
    const auto u = make_uav(rng.uniform(0, 50), rng.uniform(0, 50),
                            rng.uniform(0, b.max_ab), rng.uniform(1, b.max_bl),
                            rng.uniform(1, b.max_rep));
    const auto v = make_vehicle(rng.uniform(0, 50), rng.uniform(0, 50),
                                rng.uniform(0.01, b.max_rb),
                                rng.uniform(0, b.max_pay_per_mbps),
                                rng.uniform(1, b.max_rep));
    const double qou = compute_qou(u, v, b, w);
    const double qov = compute_qov(u, v, b, w);
    CHECK(qou >= 0.0);
    CHECK(qou <= 100.0);
    CHECK(qov >= 0.0);
    CHECK(qov <= 100.0);
  }
}

TEST_CASE("normalization invariance under common scaling") {
  ScoringWeights w;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    NormalizationBounds b;
    const auto u = make_uav(rng.uniform(0, 2), rng.uniform(0, 2),
                            rng.uniform(0, 20), rng.uniform(1, 100),
                            rng.uniform(1, 100));
    const auto v = make_vehicle(rng.uniform(0, 2), rng.uniform(0, 2), 2, 3, 50);
    const double base = compute_qou(u, v, b, w);

    const double scale = rng.uniform(0.5, 4.0);
    NormalizationBounds sb = b;
    sb.max_ab *= scale;
    sb.max_bl *= scale;
    sb.max_rep *= scale;
    sb.max_distance *= scale;
    UavInfo su = u;
    su.available_bandwidth *= scale;
    su.battery_level *= scale;
    su.reputation *= scale;
    su.position = {u.position.x * scale, u.position.y * scale};
    VehicleInfo sv = v;
    sv.position = {v.position.x * scale, v.position.y * scale};
    CHECK(compute_qou(su, sv, sb, w) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("pure-distance weighting selects the nearest uav") {
  NormalizationBounds b;
  ScoringWeights w;
  w.w1 = w.w2 = w.w3 = 0.0;
  w.w4 = 1.0;
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = make_vehicle(rng.uniform(0, 3), rng.uniform(0, 3), 2, 3, 50);
    int best_by_qou = -1, nearest = -1;
    double best_qou = -1.0, best_dist = 1e18;
    for (int i = 0; i < 6; ++i) {
      const auto u = make_uav(rng.uniform(0, 3), rng.uniform(0, 3),
                              rng.uniform(0, 20), rng.uniform(1, 100),
                              rng.uniform(1, 100));
      const double qou = compute_qou(u, v, b, w);
      const double dist = euclidean_distance(u.position, v.position);
      if (qou > best_qou) {
        best_qou = qou;
        best_by_qou = i;
      }
      if (dist < best_dist) {
        best_dist = dist;
        nearest = i;
      }
    }
    CHECK(best_by_qou == nearest);
  }
}

TEST_CASE("zone mapping") {
  ZoneGrid grid;  // 50x50 area, 10 km tiles -> 5x5 zones
  CHECK(zone_of({0, 0}, grid) == 0);
  CHECK(zone_of({25, 25}, grid) == 12);  // tile (2,2)
  // lower-inclusive boundary: x = 10 belongs to tile 1
  CHECK(zone_of({10, 0}, grid) == 1);
  CHECK_THROWS_AS(zone_of({50, 0}, grid), DomainError);
  CHECK_THROWS_AS(zone_of({-0.1, 3}, grid), DomainError);
}

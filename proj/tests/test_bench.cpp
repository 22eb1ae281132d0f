#include <doctest.h>

#include "core/bench.hpp"

using namespace uaviov;

namespace {

EnvConfig tiny_env(int agents) {
  EnvConfig c;
  c.grid_h = 12;
  c.grid_w = 12;
  c.obs_n = 5;
  c.uav_link_range = 6.0;
  c.uav_cover_range = 4.0;
  c.num_agents = agents;
  c.num_vehicles = 4;
  c.vehicle_speed = 1;
  c.episode_length = 20;
  return c;
}

ArchDescriptor tiny_arch() {
  ArchDescriptor arch;
  arch.input_channels = 6;
  arch.input_n = 5;
  arch.conv = {{4, 3, false}};
  arch.dense = {16};
  return arch;
}

}  // namespace

TEST_CASE("joint action codec") {
  CHECK(joint_action_width(2) == 81);
  CHECK(joint_action_width(3) == 729);

  for (int n = 1; n <= 3; ++n) {
    const std::uint64_t width = joint_action_width(n);
    for (std::uint64_t id = 0; id < width; ++id) {
      const std::vector<int> actions = decode_joint_action(id, n);
      CHECK(actions.size() == static_cast<std::size_t>(n));
      for (int a : actions) {
        CHECK(a >= 0);
        CHECK(a < kNumActions);
      }
      CHECK(encode_joint_action(actions) == id);
    }
  }
  CHECK_THROWS_AS(decode_joint_action(81, 2), ContractError);
  CHECK_THROWS_AS(encode_joint_action({9}), ContractError);
}

TEST_CASE("centralized head widths and parameter scaling") {
  const ArchDescriptor base = tiny_arch();

  std::size_t previous = 0;
  for (int n = 2; n <= 5; ++n) {
    const ArchDescriptor arch = centralized_arch(base, n);
    CHECK(arch.input_channels == 6 * n);
    const Policy central(arch, static_cast<int>(joint_action_width(n)), 0);
    CHECK(central.actor().head_width() ==
          static_cast<int>(joint_action_width(n)));
    CHECK(central.param_count() > previous);
    previous = central.param_count();
  }

  // The decentralized policy keeps a constant count over the same sweep.
  const Policy p2(base, kNumActions, 0);
  const Policy p5(base, kNumActions, 0);
  CHECK(p2.param_count() == p5.param_count());
}

TEST_CASE("centralized training guards the combinatorial blowup") {
  PpoHyperparams hp;
  hp.horizon = 20;
  hp.minibatch_size = 20;
  hp.epochs_per_update = 1;
  hp.total_steps = 20;
  hp.eval_every = 20;
  hp.eval_steps = 20;
  CHECK_THROWS_AS(centralized_train(tiny_env(6), tiny_arch(), hp, 0),
                  ConfigError);
}

TEST_CASE("pso placement") {
  SUBCASE("single uav covers a vehicle cluster") {
    EnvConfig env = tiny_env(1);
    env.num_vehicles = 3;
    CoverageEnv world(env);
    world.reset(5);
    EnvState snapshot = world.state();
    snapshot.vehicle_cells = {{3, 3}, {4, 3}, {3, 4}};

    PsoParams pso;
    pso.particles = 10;
    pso.iterations = 30;
    const PlacementResult result = static_placement(snapshot, env, pso, 7);
    CHECK(result.score == doctest::Approx(2.0));  // full coverage + connectivity
    // Placement reward at t=0 is score - 2 = 0.
    CHECK(result.score - 2.0 == doctest::Approx(0.0));
  }

  SUBCASE("never worse than a random placement on seeded instances") {
    EnvConfig env = tiny_env(2);
    PsoParams pso;
    pso.particles = 12;
    pso.iterations = 25;
    Rng rng(99);
    CoverageEnv world(env);
    for (int trial = 0; trial < 50; ++trial) {
      world.reset(trial);
      const EnvState snapshot = world.state();
      const PlacementResult best = static_placement(snapshot, env, pso, trial);

      EnvState random_state = snapshot;
      for (Cell& c : random_state.uav_cells) {
        c = {static_cast<int>(rng.uniform_index(env.grid_w)),
             static_cast<int>(rng.uniform_index(env.grid_h))};
      }
      const double random_score =
          compute_coverage(random_state, env) +
          compute_connectivity(random_state, env);
      CHECK(best.score >= random_score - 1e-9);
    }
  }
}

TEST_CASE("static placement baseline holds connectivity at 1") {
  EnvConfig env = tiny_env(2);
  PsoParams pso;
  pso.particles = 15;
  pso.iterations = 40;
  const EvalMetrics m = evaluate_static_placement(env, pso, 60, 31);
  CHECK(m.episodes == 3);
  CHECK(m.connectivity_fraction == doctest::Approx(1.0));
  CHECK(m.mean_coverage >= 0.0);
  CHECK(m.mean_coverage <= 1.0);
}

TEST_CASE("frozen placement coverage decays as vehicles move") {
  EnvConfig env = tiny_env(2);
  env.num_vehicles = 8;
  env.episode_length = 60;
  PsoParams pso;
  pso.particles = 20;
  pso.iterations = 50;

  double early = 0, late = 0;
  const int episodes = 10;
  for (int e = 0; e < episodes; ++e) {
    CoverageEnv world(env);
    world.reset(derive_seed(500, e));
    const PlacementResult placement =
        static_placement(world.state(), env, pso, derive_seed(501, e));
    world.set_uav_cells(placement.positions);
    const std::vector<int> stay(env.num_agents, kDirections);
    for (int t = 0; t < env.episode_length; ++t) {
      world.step(stay);
      const double cov = compute_coverage(world.state(), env);
      if (t < 10) early += cov;
      if (t >= env.episode_length - 10) late += cov;
    }
  }
  early /= episodes * 10;
  late /= episodes * 10;
  CHECK(early > late);
}

TEST_CASE("benchmark suite emits four bounded rows per scenario") {
  BenchScenario sc;
  sc.name = "tiny";
  sc.env = tiny_env(2);
  sc.arch = tiny_arch();
  sc.hp.horizon = 100;
  sc.hp.minibatch_size = 50;
  sc.hp.epochs_per_update = 2;
  sc.hp.total_steps = 100;
  sc.hp.eval_every = 100;
  sc.hp.eval_steps = 40;
  sc.pso.particles = 10;
  sc.pso.iterations = 20;
  sc.eval_steps = 40;

  const std::vector<BenchRow> rows = benchmark_suite({sc}, 11);
  REQUIRE(rows.size() == 4);
  const std::vector<std::string> expected = {"mdrl", "centralized",
                                             "static_placement", "random"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].scenario == "tiny");
    CHECK(rows[i].method == expected[i]);
    CHECK(rows[i].mean_reward >= -2.0 * sc.env.episode_length);
    CHECK(rows[i].mean_reward <= 0.0);
    CHECK(rows[i].mean_coverage >= 0.0);
    CHECK(rows[i].mean_coverage <= 1.0);
    CHECK(rows[i].connectivity_fraction >= 0.0);
    CHECK(rows[i].connectivity_fraction <= 1.0);
  }
}

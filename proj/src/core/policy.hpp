#pragma once

#include <cstdint>
#include <vector>

#include "core/nn.hpp"
#include "core/rng.hpp"

namespace uaviov {

// Softmax output of the actor head. Probabilities are strictly positive and
// sum to 1.
struct ActionDistribution {
  std::vector<float> probs;
  std::vector<float> log_probs;

  int greedy() const;
};

// Sample an action index from the distribution; returns (action, log-prob).
std::pair<int, float> sample_action(const ActionDistribution& dist, Rng& rng);

// Actor-critic pair: two networks with the same trunk shape, a 9-way softmax
// head on the actor and a scalar head on the critic. The parameter layout is
// fixed, so snapshots are plain value copies.
class Policy {
 public:
  Policy() = default;
  Policy(ArchDescriptor arch, int num_actions, std::uint64_t init_seed);

  ActionDistribution actor_forward(const std::vector<float>& obs) const;
  float critic_forward(const std::vector<float>& obs) const;

  int num_actions() const { return num_actions_; }
  const ArchDescriptor& arch() const { return arch_; }
  std::size_t param_count() const {
    return actor_.param_count() + critic_.param_count();
  }

  Network<float>& actor() { return actor_; }
  const Network<float>& actor() const { return actor_; }
  Network<float>& critic() { return critic_; }
  const Network<float>& critic() const { return critic_; }

  // Versioned binary checkpoint: magic, version, architecture header,
  // little-endian float32 parameter blobs, SHA-256 digest trailer.
  std::vector<std::uint8_t> serialize() const;
  static Policy deserialize(const std::vector<std::uint8_t>& bytes);

 private:
  ArchDescriptor arch_;
  int num_actions_ = 0;
  Network<float> actor_;
  Network<float> critic_;
};

}  // namespace uaviov

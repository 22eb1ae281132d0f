#include "core/policy.hpp"

#include <bit>
#include <cstring>

#include "core/sha256.hpp"

namespace uaviov {

namespace {

constexpr char kMagic[8] = {'U', 'I', 'O', 'V', 'P', 'O', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return v;
}

void put_f32_blob(std::vector<std::uint8_t>& out, const std::vector<float>& v) {
  put_u64(out, v.size());
  for (float f : v) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::vector<float> get_f32_blob(const std::uint8_t*& p, const std::uint8_t* end) {
  if (end - p < 8) throw IntegrityError("truncated checkpoint blob");
  const std::uint64_t count = get_u64(p);
  p += 8;
  if (count > static_cast<std::uint64_t>(end - p) / 4) {
    throw IntegrityError("truncated checkpoint blob");
  }
  std::vector<float> v(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    v[i] = std::bit_cast<float>(get_u32(p));
    p += 4;
  }
  return v;
}

}  // namespace

int ActionDistribution::greedy() const {
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  }
  return best;
}

std::pair<int, float> sample_action(const ActionDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  const int last = static_cast<int>(dist.probs.size()) - 1;
  for (int i = 0; i <= last; ++i) {
    cum += dist.probs[i];
    if (u < cum || i == last) return {i, dist.log_probs[i]};
  }
  return {last, dist.log_probs[last]};
}

Policy::Policy(ArchDescriptor arch, int num_actions, std::uint64_t init_seed)
    : arch_(std::move(arch)),
      num_actions_(num_actions),
      actor_(arch_, num_actions),
      critic_(arch_, 1) {
  Rng rng(init_seed);
  actor_.init_params(rng, /*zero_head=*/true);
  critic_.init_params(rng, /*zero_head=*/false);
}

ActionDistribution Policy::actor_forward(const std::vector<float>& obs) const {
  if (obs.size() != actor_.input_size()) {
    throw ContractError("observation size does not match the actor input");
  }
  const std::vector<float> logits = actor_.forward(obs.data());
  ActionDistribution dist;
  softmax(logits, dist.probs, dist.log_probs);
  return dist;
}

float Policy::critic_forward(const std::vector<float>& obs) const {
  if (obs.size() != critic_.input_size()) {
    throw ContractError("observation size does not match the critic input");
  }
  return critic_.forward(obs.data())[0];
}

std::vector<std::uint8_t> Policy::serialize() const {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 8);
  put_u32(out, kVersion);

  const Json header{{"arch", arch_},
                    {"actor_head", num_actions_},
                    {"critic_head", 1}};
  const std::string header_str = header.dump();
  put_u32(out, static_cast<std::uint32_t>(header_str.size()));
  out.insert(out.end(), header_str.begin(), header_str.end());

  put_f32_blob(out, actor_.params());
  put_f32_blob(out, critic_.params());

  const auto digest = Sha256::digest(out.data(), out.size());
  out.insert(out.end(), digest.begin(), digest.end());
  return out;
}

Policy Policy::deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 + 4 + 4 + 32) {
    throw IntegrityError("checkpoint too short");
  }
  const std::size_t body_len = bytes.size() - 32;
  const auto digest = Sha256::digest(bytes.data(), body_len);
  if (!std::equal(digest.begin(), digest.end(), bytes.begin() + body_len)) {
    throw IntegrityError("checkpoint digest mismatch");
  }
  const std::uint8_t* p = bytes.data();
  const std::uint8_t* end = bytes.data() + body_len;
  if (std::memcmp(p, kMagic, 8) != 0) {
    throw IntegrityError("bad checkpoint magic");
  }
  p += 8;
  const std::uint32_t version = get_u32(p);
  p += 4;
  if (version != kVersion) {
    throw IntegrityError("unsupported checkpoint version");
  }
  const std::uint32_t header_len = get_u32(p);
  p += 4;
  if (static_cast<std::size_t>(end - p) < header_len) {
    throw IntegrityError("truncated checkpoint header");
  }
  const Json header = Json::parse(std::string(p, p + header_len));
  p += header_len;

  Policy policy;
  policy.arch_ = header.at("arch").get<ArchDescriptor>();
  policy.num_actions_ = header.at("actor_head").get<int>();
  policy.actor_ = Network<float>(policy.arch_, policy.num_actions_);
  policy.critic_ = Network<float>(policy.arch_, 1);

  std::vector<float> actor_params = get_f32_blob(p, end);
  std::vector<float> critic_params = get_f32_blob(p, end);
  if (actor_params.size() != policy.actor_.param_count() ||
      critic_params.size() != policy.critic_.param_count()) {
    throw IntegrityError("checkpoint parameter count mismatch");
  }
  policy.actor_.params() = std::move(actor_params);
  policy.critic_.params() = std::move(critic_params);
  return policy;
}

}  // namespace uaviov

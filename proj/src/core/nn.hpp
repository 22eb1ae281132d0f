#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/jsonio.hpp"
#include "core/rng.hpp"

namespace uaviov {

// Convolution stage of the policy network: valid convolution, optional 2x2
// max pool behind it.
struct ConvSpec {
  int out_channels = 0;
  int kernel = 0;
  bool pool = false;
};

inline void to_json(Json& j, const ConvSpec& c) {
  j = Json{{"out_channels", c.out_channels}, {"kernel", c.kernel}, {"pool", c.pool}};
}
inline void from_json(const Json& j, ConvSpec& c) {
  j.at("out_channels").get_to(c.out_channels);
  j.at("kernel").get_to(c.kernel);
  c.pool = j.value("pool", false);
}

// Shape of the shared actor/critic trunk. The default lands the combined
// actor+critic parameter count near the 1.692M reference budget.
struct ArchDescriptor {
  int input_channels = 6;
  int input_n = 21;
  std::vector<ConvSpec> conv = {{16, 5, true}, {32, 5, true}};
  std::vector<int> dense = {1024, 680};

  void validate() const {
    if (input_channels < 1 || input_n < 1) {
      throw ConfigError("network input shape must be positive");
    }
    int n = input_n;
    for (const ConvSpec& c : conv) {
      if (c.out_channels < 1 || c.kernel < 1) {
        throw ConfigError("conv spec must have positive channels and kernel");
      }
      n = n - c.kernel + 1;
      if (n < 1) throw ConfigError("conv kernel larger than its input");
      if (c.pool) {
        n = n / 2;
        if (n < 1) throw ConfigError("pooling shrinks the map below 1x1");
      }
    }
    for (int d : dense) {
      if (d < 1) throw ConfigError("dense widths must be positive");
    }
  }
};

inline void to_json(Json& j, const ArchDescriptor& a) {
  j = Json{{"input_channels", a.input_channels},
           {"input_n", a.input_n},
           {"conv", a.conv},
           {"dense", a.dense}};
}
inline void from_json(const Json& j, ArchDescriptor& a) {
  a.input_channels = j.value("input_channels", a.input_channels);
  a.input_n = j.value("input_n", a.input_n);
  if (j.contains("conv")) j.at("conv").get_to(a.conv);
  if (j.contains("dense")) j.at("dense").get_to(a.dense);
}

// Feed-forward CNN with a linear head: conv/pool trunk, ReLU dense stack,
// no activation on the head. Parameters live in one flat vector so the
// optimizer, serializer and gradient checks share a single layout.
template <typename T>
class Network {
 public:
  Network() = default;

  Network(ArchDescriptor arch, int head_width)
      : arch_(std::move(arch)), head_width_(head_width) {
    arch_.validate();
    if (head_width_ < 1) throw ConfigError("head width must be positive");
    build_layout();
    params_.assign(total_params_, T(0));
  }

  // Fan-in-scaled uniform init; zero_head leaves the final layer at zero so
  // a softmax over the head starts uniform.
  void init_params(Rng& rng, bool zero_head) {
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      const Layer& l = layers_[li];
      if (l.kind != LayerKind::kConv && l.kind != LayerKind::kDense) continue;
      const bool is_head = li + 1 == layers_.size();
      T* w = params_.data() + l.weight_offset;
      T* b = params_.data() + l.bias_offset;
      if (is_head && zero_head) {
        std::fill(w, w + l.weight_count, T(0));
        std::fill(b, b + l.bias_count, T(0));
        continue;
      }
      const double bound = std::sqrt(3.0 / static_cast<double>(l.fan_in));
      for (std::size_t i = 0; i < l.weight_count; ++i) {
        w[i] = static_cast<T>(rng.uniform(-bound, bound));
      }
      std::fill(b, b + l.bias_count, T(0));
    }
  }

  const ArchDescriptor& arch() const { return arch_; }
  int head_width() const { return head_width_; }
  std::size_t param_count() const { return total_params_; }
  std::vector<T>& params() { return params_; }
  const std::vector<T>& params() const { return params_; }

  std::size_t input_size() const {
    return static_cast<std::size_t>(arch_.input_channels) * arch_.input_n *
           arch_.input_n;
  }

  // Per-call activation cache; reused across calls to avoid reallocation.
  struct Cache {
    std::vector<std::vector<T>> acts;     // acts[0] = input, acts.back() = head out
    std::vector<std::vector<int>> pool_ix; // argmax index per pool layer output
  };

  void forward(const T* input, Cache& cache) const {
    cache.acts.resize(layers_.size() + 1);
    cache.pool_ix.resize(layers_.size());
    cache.acts[0].assign(input, input + input_size());
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      run_layer(li, cache.acts[li], cache.acts[li + 1], cache.pool_ix[li]);
    }
  }

  std::vector<T> forward(const T* input) const {
    Cache cache;
    forward(input, cache);
    return cache.acts.back();
  }

  // Backpropagates d(loss)/d(head output), accumulating into grad (same
  // layout as params). The cache must come from a forward() on these params.
  void backward(const Cache& cache, const std::vector<T>& dout,
                std::vector<T>& grad) const {
    if (grad.size() != total_params_) {
      throw ContractError("gradient buffer has wrong size");
    }
    std::vector<T> delta = dout;
    std::vector<T> delta_prev;
    for (std::size_t li = layers_.size(); li-- > 0;) {
      backward_layer(li, cache, delta, delta_prev, grad);
      std::swap(delta, delta_prev);
    }
  }

 private:
  enum class LayerKind { kConv, kPool, kRelu, kDense };

  struct Layer {
    LayerKind kind;
    // Geometry (conv/pool): input channels and side, output side.
    int in_ch = 0, in_n = 0, out_ch = 0, out_n = 0, kernel = 0;
    // Dense: in/out widths stored in fan_in/out_width.
    std::size_t fan_in = 0;
    std::size_t out_width = 0;
    std::size_t weight_offset = 0, weight_count = 0;
    std::size_t bias_offset = 0, bias_count = 0;
  };

  void build_layout() {
    std::size_t offset = 0;
    int ch = arch_.input_channels;
    int n = arch_.input_n;
    auto add_params = [&offset](Layer& l, std::size_t weights, std::size_t biases) {
      l.weight_offset = offset;
      l.weight_count = weights;
      offset += weights;
      l.bias_offset = offset;
      l.bias_count = biases;
      offset += biases;
    };

    for (const ConvSpec& c : arch_.conv) {
      Layer conv;
      conv.kind = LayerKind::kConv;
      conv.in_ch = ch;
      conv.in_n = n;
      conv.out_ch = c.out_channels;
      conv.kernel = c.kernel;
      conv.out_n = n - c.kernel + 1;
      conv.fan_in = static_cast<std::size_t>(ch) * c.kernel * c.kernel;
      add_params(conv,
                 static_cast<std::size_t>(c.out_channels) * conv.fan_in,
                 static_cast<std::size_t>(c.out_channels));
      layers_.push_back(conv);
      ch = c.out_channels;
      n = conv.out_n;

      Layer relu;
      relu.kind = LayerKind::kRelu;
      relu.out_width = static_cast<std::size_t>(ch) * n * n;
      layers_.push_back(relu);

      if (c.pool) {
        Layer pool;
        pool.kind = LayerKind::kPool;
        pool.in_ch = ch;
        pool.in_n = n;
        pool.out_ch = ch;
        pool.out_n = n / 2;
        layers_.push_back(pool);
        n = n / 2;
      }
    }

    std::size_t width = static_cast<std::size_t>(ch) * n * n;
    for (int d : arch_.dense) {
      Layer dense;
      dense.kind = LayerKind::kDense;
      dense.fan_in = width;
      dense.out_width = static_cast<std::size_t>(d);
      add_params(dense, width * d, static_cast<std::size_t>(d));
      layers_.push_back(dense);
      width = static_cast<std::size_t>(d);

      Layer relu;
      relu.kind = LayerKind::kRelu;
      relu.out_width = width;
      layers_.push_back(relu);
    }

    Layer head;
    head.kind = LayerKind::kDense;
    head.fan_in = width;
    head.out_width = static_cast<std::size_t>(head_width_);
    add_params(head, width * head_width_, static_cast<std::size_t>(head_width_));
    layers_.push_back(head);

    total_params_ = offset;
  }

  void run_layer(std::size_t li, const std::vector<T>& in, std::vector<T>& out,
                 std::vector<int>& pool_ix) const {
    const Layer& l = layers_[li];
    switch (l.kind) {
      case LayerKind::kConv: {
        const int on = l.out_n, in_n = l.in_n, k = l.kernel;
        out.assign(static_cast<std::size_t>(l.out_ch) * on * on, T(0));
        const T* w = params_.data() + l.weight_offset;
        const T* b = params_.data() + l.bias_offset;
        for (int oc = 0; oc < l.out_ch; ++oc) {
          const T* wc = w + static_cast<std::size_t>(oc) * l.fan_in;
          for (int oy = 0; oy < on; ++oy) {
            for (int ox = 0; ox < on; ++ox) {
              T acc = b[oc];
              const T* wp = wc;
              for (int ic = 0; ic < l.in_ch; ++ic) {
                const T* ip =
                    in.data() + (static_cast<std::size_t>(ic) * in_n + oy) * in_n + ox;
                for (int ky = 0; ky < k; ++ky) {
                  for (int kx = 0; kx < k; ++kx) acc += wp[kx] * ip[kx];
                  wp += k;
                  ip += in_n;
                }
              }
              out[(static_cast<std::size_t>(oc) * on + oy) * on + ox] = acc;
            }
          }
        }
        break;
      }
      case LayerKind::kRelu: {
        out.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
          out[i] = in[i] > T(0) ? in[i] : T(0);
        }
        break;
      }
      case LayerKind::kPool: {
        const int on = l.out_n, in_n = l.in_n;
        out.assign(static_cast<std::size_t>(l.out_ch) * on * on, T(0));
        pool_ix.assign(out.size(), 0);
        for (int c = 0; c < l.out_ch; ++c) {
          for (int oy = 0; oy < on; ++oy) {
            for (int ox = 0; ox < on; ++ox) {
              T best = -std::numeric_limits<T>::infinity();
              int best_ix = 0;
              for (int dy = 0; dy < 2; ++dy) {
                for (int dx = 0; dx < 2; ++dx) {
                  const int ix =
                      (c * in_n + (2 * oy + dy)) * in_n + (2 * ox + dx);
                  if (in[ix] > best) {
                    best = in[ix];
                    best_ix = ix;
                  }
                }
              }
              const std::size_t o = (static_cast<std::size_t>(c) * on + oy) * on + ox;
              out[o] = best;
              pool_ix[o] = best_ix;
            }
          }
        }
        break;
      }
      case LayerKind::kDense: {
        out.assign(l.out_width, T(0));
        const T* w = params_.data() + l.weight_offset;
        const T* b = params_.data() + l.bias_offset;
        for (std::size_t o = 0; o < l.out_width; ++o) {
          const T* wr = w + o * l.fan_in;
          T acc = b[o];
          for (std::size_t i = 0; i < l.fan_in; ++i) acc += wr[i] * in[i];
          out[o] = acc;
        }
        break;
      }
    }
  }

  void backward_layer(std::size_t li, const Cache& cache,
                      const std::vector<T>& delta, std::vector<T>& delta_prev,
                      std::vector<T>& grad) const {
    const Layer& l = layers_[li];
    const std::vector<T>& in = cache.acts[li];
    switch (l.kind) {
      case LayerKind::kConv: {
        const int on = l.out_n, in_n = l.in_n, k = l.kernel;
        delta_prev.assign(in.size(), T(0));
        const T* w = params_.data() + l.weight_offset;
        T* gw = grad.data() + l.weight_offset;
        T* gb = grad.data() + l.bias_offset;
        for (int oc = 0; oc < l.out_ch; ++oc) {
          const T* wc = w + static_cast<std::size_t>(oc) * l.fan_in;
          T* gwc = gw + static_cast<std::size_t>(oc) * l.fan_in;
          for (int oy = 0; oy < on; ++oy) {
            for (int ox = 0; ox < on; ++ox) {
              const T g =
                  delta[(static_cast<std::size_t>(oc) * on + oy) * on + ox];
              if (g == T(0)) continue;
              gb[oc] += g;
              const T* wp = wc;
              T* gwp = gwc;
              for (int ic = 0; ic < l.in_ch; ++ic) {
                const std::size_t base =
                    (static_cast<std::size_t>(ic) * in_n + oy) * in_n + ox;
                const T* ip = in.data() + base;
                T* dp = delta_prev.data() + base;
                for (int ky = 0; ky < k; ++ky) {
                  for (int kx = 0; kx < k; ++kx) {
                    gwp[kx] += g * ip[kx];
                    dp[kx] += g * wp[kx];
                  }
                  wp += k;
                  gwp += k;
                  ip += in_n;
                  dp += in_n;
                }
              }
            }
          }
        }
        break;
      }
      case LayerKind::kRelu: {
        delta_prev.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
          delta_prev[i] = in[i] > T(0) ? delta[i] : T(0);
        }
        break;
      }
      case LayerKind::kPool: {
        delta_prev.assign(in.size(), T(0));
        const std::vector<int>& ix = cache.pool_ix[li];
        for (std::size_t o = 0; o < delta.size(); ++o) {
          delta_prev[ix[o]] += delta[o];
        }
        break;
      }
      case LayerKind::kDense: {
        delta_prev.assign(l.fan_in, T(0));
        const T* w = params_.data() + l.weight_offset;
        T* gw = grad.data() + l.weight_offset;
        T* gb = grad.data() + l.bias_offset;
        for (std::size_t o = 0; o < l.out_width; ++o) {
          const T g = delta[o];
          gb[o] += g;
          const T* wr = w + o * l.fan_in;
          T* gwr = gw + o * l.fan_in;
          if (g == T(0)) continue;
          for (std::size_t i = 0; i < l.fan_in; ++i) {
            gwr[i] += g * in[i];
            delta_prev[i] += g * wr[i];
          }
        }
        break;
      }
    }
  }

  ArchDescriptor arch_;
  int head_width_ = 0;
  std::vector<Layer> layers_;
  std::size_t total_params_ = 0;
  std::vector<T> params_;
};

// Numerically stable softmax; returns probabilities and fills log_probs.
template <typename T>
void softmax(const std::vector<T>& logits, std::vector<T>& probs,
             std::vector<T>& log_probs) {
  T max_logit = logits[0];
  for (T v : logits) max_logit = std::max(max_logit, v);
  T sum = T(0);
  probs.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  const T log_sum = std::log(sum) + max_logit;
  log_probs.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] /= sum;
    log_probs[i] = logits[i] - log_sum;
  }
}

template <typename T>
T entropy_of(const std::vector<T>& probs, const std::vector<T>& log_probs) {
  T h = T(0);
  for (std::size_t i = 0; i < probs.size(); ++i) h -= probs[i] * log_probs[i];
  return h;
}

}  // namespace uaviov

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpo/rng.hpp"

namespace fairpo {

/// Output head of a dense network: a probability vector over discrete actions
/// or a single scalar value estimate.
enum class Head : std::uint8_t { SoftmaxPolicy = 0, ScalarValue = 1 };

/// Row-major dense matrix of doubles. Just enough for forward/backward passes.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// Numerically stable softmax (max-logit subtraction).
inline std::vector<double> stable_softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

/// Per-parameter gradients, shape-congruent with an MlpNetwork.
struct GradientSet {
  std::vector<Matrix> weight_grads;
  std::vector<std::vector<double>> bias_grads;

  void accumulate(const GradientSet& other) {
    for (std::size_t l = 0; l < weight_grads.size(); ++l) {
      auto& w = weight_grads[l].data;
      const auto& ow = other.weight_grads[l].data;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += ow[i];
      auto& b = bias_grads[l];
      const auto& ob = other.bias_grads[l];
      for (std::size_t i = 0; i < b.size(); ++i) b[i] += ob[i];
    }
  }

  void scale(double s) {
    for (auto& wg : weight_grads)
      for (double& v : wg.data) v *= s;
    for (auto& bg : bias_grads)
      for (double& v : bg) v *= s;
  }

  bool all_finite() const {
    for (const auto& wg : weight_grads)
      for (double v : wg.data)
        if (!std::isfinite(v)) return false;
    for (const auto& bg : bias_grads)
      for (double v : bg)
        if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Dense feed-forward network with tanh hidden layers and a softmax-policy or
/// scalar-value head. Parameters are plain values; forward/backward are free
/// functions below and backpropagation is written out by hand.
struct MlpNetwork {
  std::vector<int> layer_sizes;                 // input, hidden..., output
  std::vector<Matrix> weights;                  // weights[l]: sizes[l+1] x sizes[l]
  std::vector<std::vector<double>> biases;      // biases[l]: sizes[l+1]
  Head head = Head::ScalarValue;
  std::uint64_t version = 0;                    // bumped on every parameter update

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }

  /// Scaled-uniform init (symmetric, fan-based) with a fixed seed.
  /// `output_scale` shrinks the final layer; policy nets start near uniform.
  static MlpNetwork create(std::vector<int> sizes, Head head, std::uint64_t seed,
                           double output_scale = 1.0) {
    if (sizes.size() < 2) throw std::invalid_argument("MlpNetwork: need input and output sizes");
    for (int s : sizes)
      if (s <= 0) throw std::invalid_argument("MlpNetwork: layer sizes must be positive");
    if (head == Head::ScalarValue && sizes.back() != 1)
      throw std::invalid_argument("MlpNetwork: scalar-value head requires output dim 1");

    MlpNetwork net;
    net.layer_sizes = std::move(sizes);
    net.head = head;
    Rng rng(seed);
    const int layers = static_cast<int>(net.layer_sizes.size()) - 1;
    net.weights.reserve(layers);
    net.biases.reserve(layers);
    for (int l = 0; l < layers; ++l) {
      const int fan_in = net.layer_sizes[l];
      const int fan_out = net.layer_sizes[l + 1];
      const double scale =
          std::sqrt(6.0 / (fan_in + fan_out)) * (l == layers - 1 ? output_scale : 1.0);
      Matrix w(fan_out, fan_in);
      for (double& v : w.data) v = rng.uniform(-scale, scale);
      net.weights.push_back(std::move(w));
      net.biases.emplace_back(fan_out, 0.0);
    }
    return net;
  }

  GradientSet zero_gradients() const {
    GradientSet g;
    g.weight_grads.reserve(weights.size());
    g.bias_grads.reserve(biases.size());
    for (const auto& w : weights) g.weight_grads.emplace_back(w.rows, w.cols);
    for (const auto& b : biases) g.bias_grads.emplace_back(b.size(), 0.0);
    return g;
  }

  bool same_shape(const GradientSet& g) const {
    if (g.weight_grads.size() != weights.size() || g.bias_grads.size() != biases.size())
      return false;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (g.weight_grads[l].rows != weights[l].rows || g.weight_grads[l].cols != weights[l].cols)
        return false;
      if (g.bias_grads[l].size() != biases[l].size()) return false;
    }
    return true;
  }

  bool operator==(const MlpNetwork& o) const {
    if (layer_sizes != o.layer_sizes || head != o.head) return false;
    for (std::size_t l = 0; l < weights.size(); ++l)
      if (weights[l].data != o.weights[l].data || biases[l] != o.biases[l]) return false;
    return true;
  }
};

/// Activation trace from a forward pass; consumed by backward().
struct ForwardCache {
  std::vector<std::vector<double>> activations;  // [0]=input, then each hidden tanh output
  std::vector<double> output;                    // post-head output
  std::uint64_t net_version = 0;
  bool valid = false;
};

inline std::vector<double> forward(const MlpNetwork& net, std::span<const double> input,
                                   ForwardCache& cache) {
  if (static_cast<int>(input.size()) != net.input_dim())
    throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                " does not match network input dim " +
                                std::to_string(net.input_dim()));
  for (double v : input)
    if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");

  cache.activations.clear();
  cache.activations.emplace_back(input.begin(), input.end());

  const int layers = net.num_layers();
  std::vector<double> cur(input.begin(), input.end());
  for (int l = 0; l < layers; ++l) {
    const Matrix& w = net.weights[l];
    const auto& b = net.biases[l];
    std::vector<double> next(w.rows);
    for (int r = 0; r < w.rows; ++r) {
      double acc = b[r];
      const double* row = &w.data[static_cast<std::size_t>(r) * w.cols];
      for (int c = 0; c < w.cols; ++c) acc += row[c] * cur[c];
      next[r] = acc;
    }
    if (l < layers - 1) {
      for (double& v : next) v = std::tanh(v);
      cache.activations.push_back(next);
    }
    cur = std::move(next);
  }

  if (net.head == Head::SoftmaxPolicy) cur = stable_softmax(cur);
  cache.output = cur;
  cache.net_version = net.version;
  cache.valid = true;
  return cur;
}

inline std::vector<double> forward(const MlpNetwork& net, std::span<const double> input) {
  ForwardCache cache;
  return forward(net, input, cache);
}

/// Analytic gradients of a scalar loss w.r.t. every parameter, given the
/// upstream gradient of that loss w.r.t. the network output (post-head).
inline GradientSet backward(const MlpNetwork& net, const ForwardCache& cache,
                            std::span<const double> output_grad) {
  if (!cache.valid) throw std::invalid_argument("backward: cache not produced by forward");
  if (cache.net_version != net.version)
    throw std::invalid_argument("backward: cache is stale (parameters changed since forward)");
  if (static_cast<int>(output_grad.size()) != net.output_dim())
    throw std::invalid_argument("backward: upstream gradient length mismatch");

  const int layers = net.num_layers();
  GradientSet grads = net.zero_gradients();

  // Gradient w.r.t. the final pre-head activation.
  std::vector<double> gz(output_grad.begin(), output_grad.end());
  if (net.head == Head::SoftmaxPolicy) {
    const auto& p = cache.output;
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) dot += p[i] * output_grad[i];
    for (std::size_t i = 0; i < p.size(); ++i) gz[i] = p[i] * (output_grad[i] - dot);
  }

  for (int l = layers - 1; l >= 0; --l) {
    const Matrix& w = net.weights[l];
    const auto& act = cache.activations[static_cast<std::size_t>(l)];
    Matrix& wg = grads.weight_grads[l];
    auto& bg = grads.bias_grads[l];
    for (int r = 0; r < w.rows; ++r) {
      const double g = gz[static_cast<std::size_t>(r)];
      bg[static_cast<std::size_t>(r)] = g;
      double* wrow = &wg.data[static_cast<std::size_t>(r) * w.cols];
      for (int c = 0; c < w.cols; ++c) wrow[c] = g * act[static_cast<std::size_t>(c)];
    }
    if (l > 0) {
      std::vector<double> ga(w.cols, 0.0);
      for (int r = 0; r < w.rows; ++r) {
        const double g = gz[static_cast<std::size_t>(r)];
        const double* row = &w.data[static_cast<std::size_t>(r) * w.cols];
        for (int c = 0; c < w.cols; ++c) ga[static_cast<std::size_t>(c)] += row[c] * g;
      }
      // act holds tanh outputs of layer l-1
      gz.resize(ga.size());
      for (std::size_t i = 0; i < ga.size(); ++i) gz[i] = ga[i] * (1.0 - act[i] * act[i]);
    }
  }
  return grads;
}

/// Moves every parameter by +step_size * gradient (gradient ascent).
/// Callers descending a loss pass the negated gradient.
inline void apply_update(MlpNetwork& net, const GradientSet& grads, double step_size) {
  if (!net.same_shape(grads)) throw std::invalid_argument("apply_update: shape mismatch");
  if (!grads.all_finite()) throw std::invalid_argument("apply_update: non-finite gradient");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    auto& w = net.weights[l].data;
    const auto& g = grads.weight_grads[l].data;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += step_size * g[i];
    auto& b = net.biases[l];
    const auto& gb = grads.bias_grads[l];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += step_size * gb[i];
  }
  ++net.version;
}

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators for Adam-style adaptive steps.
struct AdamState {
  GradientSet m;
  GradientSet v;
  long step_count = 0;

  static AdamState for_network(const MlpNetwork& net) {
    AdamState s;
    s.m = net.zero_gradients();
    s.v = net.zero_gradients();
    return s;
  }
};

/// Adam step in the ascent direction (theta += step * mhat / (sqrt(vhat) + eps)).
inline void adam_update(MlpNetwork& net, const GradientSet& grads, AdamState& state,
                        double step_size, const AdamConfig& cfg = {}) {
  if (!net.same_shape(grads)) throw std::invalid_argument("adam_update: shape mismatch");
  if (!grads.all_finite()) throw std::invalid_argument("adam_update: non-finite gradient");
  ++state.step_count;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));

  auto update_span = [&](std::vector<double>& params, const std::vector<double>& g,
                         std::vector<double>& m, std::vector<double>& v) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      params[i] += step_size * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  };

  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    update_span(net.weights[l].data, grads.weight_grads[l].data, state.m.weight_grads[l].data,
                state.v.weight_grads[l].data);
    update_span(net.biases[l], grads.bias_grads[l], state.m.bias_grads[l],
                state.v.bias_grads[l]);
  }
  ++net.version;
}

// --- checkpoint io ------------------------------------------------------
//
// Binary layout: magic, head byte, layer count, layer sizes, then per layer
// the row-major weights followed by the bias vector, all as raw doubles.
// Raw bytes round-trip bit-exactly.

namespace detail {
constexpr char kNetMagic[8] = {'F', 'P', 'N', 'E', 'T', '0', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("network load: truncated stream");
  return v;
}
}  // namespace detail

inline void save_network(const MlpNetwork& net, std::ostream& os) {
  os.write(detail::kNetMagic, sizeof(detail::kNetMagic));
  detail::write_pod(os, static_cast<std::uint8_t>(net.head));
  detail::write_pod(os, static_cast<std::uint32_t>(net.layer_sizes.size()));
  for (int s : net.layer_sizes) detail::write_pod(os, static_cast<std::int32_t>(s));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const auto& w = net.weights[l].data;
    os.write(reinterpret_cast<const char*>(w.data()),
             static_cast<std::streamsize>(w.size() * sizeof(double)));
    const auto& b = net.biases[l];
    os.write(reinterpret_cast<const char*>(b.data()),
             static_cast<std::streamsize>(b.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("network save: write failed");
}

inline MlpNetwork load_network(std::istream& is) {
  char magic[sizeof(detail::kNetMagic)];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(std::begin(magic), std::end(magic), std::begin(detail::kNetMagic)))
    throw std::runtime_error("network load: bad magic (not a network file?)");
  const auto head = static_cast<Head>(detail::read_pod<std::uint8_t>(is));
  const auto n = detail::read_pod<std::uint32_t>(is);
  if (n < 2 || n > 64) throw std::runtime_error("network load: implausible layer count");
  std::vector<int> sizes(n);
  for (auto& s : sizes) {
    s = detail::read_pod<std::int32_t>(is);
    if (s <= 0) throw std::runtime_error("network load: non-positive layer size");
  }
  MlpNetwork net;
  net.layer_sizes = sizes;
  net.head = head;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Matrix w(sizes[l + 1], sizes[l]);
    is.read(reinterpret_cast<char*>(w.data.data()),
            static_cast<std::streamsize>(w.data.size() * sizeof(double)));
    std::vector<double> b(static_cast<std::size_t>(sizes[l + 1]));
    is.read(reinterpret_cast<char*>(b.data()),
            static_cast<std::streamsize>(b.size() * sizeof(double)));
    if (!is) throw std::runtime_error("network load: truncated stream");
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

inline void save_network(const MlpNetwork& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("network save: cannot open " + path);
  save_network(net, os);
}

inline MlpNetwork load_network(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("network load: cannot open " + path);
  return load_network(is);
}

}  // namespace fairpo

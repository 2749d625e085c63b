#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semrob/common.hpp"
#include "semrob/rng.hpp"

// Feed-forward classifier over flattened embedded text: dense ReLU hidden
// layers and a softmax output. Parameters and activations use the scalar
// type T (float in production, double in numerical tests); dot products and
// other reductions always accumulate in double.

namespace semrob {

enum class Activation : std::uint8_t { identity = 0, relu = 1, softmax = 2 };

template <typename T>
struct DenseLayerT {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<T> weights;  // out x in, row-major
  std::vector<T> bias;     // out
  Activation activation = Activation::identity;
};

struct TrainConfig {
  int epochs = 20;
  std::size_t batch_size = 64;
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::uint64_t seed = 0;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;      // mean batch loss over the epoch
  double accuracy = 0.0;  // running accuracy over the epoch's batches
};

using TrainLog = std::vector<EpochStats>;

template <typename T>
struct SampleT {
  std::vector<T> x;  // flattened seq_len * emb_dim input
  int label = 0;
};

// Parameter-shaped buffers; gradients and optimizer state are kept in double.
struct ParamGrads {
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;

  template <typename T>
  static ParamGrads zeros_like(const std::vector<DenseLayerT<T>>& layers) {
    ParamGrads g;
    for (const auto& l : layers) {
      g.w.emplace_back(l.weights.size(), 0.0);
      g.b.emplace_back(l.bias.size(), 0.0);
    }
    return g;
  }

  void add_scaled(const ParamGrads& other, double scale) {
    for (std::size_t l = 0; l < w.size(); ++l) {
      for (std::size_t i = 0; i < w[l].size(); ++i) w[l][i] += scale * other.w[l][i];
      for (std::size_t i = 0; i < b[l].size(); ++i) b[l][i] += scale * other.b[l][i];
    }
  }
};

template <typename T>
class NetT {
 public:
  NetT() = default;

  // He-style seeded init: weights uniform in +-sqrt(6/fan_in), biases zero.
  // Hidden layer list must be non-empty (InvalidShape).
  static NetT init(std::size_t seq_len, std::size_t emb_dim,
                   const std::vector<std::size_t>& hidden, std::size_t num_classes,
                   std::uint64_t seed) {
    if (seq_len == 0 || emb_dim == 0 || num_classes < 2) {
      throw Error(ErrorCode::InvalidShape, "bad input shape or class count");
    }
    if (hidden.empty()) {
      throw Error(ErrorCode::InvalidShape, "at least one hidden layer required");
    }
    NetT net;
    net.seq_len_ = seq_len;
    net.emb_dim_ = emb_dim;
    rng::Engine eng(seed);
    std::size_t prev = seq_len * emb_dim;
    for (std::size_t h : hidden) {
      if (h == 0) throw Error(ErrorCode::InvalidShape, "hidden width must be >= 1");
      net.layers_.push_back(make_layer(prev, h, Activation::relu, eng));
      prev = h;
    }
    net.layers_.push_back(make_layer(prev, num_classes, Activation::softmax, eng));
    return net;
  }

  std::size_t seq_len() const { return seq_len_; }
  std::size_t emb_dim() const { return emb_dim_; }
  std::size_t input_size() const { return seq_len_ * emb_dim_; }
  std::size_t num_classes() const { return layers_.back().out; }
  std::vector<DenseLayerT<T>>& layers() { return layers_; }
  const std::vector<DenseLayerT<T>>& layers() const { return layers_; }
  void set_input_shape(std::size_t seq_len, std::size_t emb_dim) {
    seq_len_ = seq_len;
    emb_dim_ = emb_dim;
  }

  std::size_t num_parameters() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
  }

  // Pre-softmax output of the final layer.
  std::vector<T> logits(std::span<const T> x) const {
    check_input(x);
    std::vector<T> a(x.begin(), x.end());
    for (const auto& layer : layers_) {
      a = affine(layer, a);
      if (layer.activation == Activation::relu) relu_inplace(a);
    }
    return a;
  }

  // Softmax probabilities; sums to 1 within float tolerance for finite input.
  std::vector<T> forward(std::span<const T> x) const {
    std::vector<T> z = logits(x);
    softmax_inplace(z);
    return z;
  }

  // Argmax of forward; ties break toward the lower class index.
  int predict(std::span<const T> x) const {
    const std::vector<T> z = logits(x);
    return argmax(z);
  }

  static int argmax(std::span<const T> v) {
    int best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) best = static_cast<int>(i);
    }
    return best;
  }

  // Mean of the per-layer L2 norms of (weights, bias) concatenated.
  double param_norm() const {
    double total = 0.0;
    for (const auto& l : layers_) {
      double sq = 0.0;
      for (T w : l.weights) sq += static_cast<double>(w) * static_cast<double>(w);
      for (T b : l.bias) sq += static_cast<double>(b) * static_cast<double>(b);
      total += std::sqrt(sq);
    }
    return layers_.empty() ? 0.0 : total / static_cast<double>(layers_.size());
  }

  // --- pieces shared with training and interval propagation ---

  static std::vector<T> affine(const DenseLayerT<T>& layer, std::span<const T> a) {
    if (a.size() != layer.in) {
      throw Error(ErrorCode::ShapeMismatch,
                  "layer expects " + std::to_string(layer.in) + " inputs, got " +
                      std::to_string(a.size()));
    }
    std::vector<T> z(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const T* row = layer.weights.data() + o * layer.in;
      double acc = static_cast<double>(layer.bias[o]);
      for (std::size_t i = 0; i < layer.in; ++i) {
        acc += static_cast<double>(row[i]) * static_cast<double>(a[i]);
      }
      z[o] = static_cast<T>(acc);
    }
    return z;
  }

  static void relu_inplace(std::vector<T>& v) {
    for (T& x : v) x = x > T(0) ? x : T(0);
  }

  // Max-shifted for stability; exp/sum in double.
  static void softmax_inplace(std::vector<T>& v) {
    double mx = -HUGE_VAL;
    for (T x : v) mx = std::max(mx, static_cast<double>(x));
    double sum = 0.0;
    std::vector<double> e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      e[i] = std::exp(static_cast<double>(v[i]) - mx);
      sum += e[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<T>(e[i] / sum);
  }

  void check_input(std::span<const T> x) const {
    if (x.size() != input_size()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "input of size " + std::to_string(x.size()) + ", model expects " +
                      std::to_string(input_size()));
    }
  }

 private:
  static DenseLayerT<T> make_layer(std::size_t in, std::size_t out, Activation act,
                                   rng::Engine& eng) {
    DenseLayerT<T> l;
    l.in = in;
    l.out = out;
    l.activation = act;
    l.weights.resize(in * out);
    l.bias.assign(out, T(0));
    const double bound = std::sqrt(6.0 / static_cast<double>(in));
    for (T& w : l.weights) w = static_cast<T>(rng::uniform(eng, -bound, bound));
    return l;
  }

  std::size_t seq_len_ = 0;
  std::size_t emb_dim_ = 0;
  std::vector<DenseLayerT<T>> layers_;
};

using Classifier = NetT<float>;

// Cross-entropy of one sample; fills per-parameter gradients when `grads`
// is non-null (accumulated, so callers zero it per batch). `predicted`
// receives the argmax class when given.
template <typename T>
double ce_loss_sample(const NetT<T>& net, std::span<const T> x, int label,
                      ParamGrads* grads, int* predicted = nullptr) {
  net.check_input(x);
  const auto& layers = net.layers();
  if (label < 0 || label >= static_cast<int>(net.num_classes())) {
    throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
  }
  // forward with caches
  std::vector<std::vector<T>> acts;  // acts[0] = input, acts[l+1] = output of layer l
  acts.emplace_back(x.begin(), x.end());
  for (const auto& layer : layers) {
    std::vector<T> z = NetT<T>::affine(layer, acts.back());
    if (layer.activation == Activation::relu) NetT<T>::relu_inplace(z);
    acts.push_back(std::move(z));
  }
  std::vector<T> probs = acts.back();
  NetT<T>::softmax_inplace(probs);
  if (predicted) *predicted = NetT<T>::argmax(acts.back());
  const double p = std::max(static_cast<double>(probs[label]), 1e-300);
  const double loss = -std::log(p);
  if (!grads) return loss;

  // backward: delta starts as dL/dlogits for softmax + CE
  std::vector<double> delta(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    delta[i] = static_cast<double>(probs[i]) - (static_cast<int>(i) == label ? 1.0 : 0.0);
  }
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    const auto& a_in = acts[l];
    for (std::size_t o = 0; o < layer.out; ++o) {
      grads->b[l][o] += delta[o];
      double* wrow = grads->w[l].data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) {
        wrow[i] += delta[o] * static_cast<double>(a_in[i]);
      }
    }
    if (l == 0) break;
    std::vector<double> prev(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const T* wrow = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) {
        prev[i] += static_cast<double>(wrow[i]) * delta[o];
      }
    }
    // acts[l] is the post-ReLU output of layer l-1
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (acts[l][i] <= T(0)) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
  return loss;
}

// Mean CE over a batch; gradients are batch means.
template <typename T>
double ce_loss_batch(const NetT<T>& net, std::span<const SampleT<T>> batch,
                     ParamGrads* grads) {
  if (batch.empty()) throw Error(ErrorCode::EmptyDataset, "empty batch");
  double loss = 0.0;
  for (const auto& s : batch) loss += ce_loss_sample(net, std::span<const T>(s.x), s.label, grads);
  const double inv = 1.0 / static_cast<double>(batch.size());
  if (grads) {
    for (auto& v : grads->w)
      for (double& g : v) g *= inv;
    for (auto& v : grads->b)
      for (double& g : v) g *= inv;
  }
  return loss * inv;
}

// SGD with momentum over shuffled mini-batches. Single-threaded and
// bit-deterministic for a fixed seed.
template <typename T>
TrainLog train(NetT<T>& net, std::span<const SampleT<T>> dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  for (const auto& s : dataset) {
    if (s.label < 0 || s.label >= static_cast<int>(net.num_classes())) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(s.label));
    }
  }
  rng::Engine eng(cfg.seed);
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  ParamGrads velocity = ParamGrads::zeros_like(net.layers());
  TrainLog log;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng::shuffle(order, eng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    std::size_t correct = 0;
    ParamGrads grads = ParamGrads::zeros_like(net.layers());
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      for (auto& v : grads.w) std::fill(v.begin(), v.end(), 0.0);
      for (auto& v : grads.b) std::fill(v.begin(), v.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = dataset[order[k]];
        int pred = 0;
        batch_loss += ce_loss_sample(net, std::span<const T>(s.x), s.label, &grads, &pred);
        if (pred == s.label) ++correct;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& v : grads.w)
        for (double& g : v) g *= inv;
      for (auto& v : grads.b)
        for (double& g : v) g *= inv;
      epoch_loss += batch_loss * inv;
      ++batches;
      apply_sgd_update(net, grads, velocity, cfg);
    }
    log.push_back({epoch, epoch_loss / static_cast<double>(batches),
                   static_cast<double>(correct) / static_cast<double>(dataset.size())});
  }
  return log;
}

template <typename T>
void apply_sgd_update(NetT<T>& net, const ParamGrads& grads, ParamGrads& velocity,
                      const TrainConfig& cfg) {
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t i = 0; i < layers[l].weights.size(); ++i) {
      velocity.w[l][i] = cfg.momentum * velocity.w[l][i] - cfg.learning_rate * grads.w[l][i];
      layers[l].weights[i] = static_cast<T>(static_cast<double>(layers[l].weights[i]) +
                                            velocity.w[l][i]);
    }
    for (std::size_t i = 0; i < layers[l].bias.size(); ++i) {
      velocity.b[l][i] = cfg.momentum * velocity.b[l][i] - cfg.learning_rate * grads.b[l][i];
      layers[l].bias[i] = static_cast<T>(static_cast<double>(layers[l].bias[i]) +
                                         velocity.b[l][i]);
    }
  }
}

// --- binary model files (float nets only) ---
// Layout: magic "SRNN", u32 version, u32 seq_len, u32 emb_dim, u32 layer
// count, then per layer (u32 in, u32 out, u8 activation), then all weights
// and biases as little-endian f32 in layer order.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const Classifier& net, const std::string& path);
Classifier load_model(const std::string& path);

void save_train_log(const TrainLog& log, const std::string& path,
                    const std::vector<std::string>& header_lines);

}  // namespace semrob

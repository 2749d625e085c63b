#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "semrob/model.hpp"

// Interval bound propagation through the classifier. An Linf ball of radius
// epsilon around every input coordinate is pushed through each dense layer
// in center-radius form (center W c + b, radius |W| r) with ReLU bounds
// clamped at zero. The resulting logit interval is sound: no input inside
// the ball can produce a logit outside it.

namespace semrob {

template <typename T>
struct IntervalT {
  std::vector<T> lo;
  std::vector<T> hi;
};

using IntervalTensor = IntervalT<float>;

// Certification margin must clear this tolerance; exact-zero margins do not
// certify.
inline constexpr double kCertifyTolerance = 1e-9;

struct RobustTrainConfig {
  double epsilon_target = 0.01;  // Linf radius after the ramp
  double kappa = 0.5;            // weight of the nominal CE term
  int ramp_epochs = -1;          // <0: first half of base.epochs
  TrainConfig base;
};

inline double effective_epsilon(const RobustTrainConfig& cfg, int epoch) {
  int ramp = cfg.ramp_epochs >= 0 ? cfg.ramp_epochs : cfg.base.epochs / 2;
  if (ramp <= 0) return cfg.epsilon_target;
  const double f = std::min(1.0, static_cast<double>(epoch) / static_cast<double>(ramp));
  return cfg.epsilon_target * f;
}

namespace detail {

// Layer-by-layer interval cache: pre[l] is the affine output interval of
// layer l, post[l] its interval after activation; input_ is the epsilon box.
template <typename T>
struct IntervalTrace {
  IntervalT<T> input;
  std::vector<IntervalT<T>> pre;
  std::vector<IntervalT<T>> post;
};

template <typename T>
IntervalT<T> affine_interval(const DenseLayerT<T>& layer, const IntervalT<T>& in) {
  IntervalT<T> out;
  out.lo.resize(layer.out);
  out.hi.resize(layer.out);
  for (std::size_t o = 0; o < layer.out; ++o) {
    const T* row = layer.weights.data() + o * layer.in;
    double center = static_cast<double>(layer.bias[o]);
    double radius = 0.0;
    for (std::size_t i = 0; i < layer.in; ++i) {
      const double w = static_cast<double>(row[i]);
      const double c = 0.5 * (static_cast<double>(in.lo[i]) + static_cast<double>(in.hi[i]));
      const double r = 0.5 * (static_cast<double>(in.hi[i]) - static_cast<double>(in.lo[i]));
      center += w * c;
      radius += std::abs(w) * r;
    }
    if (radius == 0.0) {
      // Degenerate interval: center equals the plain forward value exactly.
      out.lo[o] = static_cast<T>(center);
      out.hi[o] = out.lo[o];
    } else {
      // One ulp outward so the cast back to T cannot shrink the interval.
      out.lo[o] = std::nextafter(static_cast<T>(center - radius),
                                 -std::numeric_limits<T>::infinity());
      out.hi[o] = std::nextafter(static_cast<T>(center + radius),
                                 std::numeric_limits<T>::infinity());
    }
  }
  return out;
}

template <typename T>
IntervalTrace<T> interval_trace(const NetT<T>& net, std::span<const T> x, double epsilon) {
  net.check_input(x);
  if (epsilon < 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  IntervalTrace<T> trace;
  trace.input.lo.resize(x.size());
  trace.input.hi.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (epsilon == 0.0) {
      trace.input.lo[i] = x[i];
      trace.input.hi[i] = x[i];
    } else {
      trace.input.lo[i] = std::nextafter(static_cast<T>(static_cast<double>(x[i]) - epsilon),
                                         -std::numeric_limits<T>::infinity());
      trace.input.hi[i] = std::nextafter(static_cast<T>(static_cast<double>(x[i]) + epsilon),
                                         std::numeric_limits<T>::infinity());
    }
  }
  const IntervalT<T>* current = &trace.input;
  for (const auto& layer : net.layers()) {
    IntervalT<T> pre = affine_interval(layer, *current);
    IntervalT<T> post = pre;
    if (layer.activation == Activation::relu) {
      for (auto& v : post.lo) v = v > T(0) ? v : T(0);
      for (auto& v : post.hi) v = v > T(0) ? v : T(0);
    }
    trace.pre.push_back(std::move(pre));
    trace.post.push_back(std::move(post));
    current = &trace.post.back();
  }
  return trace;
}

}  // namespace detail

// Sound pre-softmax logit bounds for the Linf ball of radius epsilon
// around x (all seq_len * emb_dim coordinates, padding rows included).
template <typename T>
IntervalT<T> interval_forward(const NetT<T>& net, std::span<const T> x, double epsilon) {
  auto trace = detail::interval_trace(net, x, epsilon);
  return std::move(trace.pre.back());
}

// Adversarial logit vector: the true class takes its lower bound, every
// other class its upper bound.
template <typename T>
std::vector<T> worst_case_logits(const IntervalT<T>& iv, int true_label) {
  if (true_label < 0 || true_label >= static_cast<int>(iv.lo.size())) {
    throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(true_label));
  }
  std::vector<T> z(iv.lo.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    z[j] = static_cast<int>(j) == true_label ? iv.lo[j] : iv.hi[j];
  }
  return z;
}

// kappa * CE(nominal) + (1 - kappa) * CE(worst case). Gradients of both
// terms are accumulated into `grads` when non-null. epsilon = 0 or
// kappa = 1 reduce exactly to the vanilla CE path.
template <typename T>
double ibp_loss_sample(const NetT<T>& net, std::span<const T> x, int label, double epsilon,
                       double kappa, ParamGrads* grads, int* predicted = nullptr) {
  if (label < 0 || label >= static_cast<int>(net.num_classes())) {
    throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
  }
  if (epsilon == 0.0 || kappa >= 1.0) {
    return ce_loss_sample(net, x, label, grads, predicted);
  }

  double loss = 0.0;
  if (kappa > 0.0) {
    ParamGrads nominal_grads = grads ? ParamGrads::zeros_like(net.layers()) : ParamGrads{};
    loss += kappa * ce_loss_sample(net, x, label,
                                   grads ? &nominal_grads : nullptr, predicted);
    if (grads) grads->add_scaled(nominal_grads, kappa);
  } else if (predicted) {
    *predicted = net.predict(x);
  }

  const auto& layers = net.layers();
  auto trace = detail::interval_trace(net, x, epsilon);
  std::vector<T> z = worst_case_logits(trace.pre.back(), label);
  std::vector<T> probs = z;
  NetT<T>::softmax_inplace(probs);
  const double p = std::max(static_cast<double>(probs[label]), 1e-300);
  const double adv_weight = 1.0 - kappa;
  loss += adv_weight * -std::log(p);
  if (!grads) return loss;

  // dL/dz through the worst-case selection: the true class reads lo, the
  // rest read hi.
  const std::size_t classes = z.size();
  std::vector<double> dlo(classes, 0.0);
  std::vector<double> dhi(classes, 0.0);
  for (std::size_t j = 0; j < classes; ++j) {
    const double g = adv_weight * (static_cast<double>(probs[j]) -
                                   (static_cast<int>(j) == label ? 1.0 : 0.0));
    if (static_cast<int>(j) == label) {
      dlo[j] = g;
    } else {
      dhi[j] = g;
    }
  }

  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    // Undo the ReLU clamp of this layer (the final layer has none).
    if (layer.activation == Activation::relu) {
      const auto& pre = trace.pre[l];
      for (std::size_t o = 0; o < layer.out; ++o) {
        if (pre.lo[o] <= T(0)) dlo[o] = 0.0;
        if (pre.hi[o] <= T(0)) dhi[o] = 0.0;
      }
    }
    const IntervalT<T>& in = l == 0 ? trace.input : trace.post[l - 1];
    std::vector<double> dc(layer.out);
    std::vector<double> dr(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      dc[o] = dlo[o] + dhi[o];
      dr[o] = dhi[o] - dlo[o];
    }
    std::vector<double> dc_in(layer.in, 0.0);
    std::vector<double> dr_in(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const T* wrow = layer.weights.data() + o * layer.in;
      double* gw = grads->w[l].data() + o * layer.in;
      grads->b[l][o] += dc[o];
      for (std::size_t i = 0; i < layer.in; ++i) {
        const double w = static_cast<double>(wrow[i]);
        const double c_in = 0.5 * (static_cast<double>(in.lo[i]) + static_cast<double>(in.hi[i]));
        const double r_in = 0.5 * (static_cast<double>(in.hi[i]) - static_cast<double>(in.lo[i]));
        const double sgn = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
        gw[i] += dc[o] * c_in + sgn * dr[o] * r_in;
        dc_in[i] += w * dc[o];
        dr_in[i] += std::abs(w) * dr[o];
      }
    }
    if (l == 0) break;
    dlo.assign(layer.in, 0.0);
    dhi.assign(layer.in, 0.0);
    for (std::size_t i = 0; i < layer.in; ++i) {
      dlo[i] = 0.5 * (dc_in[i] - dr_in[i]);
      dhi[i] = 0.5 * (dc_in[i] + dr_in[i]);
    }
  }
  return loss;
}

// Mean mixed loss over a batch at the ramped epsilon for `epoch`.
template <typename T>
double ibp_loss_batch(const NetT<T>& net, std::span<const SampleT<T>> batch,
                      const RobustTrainConfig& cfg, int epoch, ParamGrads* grads) {
  if (batch.empty()) throw Error(ErrorCode::EmptyDataset, "empty batch");
  const double eps = effective_epsilon(cfg, epoch);
  double loss = 0.0;
  for (const auto& s : batch) {
    loss += ibp_loss_sample(net, std::span<const T>(s.x), s.label, eps, cfg.kappa, grads);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  if (grads) {
    for (auto& v : grads->w)
      for (double& g : v) g *= inv;
    for (auto& v : grads->b)
      for (double& g : v) g *= inv;
  }
  return loss * inv;
}

// Robust training: the vanilla loop with the mixed loss and the linear
// epsilon ramp. Deterministic under a fixed seed, like train().
template <typename T>
TrainLog train_ibp(NetT<T>& net, std::span<const SampleT<T>> dataset,
                   const RobustTrainConfig& cfg) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  for (const auto& s : dataset) {
    if (s.label < 0 || s.label >= static_cast<int>(net.num_classes())) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(s.label));
    }
  }
  rng::Engine eng(cfg.base.seed);
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  ParamGrads velocity = ParamGrads::zeros_like(net.layers());
  TrainLog log;
  for (int epoch = 0; epoch < cfg.base.epochs; ++epoch) {
    const double eps = effective_epsilon(cfg, epoch);
    rng::shuffle(order, eng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    std::size_t correct = 0;
    ParamGrads grads = ParamGrads::zeros_like(net.layers());
    for (std::size_t start = 0; start < order.size(); start += cfg.base.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.base.batch_size);
      for (auto& v : grads.w) std::fill(v.begin(), v.end(), 0.0);
      for (auto& v : grads.b) std::fill(v.begin(), v.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = dataset[order[k]];
        int pred = 0;
        batch_loss += ibp_loss_sample(net, std::span<const T>(s.x), s.label, eps, cfg.kappa,
                                      &grads, &pred);
        if (pred == s.label) ++correct;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& v : grads.w)
        for (double& g : v) g *= inv;
      for (auto& v : grads.b)
        for (double& g : v) g *= inv;
      epoch_loss += batch_loss * inv;
      ++batches;
      apply_sgd_update(net, grads, velocity, cfg.base);
    }
    log.push_back({epoch, epoch_loss / static_cast<double>(batches),
                   static_cast<double>(correct) / static_cast<double>(dataset.size())});
  }
  return log;
}

enum class CertVerdict { certified, unknown };

struct CertResult {
  CertVerdict verdict = CertVerdict::unknown;
  double margin = 0.0;     // lo[label] - max over other classes of hi
  bool misclassified = false;
};

// Sound-but-incomplete check of prediction invariance over the epsilon
// ball: certified when the worst-case margin clears kCertifyTolerance.
// A sample the model already misclassifies is vacuously unknown.
template <typename T>
CertResult certify_continuous(const NetT<T>& net, std::span<const T> x, double epsilon,
                              int label) {
  if (label < 0 || label >= static_cast<int>(net.num_classes())) {
    throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
  }
  CertResult res;
  const IntervalT<T> iv = interval_forward(net, x, epsilon);
  double other = -HUGE_VAL;
  for (std::size_t j = 0; j < iv.hi.size(); ++j) {
    if (static_cast<int>(j) != label) other = std::max(other, static_cast<double>(iv.hi[j]));
  }
  res.margin = static_cast<double>(iv.lo[label]) - other;
  if (net.predict(x) != label) {
    res.misclassified = true;
    res.verdict = CertVerdict::unknown;
    return res;
  }
  res.verdict = res.margin > kCertifyTolerance ? CertVerdict::certified : CertVerdict::unknown;
  return res;
}

}  // namespace semrob

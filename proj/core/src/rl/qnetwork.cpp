#include "edgesched/rl/qnetwork.hpp"

#include <cmath>
#include <string>

#include "edgesched/errors.hpp"

namespace edgesched::rl {

namespace {

std::vector<std::size_t> layer_sizes(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                                     std::size_t output_dim) {
  std::vector<std::size_t> sizes{input_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(output_dim);
  for (std::size_t s : sizes)
    if (s == 0) raise(ErrorCode::ShapeError, "layer widths must be positive");
  return sizes;
}

} // namespace

void Gradients::zero() noexcept {
  for (DenseLayer& l : layers) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
}

double Gradients::norm() const noexcept {
  double sq = 0.0;
  for (const DenseLayer& l : layers) {
    for (double g : l.weights) sq += g * g;
    for (double g : l.bias) sq += g * g;
  }
  return std::sqrt(sq);
}

void Gradients::scale(double factor) noexcept {
  for (DenseLayer& l : layers) {
    for (double& g : l.weights) g *= factor;
    for (double& g : l.bias) g *= factor;
  }
}

QNetwork::QNetwork(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                   std::size_t output_dim, Rng& rng) {
  const auto sizes = layer_sizes(input_dim, hidden_dims, output_dim);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    DenseLayer layer(sizes[i], sizes[i + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[i]));
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
    for (double& b : layer.bias) b = rng.uniform(-bound, bound);
    layers_.push_back(std::move(layer));
  }
}

QNetwork QNetwork::zeros(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                         std::size_t output_dim) {
  QNetwork net;
  const auto sizes = layer_sizes(input_dim, hidden_dims, output_dim);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) net.layers_.emplace_back(sizes[i], sizes[i + 1]);
  return net;
}

std::vector<std::size_t> QNetwork::hidden_dims() const {
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) dims.push_back(layers_[i].outputs);
  return dims;
}

std::size_t QNetwork::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

namespace {

// Four independent partial sums let the compiler keep several multiply-adds
// in flight; the summation order is fixed, so results stay reproducible.
double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

} // namespace

void QNetwork::forward(std::span<const double> input, Activations& cache) const {
  if (input.size() != input_dim())
    raise(ErrorCode::ShapeError, "state has " + std::to_string(input.size()) + " entries, network expects " +
                                     std::to_string(input_dim()));
  cache.pre.resize(layers_.size());
  cache.post.resize(layers_.size() + 1);
  cache.post[0].assign(input.begin(), input.end());
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const DenseLayer& l = layers_[li];
    const std::vector<double>& x = cache.post[li];
    std::vector<double>& z = cache.pre[li];
    std::vector<double>& a = cache.post[li + 1];
    z.resize(l.outputs);
    a.resize(l.outputs);
    const bool hidden = li + 1 < layers_.size();
    for (std::size_t r = 0; r < l.outputs; ++r) {
      const double sum = l.bias[r] + dot(&l.weights[r * l.inputs], x.data(), l.inputs);
      z[r] = sum;
      a[r] = hidden ? (sum > 0.0 ? sum : 0.0) : sum;
    }
  }
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
  Activations cache;
  forward(input, cache);
  return std::move(cache.post.back());
}

Gradients QNetwork::make_gradients() const {
  Gradients g;
  for (const DenseLayer& l : layers_) g.layers.emplace_back(l.inputs, l.outputs);
  return g;
}

void QNetwork::backward(const Activations& cache, std::span<const double> grad_output, Gradients& grads) const {
  if (grad_output.size() != output_dim()) raise(ErrorCode::ShapeError, "output gradient size mismatch");
  std::vector<double> delta(grad_output.begin(), grad_output.end());
  std::vector<double> upstream;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& l = layers_[li];
    DenseLayer& g = grads.layers[li];
    const std::vector<double>& x = cache.post[li];
    for (std::size_t r = 0; r < l.outputs; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      g.bias[r] += d;
      double* grow = &g.weights[r * l.inputs];
      for (std::size_t c = 0; c < l.inputs; ++c) grow[c] += d * x[c];
    }
    if (li == 0) break;
    // Propagate through the weights, then through the ReLU of the layer below.
    upstream.assign(l.inputs, 0.0);
    for (std::size_t r = 0; r < l.outputs; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      const double* row = &l.weights[r * l.inputs];
      for (std::size_t c = 0; c < l.inputs; ++c) upstream[c] += row[c] * d;
    }
    const std::vector<double>& z_below = cache.pre[li - 1];
    for (std::size_t c = 0; c < l.inputs; ++c)
      if (!(z_below[c] > 0.0)) upstream[c] = 0.0;
    delta.swap(upstream);
  }
}

void QNetwork::apply(const Gradients& grads, double learning_rate) noexcept {
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    DenseLayer& l = layers_[li];
    const DenseLayer& g = grads.layers[li];
    for (std::size_t i = 0; i < l.weights.size(); ++i) l.weights[i] -= learning_rate * g.weights[i];
    for (std::size_t i = 0; i < l.bias.size(); ++i) l.bias[i] -= learning_rate * g.bias[i];
  }
}

bool QNetwork::finite() const noexcept {
  for (const DenseLayer& l : layers_) {
    for (double w : l.weights)
      if (!std::isfinite(w)) return false;
    for (double b : l.bias)
      if (!std::isfinite(b)) return false;
  }
  return true;
}

} // namespace edgesched::rl

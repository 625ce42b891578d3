#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edgesched/random.hpp"

namespace edgesched::rl {

/// Fully connected layer; weights are row-major `outputs x inputs`.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out) : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0) {}

  [[nodiscard]] double& w(std::size_t row, std::size_t col) noexcept { return weights[row * inputs + col]; }
  [[nodiscard]] double w(std::size_t row, std::size_t col) const noexcept { return weights[row * inputs + col]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Parameter-shaped buffer of partial derivatives.
struct Gradients {
  std::vector<DenseLayer> layers;

  void zero() noexcept;
  [[nodiscard]] double norm() const noexcept;
  void scale(double factor) noexcept;
};

/// Per-layer values cached by a training forward pass. `post[0]` is the input,
/// `post[i]` the output of layer i-1 after its activation.
struct Activations {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

/// Q-value approximator: dense layers with rectified-linear hidden units and a
/// linear output. Backpropagation is written out by hand.
class QNetwork {
public:
  QNetwork() = default;
  /// Weights and biases uniform in +-1/sqrt(fan_in).
  QNetwork(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims, std::size_t output_dim,
           Rng& rng);
  /// All parameters zero.
  static QNetwork zeros(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                        std::size_t output_dim);

  [[nodiscard]] std::size_t input_dim() const noexcept { return layers_.empty() ? 0 : layers_.front().inputs; }
  [[nodiscard]] std::size_t output_dim() const noexcept { return layers_.empty() ? 0 : layers_.back().outputs; }
  [[nodiscard]] std::vector<std::size_t> hidden_dims() const;
  [[nodiscard]] std::size_t parameter_count() const noexcept;

  [[nodiscard]] std::vector<DenseLayer>& layers() noexcept { return layers_; }
  [[nodiscard]] const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

  /// Throws Error{ShapeError} when the input length differs from input_dim().
  [[nodiscard]] std::vector<double> forward(std::span<const double> input) const;
  void forward(std::span<const double> input, Activations& cache) const;

  /// Adds d(loss)/d(params) to `grads` given d(loss)/d(output) for the pass in `cache`.
  void backward(const Activations& cache, std::span<const double> grad_output, Gradients& grads) const;

  [[nodiscard]] Gradients make_gradients() const;
  /// params -= learning_rate * grads
  void apply(const Gradients& grads, double learning_rate) noexcept;

  [[nodiscard]] bool finite() const noexcept;

  friend bool operator==(const QNetwork&, const QNetwork&) = default;

private:
  std::vector<DenseLayer> layers_;
};

} // namespace edgesched::rl

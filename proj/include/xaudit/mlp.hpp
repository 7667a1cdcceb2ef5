// Two-hidden-layer perceptron (d -> 10 -> 10 -> 1, ReLU inside, sigmoid out)
// trained with mini-batch SGD under RMSprop or Adam on binary cross-entropy.
// Everything is seeded and hand-rolled so training is bit-reproducible.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xaudit/dataset.hpp"
#include "xaudit/matrix.hpp"

namespace xaudit {

enum class Optimizer { kRmsProp, kAdam };

std::string optimizer_name(Optimizer o);

struct MlpHyper {
  Optimizer optimizer = Optimizer::kRmsProp;
  double learning_rate = 0.001;
  std::size_t batch_size = 256;
  std::size_t epochs = 5;
};

inline constexpr std::size_t kMlpHidden = 10;

struct MlpModel {
  // w1: d*10, w2: 10*10, w3: 10*1; biases start at zero.
  Matrix w1, w2, w3;
  std::vector<double> b1, b2, b3;
  MlpHyper hyper;
  std::vector<double> epoch_losses;  // mean training BCE per epoch

  std::size_t n_inputs() const { return w1.rows; }
  /// Batched sigmoid outputs in [0, 1].
  std::vector<double> forward(const Matrix& x) const;
  std::vector<int> predict(const Matrix& x) const;  // output > 0.5 -> 1
};

/// Gradients of the mean batch loss, same shapes as the parameters.
struct MlpGradients {
  Matrix w1, w2, w3;
  std::vector<double> b1, b2, b3;
};

/// Glorot-uniform weights (U(+/-sqrt(6/(fan_in+fan_out)))), zero biases,
/// drawn from the seed in a fixed order (w1 row-major, then w2, then w3).
MlpModel init_mlp(std::size_t n_inputs, const MlpHyper& hyper,
                  std::uint64_t seed);

/// Mean binary cross-entropy of the model on (x, y), computed in the
/// numerically safe log-sum-exp form.
double mlp_loss(const MlpModel& m, const Matrix& x, const std::vector<int>& y);

/// Backpropagated gradients of mlp_loss; optionally reports the loss too.
MlpGradients mlp_loss_gradients(const MlpModel& m, const Matrix& x,
                                const std::vector<int>& y,
                                double* loss_out = nullptr);

/// Mini-batch training: each epoch reshuffles rows from a stream derived from
/// (seed, epoch); batches sweep the permutation in order, the last partial
/// batch included. Throws std::runtime_error if the loss turns non-finite.
MlpModel train_mlp(const Dataset& train, const MlpHyper& hyper,
                   std::uint64_t seed);

}  // namespace xaudit

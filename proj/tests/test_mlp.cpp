#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "xaudit/dataset.hpp"
#include "xaudit/mlp.hpp"
#include "xaudit/rng.hpp"

using namespace xaudit;

namespace {

Dataset blob_dataset(std::size_t n, std::size_t d, double sep,
                     std::uint64_t seed) {
  Dataset ds;
  ds.x = Matrix(n, d);
  ds.y.resize(n);
  ds.feature_names.resize(d, "f");
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    ds.y[i] = (i % 2 == 0) ? 1 : 0;
    for (std::size_t j = 0; j < d; ++j) {
      ds.x(i, j) = rng.normal() + (ds.y[i] == 1 ? sep : 0.0);
    }
  }
  return ds;
}

// Flattened view over all six parameter blocks, for the gradient check.
struct ParamView {
  double* data;
  std::size_t size;
};

std::vector<ParamView> views(MlpModel& m) {
  return {{m.w1.data.data(), m.w1.data.size()},
          {m.b1.data(), m.b1.size()},
          {m.w2.data.data(), m.w2.data.size()},
          {m.b2.data(), m.b2.size()},
          {m.w3.data.data(), m.w3.data.size()},
          {m.b3.data(), m.b3.size()}};
}

std::vector<ParamView> grad_views(MlpGradients& g) {
  return {{g.w1.data.data(), g.w1.data.size()},
          {g.b1.data(), g.b1.size()},
          {g.w2.data.data(), g.w2.data.size()},
          {g.b2.data(), g.b2.size()},
          {g.w3.data.data(), g.w3.data.size()},
          {g.b3.data(), g.b3.size()}};
}

}  // namespace

TEST_CASE("initialization is seeded Glorot with zero biases") {
  const MlpHyper hyper;
  MlpModel a = init_mlp(4, hyper, 5);
  MlpModel b = init_mlp(4, hyper, 5);
  MlpModel c = init_mlp(4, hyper, 6);
  CHECK(a.w1.data == b.w1.data);
  CHECK(a.w3.data == b.w3.data);
  CHECK(a.w1.data != c.w1.data);

  const double bound1 = std::sqrt(6.0 / (4 + kMlpHidden));
  for (double w : a.w1.data) {
    CHECK(std::fabs(w) <= bound1);
  }
  bool any_nonzero = false;
  for (double w : a.w1.data) any_nonzero = any_nonzero || w != 0.0;
  CHECK(any_nonzero);
  for (double v : a.b1) CHECK(v == 0.0);
  for (double v : a.b3) CHECK(v == 0.0);
  CHECK(a.w1.rows == 4);
  CHECK(a.w1.cols == kMlpHidden);
  CHECK(a.w3.rows == kMlpHidden);
  CHECK(a.w3.cols == 1);
}

TEST_CASE("loss matches the textbook cross-entropy on safe inputs") {
  const Dataset d = blob_dataset(16, 3, 1.0, 9);
  const MlpModel m = init_mlp(3, MlpHyper{}, 11);
  const std::vector<double> p = m.forward(d.x);
  double expect = 0.0;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    expect += d.y[i] == 1 ? -std::log(p[i]) : -std::log(1.0 - p[i]);
  }
  expect /= static_cast<double>(d.n_rows());
  CHECK(mlp_loss(m, d.x, d.y) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("backprop matches central finite differences") {
  // Full-batch gradients on a small net; relative error must be tiny for
  // every coordinate of every parameter block.
  for (std::uint64_t draw = 0; draw < 3; ++draw) {
    const Dataset d = blob_dataset(12, 3, 0.8, 100 + draw);
    MlpModel m = init_mlp(3, MlpHyper{}, 200 + draw);
    MlpGradients g = mlp_loss_gradients(m, d.x, d.y);

    auto params = views(m);
    auto grads = grad_views(g);
    const double eps = 1e-6;
    double worst = 0.0;
    for (std::size_t blk = 0; blk < params.size(); ++blk) {
      for (std::size_t i = 0; i < params[blk].size; ++i) {
        double& w = params[blk].data[i];
        const double keep = w;
        w = keep + eps;
        const double up = mlp_loss(m, d.x, d.y);
        w = keep - eps;
        const double down = mlp_loss(m, d.x, d.y);
        w = keep;
        const double numeric = (up - down) / (2.0 * eps);
        const double analytic = grads[blk].data[i];
        const double rel = std::fabs(numeric - analytic) /
                           std::max({1e-8, std::fabs(numeric), std::fabs(analytic)});
        worst = std::max(worst, rel);
      }
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("training is bit-deterministic per seed") {
  const Dataset d = blob_dataset(64, 4, 1.5, 21);
  MlpHyper hyper;
  hyper.epochs = 3;
  hyper.batch_size = 16;
  const MlpModel a = train_mlp(d, hyper, 77);
  const MlpModel b = train_mlp(d, hyper, 77);
  CHECK(a.w1.data == b.w1.data);
  CHECK(a.w2.data == b.w2.data);
  CHECK(a.w3.data == b.w3.data);
  CHECK(a.b1 == b.b1);
  CHECK(a.epoch_losses == b.epoch_losses);
  const MlpModel c = train_mlp(d, hyper, 78);
  CHECK(a.w1.data != c.w1.data);
}

TEST_CASE("loss falls on separable data under both optimizers") {
  const Dataset d = blob_dataset(256, 4, 2.0, 33);
  for (Optimizer opt : {Optimizer::kRmsProp, Optimizer::kAdam}) {
    MlpHyper hyper;
    hyper.optimizer = opt;
    hyper.epochs = 20;
    hyper.batch_size = 32;  // default 256 would mean one step per epoch here
    hyper.learning_rate = 0.005;
    const MlpModel m = train_mlp(d, hyper, 3);
    REQUIRE(m.epoch_losses.size() == 20);
    CHECK(m.epoch_losses.back() < 0.5 * m.epoch_losses.front());
    std::size_t correct = 0;
    const std::vector<int> pred = m.predict(d.x);
    for (std::size_t i = 0; i < d.n_rows(); ++i)
      correct += static_cast<std::size_t>(pred[i] == d.y[i]);
    CHECK(static_cast<double>(correct) / static_cast<double>(d.n_rows()) > 0.9);
  }
}

TEST_CASE("optimizers follow different trajectories") {
  const Dataset d = blob_dataset(64, 3, 1.0, 55);
  MlpHyper rms;
  rms.epochs = 2;
  MlpHyper adam = rms;
  adam.optimizer = Optimizer::kAdam;
  const MlpModel a = train_mlp(d, rms, 5);
  const MlpModel b = train_mlp(d, adam, 5);
  CHECK(a.w1.data != b.w1.data);
  CHECK(optimizer_name(Optimizer::kRmsProp) == "rmsprop");
  CHECK(optimizer_name(Optimizer::kAdam) == "adam");
}

TEST_CASE("partial final batches are consumed") {
  const Dataset d = blob_dataset(20, 2, 1.0, 60);
  MlpHyper hyper;
  hyper.batch_size = 7;  // 7 + 7 + 6
  hyper.epochs = 2;
  const MlpModel m = train_mlp(d, hyper, 1);
  CHECK(m.epoch_losses.size() == 2);
  CHECK(std::isfinite(m.epoch_losses.back()));
}

TEST_CASE("non-finite loss aborts training loudly") {
  const Dataset d = blob_dataset(32, 3, 1.0, 70);
  MlpHyper hyper;
  hyper.learning_rate = 1e150;  // guaranteed overflow into inf/nan
  hyper.epochs = 3;
  CHECK_THROWS_AS((void)train_mlp(d, hyper, 2), std::runtime_error);
}

TEST_CASE("training validates its inputs") {
  Dataset empty;
  CHECK_THROWS_AS((void)train_mlp(empty, MlpHyper{}, 1), std::invalid_argument);
  Dataset d = blob_dataset(10, 2, 1.0, 80);
  MlpHyper zero_batch;
  zero_batch.batch_size = 0;
  CHECK_THROWS_AS((void)train_mlp(d, zero_batch, 1), std::invalid_argument);
  MlpHyper zero_epochs;
  zero_epochs.epochs = 0;
  CHECK_THROWS_AS((void)train_mlp(d, zero_epochs, 1), std::invalid_argument);
}

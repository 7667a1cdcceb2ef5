#include "xaudit/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "xaudit/kernels.hpp"
#include "xaudit/rng.hpp"

namespace xaudit {

namespace {

constexpr double kRmsRho = 0.9;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kEpsilon = 1e-7;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow; BCE is softplus(z) - y*z.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

void add_bias_rows(Matrix& m, const std::vector<double>& b) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double* row = m.row_ptr(r);
    for (std::size_t j = 0; j < m.cols; ++j) row[j] += b[j];
  }
}

struct ForwardCache {
  Matrix a1, a2;           // post-ReLU activations
  std::vector<double> z3;  // pre-sigmoid logits
};

ForwardCache forward_cache(const MlpModel& m, const Matrix& x) {
  ForwardCache c;
  gemm(x, false, m.w1, false, c.a1);
  add_bias_rows(c.a1, m.b1);
  for (double& v : c.a1.data) v = v > 0.0 ? v : 0.0;
  gemm(c.a1, false, m.w2, false, c.a2);
  add_bias_rows(c.a2, m.b2);
  for (double& v : c.a2.data) v = v > 0.0 ? v : 0.0;
  Matrix z3m;
  gemm(c.a2, false, m.w3, false, z3m);
  c.z3.resize(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) c.z3[r] = z3m(r, 0) + m.b3[0];
  return c;
}

Matrix batch_rows(const Matrix& x, const std::vector<std::size_t>& perm,
                  std::size_t begin, std::size_t end) {
  Matrix out(end - begin, x.cols);
  for (std::size_t i = begin; i < end; ++i) {
    const double* src = x.row_ptr(perm[i]);
    std::copy(src, src + x.cols, out.row_ptr(i - begin));
  }
  return out;
}

struct OptimizerState {
  MlpGradients m;  // first moment (Adam) — unused by RMSprop
  MlpGradients v;  // second moment
  std::uint64_t step = 0;
};

MlpGradients zero_like(const MlpModel& model) {
  MlpGradients g;
  g.w1 = Matrix(model.w1.rows, model.w1.cols);
  g.w2 = Matrix(model.w2.rows, model.w2.cols);
  g.w3 = Matrix(model.w3.rows, model.w3.cols);
  g.b1.assign(model.b1.size(), 0.0);
  g.b2.assign(model.b2.size(), 0.0);
  g.b3.assign(model.b3.size(), 0.0);
  return g;
}

void apply_update(std::vector<double>& param, const std::vector<double>& grad,
                  std::vector<double>& m1, std::vector<double>& m2,
                  const MlpHyper& hyper, std::uint64_t step) {
  const double lr = hyper.learning_rate;
  if (hyper.optimizer == Optimizer::kRmsProp) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      m2[i] = kRmsRho * m2[i] + (1.0 - kRmsRho) * grad[i] * grad[i];
      param[i] -= lr * grad[i] / (std::sqrt(m2[i]) + kEpsilon);
    }
  } else {
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
    for (std::size_t i = 0; i < param.size(); ++i) {
      m1[i] = kAdamBeta1 * m1[i] + (1.0 - kAdamBeta1) * grad[i];
      m2[i] = kAdamBeta2 * m2[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
      const double mhat = m1[i] / bc1;
      const double vhat = m2[i] / bc2;
      param[i] -= lr * mhat / (std::sqrt(vhat) + kEpsilon);
    }
  }
}

}  // namespace

std::string optimizer_name(Optimizer o) {
  return o == Optimizer::kRmsProp ? "rmsprop" : "adam";
}

std::vector<double> MlpModel::forward(const Matrix& x) const {
  const ForwardCache c = forward_cache(*this, x);
  std::vector<double> p(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) p[r] = sigmoid(c.z3[r]);
  return p;
}

std::vector<int> MlpModel::predict(const Matrix& x) const {
  const std::vector<double> p = forward(x);
  std::vector<int> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = p[r] > 0.5 ? 1 : 0;
  return out;
}

MlpModel init_mlp(std::size_t n_inputs, const MlpHyper& hyper,
                  std::uint64_t seed) {
  if (n_inputs == 0) throw std::invalid_argument("init_mlp: zero inputs");
  MlpModel m;
  m.hyper = hyper;
  m.w1 = Matrix(n_inputs, kMlpHidden);
  m.w2 = Matrix(kMlpHidden, kMlpHidden);
  m.w3 = Matrix(kMlpHidden, 1);
  m.b1.assign(kMlpHidden, 0.0);
  m.b2.assign(kMlpHidden, 0.0);
  m.b3.assign(1, 0.0);
  Rng rng(derive_seed(seed, streams::kMlpInit));
  auto glorot = [&rng](Matrix& w) {
    const double limit = std::sqrt(
        6.0 / static_cast<double>(w.rows + w.cols));
    for (double& v : w.data) v = (2.0 * rng.uniform() - 1.0) * limit;
  };
  glorot(m.w1);
  glorot(m.w2);
  glorot(m.w3);
  return m;
}

double mlp_loss(const MlpModel& m, const Matrix& x, const std::vector<int>& y) {
  if (x.rows != y.size() || x.rows == 0) {
    throw std::invalid_argument("mlp_loss: bad batch");
  }
  const ForwardCache c = forward_cache(m, x);
  double acc = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    acc += softplus(c.z3[r]) - static_cast<double>(y[r]) * c.z3[r];
  }
  return acc / static_cast<double>(x.rows);
}

MlpGradients mlp_loss_gradients(const MlpModel& m, const Matrix& x,
                                const std::vector<int>& y, double* loss_out) {
  if (x.rows != y.size() || x.rows == 0) {
    throw std::invalid_argument("mlp_loss_gradients: bad batch");
  }
  const std::size_t n = x.rows;
  const ForwardCache c = forward_cache(m, x);

  if (loss_out != nullptr) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      acc += softplus(c.z3[r]) - static_cast<double>(y[r]) * c.z3[r];
    }
    *loss_out = acc / static_cast<double>(n);
  }

  MlpGradients g = zero_like(m);
  // dL/dz3 = (sigmoid(z3) - y) / n
  Matrix dz3(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    dz3(r, 0) = (sigmoid(c.z3[r]) - static_cast<double>(y[r])) /
                static_cast<double>(n);
  }
  gemm(c.a2, true, dz3, false, g.w3);
  for (std::size_t r = 0; r < n; ++r) g.b3[0] += dz3(r, 0);

  Matrix da2;
  gemm(dz3, false, m.w3, true, da2);
  // ReLU gate: a2 > 0 exactly where z2 > 0.
  for (std::size_t i = 0; i < da2.data.size(); ++i) {
    if (!(c.a2.data[i] > 0.0)) da2.data[i] = 0.0;
  }
  gemm(c.a1, true, da2, false, g.w2);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = da2.row_ptr(r);
    for (std::size_t j = 0; j < kMlpHidden; ++j) g.b2[j] += row[j];
  }

  Matrix da1;
  gemm(da2, false, m.w2, true, da1);
  for (std::size_t i = 0; i < da1.data.size(); ++i) {
    if (!(c.a1.data[i] > 0.0)) da1.data[i] = 0.0;
  }
  gemm(x, true, da1, false, g.w1);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = da1.row_ptr(r);
    for (std::size_t j = 0; j < kMlpHidden; ++j) g.b1[j] += row[j];
  }
  return g;
}

MlpModel train_mlp(const Dataset& train, const MlpHyper& hyper,
                   std::uint64_t seed) {
  if (train.n_rows() == 0) throw std::invalid_argument("train_mlp: empty dataset");
  if (hyper.batch_size == 0) throw std::invalid_argument("train_mlp: batch_size 0");
  if (hyper.epochs == 0) throw std::invalid_argument("train_mlp: epochs 0");
  if (!(hyper.learning_rate > 0.0)) {
    throw std::invalid_argument("train_mlp: learning_rate must be positive");
  }

  MlpModel model = init_mlp(train.n_features(), hyper, seed);
  OptimizerState opt{zero_like(model), zero_like(model), 0};

  const std::size_t n = train.n_rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    Rng rng(derive_seed(seed, streams::kMlpShuffle, epoch));
    rng.shuffle(perm);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < n; begin += hyper.batch_size) {
      const std::size_t end = std::min(n, begin + hyper.batch_size);
      const Matrix bx = batch_rows(train.x, perm, begin, end);
      std::vector<int> by(end - begin);
      for (std::size_t i = begin; i < end; ++i) by[i - begin] = train.y[perm[i]];

      double batch_loss = 0.0;
      const MlpGradients g = mlp_loss_gradients(model, bx, by, &batch_loss);
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error("train_mlp: loss diverged at epoch " +
                                 std::to_string(epoch));
      }
      epoch_loss += batch_loss * static_cast<double>(end - begin);

      ++opt.step;
      apply_update(model.w1.data, g.w1.data, opt.m.w1.data, opt.v.w1.data,
                   hyper, opt.step);
      apply_update(model.b1, g.b1, opt.m.b1, opt.v.b1, hyper, opt.step);
      apply_update(model.w2.data, g.w2.data, opt.m.w2.data, opt.v.w2.data,
                   hyper, opt.step);
      apply_update(model.b2, g.b2, opt.m.b2, opt.v.b2, hyper, opt.step);
      apply_update(model.w3.data, g.w3.data, opt.m.w3.data, opt.v.w3.data,
                   hyper, opt.step);
      apply_update(model.b3, g.b3, opt.m.b3, opt.v.b3, hyper, opt.step);
    }
    model.epoch_losses.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

}  // namespace xaudit

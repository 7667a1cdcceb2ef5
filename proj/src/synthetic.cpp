#include "xaudit/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "xaudit/rng.hpp"

namespace xaudit {

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.n_rows < 2) {
    throw std::invalid_argument("generate_synthetic: need at least two rows");
  }
  const std::size_t nf =
      spec.n_informative + spec.n_noise + 2 * spec.n_correlated_pairs;
  if (nf == 0) {
    throw std::invalid_argument("generate_synthetic: no columns requested");
  }
  if (!(spec.positive_fraction > 0.0) || !(spec.positive_fraction < 1.0)) {
    throw std::invalid_argument(
        "generate_synthetic: positive_fraction must be in (0, 1)");
  }
  if (!(spec.class_separation > 0.0)) {
    throw std::invalid_argument(
        "generate_synthetic: class_separation must be positive");
  }
  if (!(spec.correlation_noise > 0.0)) {
    throw std::invalid_argument(
        "generate_synthetic: correlation_noise must be positive");
  }
  const auto n_pos = static_cast<std::size_t>(std::llround(
      spec.positive_fraction * static_cast<double>(spec.n_rows)));
  if (n_pos == 0 || n_pos == spec.n_rows) {
    throw std::invalid_argument(
        "generate_synthetic: positive_fraction leaves a class empty");
  }

  Dataset d;
  d.x = Matrix(spec.n_rows, nf);
  d.y.assign(spec.n_rows, 0);
  for (std::size_t i = 0; i < n_pos; ++i) d.y[i] = 1;
  {
    Rng rng(derive_seed(seed, streams::kSynthLabels));
    rng.shuffle(d.y);
  }

  std::size_t col = 0;
  for (std::size_t j = 0; j < spec.n_informative; ++j, ++col) {
    d.feature_names.push_back("inf_" + std::to_string(j));
    Rng rng(derive_seed(seed, streams::kSynthInformative, j));
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
      const double shift = d.y[r] == 1 ? spec.class_separation : 0.0;
      d.x(r, col) = shift + rng.normal();
    }
  }
  for (std::size_t j = 0; j < spec.n_noise; ++j, ++col) {
    d.feature_names.push_back("noise_" + std::to_string(j));
    Rng rng(derive_seed(seed, streams::kSynthNoise, j));
    for (std::size_t r = 0; r < spec.n_rows; ++r) d.x(r, col) = rng.normal();
  }
  for (std::size_t k = 0; k < spec.n_correlated_pairs; ++k, col += 2) {
    d.feature_names.push_back("corr_" + std::to_string(k) + "_base");
    d.feature_names.push_back("corr_" + std::to_string(k) + "_twin");
    Rng base(derive_seed(seed, streams::kSynthPairBase, k));
    Rng jitter(derive_seed(seed, streams::kSynthPairJitter, k));
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
      const double g = base.normal();
      d.x(r, col) = g;
      d.x(r, col + 1) = g + jitter.normal(0.0, spec.correlation_noise);
    }
  }
  return d;
}

}  // namespace xaudit

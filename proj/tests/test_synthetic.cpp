#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "xaudit/dataset.hpp"
#include "xaudit/synthetic.hpp"

using namespace xaudit;

namespace {

double column_label_gap(const Dataset& d, std::size_t col) {
  double pos = 0.0, neg = 0.0;
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    if (d.y[i] == 1) {
      pos += d.x(i, col);
      ++np;
    } else {
      neg += d.x(i, col);
      ++nn;
    }
  }
  return pos / static_cast<double>(np) - neg / static_cast<double>(nn);
}

}  // namespace

TEST_CASE("synthetic shape, names, and exact class counts") {
  SyntheticSpec spec;
  spec.n_rows = 500;
  spec.n_informative = 3;
  spec.n_noise = 2;
  spec.n_correlated_pairs = 2;
  spec.positive_fraction = 0.2;
  const Dataset d = generate_synthetic(spec, 17);
  CHECK(d.n_rows() == 500);
  CHECK(d.n_features() == 3 + 2 + 4);
  CHECK(d.feature_names[0] == "inf_0");
  CHECK(d.feature_names[3] == "noise_0");
  CHECK(d.feature_names[5] == "corr_0_base");
  CHECK(d.feature_names[6] == "corr_0_twin");

  std::size_t positives = 0;
  for (int v : d.y) positives += static_cast<std::size_t>(v);
  CHECK(positives == 100);  // exactly round(500 * 0.2)
}

TEST_CASE("synthetic generation is seed-deterministic") {
  SyntheticSpec spec;
  spec.n_rows = 200;
  spec.n_informative = 2;
  spec.n_noise = 1;
  const Dataset a = generate_synthetic(spec, 5);
  const Dataset b = generate_synthetic(spec, 5);
  CHECK(a.x.data == b.x.data);
  CHECK(a.y == b.y);
  const Dataset c = generate_synthetic(spec, 6);
  CHECK(a.x.data != c.x.data);
}

TEST_CASE("informative columns carry the class separation, noise does not") {
  SyntheticSpec spec;
  spec.n_rows = 4000;
  spec.n_informative = 2;
  spec.n_noise = 2;
  spec.class_separation = 3.0;
  spec.positive_fraction = 0.5;
  const Dataset d = generate_synthetic(spec, 23);
  // Unit-variance columns: sample means settle within ~5 sigma/sqrt(n).
  CHECK(column_label_gap(d, 0) == doctest::Approx(3.0).epsilon(0.1));
  CHECK(column_label_gap(d, 1) == doctest::Approx(3.0).epsilon(0.1));
  CHECK(std::fabs(column_label_gap(d, 2)) < 0.2);
  CHECK(std::fabs(column_label_gap(d, 3)) < 0.2);
}

TEST_CASE("planted twin columns are strongly correlated") {
  SyntheticSpec spec;
  spec.n_rows = 2000;
  spec.n_informative = 1;
  spec.n_correlated_pairs = 2;
  spec.correlation_noise = 0.05;  // population |r| = 1/sqrt(1.0025) = 0.99875
  const Dataset d = generate_synthetic(spec, 31);
  const CorrelationMatrix cm = pearson_matrix(d);
  CHECK(cm.r(1, 2) > 0.99);
  CHECK(cm.r(3, 4) > 0.99);
  // Distinct pairs are independent draws, not copies of one another.
  CHECK(std::fabs(cm.r(1, 3)) < 0.2);
}

TEST_CASE("synthetic rejects degenerate requests") {
  SyntheticSpec spec;
  spec.n_rows = 0;
  CHECK_THROWS_AS((void)generate_synthetic(spec, 1), std::invalid_argument);
  SyntheticSpec no_features;
  no_features.n_rows = 10;
  no_features.n_informative = 0;
  no_features.n_noise = 0;
  no_features.n_correlated_pairs = 0;
  CHECK_THROWS_AS((void)generate_synthetic(no_features, 1),
                  std::invalid_argument);
  SyntheticSpec bad_frac;
  bad_frac.positive_fraction = 1.5;
  CHECK_THROWS_AS((void)generate_synthetic(bad_frac, 1), std::invalid_argument);
}

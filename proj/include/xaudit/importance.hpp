// A scored feature ranking plus the provenance needed to reproduce it.
// Every explanation method in the library funnels into this one shape so the
// audit layer can treat rankings uniformly.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xaudit {

enum class ImportanceMethod {
  kDtImpurity,       // intrinsic: decision-tree impurity decrease
  kRidgeCoefficient, // intrinsic: ridge coefficient magnitudes
  kPermutation,      // post hoc: metric drop under column shuffles
  kShapGlobal,       // post hoc: mean |SHAP| over explained instances
  kCoefficient,      // toy demo: closed-form model coefficients
  kGradient,         // toy demo: mean |gradient| over a grid
};

std::string importance_method_name(ImportanceMethod m);  // "DT_FI", "PI", ...

struct ImportanceVector {
  ImportanceMethod method = ImportanceMethod::kPermutation;
  std::vector<std::string> feature_names;
  std::vector<double> scores;     // aligned with feature_names; sign preserved
  std::uint64_t seed = 0;         // 0 for deterministic intrinsic methods
  std::uint64_t repeats = 0;      // permutation repeats, when applicable
  std::uint64_t samples = 0;      // explained instances, when applicable
  bool degenerate = false;        // all scores exactly zero
};

/// Marks the vector degenerate when every score is exactly zero (e.g. a
/// stump-less tree); rankings from such vectors are meaningless.
void finalize_degeneracy(ImportanceVector& v);

}  // namespace xaudit

#include "xaudit/importance.hpp"

namespace xaudit {

std::string importance_method_name(ImportanceMethod m) {
  switch (m) {
    case ImportanceMethod::kDtImpurity: return "DT_FI";
    case ImportanceMethod::kRidgeCoefficient: return "RIDGE_FC";
    case ImportanceMethod::kPermutation: return "PI";
    case ImportanceMethod::kShapGlobal: return "SHAP_GLOBAL";
    case ImportanceMethod::kCoefficient: return "COEFFICIENT";
    case ImportanceMethod::kGradient: return "GRADIENT";
  }
  return "PI";
}

void finalize_degeneracy(ImportanceVector& v) {
  v.degenerate = true;
  for (double s : v.scores) {
    if (s != 0.0) {
      v.degenerate = false;
      return;
    }
  }
}

}  // namespace xaudit

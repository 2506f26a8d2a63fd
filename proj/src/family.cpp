#include "epkit/family.hpp"

namespace epk {

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Paper2x2: return "paper2x2";
    case FamilyKind::Paper3x3: return "paper3x3";
    case FamilyKind::Tep3x3: return "tep3x3";
    case FamilyKind::CustomAffine: return "custom-affine";
  }
  return "unknown";
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "paper2x2") return FamilyKind::Paper2x2;
  if (name == "paper3x3") return FamilyKind::Paper3x3;
  if (name == "tep3x3") return FamilyKind::Tep3x3;
  if (name == "custom-affine") return FamilyKind::CustomAffine;
  throw Error(ErrorKind::ConfigError, "unknown family kind \"" + name + "\"");
}

HamiltonianFamily paper_3x3() {
  const Complex i(0.0, 1.0);
  const double d = 0.4;
  HamiltonianFamily f;
  f.kind = FamilyKind::Paper3x3;
  f.n = 3;
  f.base = Mat(3, 3);
  f.base << -3.0 + i, d, d,
            d, 1.0 - 3.0 * i, d,
            d, d, -2.0 * i;
  f.grad_alpha = Mat::Zero(3, 3);
  f.grad_alpha(0, 0) = 1.0;
  f.grad_alpha(1, 1) = -1.0;
  f.grad_beta = Mat::Zero(3, 3);
  f.grad_beta(0, 0) = -i;
  f.grad_beta(1, 1) = i;
  return f;
}

HamiltonianFamily paper_2x2(Complex e0, double delta_scale) {
  if (!(delta_scale > 0.0) || !std::isfinite(delta_scale))
    throw Error(ErrorKind::InvalidInput, "paper_2x2: delta_scale must be positive");
  const Complex i(0.0, 1.0);
  HamiltonianFamily f;
  f.kind = FamilyKind::Paper2x2;
  f.n = 2;
  f.e0 = e0;
  f.delta_scale = delta_scale;
  f.base = Mat(2, 2);
  f.base << e0, 1.0, 0.0, e0;
  f.grad_alpha = Mat::Zero(2, 2);
  f.grad_alpha(1, 0) = delta_scale;
  f.grad_beta = Mat::Zero(2, 2);
  f.grad_beta(1, 0) = i * delta_scale;
  return f;
}

HamiltonianFamily tep_3x3(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::InvalidInput, "tep_3x3: epsilon must be positive");
  const Complex i(0.0, 1.0);
  HamiltonianFamily f;
  f.kind = FamilyKind::Tep3x3;
  f.n = 3;
  f.epsilon = epsilon;
  f.base = Mat::Zero(3, 3);
  f.base(0, 1) = 1.0;
  f.base(1, 2) = 1.0;
  f.grad_alpha = Mat::Zero(3, 3);
  f.grad_alpha(2, 0) = epsilon;
  f.grad_beta = Mat::Zero(3, 3);
  f.grad_beta(2, 0) = i * epsilon;
  return f;
}

HamiltonianFamily custom_affine(const Mat& base, const Mat& grad_alpha, const Mat& grad_beta) {
  require_small_square(base, "custom_affine(base)");
  require_small_square(grad_alpha, "custom_affine(grad_alpha)");
  require_small_square(grad_beta, "custom_affine(grad_beta)");
  if (grad_alpha.rows() != base.rows() || grad_beta.rows() != base.rows())
    throw Error(ErrorKind::DimensionMismatch, "custom_affine: matrices must share one dimension");
  HamiltonianFamily f;
  f.kind = FamilyKind::CustomAffine;
  f.n = static_cast<int>(base.rows());
  f.base = base;
  f.grad_alpha = grad_alpha;
  f.grad_beta = grad_beta;
  return f;
}

}  // namespace epk

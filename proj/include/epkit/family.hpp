#pragma once

#include <string>

#include "epkit/types.hpp"

namespace epk {

enum class FamilyKind { Paper2x2, Paper3x3, Tep3x3, CustomAffine };

const char* family_kind_name(FamilyKind k);
FamilyKind family_kind_from_name(const std::string& name);

/// Two-real-parameter affine family H(alpha, beta) = base + alpha grad_alpha
/// + beta grad_beta of 2x2 or 3x3 complex matrices.
struct HamiltonianFamily {
  FamilyKind kind = FamilyKind::CustomAffine;
  int n = 0;
  Mat base;
  Mat grad_alpha;
  Mat grad_beta;

  // Construction metadata, kept for serialization round-trips.
  Complex e0{0.0, 0.0};      // paper 2x2 degenerate diagonal
  double delta_scale = 1.0;  // paper 2x2 deviation scale
  double epsilon = 0.0;      // TEP perturbation strength

  Mat operator()(Params p) const { return evaluate(p); }

  Mat evaluate(Params p) const {
    require_finite_params(p, "HamiltonianFamily::evaluate");
    return base + p.alpha * grad_alpha + p.beta * grad_beta;
  }
};

inline Mat evaluate(const HamiltonianFamily& f, Params p) { return f.evaluate(p); }

/// Three-mode model with symmetric coupling 0.4 and diagonal
/// (alpha-3) - i(beta-1), (1-alpha) - i(3-beta), -2i. Carries three
/// exceptional points in the bench region (0.4, 3.5) x (1.6, 2.2).
HamiltonianFamily paper_3x3();

/// Two-mode family with a single exceptional point at the parameter origin:
/// degenerate diagonal e0, coupling V = 1, W = (alpha + i beta) delta_scale,
/// so the eigenvalue deviation is exactly (alpha + i beta) delta_scale.
HamiltonianFamily paper_2x2(Complex e0 = {0.0, 0.0}, double delta_scale = 1.0);

/// Perturbed nilpotent Jordan block J3 + (alpha + i beta) epsilon E31 whose
/// eigenvalues are the three cube roots of (alpha + i beta) epsilon: a triple
/// exceptional point sits at the origin by construction.
HamiltonianFamily tep_3x3(double epsilon = 1e-3);

/// User-supplied affine family.
HamiltonianFamily custom_affine(const Mat& base, const Mat& grad_alpha, const Mat& grad_beta);

}  // namespace epk

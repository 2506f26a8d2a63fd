#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "epkit/types.hpp"

namespace epk {

/// Coefficients of the monic cubic  lambda^3 + a lambda^2 + b lambda + c.
template <typename Real = double>
struct CubicCoefficientsT {
  std::complex<Real> a, b, c;
};

using CubicCoefficients = CubicCoefficientsT<double>;

/// a = -tr(m), b = sum of principal 2x2 minors, c = -det(m).
template <typename Derived>
CubicCoefficientsT<typename Derived::RealScalar> char_poly(const Eigen::MatrixBase<Derived>& m) {
  require_small_square(m, "char_poly");
  if (m.rows() != 3)
    throw Error(ErrorKind::DimensionMismatch, "char_poly: needs a 3x3 matrix");
  using C = typename Derived::Scalar;
  const C minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) +
                   (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
                   (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
  const C det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  return {-m.trace(), minors, -det};
}

namespace detail {

/// Reduction lambda = t - a/3 gives t^3 + 3p t - 2q = 0.
template <typename Real>
struct DepressedCubic {
  std::complex<Real> p, q;
};

template <typename Real>
DepressedCubic<Real> depress(const CubicCoefficientsT<Real>& k) {
  const auto a = k.a, b = k.b, c = k.c;
  return {b / Real(3) - a * a / Real(9),
          -c / Real(2) + a * b / Real(6) - a * a * a / Real(27)};
}

template <typename Real>
std::complex<Real> principal_cbrt(std::complex<Real> z) {
  if (z == std::complex<Real>(0)) return z;
  return std::exp(std::log(z) / Real(3));
}

}  // namespace detail

/// D = q^2 + p^3; zero exactly when two roots of the cubic coincide.
/// Equals -(r1-r2)^2 (r2-r3)^2 (r3-r1)^2 / 108.
template <typename Real>
std::complex<Real> cubic_discriminant(const CubicCoefficientsT<Real>& k) {
  const auto [p, q] = detail::depress(k);
  return q * q + p * p * p;
}

template <typename Real>
std::complex<Real> eval_cubic(const CubicCoefficientsT<Real>& k, std::complex<Real> x) {
  return ((x + k.a) * x + k.b) * x + k.c;
}

/// Cardano roots {a+ + a- - beta, w a+ + wbar a- - beta, wbar a+ + w a- - beta}
/// with a+- the cube roots of q +- sqrt(q^2+p^3) paired so that a+ a- = -p.
///
/// Only the larger-magnitude branch is cube-rooted directly; the other follows
/// from the product identity, which stays accurate when q and the square root
/// nearly cancel (the near-degenerate regime).
template <typename Real>
std::array<std::complex<Real>, 3> solve_cubic(const CubicCoefficientsT<Real>& k) {
  using C = std::complex<Real>;
  const auto [p, q] = detail::depress(k);
  const C beta = k.a / Real(3);

  C aplus, aminus;
  if (p == C(0)) {
    aplus = detail::principal_cbrt(Real(2) * q);
    aminus = C(0);
  } else {
    const C s = std::sqrt(q * q + p * p * p);
    const C wp = q + s;
    const C wm = q - s;
    if (std::abs(wp) >= std::abs(wm)) {
      aplus = detail::principal_cbrt(wp);
      aminus = aplus == C(0) ? C(0) : -p / aplus;
    } else {
      aminus = detail::principal_cbrt(wm);
      aplus = aminus == C(0) ? C(0) : -p / aminus;
    }
  }

  const C omega(Real(-0.5), std::sqrt(Real(3)) / Real(2));
  const C omega_bar = std::conj(omega);
  std::array<C, 3> roots = {aplus + aminus - beta,
                            omega * aplus + omega_bar * aminus - beta,
                            omega_bar * aplus + omega * aminus - beta};

  // One guarded Newton correction per root; skipped where the derivative is
  // too small to be trustworthy (near double roots).
  for (auto& r : roots) {
    const C f = eval_cubic(k, r);
    const C df = (Real(3) * r + Real(2) * k.a) * r + k.b;
    if (std::abs(df) > Real(1e-8)) {
      const C cand = r - f / df;
      if (std::abs(eval_cubic(k, cand)) < std::abs(f)) r = cand;
    }
  }
  return roots;
}

}  // namespace epk

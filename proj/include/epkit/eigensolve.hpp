#pragma once

#include <array>
#include <limits>
#include <optional>
#include <utility>

#include "epkit/cardano.hpp"
#include "epkit/types.hpp"

namespace epk {

/// Eigenvalues (and, on request, right/left eigenvectors) at one matrix.
/// Right vectors are columns of `right`, unit norm, largest-magnitude
/// component real-positive. Left vectors are columns of `left`, scaled so
/// that left_i^H right_i = 1. `defective` is set instead of vectors when the
/// matrix is too close to an exceptional point for the pair to make sense.
struct EigenSet {
  Vec values;
  std::optional<Mat> right;
  std::optional<Mat> left;
  bool defective = false;

  int n() const { return static_cast<int>(values.size()); }
};

namespace detail {

template <typename Derived>
Mat adjugate(const Eigen::MatrixBase<Derived>& a) {
  Mat adj(a.rows(), a.cols());
  if (a.rows() == 2) {
    adj << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
    return adj;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      // adj = transpose of the cofactor matrix; cyclic index choice absorbs
      // the (-1)^{i+j} factor.
      adj(j, i) = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
    }
  }
  return adj;
}

}  // namespace detail

/// Raw biorthogonal pair at a simple eigenvalue: right column r and left row
/// w with w * m = value * w and w * r = 1. No gauge fixing beyond that.
/// Rank-1 structure of adj(m - value I) supplies both directions at once.
template <typename Derived>
std::pair<Vec, RowVec> biortho_pair(const Eigen::MatrixBase<Derived>& m, Complex value) {
  const Mat shifted = m - value * Mat::Identity(m.rows(), m.cols());
  const Mat adj = detail::adjugate(shifted);

  Eigen::Index best_col = 0, best_row = 0;
  adj.colwise().norm().maxCoeff(&best_col);
  adj.rowwise().norm().maxCoeff(&best_row);
  Vec r = adj.col(best_col);
  RowVec w = adj.row(best_row);

  const Complex overlap = (w * r).value();
  const double denom = w.norm() * r.norm();
  if (denom == 0.0 || std::abs(overlap) < 1e-6 * denom)
    throw Error(ErrorKind::NearDefective,
                "eigenvector pair is self-orthogonal (matrix is near-defective)");
  r /= r.norm();
  w /= (w * r).value();
  return {std::move(r), std::move(w)};
}

/// Discriminant whose zeros are the exceptional points: for n=2 the quadratic
/// deviation (E1-E2)^2/4 + V W, for n=3 the Cardano q^2 + p^3.
template <typename Derived>
Complex discriminant(const Eigen::MatrixBase<Derived>& m) {
  require_small_square(m, "discriminant");
  if (m.rows() == 2) {
    const Complex half_diff = (m(0, 0) - m(1, 1)) / 2.0;
    return half_diff * half_diff + m(0, 1) * m(1, 0);
  }
  return cubic_discriminant(char_poly(m));
}

template <typename Derived>
EigenSet eigs2(const Eigen::MatrixBase<Derived>& m, bool want_vectors = false);
template <typename Derived>
EigenSet eigs3(const Eigen::MatrixBase<Derived>& m, bool want_vectors = false);

/// Right/left eigenvector pair at a simple eigenvalue of m.
/// Right: unit norm, deterministic gauge. Left: scaled so <l|r> = 1.
template <typename Derived>
std::pair<Vec, Vec> eigvec_pair(const Eigen::MatrixBase<Derived>& m, Complex value) {
  require_small_square(m, "eigvec_pair");
  const double scale = matrix_scale(m);

  const EigenSet es = m.rows() == 2 ? eigs2(m) : eigs3(m);
  double nearest = std::numeric_limits<double>::infinity();
  double second = nearest;
  for (int i = 0; i < es.n(); ++i) {
    const double d = std::abs(es.values(i) - value);
    if (d < nearest) {
      second = nearest;
      nearest = d;
    } else if (d < second) {
      second = d;
    }
  }
  if (nearest > 1e-8 * scale)
    throw Error(ErrorKind::InvalidInput, "eigvec_pair: value is not an eigenvalue");
  if (second < 1e-6 * scale)
    throw Error(ErrorKind::NearDefective, "eigvec_pair: eigenvalue gap below threshold");

  auto [r, w] = biortho_pair(m, value);
  // Re-gauge the right vector; the inverse phase on w keeps w * r = 1.
  Eigen::Index k = 0;
  r.cwiseAbs().maxCoeff(&k);
  const Complex phase = std::conj(r(k)) / std::abs(r(k));
  Vec right = r * phase;
  RowVec w_g = w / phase;
  return {std::move(right), Vec(w_g.adjoint())};
}

/// Closed-form eigenvalues of a 2x2: E0 +- sqrt((E1-E2)^2/4 + V W) with the
/// principal square-root branch, in that order.
template <typename Derived>
EigenSet eigs2(const Eigen::MatrixBase<Derived>& m, bool want_vectors) {
  require_small_square(m, "eigs2");
  if (m.rows() != 2) throw Error(ErrorKind::DimensionMismatch, "eigs2: needs a 2x2 matrix");

  const Complex center = (m(0, 0) + m(1, 1)) / 2.0;
  const Complex root = std::sqrt(discriminant(m));
  EigenSet out;
  out.values = Vec(2);
  out.values << center + root, center - root;

  if (want_vectors) {
    out.right = Mat(2, 2);
    out.left = Mat(2, 2);
    for (int i = 0; i < 2; ++i) {
      try {
        auto [r, l] = eigvec_pair(m, out.values(i));
        out.right->col(i) = r;
        out.left->col(i) = l;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NearDefective) throw;
        out.right.reset();
        out.left.reset();
        out.defective = true;
        break;
      }
    }
  }
  return out;
}

/// Closed-form eigenvalues of a 3x3 via the cubic solver.
template <typename Derived>
EigenSet eigs3(const Eigen::MatrixBase<Derived>& m, bool want_vectors) {
  require_small_square(m, "eigs3");
  if (m.rows() != 3) throw Error(ErrorKind::DimensionMismatch, "eigs3: needs a 3x3 matrix");

  const auto roots = solve_cubic(char_poly(m));
  EigenSet out;
  out.values = Vec(3);
  out.values << roots[0], roots[1], roots[2];

  if (want_vectors) {
    out.right = Mat(3, 3);
    out.left = Mat(3, 3);
    for (int i = 0; i < 3; ++i) {
      try {
        auto [r, l] = eigvec_pair(m, out.values(i));
        out.right->col(i) = r;
        out.left->col(i) = l;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NearDefective) throw;
        out.right.reset();
        out.left.reset();
        out.defective = true;
        break;
      }
    }
  }
  return out;
}

/// Size-dispatching front end.
template <typename Derived>
EigenSet eigs(const Eigen::MatrixBase<Derived>& m, bool want_vectors = false) {
  require_small_square(m, "eigs");
  return m.rows() == 2 ? eigs2(m, want_vectors) : eigs3(m, want_vectors);
}

}  // namespace epk

#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "epkit/types.hpp"

namespace epk {

/// A matrix with exactly one +-1 entry per row and column, stored as the
/// permutation it applies plus the sign attached to each output row:
///   M e_j = signs[perm[j]] * e_{perm[j]}.
/// All arithmetic is exact (entries in {-1, 0, +1}).
struct SignedPermutation {
  int n = 0;
  std::vector<int> perm;   // perm[j] = image of index j
  std::vector<int> signs;  // signs[r] = sign carried by output row r

  static SignedPermutation identity(int n) {
    SignedPermutation s;
    s.n = n;
    s.perm.resize(n);
    std::iota(s.perm.begin(), s.perm.end(), 0);
    s.signs.assign(n, 1);
    return s;
  }

  bool is_identity() const {
    for (int j = 0; j < n; ++j)
      if (perm[j] != j || signs[j] != 1) return false;
    return true;
  }

  Eigen::MatrixXi matrix() const {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
    for (int j = 0; j < n; ++j) m(perm[j], j) = signs[perm[j]];
    return m;
  }

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

/// Transposition of modes i and j (identity elsewhere). With `with_sign`, one
/// of the two off-diagonal entries is -1; which one is selected by
/// `positive_direction`, mirroring the two traversal directions of a loop.
inline SignedPermutation generator(int n, int i, int j, bool with_sign = false,
                                   bool positive_direction = true) {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    throw Error(ErrorKind::IndexOutOfRange,
                "generator: need distinct mode indices in [0, n)");
  if (i > j) std::swap(i, j);
  SignedPermutation s = SignedPermutation::identity(n);
  s.perm[i] = j;
  s.perm[j] = i;
  if (with_sign) s.signs[positive_direction ? i : j] = -1;
  return s;
}

/// Matrix product a * b (b applied first).
inline SignedPermutation compose(const SignedPermutation& a, const SignedPermutation& b) {
  if (a.n != b.n)
    throw Error(ErrorKind::DimensionMismatch, "compose: mismatched sizes");
  SignedPermutation c;
  c.n = a.n;
  c.perm.resize(a.n);
  c.signs.assign(a.n, 1);
  for (int j = 0; j < a.n; ++j) {
    const int mid = b.perm[j];
    const int out = a.perm[mid];
    c.perm[j] = out;
    c.signs[out] = b.signs[mid] * a.signs[out];
  }
  return c;
}

inline SignedPermutation inverse(const SignedPermutation& s) {
  SignedPermutation inv;
  inv.n = s.n;
  inv.perm.resize(s.n);
  inv.signs.assign(s.n, 1);
  for (int j = 0; j < s.n; ++j) {
    inv.perm[s.perm[j]] = j;
    inv.signs[j] = s.signs[s.perm[j]];
  }
  return inv;
}

inline SignedPermutation pow(const SignedPermutation& s, int k) {
  SignedPermutation acc = SignedPermutation::identity(s.n);
  for (int i = 0; i < k; ++i) acc = compose(s, acc);
  return acc;
}

/// Orbits of the permutation, each starting from its smallest element.
inline std::vector<std::vector<int>> cycles(const SignedPermutation& s) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(s.n, false);
  for (int start = 0; start < s.n; ++start) {
    if (seen[start]) continue;
    std::vector<int> cyc;
    for (int j = start; !seen[j]; j = s.perm[j]) {
      seen[j] = true;
      cyc.push_back(j);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

inline int cycle_sign_product(const SignedPermutation& s, const std::vector<int>& cyc) {
  int prod = 1;
  for (int j : cyc) prod *= s.signs[s.perm[j]];
  return prod;
}

/// Least k >= 1 with s^k = identity: lcm over cycles of the cycle length,
/// doubled for cycles whose sign product is -1.
inline int order(const SignedPermutation& s) {
  long long acc = 1;
  for (const auto& cyc : cycles(s)) {
    long long len = static_cast<long long>(cyc.size());
    if (cycle_sign_product(s, cyc) < 0) len *= 2;
    acc = std::lcm(acc, len);
  }
  return static_cast<int>(acc);
}

/// Exact spectrum from the cycle decomposition: a k-cycle with sign product
/// sigma contributes the k-th roots of sigma.
inline std::vector<Complex> spectrum(const SignedPermutation& s) {
  std::vector<Complex> out;
  out.reserve(s.n);
  constexpr double pi = 3.14159265358979323846;
  for (const auto& cyc : cycles(s)) {
    const int k = static_cast<int>(cyc.size());
    const double offset = cycle_sign_product(s, cyc) < 0 ? 0.5 : 0.0;
    for (int m = 0; m < k; ++m) {
      const double angle = 2.0 * pi * (m + offset) / k;
      out.emplace_back(std::cos(angle), std::sin(angle));
    }
  }
  return out;
}

/// Cycle notation with per-mode sign annotations, e.g. "(0 1)(2)[+,-,+]".
inline std::string cycle_notation(const SignedPermutation& s) {
  std::ostringstream os;
  for (const auto& cyc : cycles(s)) {
    os << '(';
    for (size_t k = 0; k < cyc.size(); ++k) os << (k ? " " : "") << cyc[k];
    os << ')';
  }
  os << '[';
  for (int j = 0; j < s.n; ++j) os << (j ? "," : "") << (s.signs[j] < 0 ? '-' : '+');
  os << ']';
  return os.str();
}

/// One way of ordering a set of holonomy generators, with its product.
struct GeneratorOrdering {
  std::vector<int> sequence;  // indices into the generator list; first acts first
  SignedPermutation product;  // generators[sequence.back()] * ... * generators[sequence.front()]
  int product_order = 0;
};

/// All orderings of the given generators. The product applies the sequence
/// left to right in time, i.e. as the matrix product g_last * ... * g_first.
inline std::vector<GeneratorOrdering> enumerate_orderings(
    const std::vector<SignedPermutation>& generators) {
  if (generators.empty() || generators.size() > 5)
    throw Error(ErrorKind::InvalidInput, "enumerate_orderings: need 1..5 generators");
  std::vector<int> idx(generators.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<GeneratorOrdering> out;
  do {
    GeneratorOrdering o;
    o.sequence = idx;
    o.product = SignedPermutation::identity(generators[0].n);
    for (int g : idx) o.product = compose(generators[g], o.product);
    o.product_order = order(o.product);
    out.push_back(std::move(o));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

/// Orderings of the pairwise-exchange generators consistent with a measured
/// permutation. Signs are ignored: the measured sign pattern depends on the
/// base-point frame, the mode rearrangement does not.
inline std::vector<GeneratorOrdering> match_measurement(
    const SignedPermutation& measured, const std::vector<std::pair<int, int>>& enclosed_pairs) {
  if (enclosed_pairs.empty()) {
    std::vector<GeneratorOrdering> out;
    if (measured.perm == SignedPermutation::identity(measured.n).perm) {
      GeneratorOrdering o;
      o.product = SignedPermutation::identity(measured.n);
      o.product_order = 1;
      out.push_back(std::move(o));
    }
    return out;
  }
  std::vector<SignedPermutation> gens;
  gens.reserve(enclosed_pairs.size());
  for (auto [i, j] : enclosed_pairs) gens.push_back(generator(measured.n, i, j));
  std::vector<GeneratorOrdering> out;
  for (auto& o : enumerate_orderings(gens))
    if (o.product.perm == measured.perm) out.push_back(std::move(o));
  return out;
}

}  // namespace epk

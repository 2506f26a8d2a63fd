#include "epkit/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace epk {

namespace {

/// All permutations of {0..n-1} for n in {2, 3}.
const std::vector<std::vector<int>>& assignments(int n) {
  static const std::vector<std::vector<int>> two = {{0, 1}, {1, 0}};
  static const std::vector<std::vector<int>> three = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  return n == 2 ? two : three;
}

double min_pair_gap(const Vec& values) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < values.size(); ++i)
    for (int j = i + 1; j < values.size(); ++j)
      best = std::min(best, std::abs(values(i) - values(j)));
  return best;
}

/// Gauged biorthogonal frame at one matrix: right columns unit-norm with the
/// deterministic gauge, left rows with w_i * r_i = 1.
struct Frame {
  std::vector<Vec> right;
  std::vector<RowVec> left;
};

Frame gauged_frame(const Mat& m, const Vec& values) {
  Frame fr;
  fr.right.reserve(values.size());
  fr.left.reserve(values.size());
  for (int i = 0; i < values.size(); ++i) {
    auto [r, w] = biortho_pair(m, values(i));
    Eigen::Index k = 0;
    r.cwiseAbs().maxCoeff(&k);
    const Complex phase = std::conj(r(k)) / std::abs(r(k));
    fr.right.push_back(r * phase);
    fr.left.push_back(w / phase);
  }
  return fr;
}

/// Branch state walked along a path. Values stay in branch order; vector
/// frames follow by discrete biorthogonal parallel transport
/// (r -> raw/<w_prev, raw>), which keeps <w_i, r_i> = 1 and accumulates the
/// geometric phase in the frame itself.
struct Stepper {
  const HamiltonianFamily& family;
  const TrackOptions& opts;
  bool with_vectors;

  Vec values;
  std::vector<Vec> right;
  std::vector<RowVec> left;
  int refinements = 0;

  std::function<void(Params, const Vec&)> on_accept;  // optional sample sink

  Stepper(const HamiltonianFamily& f, const TrackOptions& o, bool vectors, Params start)
      : family(f), opts(o), with_vectors(vectors) {
    const Mat m = f.evaluate(start);
    values = (f.n == 2 ? eigs2(m) : eigs3(m)).values;
    if (with_vectors) {
      Frame fr = gauged_frame(m, values);
      right = std::move(fr.right);
      left = std::move(fr.left);
    }
  }

  bool try_step(Params target) {
    const Mat m = family.evaluate(target);
    const Vec lam = (family.n == 2 ? eigs2(m) : eigs3(m)).values;
    const int n = family.n;

    double best_cost = std::numeric_limits<double>::infinity();
    const std::vector<int>* best = nullptr;
    for (const auto& sigma : assignments(n)) {
      double cost = 0.0;
      for (int i = 0; i < n; ++i) cost += std::abs(lam(sigma[i]) - values(i));
      if (cost < best_cost) {
        best_cost = cost;
        best = &sigma;
      }
    }
    if (!(best_cost < opts.match_threshold * min_pair_gap(values))) return false;

    Vec matched(n);
    for (int i = 0; i < n; ++i) matched(i) = lam((*best)[i]);

    if (with_vectors) {
      std::vector<Vec> new_right(n);
      std::vector<RowVec> new_left(n);
      for (int i = 0; i < n; ++i) {
        auto [raw_r, raw_w] = biortho_pair(m, matched(i));
        // First-order transport needs a small direction change per step;
        // bisect when the frame rotates too fast.
        const double align = std::abs(right[i].normalized().dot(raw_r));
        if (align < 0.8) return false;
        const Complex overlap = (left[i] * raw_r).value();
        if (overlap == Complex(0.0, 0.0)) return false;
        new_right[i] = raw_r / overlap;
        new_left[i] = raw_w * overlap;
      }
      right = std::move(new_right);
      left = std::move(new_left);
    }
    values = std::move(matched);
    if (on_accept) on_accept(target, values);
    return true;
  }

  /// Walk from curve coordinate t0 to t1, bisecting failed steps.
  void advance(double t0, double t1, const std::function<Params(double)>& point, int depth) {
    if (try_step(point(t1))) return;
    if (depth >= opts.max_bisection_depth)
      throw Error(ErrorKind::AmbiguousMatching,
                  "eigenvalue matching stayed ambiguous at maximum bisection depth "
                  "(the path effectively touches an exceptional point)");
    ++refinements;
    const double tm = (t0 + t1) / 2;
    advance(t0, tm, point, depth + 1);
    advance(tm, t1, point, depth + 1);
  }
};

void precheck_loop(const HamiltonianFamily& f, const ParameterLoop& loop, double exclusion) {
  Region box = loop.bounding_box().inflated(1.2);
  box.grid_alpha = 48;
  box.grid_beta = 48;
  for (const EPRecord& ep : locate_all(f, box)) {
    if (loop.distance_to(ep.location) < exclusion)
      throw Error(ErrorKind::LoopTooCloseToEP,
                  "loop passes within the exclusion radius of the exceptional point at (" +
                      std::to_string(ep.location.alpha) + ", " +
                      std::to_string(ep.location.beta) + ")");
  }
}

struct MeasuredCycle {
  std::vector<int> perm;
  std::vector<Complex> orbit_products;  // per cycle of perm, in cycles() order
};

/// Match branch values back to the base labels and collect, per orbit, the
/// product of frame-overlap factors (the gauge-invariant sign content).
MeasuredCycle measure_at_base(const Stepper& st, const Vec& base_values, const Frame& base_frame,
                              bool with_vectors, double scale) {
  const int n = static_cast<int>(base_values.size());
  MeasuredCycle out;
  out.perm.assign(n, -1);
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double d = std::abs(st.values(i) - base_values(j));
      if (!used[j] && d < bd) {
        bd = d;
        best = j;
      }
    }
    if (best < 0 || bd > 1e-9 * scale)
      throw Error(ErrorKind::AmbiguousMatching,
                  "loop closure failed: eigenvalues at the base point do not match");
    used[best] = true;
    out.perm[i] = best;
  }

  if (with_vectors) {
    SignedPermutation tmp = SignedPermutation::identity(n);
    tmp.perm = out.perm;
    for (const auto& orbit : cycles(tmp)) {
      Complex prod = 1.0;
      for (int i : orbit) prod *= (base_frame.left[out.perm[i]] * st.right[i]).value();
      out.orbit_products.push_back(prod);
    }
  }
  return out;
}

}  // namespace

HolonomySignature make_signature(const SignedPermutation& sp, bool has_signs) {
  HolonomySignature sig;
  sig.sp = sp;
  sig.has_signs = has_signs;
  if (!has_signs) {
    sig.sp.signs.assign(sp.n, 1);
  }

  SignedPermutation unsigned_sp = sp;
  unsigned_sp.signs.assign(sp.n, 1);
  const int bound = 2 * (sp.n <= 2 ? 2 : sp.n == 3 ? 6 : 24);

  auto order_by_composition = [&](const SignedPermutation& s) {
    SignedPermutation acc = s;
    for (int k = 1; k <= bound; ++k) {
      if (acc.is_identity()) return k;
      acc = compose(s, acc);
    }
    throw Error(ErrorKind::InvalidInput, "signature order exceeds bound");
  };

  sig.order_permutation = order_by_composition(unsigned_sp);
  if (has_signs) sig.order_signed = order_by_composition(sig.sp);
  return sig;
}

HolonomySignature pow_signature(const HolonomySignature& s, int k) {
  return make_signature(pow(s.sp, k), s.has_signs);
}

TrackResult track(const HamiltonianFamily& f, const ParameterLoop& loop,
                  const TrackOptions& opts) {
  loop.validate();
  if (!opts.skip_ep_precheck) precheck_loop(f, loop, opts.exclusion_radius);

  const Params base = loop.base_point();
  const Mat base_matrix = f.evaluate(base);
  const double scale = matrix_scale(base_matrix);

  Stepper st(f, opts, opts.track_vectors, base);
  const Vec base_values = st.values;
  Frame base_frame;
  if (opts.track_vectors) base_frame = gauged_frame(base_matrix, base_values);

  TrackResult result;
  result.base_values = base_values;
  auto record = [&](Params p, const Vec& v) {
    EigenSet es;
    es.values = v;
    result.samples.push_back({p, es});
  };
  record(base, base_values);
  st.on_accept = record;

  const auto point = [&loop](double t) { return loop.point_at(t); };
  const int steps = loop.samples_per_segment * loop.segment_count();

  std::vector<MeasuredCycle> measured;
  for (int cycle = 0; cycle < loop.cycles; ++cycle) {
    for (int k = 1; k <= steps; ++k) {
      const double t0 = static_cast<double>(k - 1) / steps;
      const double t1 = static_cast<double>(k) / steps;
      st.advance(t0, t1, point, 0);
    }
    measured.push_back(measure_at_base(st, base_values, base_frame, opts.track_vectors, scale));
  }
  result.refinements = st.refinements;

  // One-cycle signature. Sign distribution convention: within each orbit the
  // closing edge (into the orbit's smallest element) carries the orbit's
  // quantized sign product; cumulative signatures are the algebraic powers,
  // verified below against the measured orbit products of every cycle.
  const int n = f.n;
  SignedPermutation sig1;
  sig1.n = n;
  sig1.perm = measured[0].perm;
  sig1.signs.assign(n, 1);

  if (opts.track_vectors) {
    const auto orbits = cycles(sig1);
    for (size_t c = 0; c < orbits.size(); ++c) {
      const Complex prod = measured[0].orbit_products[c];
      const int sign = prod.real() >= 0.0 ? 1 : -1;
      result.sign_quantization_error =
          std::max(result.sign_quantization_error, std::abs(prod - Complex(sign, 0.0)));
      sig1.signs[orbits[c].front()] = sign;
    }
  }

  result.signature = make_signature(sig1, opts.track_vectors);

  for (int cycle = 0; cycle < loop.cycles; ++cycle) {
    HolonomySignature cum = pow_signature(result.signature, cycle + 1);
    if (measured[cycle].perm != cum.sp.perm)
      throw Error(ErrorKind::AmbiguousMatching,
                  "cycle " + std::to_string(cycle + 1) +
                      " permutation is inconsistent with the one-cycle holonomy");
    if (opts.track_vectors) {
      const auto orbits = cycles(cum.sp);
      for (size_t c = 0; c < orbits.size(); ++c) {
        const Complex prod = measured[cycle].orbit_products[c];
        const int expect = cycle_sign_product(cum.sp, orbits[c]);
        result.sign_quantization_error =
            std::max(result.sign_quantization_error, std::abs(prod - Complex(expect, 0.0)));
      }
    }
    result.per_cycle.push_back(std::move(cum));
  }

  if (opts.track_vectors &&
      result.sign_quantization_error > opts.sign_quantization_tolerance) {
    // Families that are not (anti)holomorphic in alpha + i beta carry a
    // continuous complex geometric phase; the +-1 signature is then not
    // defined and the signs are withheld.
    result.signs_reliable = false;
    result.signature = make_signature(sig1, false);
    for (auto& s : result.per_cycle) s = make_signature(s.sp, false);
  }

  return result;
}

SheetSurface sheet_surface(const HamiltonianFamily& f, const Region& r, Axis axis) {
  r.validate();
  SheetSurface out;
  out.region = r;
  out.axis = axis;
  out.n = f.n;
  out.values.assign(static_cast<size_t>(r.grid_alpha) * r.grid_beta * f.n, Complex(0, 0));
  const int lines = axis == Axis::Alpha ? r.grid_beta : r.grid_alpha;
  const int nodes = axis == Axis::Alpha ? r.grid_alpha : r.grid_beta;
  out.scanline_fallback.assign(lines, 0);

  TrackOptions opts;  // matching thresholds shared with track()

  for (int line = 0; line < lines; ++line) {
    auto node_params = [&](int k) -> Params {
      return axis == Axis::Alpha ? Params{r.alpha_at(k), r.beta_at(line)}
                                 : Params{r.alpha_at(line), r.beta_at(k)};
    };
    auto store = [&](int k, const Vec& v) {
      const int ia = axis == Axis::Alpha ? k : line;
      const int ib = axis == Axis::Alpha ? line : k;
      for (int c = 0; c < f.n; ++c)
        out.values[(static_cast<size_t>(ib) * r.grid_alpha + ia) * f.n + c] = v(c);
    };

    // Deterministic start: sorted by real part (then imaginary).
    Vec start = (f.n == 2 ? eigs2(f.evaluate(node_params(0))) : eigs3(f.evaluate(node_params(0))))
                    .values;
    std::vector<Complex> sorted(start.data(), start.data() + start.size());
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (int c = 0; c < f.n; ++c) start(c) = sorted[c];

    try {
      Stepper st(f, opts, false, node_params(0));
      st.values = start;
      store(0, st.values);
      for (int k = 1; k < nodes; ++k) {
        const Params a = node_params(k - 1);
        const Params b = node_params(k);
        auto seg = [&](double t) -> Params {
          return {a.alpha + (b.alpha - a.alpha) * t, a.beta + (b.beta - a.beta) * t};
        };
        st.advance(0.0, 1.0, seg, 0);
        store(k, st.values);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AmbiguousMatching && e.kind() != ErrorKind::NearDefective)
        throw;
      out.scanline_fallback[line] = 1;
      for (int k = 0; k < nodes; ++k) {
        Vec v = (f.n == 2 ? eigs2(f.evaluate(node_params(k))) : eigs3(f.evaluate(node_params(k))))
                    .values;
        std::vector<Complex> vs(v.data(), v.data() + v.size());
        std::sort(vs.begin(), vs.end(), [](Complex x, Complex y) {
          return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        });
        for (int c = 0; c < f.n; ++c) v(c) = vs[c];
        store(k, v);
      }
    }
  }
  return out;
}

}  // namespace epk

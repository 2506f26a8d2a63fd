#include "epkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

#include "epkit/eigensolve.hpp"
#include "epkit/family.hpp"
#include "epkit/holonomy.hpp"
#include "epkit/locator.hpp"
#include "epkit/tracker.hpp"

namespace epk {

namespace {

// The three exceptional points of the bench 3x3 family inside
// (0.4, 3.5) x (1.6, 2.2). The family is similar to itself under
// (alpha, beta) -> (4 - alpha, 4 - beta) (modes 1 and 2 swap), so the first
// and third locations are exact mirror images.
const std::vector<Params> kBenchEPs = {{1.041, 1.948}, {2.072, 1.686}, {2.959, 2.052}};

const Region kBenchRegion{0.4, 3.5, 1.6, 2.2, 200, 120};

// Loop geometries frozen after winding-number validation (see the checks
// below, which re-validate enclosure on every run).
ParameterLoop two_ep_rectangle(int samples = 384, int cycles = 1) {
  return rectangle_loop(0.9, 1.55, 2.4, 2.00, samples, cycles);
}
ParameterLoop three_ep_rectangle(int samples = 384, int cycles = 1) {
  return rectangle_loop(1.0, 1.50, 3.3, 2.25, samples, cycles);
}

/// Winding number of the loop around a point, from dense angle increments.
int winding_number(const ParameterLoop& loop, Params p, int samples = 4096) {
  constexpr double pi = 3.14159265358979323846;
  double total = 0.0;
  double prev = std::atan2(loop.point_at(0).beta - p.beta, loop.point_at(0).alpha - p.alpha);
  for (int k = 1; k <= samples; ++k) {
    const Params q = loop.point_at(static_cast<double>(k) / samples);
    const double ang = std::atan2(q.beta - p.beta, q.alpha - p.alpha);
    double d = ang - prev;
    while (d > pi) d -= 2 * pi;
    while (d < -pi) d += 2 * pi;
    total += d;
    prev = ang;
  }
  return static_cast<int>(std::lround(total / (2 * pi)));
}

/// Assert that the loop winds once around each EP in `enclosed` (indices into
/// the full EP list) and not at all around the others.
bool check_enclosure(const ParameterLoop& loop, const std::vector<EPRecord>& all_eps,
                     const std::vector<int>& enclosed, std::string& message) {
  for (size_t i = 0; i < all_eps.size(); ++i) {
    const bool want = std::find(enclosed.begin(), enclosed.end(), static_cast<int>(i)) !=
                      enclosed.end();
    const int w = std::abs(winding_number(loop, all_eps[i].location));
    if (w != (want ? 1 : 0)) {
      std::ostringstream os;
      os << "loop winds " << w << " times around EP at (" << all_eps[i].location.alpha << ", "
         << all_eps[i].location.beta << "), expected " << (want ? 1 : 0);
      message = os.str();
      return false;
    }
  }
  return true;
}

/// Every EP of the bench family in a widened window (the mirror partner of
/// the second in-window EP sits just above the bench region).
std::vector<EPRecord> bench_eps_widened() {
  Region wide{0.3, 3.7, 1.3, 2.5, 220, 160};
  return locate_all(paper_3x3(), wide);
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Complex random_entry(std::mt19937_64& rng) {
  return {2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0};
}

Mat random_matrix3(std::mt19937_64& rng) {
  Mat m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = random_entry(rng);
  return m;
}

struct Reporter {
  std::ostringstream os;
  bool ok = true;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (os.tellp() > 0) os << "; ";
      os << msg;
    }
  }
  void note(const std::string& msg) {
    if (os.tellp() > 0) os << "; ";
    os << msg;
  }
};

// ---- criterion checks -------------------------------------------------------

CheckResult check_ep_coordinates() {
  Reporter rep;
  const HamiltonianFamily fam = paper_3x3();
  const auto eps = locate_all(fam, kBenchRegion);
  rep.require(eps.size() == 3, "expected exactly 3 EPs, found " + std::to_string(eps.size()));
  if (eps.size() == 3) {
    for (size_t i = 0; i < 3; ++i) {
      const double d = distance(eps[i].location, kBenchEPs[i]);
      std::ostringstream os;
      os << "EP" << i + 1 << " at (" << eps[i].location.alpha << ", " << eps[i].location.beta
         << ")";
      rep.note(os.str());
      rep.require(d <= 1e-3, "EP" + std::to_string(i + 1) + " off target by " + std::to_string(d));
      const Mat m = fam.evaluate(eps[i].location);
      const double s = matrix_scale(m);
      const double resid = std::abs(discriminant(m));
      rep.require(resid <= 1e-12 * s * s * s,
                  "EP" + std::to_string(i + 1) + " residual " + std::to_string(resid));
    }
    // Mirror symmetry of the outer pair.
    rep.require(std::abs(eps[0].location.alpha + eps[2].location.alpha - 4.0) < 1e-6 &&
                    std::abs(eps[0].location.beta + eps[2].location.beta - 4.0) < 1e-6,
                "outer EP pair is not mirror-symmetric about (2, 2)");
  }
  return {"criterion-1-ep-coordinates", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_single_ep_exchange() {
  Reporter rep;
  TrackOptions opts;
  opts.track_vectors = true;
  const TrackResult t = track(paper_2x2(), circle_loop({0, 0}, 1.0, 256), opts);
  rep.require(t.signature.sp.perm == std::vector<int>({1, 0}), "permutation is not the swap");
  rep.require(t.signature.order_permutation == 2, "permutation order != 2");
  rep.require(t.signs_reliable, "signs were not quantizable");
  rep.require(t.signature.order_signed && *t.signature.order_signed == 4,
              "signed order != 4");
  rep.note("permutation " + cycle_notation(t.signature.sp) + ", signed order " +
           std::to_string(t.signature.order_signed.value_or(0)));
  return {"criterion-2-single-ep-exchange", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_two_ep_three_cycle() {
  Reporter rep;
  const auto all = bench_eps_widened();
  std::string geom;
  std::vector<int> enclosed;
  for (size_t i = 0; i < all.size(); ++i)
    if (distance(all[i].location, kBenchEPs[0]) < 1e-2 ||
        distance(all[i].location, kBenchEPs[1]) < 1e-2)
      enclosed.push_back(static_cast<int>(i));
  rep.require(enclosed.size() == 2, "EP bookkeeping failed");
  rep.require(check_enclosure(two_ep_rectangle(), all, enclosed, geom), geom);

  TrackOptions opts;
  opts.track_vectors = true;
  const TrackResult t = track(paper_3x3(), two_ep_rectangle(384, 3), opts);
  const auto orbits = cycles(t.signature.sp);
  rep.require(orbits.size() == 1 && orbits[0].size() == 3, "permutation is not a 3-cycle");
  rep.require(t.signs_reliable, "signs were not quantizable");
  rep.require(t.per_cycle.size() == 3 && t.per_cycle[2].sp.is_identity(),
              "three traversals do not restore the configuration including signs");
  rep.require(t.signature.order_signed && *t.signature.order_signed == 3, "signed order != 3");
  rep.note("one cycle: " + cycle_notation(t.signature.sp));
  return {"criterion-3-two-ep-three-cycle", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_three_ep_transposition() {
  Reporter rep;
  const auto all = bench_eps_widened();
  std::string geom;
  std::vector<int> enclosed;
  for (size_t i = 0; i < all.size(); ++i)
    for (const Params& target : kBenchEPs)
      if (distance(all[i].location, target) < 1e-2) enclosed.push_back(static_cast<int>(i));
  rep.require(enclosed.size() == 3, "EP bookkeeping failed");
  rep.require(check_enclosure(three_ep_rectangle(), all, enclosed, geom), geom);

  TrackOptions opts;
  opts.track_vectors = true;
  const TrackResult t = track(paper_3x3(), three_ep_rectangle(384, 2), opts);
  int fixed = 0;
  for (int i = 0; i < 3; ++i) fixed += t.signature.sp.perm[i] == i;
  rep.require(fixed == 1, "expected exactly one fixed mode after one cycle");
  rep.require(t.signature.order_permutation == 2, "permutation order != 2");
  rep.require(t.per_cycle.size() == 2 &&
                  t.per_cycle[1].sp.perm == SignedPermutation::identity(3).perm,
              "modes do not all return after two cycles");
  rep.require(t.signs_reliable, "signs were not quantizable");
  const int os_ = t.signature.order_signed.value_or(0);
  rep.require(os_ == 2 || os_ == 4, "signed order not in {2, 4}");
  rep.note("one cycle: " + cycle_notation(t.signature.sp) + ", signed order " +
           std::to_string(os_));
  return {"criterion-4-three-ep-transposition", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_tep_cyclic_shift() {
  Reporter rep;
  TrackOptions opts;
  opts.track_vectors = true;
  const TrackResult t = track(tep_3x3(1e-3), circle_loop({0, 0}, 0.5, 256, 3), opts);
  const auto orbits = cycles(t.signature.sp);
  rep.require(orbits.size() == 1 && orbits[0].size() == 3, "permutation is not a 3-cycle");
  rep.require(t.signature.order_permutation == 3, "cyclic shift order != 3");
  rep.require(t.per_cycle.size() == 3 && t.per_cycle[2].sp.is_identity(),
              "three traversals do not restore the configuration");

  // Contrast: a loop around the three separate EPs restores the modes after
  // two traversals, the triple EP needs three.
  TrackOptions fast;
  const TrackResult sep = track(paper_3x3(), three_ep_rectangle(256, 1), fast);
  rep.require(sep.signature.order_permutation == 2,
              "three-separate-EP loop does not have order 2");
  rep.require(t.signature.order_permutation != sep.signature.order_permutation,
              "TEP and three-separate-EP orders do not differ");
  rep.note("TEP order 3 vs separate-EP order 2");
  return {"criterion-5-tep-cyclic-shift", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_four_mode_algebra() {
  Reporter rep;
  const std::vector<SignedPermutation> chain = {generator(4, 0, 1), generator(4, 1, 2),
                                                generator(4, 2, 3)};
  const auto orderings = enumerate_orderings(chain);
  rep.require(orderings.size() == 6, "expected 6 orderings");
  for (const auto& o : orderings)
    rep.require(o.product_order == 4, "an ordering has order " + std::to_string(o.product_order));
  rep.note("all 6 orderings of the chained generators have order 4");
  return {"criterion-6-four-mode-algebra", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_algebra_exhaustive() {
  Reporter rep;
  const SignedPermutation m12 = generator(3, 0, 1);
  const SignedPermutation m23 = generator(3, 1, 2);
  const SignedPermutation m31 = generator(3, 2, 0);

  rep.require(!(compose(m12, m23) == compose(m23, m12)), "[M12, M23] vanished");

  const std::vector<std::pair<SignedPermutation, SignedPermutation>> pairs = {
      {m12, m23}, {m23, m12}, {m23, m31}, {m31, m23}, {m31, m12}, {m12, m31}};
  for (const auto& [a, b] : pairs) {
    const SignedPermutation p = compose(a, b);
    rep.require(order(p) == 3, "a two-exchange product does not have order 3");
    rep.require(pow(p, 3).is_identity(), "M(2)^3 != 1");
    const auto spec = spectrum(p);
    for (const Complex& g : spec)
      rep.require(std::abs(g * g * g - Complex(1, 0)) < 1e-12, "gamma^3 != 1 in M(2) spectrum");
  }

  const auto triples = enumerate_orderings({m12, m23, m31});
  rep.require(triples.size() == 6, "expected 6 triple orderings");
  for (const auto& o : triples) {
    for (const Complex& g : spectrum(o.product))
      rep.require(std::abs(g * g - Complex(1, 0)) < 1e-12, "gamma^2 != 1 in M(3) spectrum");
    rep.require(o.product_order <= 2, "M(3) order above 2");
    rep.require(compose(o.product, o.product).perm == SignedPermutation::identity(3).perm,
                "M(3)^2 is not a diagonal sign matrix");
  }
  rep.note("6 M(2) products with gamma^3 = 1, 6 M(3) products with gamma^2 = 1");
  return {"criterion-7-algebra-exhaustive", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_vieta_residual() {
  Reporter rep;
  std::mt19937_64 rng(0x5eed0001);
  double worst_sum = 0, worst_prod = 0, worst_resid = 0;
  for (int k = 0; k < 100000; ++k) {
    const Mat m = random_matrix3(rng);
    const double s = matrix_scale(m);
    const auto coeffs = char_poly(m);
    const EigenSet es = eigs3(m);
    const Complex sum = es.values.sum();
    const Complex prod = es.values(0) * es.values(1) * es.values(2);
    worst_sum = std::max(worst_sum, std::abs(sum - m.trace()) / s);
    worst_prod = std::max(worst_prod, std::abs(prod - (-coeffs.c)) / (s * s * s));
    for (int i = 0; i < 3; ++i)
      worst_resid = std::max(
          worst_resid, std::abs(eval_cubic(coeffs, es.values(i))) / (s * s * s));
  }
  rep.require(worst_sum <= 1e-10, "Vieta sum residual " + std::to_string(worst_sum));
  rep.require(worst_prod <= 1e-10, "Vieta product residual " + std::to_string(worst_prod));
  rep.require(worst_resid <= 1e-10, "cubic root residual " + std::to_string(worst_resid));
  std::ostringstream os;
  os << "worst relative residuals over 1e5 matrices: sum " << worst_sum << ", product "
     << worst_prod << ", root " << worst_resid;
  rep.note(os.str());
  return {"criterion-8a-vieta-residual", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_discriminant_bruteforce() {
  Reporter rep;
  std::mt19937_64 rng(0x5eed0002);
  double worst = 0, min_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    const Mat m = random_matrix3(rng);
    const double s = matrix_scale(m);
    const Vec lam = eigs3(m).values;
    const Complex d01 = lam(0) - lam(1), d12 = lam(1) - lam(2), d20 = lam(2) - lam(0);
    const Complex prod = d01 * d01 * d12 * d12 * d20 * d20;
    const Complex d = discriminant(m);
    const double s6 = std::pow(s, 6);
    worst = std::max(worst, std::abs(d + prod / 108.0) / s6);
    const double gap = std::min({std::abs(d01), std::abs(d12), std::abs(d20)});
    if (gap > 0) min_ratio = std::min(min_ratio, std::abs(d) / (gap * gap));
  }
  rep.require(worst <= 1e-10, "proportionality residual " + std::to_string(worst));
  rep.require(min_ratio >= 1e-5, "discriminant not bounded away from zero");
  std::ostringstream os;
  os << "D = -prod/108 to " << worst << " (relative); min |D|/gap^2 = " << min_ratio;
  rep.note(os.str());
  return {"criterion-8b-discriminant-bruteforce", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_homotopy_invariance() {
  Reporter rep;
  const auto all = bench_eps_widened();
  const HamiltonianFamily fam = paper_3x3();

  struct Case {
    std::string name;
    std::vector<ParameterLoop> shapes;
    std::vector<Params> targets;  // enclosed EPs
  };

  ParameterLoop hexagon2;
  hexagon2.vertices = {{0.93, 1.80}, {1.40, 1.58}, {2.30, 1.58},
                       {2.45, 1.80}, {2.00, 2.04}, {1.00, 2.04}};
  hexagon2.samples_per_segment = 160;

  ParameterLoop hexagon3;
  hexagon3.vertices = {{0.92, 1.83}, {1.60, 1.53}, {2.80, 1.53},
                       {3.32, 1.90}, {2.90, 2.22}, {1.02, 2.15}};
  hexagon3.samples_per_segment = 160;

  ParameterLoop triangle0;
  triangle0.vertices = {{0.50, 1.62}, {0.90, 1.62}, {0.70, 2.10}};
  triangle0.samples_per_segment = 160;

  const Params ep1 = kBenchEPs[0];
  std::vector<Case> cases;
  cases.push_back({"single EP",
                   {circle_loop(ep1, 0.15, 384),
                    rectangle_loop(ep1.alpha - 0.2, ep1.beta - 0.12, ep1.alpha + 0.2,
                                   ep1.beta + 0.12, 128),
                    [&] {
                      ParameterLoop diamond;
                      diamond.vertices = {{ep1.alpha - 0.18, ep1.beta},
                                          {ep1.alpha, ep1.beta - 0.11},
                                          {ep1.alpha + 0.18, ep1.beta},
                                          {ep1.alpha, ep1.beta + 0.11}};
                      diamond.samples_per_segment = 128;
                      return diamond;
                    }()},
                   {ep1}});
  cases.push_back({"two EPs",
                   {two_ep_rectangle(), rectangle_loop(0.85, 1.60, 2.50, 2.02, 384), hexagon2},
                   {kBenchEPs[0], kBenchEPs[1]}});
  cases.push_back({"three EPs",
                   {three_ep_rectangle(), rectangle_loop(0.95, 1.55, 3.25, 2.28, 384), hexagon3},
                   {kBenchEPs[0], kBenchEPs[1], kBenchEPs[2]}});
  cases.push_back({"no EP",
                   {rectangle_loop(0.5, 1.6, 0.9, 2.1, 128), circle_loop({0.7, 1.85}, 0.2, 384),
                    triangle0},
                   {}});

  TrackOptions opts;
  opts.track_vectors = true;
  for (const Case& c : cases) {
    std::vector<size_t> first_type;
    for (size_t si = 0; si < c.shapes.size(); ++si) {
      std::vector<int> enclosed;
      for (size_t i = 0; i < all.size(); ++i)
        for (const Params& t : c.targets)
          if (distance(all[i].location, t) < 1e-2) {
            if (std::find(enclosed.begin(), enclosed.end(), static_cast<int>(i)) ==
                enclosed.end())
              enclosed.push_back(static_cast<int>(i));
          }
      std::string geom;
      if (!check_enclosure(c.shapes[si], all, enclosed, geom)) {
        rep.require(false, c.name + " shape " + std::to_string(si) + ": " + geom);
        continue;
      }
      const TrackResult t = track(fam, c.shapes[si], opts);
      std::vector<size_t> type;
      for (const auto& orbit : cycles(t.signature.sp)) type.push_back(orbit.size());
      std::sort(type.begin(), type.end());
      if (si == 0)
        first_type = type;
      else
        rep.require(type == first_type, c.name + ": cycle type differs between shapes");
      if (c.targets.empty()) {
        rep.require(t.signature.sp.is_identity(), "no-EP loop is not the identity with + signs");
        rep.require(t.signs_reliable, "no-EP loop signs not quantizable");
      }
    }
  }
  rep.note("cycle types agree across 3 shapes for each of 4 EP subsets");
  return {"criterion-8c-homotopy-invariance", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_discretization_doubling() {
  Reporter rep;
  TrackOptions opts;
  opts.track_vectors = true;
  const TrackResult coarse = track(paper_3x3(), two_ep_rectangle(256), opts);
  const TrackResult fine = track(paper_3x3(), two_ep_rectangle(512), opts);
  rep.require(coarse.signature == fine.signature,
              "doubling samples_per_segment changed the signature");
  rep.note("signature stable under sample doubling: " + cycle_notation(fine.signature.sp));
  return {"criterion-8d-discretization-doubling", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_orientation_inversion() {
  Reporter rep;
  TrackOptions opts;
  opts.track_vectors = true;
  ParameterLoop fwd = two_ep_rectangle();
  ParameterLoop bwd = fwd;
  bwd.positive_orientation = false;
  const TrackResult a = track(paper_3x3(), fwd, opts);
  const TrackResult b = track(paper_3x3(), bwd, opts);
  rep.require(b.signature.sp.perm == inverse(a.signature.sp).perm,
              "reversed loop is not the inverse permutation");
  rep.require(a.signature.order_permutation == b.signature.order_permutation &&
                  a.signature.order_signed == b.signature.order_signed,
              "orders differ between orientations");
  rep.note("reverse = inverse, orders match");
  return {"criterion-8e-orientation-inversion", rep.ok, rep.os.str(), 0.0};
}

CheckResult check_no_ep_identity() {
  Reporter rep;
  TrackOptions opts;
  opts.track_vectors = true;
  const TrackResult t = track(paper_3x3(), rectangle_loop(0.5, 1.6, 0.9, 2.1, 128), opts);
  rep.require(t.signature.sp.is_identity(), "permutation or signs differ from identity");
  rep.require(t.signs_reliable, "signs were not quantizable");
  rep.note("identity with all +1 signs, quantization error " +
           std::to_string(t.sign_quantization_error));
  return {"criterion-8f-no-ep-identity", rep.ok, rep.os.str(), 0.0};
}

struct Registered {
  const char* name;
  double budget_seconds;
  CheckResult (*fn)();
};

const Registered kChecks[] = {
    {"criterion-1-ep-coordinates", 10.0, check_ep_coordinates},
    {"criterion-2-single-ep-exchange", 1.0, check_single_ep_exchange},
    {"criterion-3-two-ep-three-cycle", 30.0, check_two_ep_three_cycle},
    {"criterion-4-three-ep-transposition", 30.0, check_three_ep_transposition},
    {"criterion-5-tep-cyclic-shift", 5.0, check_tep_cyclic_shift},
    {"criterion-6-four-mode-algebra", 0.1, check_four_mode_algebra},
    {"criterion-7-algebra-exhaustive", 0.1, check_algebra_exhaustive},
    {"criterion-8a-vieta-residual", 60.0, check_vieta_residual},
    {"criterion-8b-discriminant-bruteforce", 60.0, check_discriminant_bruteforce},
    {"criterion-8c-homotopy-invariance", 60.0, check_homotopy_invariance},
    {"criterion-8d-discretization-doubling", 60.0, check_discretization_doubling},
    {"criterion-8e-orientation-inversion", 60.0, check_orientation_inversion},
    {"criterion-8f-no-ep-identity", 60.0, check_no_ep_identity},
};

}  // namespace

std::vector<CheckResult> run_verification(const std::string& only_filter) {
  std::vector<CheckResult> results;
  double suite8_seconds = 0.0;
  for (const Registered& reg : kChecks) {
    if (!only_filter.empty() &&
        std::string(reg.name).find(only_filter) == std::string::npos)
      continue;
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = reg.fn();
    } catch (const std::exception& e) {
      r.name = reg.name;
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool is_suite8 = std::string(reg.name).find("criterion-8") != std::string::npos;
    if (is_suite8) {
      suite8_seconds += r.seconds;
      if (suite8_seconds > reg.budget_seconds && r.pass) {
        r.pass = false;
        r.detail += "; property-suite runtime budget (60 s total) exceeded";
      }
    } else if (r.seconds > reg.budget_seconds && r.pass) {
      r.pass = false;
      r.detail += "; runtime budget (" + std::to_string(reg.budget_seconds) + " s) exceeded";
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace epk

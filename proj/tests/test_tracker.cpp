#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "epkit/family.hpp"
#include "epkit/tracker.hpp"
#include "oracles.hpp"

using namespace epk;

namespace {

TrackOptions with_vectors() {
  TrackOptions o;
  o.track_vectors = true;
  return o;
}

bool is_transposition(const SignedPermutation& s) {
  int moved = 0;
  for (int i = 0; i < s.n; ++i) moved += s.perm[i] != i;
  return moved == 2;
}

bool is_three_cycle(const SignedPermutation& s) {
  const auto orbits = cycles(s);
  return orbits.size() == 1 && orbits[0].size() == 3;
}

std::vector<int> oracle_permutation(const HamiltonianFamily& f, const ParameterLoop& loop,
                                    int samples_per_segment, const Vec& reference_labels) {
  auto matrix_at = [&](double t) { return f.evaluate(loop.point_at(t)); };
  return oracle::dense_track_permutation(
      matrix_at, samples_per_segment * loop.segment_count(), reference_labels);
}

}  // namespace

TEST_CASE("a loop around the two-mode EP swaps the branches") {
  const TrackResult t = track(paper_2x2(), circle_loop({0, 0}, 1.0, 128));
  CHECK(t.signature.sp.perm == std::vector<int>({1, 0}));
  CHECK(t.signature.order_permutation == 2);
  CHECK(!t.signature.order_signed.has_value());
}

TEST_CASE("with vector transport the two-mode EP has signed order 4") {
  const TrackResult t = track(paper_2x2(), circle_loop({0, 0}, 1.0, 256), with_vectors());
  CHECK(t.signature.sp.perm == std::vector<int>({1, 0}));
  REQUIRE(t.signature.order_signed.has_value());
  CHECK(*t.signature.order_signed == 4);
  CHECK(t.signs_reliable);
  CHECK(t.signature.sp.signs[0] * t.signature.sp.signs[1] == -1);
}

TEST_CASE("two traversals accumulate to minus the identity") {
  const TrackResult t = track(paper_2x2(), circle_loop({0, 0}, 1.0, 256, 2), with_vectors());
  REQUIRE(t.per_cycle.size() == 2);
  const SignedPermutation& sq = t.per_cycle[1].sp;
  CHECK(sq.perm == std::vector<int>({0, 1}));
  CHECK(sq.signs == std::vector<int>({-1, -1}));
}

TEST_CASE("the quantized signature does not depend on the loop radius") {
  for (double radius : {0.37, 1.0, 2.3}) {
    const TrackResult t =
        track(paper_2x2(), circle_loop({0, 0}, radius, 256), with_vectors());
    CHECK(t.signature.sp.perm == std::vector<int>({1, 0}));
    CHECK(*t.signature.order_signed == 4);
    CHECK(t.sign_quantization_error < 0.1);
  }
}

TEST_CASE("a small circle around one bench EP transposes the coalescing pair") {
  const HamiltonianFamily f = paper_3x3();
  const EPRecord ep = refine_ep(f, {1.04, 1.95});
  const TrackResult t = track(f, circle_loop(ep.location, 0.1, 256), with_vectors());
  CHECK(is_transposition(t.signature.sp));
  CHECK(t.signature.order_permutation == 2);
  CHECK(*t.signature.order_signed == 4);  // single EP: signed swap
  // the untouched mode keeps a clean +1
  for (int i = 0; i < 3; ++i)
    if (t.signature.sp.perm[i] == i) CHECK(t.signature.sp.signs[i] == 1);
}

TEST_CASE("rectangle around the first two bench EPs yields a 3-cycle") {
  const HamiltonianFamily f = paper_3x3();
  const ParameterLoop loop = rectangle_loop(0.9, 1.55, 2.4, 2.00, 256);

  // dense-sampling oracle at 1e4 samples per segment confirms the geometry
  const auto windings = {oracle::winding_number(
                             [&](double t) { return loop.point_at(t); }, {1.041, 1.948}),
                         oracle::winding_number(
                             [&](double t) { return loop.point_at(t); }, {2.072, 1.686}),
                         oracle::winding_number(
                             [&](double t) { return loop.point_at(t); }, {2.959, 2.052})};
  CHECK(std::vector<int>(windings) == std::vector<int>({1, 1, 0}));

  const TrackResult t = track(f, loop, with_vectors());
  CHECK(is_three_cycle(t.signature.sp));
  CHECK(t.signature.order_permutation == 3);
  CHECK(*t.signature.order_signed == 3);  // geometric phases cancel over three cycles

  CHECK(oracle_permutation(f, loop, 10000, t.base_values) == t.signature.sp.perm);
}

TEST_CASE("rectangle around all three bench EPs yields a transposition") {
  const HamiltonianFamily f = paper_3x3();
  const ParameterLoop loop = rectangle_loop(1.0, 1.50, 3.3, 2.25, 256);
  const TrackResult t = track(f, loop, with_vectors());
  CHECK(is_transposition(t.signature.sp));
  CHECK(t.signature.order_permutation == 2);
  const int so = t.signature.order_signed.value_or(0);
  CHECK((so == 2 || so == 4));
  CHECK(oracle_permutation(f, loop, 10000, t.base_values) == t.signature.sp.perm);
}

TEST_CASE("tracked loops close: first and last samples agree") {
  const HamiltonianFamily f = paper_3x3();
  const TrackResult t = track(f, rectangle_loop(0.9, 1.55, 2.4, 2.00, 128));
  const auto& first = t.samples.front();
  const auto& last = t.samples.back();
  CHECK(first.first == last.first);
  // same multiset, permuted order
  double cost = 0;
  for (int i = 0; i < 3; ++i)
    cost += std::abs(last.second.values(i) - first.second.values(t.signature.sp.perm[i]));
  CHECK(cost < 1e-9 * matrix_scale(f.evaluate(first.first)));
}

TEST_CASE("doubling the sampling leaves the signature unchanged") {
  const HamiltonianFamily f = paper_3x3();
  const TrackResult a = track(f, rectangle_loop(0.9, 1.55, 2.4, 2.00, 128), with_vectors());
  const TrackResult b = track(f, rectangle_loop(0.9, 1.55, 2.4, 2.00, 256), with_vectors());
  CHECK(a.signature == b.signature);
}

TEST_CASE("reversing orientation inverts the permutation") {
  const HamiltonianFamily f = paper_3x3();
  ParameterLoop fwd = rectangle_loop(0.9, 1.55, 2.4, 2.00, 192);
  ParameterLoop bwd = fwd;
  bwd.positive_orientation = false;
  const TrackResult a = track(f, fwd, with_vectors());
  const TrackResult b = track(f, bwd, with_vectors());
  CHECK(b.signature.sp.perm == inverse(a.signature.sp).perm);
  CHECK(a.signature.order_permutation == b.signature.order_permutation);
  CHECK(a.signature.order_signed == b.signature.order_signed);
}

TEST_CASE("multi-cycle tracking composes the one-cycle signature") {
  const HamiltonianFamily f = paper_3x3();
  const TrackResult t = track(f, rectangle_loop(0.9, 1.55, 2.4, 2.00, 192, 6), with_vectors());
  REQUIRE(t.per_cycle.size() == 6);
  for (int k = 0; k < 6; ++k)
    CHECK(t.per_cycle[k] == pow_signature(t.signature, k + 1));
  CHECK(t.per_cycle[2].sp.is_identity());  // order 3 including signs
  CHECK(t.per_cycle[5].sp.is_identity());
}

TEST_CASE("a loop with no EP inside is the identity with clean signs") {
  const TrackResult t =
      track(paper_3x3(), rectangle_loop(0.5, 1.6, 0.9, 2.1, 128), with_vectors());
  CHECK(t.signature.sp.is_identity());
  CHECK(t.signs_reliable);
  CHECK(t.sign_quantization_error < 0.05);
}

TEST_CASE("a loop passing through an EP is rejected up front") {
  const HamiltonianFamily f = paper_3x3();
  const EPRecord ep = refine_ep(f, {1.04, 1.95});
  const ParameterLoop through =
      circle_loop({ep.location.alpha - 0.1, ep.location.beta}, 0.1, 64);
  try {
    (void)track(f, through);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LoopTooCloseToEP);
  }
}

TEST_CASE("without the precheck the same loop fails as ambiguous matching") {
  const HamiltonianFamily f = paper_3x3();
  const EPRecord ep = refine_ep(f, {1.04, 1.95});
  ParameterLoop through = circle_loop({ep.location.alpha - 0.1, ep.location.beta}, 0.1, 64);
  TrackOptions opts;
  opts.skip_ep_precheck = true;
  try {
    (void)track(f, through, opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguousMatching);
  }
}

TEST_CASE("TEP loop shifts the three modes cyclically") {
  const HamiltonianFamily f = tep_3x3(1e-3);
  const TrackResult t = track(f, circle_loop({0, 0}, 0.5, 256, 3), with_vectors());
  CHECK(is_three_cycle(t.signature.sp));
  CHECK(t.signature.order_permutation == 3);
  CHECK(*t.signature.order_signed == 3);
  CHECK(t.per_cycle[2].sp.is_identity());

  ParameterLoop reversed = circle_loop({0, 0}, 0.5, 256);
  reversed.positive_orientation = false;
  const TrackResult r = track(f, reversed);
  CHECK(r.signature.sp.perm == inverse(t.signature.sp).perm);
}

TEST_CASE("holonomy_of echoes the measured signature") {
  const TrackResult t = track(paper_2x2(), circle_loop({0, 0}, 1.0, 128));
  const HolonomySignature s = holonomy_of(t);
  CHECK(s == t.signature);
  CHECK(s.order_permutation == 2);
}

TEST_CASE("sheet surface of a constant family is flat and unflagged") {
  Mat base = Mat::Zero(3, 3);
  base(0, 0) = Complex(1, 0);
  base(1, 1) = Complex(0, 2);
  base(2, 2) = Complex(3, -1);
  const HamiltonianFamily f = custom_affine(base, Mat::Zero(3, 3), Mat::Zero(3, 3));
  Region r{-1, 1, -1, 1, 21, 21};
  const SheetSurface sheet = sheet_surface(f, r, Axis::Alpha);
  for (auto flag : sheet.scanline_fallback) CHECK(flag == 0);
  for (int ib = 0; ib < r.grid_beta; ++ib)
    for (int ia = 0; ia < r.grid_alpha; ++ia)
      for (int c = 0; c < 3; ++c) CHECK(sheet.at(ia, ib)[c] == sheet.at(0, 0)[c]);
}

TEST_CASE("two-mode sheets meet at the origin with a square-root profile") {
  Region r{-1, 1, -1, 1, 41, 41};
  const SheetSurface sheet = sheet_surface(paper_2x2(), r, Axis::Alpha);
  // gap along the beta = 0 scanline right of the EP
  auto gap = [&](int ia) { return std::abs(sheet.at(ia, 20)[0] - sheet.at(ia, 20)[1]); };
  CHECK(gap(20) < 1e-12);
  CHECK(gap(40) / gap(30) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("an EP sitting exactly on a grid node flags its scanline only") {
  const HamiltonianFamily f = paper_3x3();
  const EPRecord ep = refine_ep(f, {1.04, 1.95});
  // odd grids center a node exactly on the EP
  Region r{ep.location.alpha - 0.2, ep.location.alpha + 0.2, ep.location.beta - 0.1,
           ep.location.beta + 0.1, 41, 21};
  const SheetSurface sheet = sheet_surface(f, r, Axis::Alpha);
  CHECK(sheet.scanline_fallback[10] == 1);
  int flagged = 0;
  for (auto flag : sheet.scanline_fallback) flagged += flag != 0;
  CHECK(flagged <= 3);
}

TEST_CASE("bench-family sheets carry three connected branches") {
  Region r{0.4, 3.5, 1.6, 2.2, 87, 40};
  const SheetSurface sheet = sheet_surface(paper_3x3(), r, Axis::Alpha);
  CHECK(sheet.n == 3);
  int flagged = 0;
  for (auto flag : sheet.scanline_fallback) flagged += flag != 0;
  CHECK(flagged <= 3);  // only scanlines passing essentially through an EP
  // along each unflagged scanline consecutive values stay close (continuity)
  for (int ib = 0; ib < r.grid_beta; ++ib) {
    if (sheet.scanline_fallback[ib]) continue;
    for (int ia = 1; ia < r.grid_alpha; ++ia)
      for (int c = 0; c < 3; ++c)
        CHECK(std::abs(sheet.at(ia, ib)[c] - sheet.at(ia - 1, ib)[c]) < 0.6);
  }
}

TEST_CASE("loop validation") {
  ParameterLoop empty;
  CHECK_THROWS_AS(empty.validate(), Error);
  ParameterLoop two;
  two.vertices = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(two.validate(), Error);
  ParameterLoop circle = circle_loop({0, 0}, -1.0);
  CHECK_THROWS_AS(circle.validate(), Error);
  ParameterLoop bad_cycles = circle_loop({0, 0}, 1.0, 64, 0);
  CHECK_THROWS_AS(bad_cycles.validate(), Error);
}

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "epkit/eigensolve.hpp"
#include "epkit/family.hpp"
#include "epkit/holonomy.hpp"
#include "epkit/locator.hpp"
#include "epkit/loop.hpp"

namespace epk {

/// Signed permutation measured after closed-loop continuation, with the
/// number of traversals needed to restore the mode configuration (ignoring
/// and including the geometric-phase signs).
struct HolonomySignature {
  SignedPermutation sp;
  bool has_signs = false;
  int order_permutation = 1;
  std::optional<int> order_signed;

  friend bool operator==(const HolonomySignature&, const HolonomySignature&) = default;
};

HolonomySignature make_signature(const SignedPermutation& sp, bool has_signs);

inline HolonomySignature compose_signatures(const HolonomySignature& a,
                                            const HolonomySignature& b) {
  return make_signature(compose(a.sp, b.sp), a.has_signs && b.has_signs);
}

HolonomySignature pow_signature(const HolonomySignature& s, int k);

struct TrackOptions {
  bool track_vectors = false;
  bool skip_ep_precheck = false;
  double exclusion_radius = 1e-3;  // minimum loop distance to any located EP
  int max_bisection_depth = 24;
  double match_threshold = 0.3;  // accepted step cost < threshold * min gap
  double sign_quantization_tolerance = 0.35;
};

struct TrackResult {
  std::vector<std::pair<Params, EigenSet>> samples;  // traversal order, branch-ordered values
  HolonomySignature signature;                       // after one cycle
  std::vector<HolonomySignature> per_cycle;          // cumulative, per completed cycle
  int refinements = 0;                               // adaptive subdivisions
  Vec base_values;                                   // reference mode labels at the base point
  bool signs_reliable = true;
  double sign_quantization_error = 0.0;

  const std::vector<int>& permutation() const { return signature.sp.perm; }
};

/// Continue eigenvalue branches (and, on request, biorthogonal eigenvector
/// frames) around the loop and measure the holonomy.
TrackResult track(const HamiltonianFamily& f, const ParameterLoop& loop,
                  const TrackOptions& opts = {});

inline HolonomySignature holonomy_of(const TrackResult& t) { return t.signature; }

enum class Axis { Alpha, Beta };

/// Eigenvalue sheets over a region: branches are continued independently
/// along each scanline of the chosen axis; scanlines that cannot be matched
/// unambiguously fall back to sort-by-real-part and are flagged.
struct SheetSurface {
  Region region;
  Axis axis = Axis::Alpha;
  int n = 0;
  std::vector<Complex> values;  // node-major [ib * grid_alpha + ia], n values per node
  std::vector<std::uint8_t> scanline_fallback;  // per scanline of the chosen axis

  const Complex* at(int ia, int ib) const {
    return values.data() + (static_cast<size_t>(ib) * region.grid_alpha + ia) * n;
  }
  bool node_flagged(int ia, int ib) const {
    return scanline_fallback[axis == Axis::Alpha ? ib : ia] != 0;
  }
};

SheetSurface sheet_surface(const HamiltonianFamily& f, const Region& r, Axis axis);

}  // namespace epk

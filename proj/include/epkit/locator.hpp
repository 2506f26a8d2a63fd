#pragma once

#include <array>
#include <optional>
#include <vector>

#include "epkit/family.hpp"
#include "epkit/types.hpp"

namespace epk {

/// Rectangular search window with grid resolution.
struct Region {
  double alpha_min = 0.0, alpha_max = 1.0;
  double beta_min = 0.0, beta_max = 1.0;
  int grid_alpha = 200, grid_beta = 120;

  void validate() const {
    if (!(alpha_min < alpha_max) || !(beta_min < beta_max))
      throw Error(ErrorKind::InvalidInput, "Region: min must be below max on both axes");
    if (grid_alpha < 2 || grid_beta < 2)
      throw Error(ErrorKind::InvalidInput, "Region: grid sizes must be at least 2");
  }

  bool contains(Params p) const {
    return p.alpha >= alpha_min && p.alpha <= alpha_max && p.beta >= beta_min &&
           p.beta <= beta_max;
  }

  Region inflated(double factor) const {
    const double ca = (alpha_min + alpha_max) / 2, cb = (beta_min + beta_max) / 2;
    const double ha = (alpha_max - alpha_min) / 2 * factor;
    const double hb = (beta_max - beta_min) / 2 * factor;
    Region r = *this;
    r.alpha_min = ca - ha;
    r.alpha_max = ca + ha;
    r.beta_min = cb - hb;
    r.beta_max = cb + hb;
    return r;
  }

  double alpha_at(int ia) const {
    return alpha_min + (alpha_max - alpha_min) * ia / (grid_alpha - 1);
  }
  double beta_at(int ib) const {
    return beta_min + (beta_max - beta_min) * ib / (grid_beta - 1);
  }
};

/// A refined exceptional point.
struct EPRecord {
  Params location;
  double residual = 0.0;                  // |D| at convergence
  std::array<int, 2> coalescing_pair{0, 1};  // indices of the two closest eigenvalues
  double min_gap = 0.0;                   // smallest eigenvalue separation at location
  int newton_iterations = 0;
};

/// Grid fields used for seeding and for branch-cut visualization:
/// per node the minimum eigenvalue gap and |discriminant|. Node (ia, ib) is
/// stored at index ib * grid_alpha + ia (beta-major rows).
struct GapField {
  Region region;
  std::vector<double> min_gap;
  std::vector<double> abs_discriminant;

  double gap_at(int ia, int ib) const { return min_gap[ib * region.grid_alpha + ia]; }
  double disc_at(int ia, int ib) const {
    return abs_discriminant[ib * region.grid_alpha + ia];
  }
};

GapField gap_field(const HamiltonianFamily& f, const Region& r);

/// Grid points that are strict local minima of |D| over their 8-neighborhood,
/// sorted ascending by |D|. Interior nodes only.
std::vector<Params> scan_seeds(const HamiltonianFamily& f, const Region& r);

/// Newton iteration on (Re D, Im D) from a seed. Converges when
/// |D| <= 1e-12 * scale^n or the step drops below 1e-10. When
/// `escape_region` is given, leaving its 2x inflation aborts the iteration.
EPRecord refine_ep(const HamiltonianFamily& f, Params seed,
                   std::optional<Region> escape_region = std::nullopt);

/// Scan, refine every seed, keep converged EPs inside the region, and merge
/// duplicates closer than 1e-4 in parameter distance (lower residual wins).
/// Results are sorted by (alpha, beta).
std::vector<EPRecord> locate_all(const HamiltonianFamily& f, const Region& r);

}  // namespace epk

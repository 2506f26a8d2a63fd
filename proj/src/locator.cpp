#include "epkit/locator.hpp"

#include <algorithm>
#include <cmath>

#include "epkit/eigensolve.hpp"

namespace epk {

namespace {

double disc_tolerance(const HamiltonianFamily& f, const Mat& m) {
  // The discriminant is a polynomial in the entries: cubic-resolvent degree
  // for n = 3, quadratic for n = 2.
  const double s = matrix_scale(m);
  return f.n == 3 ? 1e-12 * s * s * s : 1e-12 * s * s;
}

std::pair<std::array<int, 2>, double> closest_pair(const Vec& values) {
  std::array<int, 2> pair{0, 1};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < values.size(); ++i)
    for (int j = i + 1; j < values.size(); ++j) {
      const double d = std::abs(values(i) - values(j));
      if (d < best) {
        best = d;
        pair = {i, j};
      }
    }
  return {pair, best};
}

}  // namespace

GapField gap_field(const HamiltonianFamily& f, const Region& r) {
  r.validate();
  GapField out;
  out.region = r;
  out.min_gap.resize(static_cast<size_t>(r.grid_alpha) * r.grid_beta);
  out.abs_discriminant.resize(out.min_gap.size());
  for (int ib = 0; ib < r.grid_beta; ++ib) {
    for (int ia = 0; ia < r.grid_alpha; ++ia) {
      const Mat m = f.evaluate({r.alpha_at(ia), r.beta_at(ib)});
      const size_t idx = static_cast<size_t>(ib) * r.grid_alpha + ia;
      out.min_gap[idx] = closest_pair(eigs(m).values).second;
      out.abs_discriminant[idx] = std::abs(discriminant(m));
    }
  }
  return out;
}

std::vector<Params> scan_seeds(const HamiltonianFamily& f, const Region& r) {
  const GapField field = gap_field(f, r);
  std::vector<std::pair<double, Params>> found;
  for (int ib = 1; ib < r.grid_beta - 1; ++ib) {
    for (int ia = 1; ia < r.grid_alpha - 1; ++ia) {
      const double v = field.disc_at(ia, ib);
      bool strict_min = true;
      for (int db = -1; db <= 1 && strict_min; ++db)
        for (int da = -1; da <= 1; ++da) {
          if (da == 0 && db == 0) continue;
          if (v >= field.disc_at(ia + da, ib + db)) {
            strict_min = false;
            break;
          }
        }
      if (strict_min) found.push_back({v, {r.alpha_at(ia), r.beta_at(ib)}});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Params> seeds;
  seeds.reserve(found.size());
  for (auto& [v, p] : found) seeds.push_back(p);
  return seeds;
}

EPRecord refine_ep(const HamiltonianFamily& f, Params seed, std::optional<Region> escape_region) {
  require_finite_params(seed, "refine_ep");
  const std::optional<Region> fence =
      escape_region ? std::optional<Region>(escape_region->inflated(2.0)) : std::nullopt;

  Params x = seed;
  auto disc_at = [&](Params p) { return discriminant(f.evaluate(p)); };

  Complex d = disc_at(x);
  int iter = 0;
  for (; iter < 100; ++iter) {
    if (fence && !fence->contains(x))
      throw Error(ErrorKind::EscapedRegion, "refine_ep: iterate left the inflated region");
    const Mat m = f.evaluate(x);
    const double tol = disc_tolerance(f, m);
    if (std::abs(d) <= tol) break;

    const double ha = 1e-6 * std::max(1.0, std::abs(x.alpha));
    const double hb = 1e-6 * std::max(1.0, std::abs(x.beta));
    const Complex da =
        (disc_at({x.alpha + ha, x.beta}) - disc_at({x.alpha - ha, x.beta})) / (2 * ha);
    const Complex db =
        (disc_at({x.alpha, x.beta + hb}) - disc_at({x.alpha, x.beta - hb})) / (2 * hb);

    // Solve the real 2x2 system J * step = -(Re d, Im d).
    const double j00 = da.real(), j01 = db.real(), j10 = da.imag(), j11 = db.imag();
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det))
      throw Error(ErrorKind::NoConvergence, "refine_ep: singular Jacobian");
    double sa = (-d.real() * j11 + d.imag() * j01) / det;
    double sb = (d.real() * j10 - d.imag() * j00) / det;

    // Damped update: halve until |D| decreases (at most 8 times).
    Params next = x;
    Complex dnext = d;
    double lambda = 1.0;
    for (int h = 0; h <= 8; ++h) {
      next = {x.alpha + lambda * sa, x.beta + lambda * sb};
      dnext = disc_at(next);
      if (std::abs(dnext) < std::abs(d)) break;
      lambda /= 2;
    }
    const double step = std::hypot(next.alpha - x.alpha, next.beta - x.beta);
    x = next;
    d = dnext;
    if (step < 1e-10) {
      ++iter;
      break;
    }
  }

  const Mat m = f.evaluate(x);
  if (std::abs(d) > disc_tolerance(f, m))
    throw Error(ErrorKind::NoConvergence, "refine_ep: no convergence after 100 iterations");

  EPRecord rec;
  rec.location = x;
  rec.residual = std::abs(d);
  rec.newton_iterations = iter;
  auto [pair, gap] = closest_pair(eigs(m).values);
  rec.coalescing_pair = pair;
  rec.min_gap = gap;
  return rec;
}

std::vector<EPRecord> locate_all(const HamiltonianFamily& f, const Region& r) {
  std::vector<EPRecord> records;
  for (const Params& seed : scan_seeds(f, r)) {
    EPRecord rec;
    try {
      rec = refine_ep(f, seed, r);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::EscapedRegion)
        continue;  // spurious grid minimum
      throw;
    }
    if (!r.contains(rec.location)) continue;

    bool merged = false;
    for (auto& kept : records) {
      if (distance(kept.location, rec.location) < 1e-4) {
        if (rec.residual < kept.residual) kept = rec;
        merged = true;
        break;
      }
    }
    if (!merged) records.push_back(rec);
  }
  std::sort(records.begin(), records.end(), [](const EPRecord& a, const EPRecord& b) {
    return a.location.alpha != b.location.alpha ? a.location.alpha < b.location.alpha
                                                : a.location.beta < b.location.beta;
  });
  return records;
}

}  // namespace epk

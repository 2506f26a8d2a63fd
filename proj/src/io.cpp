#include "epkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace epk {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object())
    throw Error(ErrorKind::ConfigError, std::string(what) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error(ErrorKind::ConfigError,
                  std::string(what) + ": unexpected key \"" + it.key() + "\"");
}

double get_number(const Json& j, const std::string& key, const char* what) {
  if (!j.contains(key))
    throw Error(ErrorKind::ConfigError, std::string(what) + ": missing key \"" + key + "\"");
  if (!j[key].is_number())
    throw Error(ErrorKind::ConfigError,
                std::string(what) + ": key \"" + key + "\" must be a number");
  return j[key].get<double>();
}

Complex parse_complex(const Json& j, const std::string& key, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::ConfigError,
                std::string(what) + ": key \"" + key + "\" must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat parse_matrix(const Json& j, const std::string& key, int n, const char* what) {
  if (!j.contains(key))
    throw Error(ErrorKind::ConfigError, std::string(what) + ": missing key \"" + key + "\"");
  const Json& rows = j[key];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw Error(ErrorKind::ConfigError,
                std::string(what) + ": key \"" + key + "\" must be an array of " +
                    std::to_string(n) + " rows");
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
      throw Error(ErrorKind::ConfigError,
                  std::string(what) + ": key \"" + key + "\" row " + std::to_string(r) +
                      " must hold " + std::to_string(n) + " [re, im] pairs");
    for (int c = 0; c < n; ++c) m(r, c) = parse_complex(rows[r][c], key, what);
  }
  return m;
}

Params parse_params(const Json& j, const std::string& key, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::ConfigError,
                std::string(what) + ": key \"" + key + "\" must be an [alpha, beta] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

void verify_matches_builtin(const Json& j, const HamiltonianFamily& built, const char* what) {
  for (const char* key : {"base", "grad_alpha", "grad_beta"}) {
    if (!j.contains(key)) continue;
    const Mat given = parse_matrix(j, key, built.n, what);
    if (given != (key == std::string("base")       ? built.base
                  : key == std::string("grad_alpha") ? built.grad_alpha
                                                     : built.grad_beta))
      throw Error(ErrorKind::ConfigError,
                  std::string(what) + ": key \"" + key +
                      "\" contradicts the builtin family definition");
  }
  if (j.contains("n") && j["n"].get<int>() != built.n)
    throw Error(ErrorKind::ConfigError,
                std::string(what) + ": key \"n\" contradicts the builtin family definition");
}

}  // namespace

Json family_to_json(const HamiltonianFamily& f) {
  Json j;
  j["kind"] = family_kind_name(f.kind);
  j["n"] = f.n;
  j["base"] = matrix_to_json(f.base);
  j["grad_alpha"] = matrix_to_json(f.grad_alpha);
  j["grad_beta"] = matrix_to_json(f.grad_beta);
  if (f.kind == FamilyKind::Tep3x3) j["epsilon"] = f.epsilon;
  if (f.kind == FamilyKind::Paper2x2) {
    j["e0"] = complex_to_json(f.e0);
    j["delta_scale"] = f.delta_scale;
  }
  return j;
}

HamiltonianFamily family_from_json(const Json& j) {
  static const char* what = "family descriptor";
  check_keys(j, {"kind", "n", "base", "grad_alpha", "grad_beta", "epsilon", "e0", "delta_scale"},
             what);
  if (!j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorKind::ConfigError, std::string(what) + ": missing key \"kind\"");
  const FamilyKind kind = family_kind_from_name(j["kind"].get<std::string>());

  auto reject = [&](const char* key) {
    if (j.contains(key))
      throw Error(ErrorKind::ConfigError, std::string(what) + ": key \"" + std::string(key) +
                                              "\" does not apply to this family kind");
  };

  switch (kind) {
    case FamilyKind::Paper3x3: {
      reject("epsilon");
      reject("e0");
      reject("delta_scale");
      HamiltonianFamily f = paper_3x3();
      verify_matches_builtin(j, f, what);
      return f;
    }
    case FamilyKind::Paper2x2: {
      reject("epsilon");
      Complex e0{0.0, 0.0};
      double ds = 1.0;
      if (j.contains("e0")) e0 = parse_complex(j["e0"], "e0", what);
      if (j.contains("delta_scale")) ds = get_number(j, "delta_scale", what);
      HamiltonianFamily f = paper_2x2(e0, ds);
      verify_matches_builtin(j, f, what);
      return f;
    }
    case FamilyKind::Tep3x3: {
      reject("e0");
      reject("delta_scale");
      const double eps = j.contains("epsilon") ? get_number(j, "epsilon", what) : 1e-3;
      HamiltonianFamily f = tep_3x3(eps);
      verify_matches_builtin(j, f, what);
      return f;
    }
    case FamilyKind::CustomAffine: {
      reject("epsilon");
      reject("e0");
      reject("delta_scale");
      const int n = static_cast<int>(get_number(j, "n", what));
      if (n != 2 && n != 3)
        throw Error(ErrorKind::ConfigError, std::string(what) + ": key \"n\" must be 2 or 3");
      for (const char* key : {"base", "grad_alpha", "grad_beta"})
        if (!j.contains(key))
          throw Error(ErrorKind::ConfigError,
                      std::string(what) + ": missing key \"" + key + "\"");
      const Mat base = parse_matrix(j, "base", n, what);
      const Mat ga = parse_matrix(j, "grad_alpha", n, what);
      const Mat gb = parse_matrix(j, "grad_beta", n, what);
      return custom_affine(base, ga, gb);
    }
  }
  throw Error(ErrorKind::ConfigError, std::string(what) + ": unknown kind");
}

HamiltonianFamily family_from_spec(const std::string& name_or_path) {
  if (name_or_path == "paper2x2") return paper_2x2();
  if (name_or_path == "paper3x3") return paper_3x3();
  if (name_or_path == "tep3x3") return tep_3x3();
  return family_from_json(parse_json(read_text_file(name_or_path), "family descriptor"));
}

Json loop_to_json(const ParameterLoop& loop) {
  Json j;
  if (loop.circle) {
    j["circle"] = Json{{"center", Json::array({loop.circle->center.alpha,
                                               loop.circle->center.beta})},
                       {"radius", loop.circle->radius}};
  } else {
    Json verts = Json::array();
    for (const Params& v : loop.vertices) verts.push_back(Json::array({v.alpha, v.beta}));
    j["vertices"] = std::move(verts);
  }
  j["samples_per_segment"] = loop.samples_per_segment;
  j["orientation"] = loop.positive_orientation ? "positive" : "negative";
  j["cycles"] = loop.cycles;
  return j;
}

ParameterLoop loop_from_json(const Json& j) {
  static const char* what = "loop";
  check_keys(j, {"vertices", "circle", "samples_per_segment", "orientation", "cycles"}, what);
  ParameterLoop loop;
  if (j.contains("circle")) {
    check_keys(j["circle"], {"center", "radius"}, "loop.circle");
    ParameterLoop::Circle c;
    if (!j["circle"].contains("center"))
      throw Error(ErrorKind::ConfigError, "loop.circle: missing key \"center\"");
    c.center = parse_params(j["circle"]["center"], "center", "loop.circle");
    c.radius = get_number(j["circle"], "radius", "loop.circle");
    loop.circle = c;
  } else if (j.contains("vertices")) {
    if (!j["vertices"].is_array())
      throw Error(ErrorKind::ConfigError, "loop: key \"vertices\" must be an array");
    for (const Json& v : j["vertices"])
      loop.vertices.push_back(parse_params(v, "vertices", what));
  } else {
    throw Error(ErrorKind::ConfigError, "loop: needs either \"vertices\" or \"circle\"");
  }
  if (j.contains("samples_per_segment"))
    loop.samples_per_segment = static_cast<int>(get_number(j, "samples_per_segment", what));
  if (j.contains("orientation")) {
    const std::string o = j["orientation"].is_string() ? j["orientation"].get<std::string>() : "";
    if (o != "positive" && o != "negative")
      throw Error(ErrorKind::ConfigError,
                  "loop: key \"orientation\" must be \"positive\" or \"negative\"");
    loop.positive_orientation = o == "positive";
  }
  if (j.contains("cycles")) loop.cycles = static_cast<int>(get_number(j, "cycles", what));
  loop.validate();
  return loop;
}

Json ep_records_to_json(const std::vector<EPRecord>& eps) {
  Json arr = Json::array();
  for (const EPRecord& ep : eps) {
    Json j;
    j["location"] = Json::array({ep.location.alpha, ep.location.beta});
    j["residual"] = ep.residual;
    j["coalescing_pair"] = Json::array({ep.coalescing_pair[0], ep.coalescing_pair[1]});
    j["min_gap"] = ep.min_gap;
    j["newton_iterations"] = ep.newton_iterations;
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_ep_records_csv(std::ostream& os, const std::vector<EPRecord>& eps) {
  os << "alpha,beta,residual,min_gap,pair_i,pair_j,newton_iterations\n";
  for (const EPRecord& ep : eps) {
    os << format17(ep.location.alpha) << ',' << format17(ep.location.beta) << ','
       << format17(ep.residual) << ',' << format17(ep.min_gap) << ',' << ep.coalescing_pair[0]
       << ',' << ep.coalescing_pair[1] << ',' << ep.newton_iterations << '\n';
  }
}

void write_gap_field_csv(std::ostream& os, const GapField& field) {
  os << "alpha,beta,min_gap,abs_discriminant\n";
  const Region& r = field.region;
  for (int ib = 0; ib < r.grid_beta; ++ib)
    for (int ia = 0; ia < r.grid_alpha; ++ia)
      os << format17(r.alpha_at(ia)) << ',' << format17(r.beta_at(ib)) << ','
         << format17(field.gap_at(ia, ib)) << ',' << format17(field.disc_at(ia, ib)) << '\n';
}

void write_sheet_csv(std::ostream& os, const SheetSurface& sheet) {
  os << "alpha,beta";
  for (int c = 1; c <= sheet.n; ++c) os << ",re" << c << ",im" << c;
  os << ",flag\n";
  const Region& r = sheet.region;
  for (int ib = 0; ib < r.grid_beta; ++ib) {
    for (int ia = 0; ia < r.grid_alpha; ++ia) {
      os << format17(r.alpha_at(ia)) << ',' << format17(r.beta_at(ib));
      const Complex* v = sheet.at(ia, ib);
      for (int c = 0; c < sheet.n; ++c)
        os << ',' << format17(v[c].real()) << ',' << format17(v[c].imag());
      os << ',' << (sheet.node_flagged(ia, ib) ? 1 : 0) << '\n';
    }
  }
}

namespace {

Json signature_orders_json(const HolonomySignature& s) {
  Json orders;
  orders["permutation"] = s.order_permutation;
  if (s.order_signed) orders["signed"] = *s.order_signed;
  return orders;
}

Json signature_to_json(const HolonomySignature& s) {
  Json j;
  j["permutation"] = s.sp.perm;
  if (s.has_signs) j["signs"] = s.sp.signs;
  j["orders"] = signature_orders_json(s);
  return j;
}

HolonomySignature signature_from_json(const Json& j, const char* what) {
  if (!j.contains("permutation") || !j["permutation"].is_array())
    throw Error(ErrorKind::ConfigError, std::string(what) + ": missing key \"permutation\"");
  SignedPermutation sp;
  sp.perm = j["permutation"].get<std::vector<int>>();
  sp.n = static_cast<int>(sp.perm.size());
  sp.signs.assign(sp.n, 1);
  bool has_signs = j.contains("signs");
  if (has_signs) sp.signs = j["signs"].get<std::vector<int>>();
  return make_signature(sp, has_signs);
}

}  // namespace

Json track_to_json(const TrackResult& t) {
  Json j;
  Json samples = Json::array();
  for (const auto& [p, es] : t.samples) {
    Json s;
    s["params"] = Json::array({p.alpha, p.beta});
    Json eigs = Json::array();
    for (int i = 0; i < es.values.size(); ++i)
      eigs.push_back(Json::array({es.values(i).real(), es.values(i).imag()}));
    s["eigs"] = std::move(eigs);
    samples.push_back(std::move(s));
  }
  j["samples"] = std::move(samples);
  j["permutation"] = t.signature.sp.perm;
  if (t.signature.has_signs) j["signs"] = t.signature.sp.signs;
  j["orders"] = signature_orders_json(t.signature);
  if (t.per_cycle.size() > 1) {
    Json pc = Json::array();
    for (const HolonomySignature& s : t.per_cycle) pc.push_back(signature_to_json(s));
    j["per_cycle"] = std::move(pc);
  }
  return j;
}

TrackResult track_from_json(const Json& j) {
  static const char* what = "track result";
  check_keys(j, {"samples", "permutation", "signs", "orders", "per_cycle"}, what);
  TrackResult t;
  if (!j.contains("samples") || !j["samples"].is_array())
    throw Error(ErrorKind::ConfigError, std::string(what) + ": missing key \"samples\"");
  for (const Json& s : j["samples"]) {
    Params p = parse_params(s.at("params"), "params", what);
    const Json& eig = s.at("eigs");
    EigenSet es;
    es.values = Vec(eig.size());
    for (size_t i = 0; i < eig.size(); ++i) es.values(i) = parse_complex(eig[i], "eigs", what);
    t.samples.push_back({p, std::move(es)});
  }
  t.signature = signature_from_json(j, what);
  if (j.contains("per_cycle"))
    for (const Json& s : j["per_cycle"]) t.per_cycle.push_back(signature_from_json(s, what));
  else
    t.per_cycle.push_back(t.signature);
  if (!t.samples.empty()) t.base_values = t.samples.front().second.values;
  return t;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open \"" + path + "\" for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open \"" + path + "\" for writing");
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "failed writing \"" + path + "\"");
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, what + ": " + e.what());
  }
}

}  // namespace epk

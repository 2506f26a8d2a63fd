// Command-line front end: locate exceptional points, track loops, export
// eigenvalue sheets, print the signed-permutation algebra tables, and run the
// verification suite. All output is machine-readable JSON/CSV.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "epkit/eigensolve.hpp"
#include "epkit/holonomy.hpp"
#include "epkit/io.hpp"
#include "epkit/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CommonArgs {
  std::string config_path;
  std::string family_spec;
  std::string region_spec;
  std::string grid_spec;
  std::string loop_path;
  std::string out_path;
  std::string field_out_path;
  std::string format;  // empty = take from config, else "json"
  std::string axis;    // empty = take from config, else "alpha"
  std::string only;
  std::string pairs_spec;
  int cycles = 0;  // 0 = not set
  int modes = 3;
  bool track_vectors = false;
  bool skip_precheck = false;
  bool signed_generators = false;
};

epk::Json load_config(const CommonArgs& a) {
  if (a.config_path.empty()) return epk::Json::object();
  epk::Json j = epk::parse_json(epk::read_text_file(a.config_path), "config");
  if (!j.is_object()) throw epk::Error(epk::ErrorKind::ConfigError, "config: expected an object");
  return j;
}

/// Flags win over config-file values.
std::string pick(const std::string& flag, const epk::Json& cfg, const char* key,
                 const std::string& fallback = "") {
  if (!flag.empty()) return flag;
  if (cfg.contains(key)) {
    if (cfg[key].is_string()) return cfg[key].get<std::string>();
    throw epk::Error(epk::ErrorKind::ConfigError,
                     std::string("config: key \"") + key + "\" must be a string");
  }
  return fallback;
}

epk::HamiltonianFamily resolve_family(const CommonArgs& a, const epk::Json& cfg) {
  if (!a.family_spec.empty()) return epk::family_from_spec(a.family_spec);
  if (cfg.contains("family")) {
    if (cfg["family"].is_string()) return epk::family_from_spec(cfg["family"].get<std::string>());
    return epk::family_from_json(cfg["family"]);
  }
  throw epk::Error(epk::ErrorKind::ConfigError, "no family given (use --family or config)");
}

epk::Region resolve_region(const CommonArgs& a, const epk::Json& cfg) {
  epk::Region r;
  bool have = false;
  if (!a.region_spec.empty()) {
    double v[4];
    if (std::sscanf(a.region_spec.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4)
      throw epk::Error(epk::ErrorKind::ConfigError,
                       "--region expects alpha_min,alpha_max,beta_min,beta_max");
    r.alpha_min = v[0];
    r.alpha_max = v[1];
    r.beta_min = v[2];
    r.beta_max = v[3];
    have = true;
  } else if (cfg.contains("region")) {
    const auto& jr = cfg["region"];
    if (!jr.is_array() || jr.size() != 4)
      throw epk::Error(epk::ErrorKind::ConfigError, "config: key \"region\" must hold 4 numbers");
    r.alpha_min = jr[0].get<double>();
    r.alpha_max = jr[1].get<double>();
    r.beta_min = jr[2].get<double>();
    r.beta_max = jr[3].get<double>();
    have = true;
  }
  if (!have)
    throw epk::Error(epk::ErrorKind::ConfigError, "no region given (use --region or config)");
  if (!a.grid_spec.empty()) {
    if (std::sscanf(a.grid_spec.c_str(), "%d,%d", &r.grid_alpha, &r.grid_beta) != 2)
      throw epk::Error(epk::ErrorKind::ConfigError, "--grid expects NA,NB");
  } else if (cfg.contains("grid")) {
    const auto& jg = cfg["grid"];
    if (!jg.is_array() || jg.size() != 2)
      throw epk::Error(epk::ErrorKind::ConfigError, "config: key \"grid\" must hold 2 integers");
    r.grid_alpha = jg[0].get<int>();
    r.grid_beta = jg[1].get<int>();
  }
  r.validate();
  return r;
}

epk::ParameterLoop resolve_loop(const CommonArgs& a, const epk::Json& cfg) {
  epk::ParameterLoop loop;
  if (!a.loop_path.empty())
    loop = epk::loop_from_json(epk::parse_json(epk::read_text_file(a.loop_path), "loop"));
  else if (cfg.contains("loop"))
    loop = epk::loop_from_json(cfg["loop"]);
  else
    throw epk::Error(epk::ErrorKind::ConfigError, "no loop given (use --loop or config)");
  if (a.cycles > 0) loop.cycles = a.cycles;
  else if (cfg.contains("cycles")) loop.cycles = cfg["cycles"].get<int>();
  loop.validate();
  return loop;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    epk::write_text_file(out_path, content);
}

int cmd_locate(const CommonArgs& a) {
  const epk::Json cfg = load_config(a);
  const auto family = resolve_family(a, cfg);
  const auto region = resolve_region(a, cfg);

  const auto eps = epk::locate_all(family, region);
  const std::string format = pick(a.format, cfg, "format", "json");
  std::ostringstream body;
  if (format == "csv") {
    epk::write_ep_records_csv(body, eps);
  } else if (format == "json") {
    body << epk::ep_records_to_json(eps).dump(2) << '\n';
  } else {
    throw epk::Error(epk::ErrorKind::ConfigError, "format must be \"json\" or \"csv\"");
  }
  emit(pick(a.out_path, cfg, "out"), body.str());

  const std::string field_out = pick(a.field_out_path, cfg, "field_out");
  if (!field_out.empty()) {
    std::ostringstream field;
    epk::write_gap_field_csv(field, epk::gap_field(family, region));
    epk::write_text_file(field_out, field.str());
  }
  std::cerr << "located " << eps.size() << " exceptional point(s)\n";
  return kExitOk;
}

int cmd_track(const CommonArgs& a) {
  const epk::Json cfg = load_config(a);
  const auto family = resolve_family(a, cfg);
  const auto loop = resolve_loop(a, cfg);

  epk::TrackOptions opts;
  opts.track_vectors = a.track_vectors || (cfg.contains("track_vectors") &&
                                           cfg["track_vectors"].get<bool>());
  opts.skip_ep_precheck = a.skip_precheck;

  const epk::TrackResult t = epk::track(family, loop, opts);
  emit(pick(a.out_path, cfg, "out"), epk::track_to_json(t).dump(2) + "\n");

  std::ostringstream summary;
  summary << "permutation " << epk::cycle_notation(t.signature.sp) << "  order "
          << t.signature.order_permutation;
  if (t.signature.order_signed) summary << "  signed order " << *t.signature.order_signed;
  for (size_t c = 0; c < t.per_cycle.size(); ++c) {
    summary << "\ncycle " << c + 1 << ": " << epk::cycle_notation(t.per_cycle[c].sp)
            << (t.per_cycle[c].sp.is_identity() ? " (identity)" : "");
  }
  std::cout << summary.str() << '\n';
  return kExitOk;
}

int cmd_surface(const CommonArgs& a) {
  const epk::Json cfg = load_config(a);
  const auto family = resolve_family(a, cfg);
  const auto region = resolve_region(a, cfg);
  const std::string axis = pick(a.axis, cfg, "axis", "alpha");
  if (axis != "alpha" && axis != "beta")
    throw epk::Error(epk::ErrorKind::ConfigError, "axis must be \"alpha\" or \"beta\"");

  const epk::SheetSurface sheet =
      epk::sheet_surface(family, region, axis == "alpha" ? epk::Axis::Alpha : epk::Axis::Beta);
  std::ostringstream body;
  epk::write_sheet_csv(body, sheet);
  emit(pick(a.out_path, cfg, "out"), body.str());

  int flagged = 0;
  for (auto f : sheet.scanline_fallback) flagged += f != 0;
  std::cerr << "surface " << region.grid_alpha << "x" << region.grid_beta << ", " << flagged
            << " flagged scanline(s)\n";
  return kExitOk;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& spec) {
  std::vector<std::pair<int, int>> pairs;
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int i, j;
    if (std::sscanf(item.c_str(), "%d-%d", &i, &j) != 2)
      throw epk::Error(epk::ErrorKind::ConfigError,
                       "--pairs expects items like 0-1 separated by commas");
    pairs.push_back({i, j});
  }
  return pairs;
}

void print_ordering_table(const std::vector<epk::SignedPermutation>& gens,
                          const std::vector<std::string>& names) {
  for (const auto& o : epk::enumerate_orderings(gens)) {
    std::string label;
    for (auto it = o.sequence.rbegin(); it != o.sequence.rend(); ++it)
      label += names[*it];  // matrix product: rightmost acts first
    std::cout << "  " << label << " = " << epk::cycle_notation(o.product) << "  order "
              << o.product_order << '\n';
  }
}

int cmd_algebra(const CommonArgs& a) {
  if (!a.pairs_spec.empty()) {
    std::vector<epk::SignedPermutation> gens;
    std::vector<std::string> names;
    for (auto [i, j] : parse_pairs(a.pairs_spec)) {
      gens.push_back(epk::generator(a.modes, i, j, a.signed_generators));
      names.push_back("M" + std::to_string(i) + std::to_string(j));
    }
    std::cout << "orderings of " << gens.size() << " generator(s) on " << a.modes << " modes"
              << (a.signed_generators ? " (signed)" : "") << ":\n";
    print_ordering_table(gens, names);
    return kExitOk;
  }

  std::cout << "two enclosed EPs, three modes (products of two exchanges):\n";
  const auto m12 = epk::generator(3, 0, 1);
  const auto m23 = epk::generator(3, 1, 2);
  const auto m31 = epk::generator(3, 2, 0);
  const std::vector<std::pair<epk::SignedPermutation, epk::SignedPermutation>> pairs = {
      {m12, m23}, {m23, m12}, {m23, m31}, {m31, m23}, {m31, m12}, {m12, m31}};
  const std::vector<std::pair<std::string, std::string>> labels = {
      {"M01", "M12"}, {"M12", "M01"}, {"M12", "M20"},
      {"M20", "M12"}, {"M20", "M01"}, {"M01", "M20"}};
  for (size_t k = 0; k < pairs.size(); ++k) {
    const auto prod = epk::compose(pairs[k].first, pairs[k].second);
    std::cout << "  " << labels[k].first << labels[k].second << " = "
              << epk::cycle_notation(prod) << "  order " << epk::order(prod) << '\n';
  }
  std::cout << "three enclosed EPs, three modes (products of all three exchanges):\n";
  print_ordering_table({m12, m23, m31}, {"M01", "M12", "M20"});
  return kExitOk;
}

int cmd_verify(const CommonArgs& a) {
  const epk::Json cfg = load_config(a);
  const std::string only = pick(a.only, cfg, "only");
  const auto results = epk::run_verification(only);
  if (results.empty()) {
    std::cerr << "no checks match filter \"" << only << "\"\n";
    return kExitConfigError;
  }
  bool all_pass = true;
  size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%-*s  %s  %7.2fs  %s\n", static_cast<int>(width), r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
  }
  std::printf("%zu/%zu checks passed\n",
              static_cast<size_t>(std::count_if(results.begin(), results.end(),
                                                [](const auto& r) { return r.pass; })),
              results.size());
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exceptional-point toolkit: locate EPs, track eigenvalue braids, "
               "measure holonomies"};
  app.require_subcommand(1);

  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool wants_region, bool wants_loop) {
    cmd->add_option("--config", args.config_path, "JSON config file (flags win)");
    cmd->add_option("--family", args.family_spec,
                    "builtin name (paper2x2|paper3x3|tep3x3) or descriptor file");
    cmd->add_option("--out", args.out_path, "output path (default: stdout)");
    cmd->add_option("--format", args.format, "json|csv");
    if (wants_region) {
      cmd->add_option("--region", args.region_spec, "alpha_min,alpha_max,beta_min,beta_max");
      cmd->add_option("--grid", args.grid_spec, "NA,NB grid sizes");
    }
    if (wants_loop) {
      cmd->add_option("--loop", args.loop_path, "loop JSON file");
      cmd->add_option("--cycles", args.cycles, "number of traversals");
      cmd->add_flag("--track-vectors", args.track_vectors, "transport eigenvector frames");
      cmd->add_flag("--skip-ep-precheck", args.skip_precheck,
                    "skip the loop-to-EP distance precheck");
    }
  };

  CLI::App* locate = app.add_subcommand("locate", "find exceptional points in a region");
  add_common(locate, true, false);
  locate->add_option("--field-out", args.field_out_path,
                     "also write the gap/discriminant grid CSV here");

  CLI::App* track_cmd = app.add_subcommand("track", "continue eigenvalues around a loop");
  add_common(track_cmd, false, true);

  CLI::App* surface = app.add_subcommand("surface", "export eigenvalue sheets over a region");
  add_common(surface, true, false);
  surface->add_option("--axis", args.axis, "continuation axis: alpha|beta");

  CLI::App* algebra = app.add_subcommand("algebra", "print holonomy ordering tables");
  algebra->add_option("--modes", args.modes, "number of modes (default 3)");
  algebra->add_option("--pairs", args.pairs_spec, "exchange pairs, e.g. 0-1,1-2");
  algebra->add_flag("--signed", args.signed_generators, "use signed generators");

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--config", args.config_path, "JSON config file");
  verify->add_option("--only", args.only, "run only checks whose name contains this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (locate->parsed()) return cmd_locate(args);
    if (track_cmd->parsed()) return cmd_track(args);
    if (surface->parsed()) return cmd_surface(args);
    if (algebra->parsed()) return cmd_algebra(args);
    if (verify->parsed()) return cmd_verify(args);
  } catch (const epk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case epk::ErrorKind::ConfigError:
      case epk::ErrorKind::InvalidInput:
        return kExitConfigError;
      default:
        return kExitNumericalError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalError;
  }
  return kExitOk;
}

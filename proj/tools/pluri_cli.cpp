// Command-line front end: one subcommand per library operation, JSON or CSV
// records on stdout (or --output), and reproducible verification suites.
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 soundness
// violation, 4 infeasible.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pluri.hpp"

using namespace pluri;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitInput = 2;
constexpr int kExitSoundness = 3;
constexpr int kExitInfeasible = 4;

std::uint64_t default_seed() {
  if (const char *s = std::getenv("PLURI_SEED")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(s, &used);
      if (used == std::string(s).size())
        return v;
    } catch (const std::exception &) {
    }
    throw InputError("PLURI_SEED must be an unsigned integer");
  }
  return RunConfig{}.seed;
}

std::string csv_cell(const json &v) {
  if (v.is_number())
    return csv_number(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos)
      return s;
    std::string q = "\"";
    for (char c : s)
      q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return csv_cell(json(v.dump()));
}

/// A flat JSON object as a two-line CSV; nested values are embedded as JSON text.
std::string object_to_csv(const json &j) {
  std::string head, row;
  for (auto it = j.begin(); it != j.end(); ++it) {
    head += (head.empty() ? "" : ",") + it.key();
    row += (it == j.begin() ? "" : ",") + csv_cell(it.value());
  }
  return head + "\n" + row + "\n";
}

struct Output {
  std::string format = "json";
  std::string path;

  void write(const std::string &text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out)
      throw InputError("cannot write '" + path + "'");
    out << text;
  }

  void record(const json &j) const {
    write(format == "csv" ? object_to_csv(j) : j.dump(2) + "\n");
  }
};

json bound_record(const std::string &command, const Point &z, const Point &w,
                  const BoundInterval &b) {
  json j = to_json(b);
  j["command"] = command;
  j["z"] = format_point(z);
  j["w"] = format_point(w);
  return j;
}

HermitianMetric metric_from(const std::string &name, int m, double scale) {
  if (name == "euclidean")
    return euclidean_metric(scale);
  if (name == "bergman_ball")
    return bergman_ball_metric(m);
  if (name == "bergman_polydisk")
    return bergman_polydisk_metric(m);
  throw InputError("unknown metric '" + name + "'");
}

json describe_json(const RunConfig &cfg) {
  json suites_list = json::array();
  for (const auto &[name, fn] : suites())
    suites_list.push_back(name);
  return {{"defaults", to_json(cfg)},
          {"seed_env", "PLURI_SEED"},
          {"domains",
           {"disk", "ball2", "bidisk", "sublevel_dcg", "hartogs_pgvlu", "planar_complement"}},
          {"metrics", {"euclidean", "bergman_ball", "bergman_polydisk"}},
          {"suites", suites_list},
          {"exit_codes",
           {{"ok", 0}, {"verify_failure", kExitVerify}, {"input_error", kExitInput},
            {"soundness", kExitSoundness}, {"infeasible", kExitInfeasible}}}};
}

json doubles(const std::vector<double> &v) {
  json a = json::array();
  for (double x : v)
    a.push_back(num(x));
  return a;
}

int run(int argc, char **argv) {
  CLI::App app{"Certified bounds for pluricomplex Green functions and related invariants"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();

  RunConfig cfg;
  cfg.seed = default_seed();
  std::string config_path;
  Output out;
  app.add_option("--seed", cfg.seed, "Random seed (default: $PLURI_SEED or built-in)");
  app.add_option("--config", config_path, "JSON file overriding budget and tolerances");
  app.add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output,-o", out.path, "Write the record to a file instead of stdout");
  app.add_option("--workers", cfg.workers, "Worker count (computations run sequentially)");
  app.add_option("--restarts", cfg.budget.restarts, "Multi-start count");
  app.add_option("--degree", cfg.budget.degree, "Polynomial degree of searched disks");
  app.add_option("--annuli", cfg.budget.annuli, "Radii used for directional limits");
  app.add_option("--angles", cfg.budget.angles, "Angles per radius");
  app.add_option("--directions", cfg.budget.directions, "Sphere directions for sigma");

  std::string domain_arg, z_arg, w_arg, v_arg;
  auto add_domain = [&](CLI::App *c) {
    c->add_option("--domain,-d", domain_arg, "Domain file or built-in name")->required();
  };

  // Pairwise functions.
  auto *green = app.add_subcommand("green", "Certified interval for g(z, w)");
  auto *kob = app.add_subcommand("kobayashi", "Upper bound for the Kobayashi function");
  auto *car = app.add_subcommand("caratheodory", "Lower bound for the Caratheodory function");
  for (auto *c : {green, kob, car}) {
    add_domain(c);
    c->add_option("--z", z_arg, "Point, e.g. 0.5,0")->required();
    c->add_option("--w", w_arg, "Pole")->required();
  }

  // Directional functions.
  auto *azu = app.add_subcommand("azukawa", "Interval for A(w, v)");
  auto *roy = app.add_subcommand("royden", "Upper bound for R(w, v)");
  for (auto *c : {azu, roy}) {
    add_domain(c);
    c->add_option("--w", w_arg, "Base point")->required();
    c->add_option("--v", v_arg, "Tangent vector")->required();
  }

  std::string metric_name = "euclidean";
  int metric_m = 2;
  double metric_scale = 1.0;
  bool constants_only = false;
  auto *sig = app.add_subcommand("sigma", "Directional capacities sigma_i, sigma_s");
  add_domain(sig);
  sig->add_option("--w", w_arg, "Base point")->required();
  sig->add_option("--metric", metric_name, "euclidean | bergman_ball | bergman_polydisk");
  sig->add_option("--m", metric_m, "Dimension parameter of the Bergman metric");
  sig->add_option("--scale", metric_scale, "Scale of the Euclidean metric");
  sig->add_flag("--constants", constants_only, "Also print the closed-form Bergman constants");

  auto *pole = app.add_subcommand("classify-pole", "Strict / logarithmic pole classification");
  add_domain(pole);
  pole->add_option("--w", w_arg, "Pole")->required();

  double x_radius = 0.3;
  auto *ratio = app.add_subcommand("ratio-test", "Search for delta in the ratio lemma");
  add_domain(ratio);
  ratio->add_option("--w0", w_arg, "Base pole")->required();
  ratio->add_option("--x-radius", x_radius, "Excluded radius around w0");
  ratio->add_option("--eps", cfg.tol.eps, "Target deviation");

  std::vector<double> levels{-1.0};
  auto *exh = app.add_subcommand("exhaustion", "Sublevel margins and g >= b u comparison");
  add_domain(exh);
  exh->add_option("--w", w_arg, "Pole")->required();
  exh->add_option("--levels", levels, "Levels a < 0");

  std::string z0_arg, from_arg;
  int steps = 10;
  double window = 0.05;
  auto *cont = app.add_subcommand("continuity-scan", "Green values along a path of pairs");
  add_domain(cont);
  cont->add_option("--z0", z0_arg, "Limit point (default on the sublevel model: 0.5,0)");
  cont->add_option("--w0", w_arg, "Pole (default 0)");
  cont->add_option("--from", from_arg, "Path start; z_j = z0 + 2^-j (from - z0)");
  cont->add_option("--steps", steps, "Path length");
  cont->add_option("--window", window, "Convergence window");

  int resolution = 128;
  std::vector<std::string> pole_args;
  std::vector<double> angles_list;
  int depth = 10;
  auto *comp = app.add_subcommand("compactify", "Normalized Green embedding into L^1(V)");
  add_domain(comp);
  comp->add_option("--resolution", resolution, "Grid resolution");
  comp->add_option("--w", pole_args, "Poles to embed (repeatable)");
  comp->add_option("--trace-angles", angles_list, "Radial sequences towards these angles (disk)");
  comp->add_option("--depth", depth, "Radial sequence depth");

  std::string suite_name;
  auto *ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("suite", suite_name, "Suite name or 'all'")->required();

  auto *desc = app.add_subcommand("describe", "Print defaults, domains and suites");

  int grid = 33;
  double extent = 0;
  std::string fixed_arg = "0";
  auto *scan = app.add_subcommand("scan", "CSV of Green intervals over a square grid");
  add_domain(scan);
  scan->add_option("--w", w_arg, "Pole")->required();
  scan->add_option("--grid", grid, "Points per side (0 gives an empty grid)")
      ->check(CLI::NonNegativeNumber);
  scan->add_option("--extent", extent, "Half-width of the grid (default: bounding radius)");
  scan->add_option("--fixed", fixed_arg, "Second coordinate for two-dimensional domains");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (!config_path.empty())
    apply_config(cfg, read_json_file(config_path));
  cfg.budget.validate();
  cfg.format = out.format;
  cfg.output = out.path;

  auto domain = [&] { return load_domain(domain_arg); };
  auto point_in = [&](const DomainPtr &dp, const std::string &text) {
    Point p = parse_point(text);
    require_inside(*dp, p);
    return p;
  };

  if (*green || *kob || *car) {
    auto dp = domain();
    Point z = point_in(dp, z_arg), w = point_in(dp, w_arg);
    if (*green)
      out.record(bound_record("green", z, w, green_interval(dp, z, w, cfg)));
    else if (*kob)
      out.record(bound_record("kobayashi", z, w, kobayashi_bound(dp, z, w, cfg)));
    else
      out.record(bound_record("caratheodory", z, w, caratheodory_bound(dp, z, w, cfg)));
    return 0;
  }

  if (*azu) {
    auto dp = domain();
    Point w = point_in(dp, w_arg), v = parse_point(v_arg);
    w.require_same(v);
    auto a = azukawa(dp, w, v, cfg);
    out.record({{"command", "azukawa"},
                {"w", format_point(w)},
                {"v", format_point(v)},
                {"lo", num(a.lo)},
                {"hi", num(a.hi)},
                {"estimate", num(a.estimate)},
                {"provenance", to_string(a.provenance)}});
    return 0;
  }

  if (*roy) {
    auto dp = domain();
    Point w = point_in(dp, w_arg), v = parse_point(v_arg);
    auto b = royden_bound(dp, Direction(w, v), cfg);
    json j = to_json(b);
    j["command"] = "royden";
    j["w"] = format_point(w);
    j["v"] = format_point(v);
    out.record(j);
    return 0;
  }

  if (*sig) {
    auto dp = domain();
    Point w = point_in(dp, w_arg);
    auto H = metric_from(metric_name, metric_m, metric_scale);
    auto s = sigma_estimates(dp, w, H, cfg);
    json j{{"command", "sigma"},
           {"w", format_point(w)},
           {"metric", s.metric},
           {"directions", s.directions},
           {"sigma_i_lo", num(s.inf_lo)},
           {"sigma_i_hi", num(s.inf_hi)},
           {"sigma_s_lo", num(s.sup_lo)},
           {"sigma_s_hi", num(s.sup_hi)},
           {"provenance", "estimate"}};
    if (constants_only && metric_name != "euclidean") {
      auto bc = bergman_constants(metric_name == "bergman_ball" ? "ball" : "polydisk", metric_m);
      j["closed_form_sigma_i"] = bc.sigma_i;
      j["closed_form_sigma_s"] = bc.sigma_s;
      j["derived_sigma_i"] = bc.sigma_i_derived;
    }
    out.record(j);
    return 0;
  }

  if (*pole) {
    auto dp = domain();
    Point w = point_in(dp, w_arg);
    auto f = classify_pole(dp, w, cfg);
    out.record({{"command", "classify-pole"},
                {"w", format_point(w)},
                {"class", to_string(f.classification)},
                {"c1", num(f.c1)},
                {"c2", num(f.c2)},
                {"radii", doubles(f.radii)},
                {"lo_min", doubles(f.lo_min)},
                {"hi_max", doubles(f.hi_max)}});
    return 0;
  }

  if (*ratio) {
    auto dp = domain();
    Point w0 = point_in(dp, w_arg);
    auto r = ratio_test(dp, w0, x_radius, cfg);
    out.record({{"command", "ratio-test"},
                {"w0", format_point(w0)},
                {"eps", cfg.tol.eps},
                {"delta", r.delta_found},
                {"found", r.delta_found > 0},
                {"deltas", doubles(r.deltas)},
                {"deviations", doubles(r.deviations)}});
    return 0;
  }

  if (*exh) {
    auto dp = domain();
    Point w = point_in(dp, w_arg);
    auto r = exhaustion_check(dp, w, levels, cfg);
    json lv = json::array();
    for (const auto &l : r.levels)
      lv.push_back({{"level", l.level}, {"min_margin", num(l.min_margin)}});
    out.record({{"command", "exhaustion"},
                {"w", format_point(w)},
                {"levels", lv},
                {"b", num(r.b)},
                {"alpha", num(r.alpha)},
                {"u_max", num(r.u_max)},
                {"comparisons", r.comparisons},
                {"worst_gap", num(r.worst_gap)}});
    return 0;
  }

  if (*cont) {
    auto dp = domain();
    std::vector<std::pair<Point, Point>> path;
    Point z0, w0;
    if (dp->is<SublevelDcg>() && from_arg.empty()) {
      path = sublevel_discontinuity_path(dp);
      z0 = z0_arg.empty() ? Point(0.5, 0.0) : point_in(dp, z0_arg);
      w0 = w_arg.empty() ? Point::zeros(2) : point_in(dp, w_arg);
    } else {
      if (z0_arg.empty() || from_arg.empty())
        throw InputError("continuity-scan needs --z0 and --from on this domain");
      z0 = point_in(dp, z0_arg);
      w0 = w_arg.empty() ? Point::zeros(z0.dim()) : point_in(dp, w_arg);
      Point from = point_in(dp, from_arg);
      for (int j = 1; j <= steps; ++j)
        path.emplace_back(z0 + (from - z0) * std::ldexp(1.0, -j), w0);
    }
    auto r = continuity_scan(dp, path, z0, w0, cfg, window);
    json pts = json::array();
    for (std::size_t i = 0; i < path.size(); ++i) {
      json b = to_json(r.path[i]);
      b["z"] = format_point(path[i].first);
      pts.push_back(b);
    }
    out.record({{"command", "continuity-scan"},
                {"verdict", to_string(r.verdict)},
                {"gap", num(r.gap)},
                {"widths", num(r.widths)},
                {"limsup_hi", num(r.limsup_hi)},
                {"limit", to_json(r.limit)},
                {"path", pts}});
    return 0;
  }

  if (*comp) {
    auto dp = domain();
    auto V = norming_form(dp, resolution);
    std::vector<Point> poles;
    for (const auto &s : pole_args)
      poles.push_back(point_in(dp, s));
    json traces = json::array();
    for (double a : angles_list) {
      auto seq = radial_sequence(a, 1, depth);
      auto t = boundary_trace(dp, seq, V);
      traces.push_back({{"angle", a},
                        {"successive", doubles(t.successive)},
                        {"cauchy", t.cauchy},
                        {"profile_distance", num(t.profile_distance.value_or(kInf))}});
      for (const auto &p : radial_sequence(a, std::max(1, depth - 4), depth))
        poles.push_back(p);
    }
    std::vector<GridFunction> fs;
    for (const auto &p : poles)
      fs.push_back(phi_V(dp, p, V));
    if (out.format == "csv") {
      std::ostringstream os;
      os << "pole,node,weight,value\n";
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t k = 0; k < V->nodes.size(); ++k)
          os << i << ',' << csv_cell(format_point(V->nodes[k])) << ','
             << csv_number(V->weights[k]) << ',' << csv_number(fs[i].values[k]) << '\n';
      out.write(os.str());
      return 0;
    }
    auto dm = distance_matrix(fs);
    json cvs = json::array(), labels = json::object(), names = json::array();
    for (const auto &p : poles) {
      names.push_back(format_point(p));
      cvs.push_back(num(c_V(dp, p)));
    }
    for (double eps : cluster_scales())
      labels[json(eps).dump()] = single_linkage(dm, eps);
    json dj = json::array();
    for (const auto &row : dm)
      dj.push_back(doubles(row));
    out.record({{"command", "compactify"},
                {"mass", V->mass},
                {"c_F", V->c_F},
                {"poles", names},
                {"c_V", cvs},
                {"distances", dj},
                {"clusters", labels},
                {"traces", traces}});
    return 0;
  }

  if (*ver) {
    std::vector<std::string> names;
    if (suite_name == "all") {
      for (const auto &[n, fn] : suites())
        names.push_back(n);
    } else {
      if (!suites().count(suite_name))
        throw InputError("unknown suite '" + suite_name + "'");
      names.push_back(suite_name);
    }
    json all = json::array();
    bool ok = true;
    for (const auto &n : names) {
      auto r = run_suite(n, cfg);
      ok = ok && r.passed();
      all.push_back(r.summary());
    }
    json j{{"command", "verify"}, {"seed", cfg.seed}, {"passed", ok}, {"suites", all}};
    out.write(j.dump(2) + "\n");
    return ok ? 0 : kExitVerify;
  }

  if (*desc) {
    out.write(describe_json(cfg).dump(2) + "\n");
    return 0;
  }

  if (*scan) {
    auto dp = domain();
    Point w = point_in(dp, w_arg);
    out.write(scan_csv(dp, w, grid, extent, parse_complex(fixed_arg), cfg));
    return 0;
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const SoundnessError &e) {
    std::cerr << "soundness violation: " << e.what() << '\n';
    return kExitSoundness;
  } catch (const InfeasibleError &e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
}

// kfp command line: config-driven solves, batteries, verification suites,
// Monte-Carlo estimates, exhaustion runs, and run.json comparison.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kfp/assemble.hpp"
#include "kfp/coefficients.hpp"
#include "kfp/exhaustion.hpp"
#include "kfp/geometry.hpp"
#include "kfp/grid.hpp"
#include "kfp/kernel.hpp"
#include "kfp/report.hpp"
#include "kfp/spaces.hpp"
#include "kfp/stochastic.hpp"
#include "kfp/variational.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config: " + path);
  json cfg = json::parse(is);  // parse_error carries byte position
  if (cfg.value("schema_version", -1) != kSchemaVersion)
    throw std::invalid_argument(
        "config " + path + ": schema_version must be " +
        std::to_string(kSchemaVersion));
  return cfg;
}

kfp::ProductDomain parse_domain(const json& j) {
  return kfp::domain_from_json(j.dump());
}

kfp::Point parse_point(const json& j) {
  kfp::Point p;
  p.X = j.at("X").get<std::vector<double>>();
  p.Y = j.at("Y").get<std::vector<double>>();
  p.t = j.at("t").get<double>();
  if (p.X.size() != p.Y.size())
    throw std::invalid_argument("point: X and Y must have equal length");
  return p;
}

// Named data functions. Schema:
//   {"type":"zero"} | {"type":"constant","value":c}
//   {"type":"kernel","pole":{point},"scale":s}
//   {"type":"sine","amplitude":a,"frequency":w}   a*sin(w*(sum X+Y+t))
//   {"type":"gaussian","center":{point},"width":w}
kfp::PointFn parse_data_fn(const json& j, const kfp::ProductDomain& dom) {
  const std::string type = j.at("type");
  if (type == "zero") return [](const kfp::Point&) { return 0.0; };
  if (type == "constant") {
    const double v = j.at("value");
    return [v](const kfp::Point&) { return v; };
  }
  if (type == "kernel") {
    const kfp::Point pole = parse_point(j.at("pole"));
    const double scale = j.value("scale", 1.0);
    return kfp::kernel_boundary_data(dom, pole, scale);
  }
  if (type == "sine") {
    const double a = j.value("amplitude", 1.0);
    const double w = j.value("frequency", 1.0);
    return [a, w](const kfp::Point& p) {
      double s = p.t;
      for (std::size_t i = 0; i < p.m(); ++i) s += p.X[i] + p.Y[i];
      return a * std::sin(w * s);
    };
  }
  if (type == "gaussian") {
    const kfp::Point c = parse_point(j.at("center"));
    const double w = j.value("width", 1.0);
    return [c, w](const kfp::Point& p) {
      double q = (p.t - c.t) * (p.t - c.t);
      for (std::size_t i = 0; i < p.m(); ++i) {
        q += (p.X[i] - c.X[i]) * (p.X[i] - c.X[i]);
        q += (p.Y[i] - c.Y[i]) * (p.Y[i] - c.Y[i]);
      }
      return std::exp(-q / (w * w));
    };
  }
  throw std::invalid_argument("unknown data type: " + type);
}

kfp::EllipticMatrixField parse_coefficients(const json& j, std::size_t m) {
  const std::string family = j.value("family", "constant");
  const double kappa = j.value("kappa", 1.0);
  const std::vector<double> params =
      j.value("params", std::vector<double>{});
  kfp::EllipticMatrixField A =
      kfp::make_coefficient_field(family, kappa, params, m);
  const double eps = j.value("mollify_epsilon", 0.0);
  if (eps > 0.0) A = kfp::mollify(A, eps);
  return A;
}

struct ProblemSetup {
  kfp::ProductDomain domain;
  kfp::Grid grid;
  kfp::ProblemData data;
  std::string method = "direct";
};

ProblemSetup parse_problem(const json& cfg, int refine = 1) {
  ProblemSetup ps;
  ps.domain = parse_domain(cfg.at("domain"));
  const std::size_t m = ps.domain.m();
  const json& gj = cfg.at("grid");
  std::vector<std::size_t> nx = gj.at("nx").get<std::vector<std::size_t>>();
  std::vector<std::size_t> ny = gj.at("ny").get<std::vector<std::size_t>>();
  std::size_t nt = gj.at("nt").get<std::size_t>();
  for (auto& v : nx) v *= static_cast<std::size_t>(refine);
  for (auto& v : ny) v *= static_cast<std::size_t>(refine);
  nt *= static_cast<std::size_t>(refine);
  ps.grid = kfp::build_grid(ps.domain, nx, ny, nt);
  ps.data.A = parse_coefficients(cfg.value("coefficients", json::object()), m);
  const json& dj = cfg.at("data");
  ps.data.g = parse_data_fn(dj.at("g"), ps.domain);
  ps.data.gstar = dj.contains("gstar")
                      ? parse_data_fn(dj.at("gstar"), ps.domain)
                      : kfp::PointFn([](const kfp::Point&) { return 0.0; });
  ps.method = cfg.value("solver", json::object()).value("method", "direct");
  return ps;
}

kfp::SolveOptions parse_solve_options(const json& cfg) {
  kfp::SolveOptions opts;
  const json sj = cfg.value("solver", json::object());
  opts.tol = sj.value("tol", 1e-10);
  opts.monolithic = sj.value("method", "direct") == std::string("monolithic");
  opts.compute_norms = sj.value("compute_norms", true);
  return opts;
}

// Fills defaults back into the config copy so run.json carries the fully
// resolved settings.
json resolve_config(json cfg) {
  if (!cfg.contains("solver")) cfg["solver"] = json::object();
  cfg["solver"]["method"] = cfg["solver"].value("method", "direct");
  cfg["solver"]["tol"] = cfg["solver"].value("tol", 1e-10);
  cfg["solver"]["compute_norms"] = cfg["solver"].value("compute_norms", true);
  if (!cfg.contains("coefficients")) cfg["coefficients"] = json::object();
  cfg["coefficients"]["family"] = cfg["coefficients"].value("family", "constant");
  cfg["coefficients"]["kappa"] = cfg["coefficients"].value("kappa", 1.0);
  return cfg;
}

void write_run(const std::string& out_dir, const json& run) {
  std::filesystem::create_directories(out_dir);
  std::ofstream os(out_dir + "/run.json");
  os << run.dump(2) << "\n";
}

double relative_l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double n = (a - b).norm();
  const double d = b.norm();
  return d > 0 ? n / d : n;
}

int jobs_from(int flag_jobs) {
  if (const char* env = std::getenv("KFP_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return flag_jobs > 0 ? flag_jobs : 1;
}

// ---------------------------------------------------------------- solve --

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  json cfg = load_config(config_path);
  ProblemSetup ps = parse_problem(cfg);
  kfp::SolveOptions opts = parse_solve_options(cfg);

  json results;
  kfp::DiscreteField u;
  if (ps.method == "variational") {
    kfp::MinimizerPair mp = kfp::minimize_joint(ps.grid, ps.data);
    u = std::move(mp.f);
    results["minimizer"] = kfp::to_json(mp);
    results["norms"] = kfp::to_json(kfp::w_norm(ps.grid, u));
  } else {
    kfp::SolveReport rep;
    u = kfp::solve_direct(ps.grid, ps.data, &rep, opts);
    results["solve"] = kfp::to_json(rep);
  }
  results["energy_ratio"] = kfp::energy_estimate_ratio(ps.grid, ps.data, u);

  const json oj = cfg.value("output", json::object());
  if (oj.value("embed_solution", true)) {
    std::vector<double> vals(u.values.data(), u.values.data() + u.values.size());
    results["solution_values"] = vals;
  }
  const std::string fmt = oj.value("field_format", "csv");
  if (fmt == "csv") {
    std::filesystem::create_directories(out_dir);
    kfp::write_field_csv(ps.grid, u, out_dir + "/solution.csv");
    results["field_file"] = "solution.csv";
  } else if (fmt == "binary") {
    std::filesystem::create_directories(out_dir);
    kfp::write_field_binary(ps.grid, u, out_dir + "/solution.bin");
    results["field_file"] = "solution.bin";
  } else if (fmt != "none") {
    throw std::invalid_argument("output.field_format must be csv|binary|none");
  }

  json run;
  run["schema_version"] = kSchemaVersion;
  run["config"] = resolve_config(cfg);
  run["results"] = results;
  write_run(out_dir, run);
  std::cout << "solved: " << ps.grid.size() << " nodes, method " << ps.method
            << "\n";
  return 0;
}

// -------------------------------------------------------------- battery --

json battery_one(const json& pcfg) {
  json row;
  std::vector<int> levels = pcfg.value("levels", std::vector<int>{1});
  json level_rows = json::array();
  for (int lv : levels) {
    ProblemSetup ps = parse_problem(pcfg, lv);
    kfp::SolveOptions opts = parse_solve_options(pcfg);
    kfp::SolveReport rep;
    kfp::DiscreteField u = kfp::solve_direct(ps.grid, ps.data, &rep, opts);
    json lr;
    lr["level"] = lv;
    lr["unknowns"] = ps.grid.size();
    lr["solve"] = kfp::to_json(rep);
    if (pcfg.value("cross_check_variational", false)) {
      kfp::MinimizerPair mp = kfp::minimize_joint(ps.grid, ps.data);
      lr["variational_objective"] = mp.objective;
      lr["direct_vs_variational_l2"] =
          relative_l2(mp.f.values, u.values);
    }
    // Exact-solution error when the data is the prototype kernel and the
    // source vanishes (A = I benchmark).
    const json& dj = pcfg.at("data");
    if (dj.at("g").value("type", "") == std::string("kernel") &&
        (!dj.contains("gstar") ||
         dj.at("gstar").value("type", "zero") == std::string("zero"))) {
      kfp::PointFn exact = ps.data.g;
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < ps.grid.size(); ++i) {
        if (ps.grid.cls[i] != kfp::NodeClass::Interior &&
            ps.grid.cls[i] != kfp::NodeClass::Free)
          continue;
        const double e = exact(ps.grid.point(i));
        num += (u[i] - e) * (u[i] - e);
        den += e * e;
      }
      lr["interior_l2_error"] = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    }
    level_rows.push_back(lr);
  }
  row["levels"] = level_rows;
  return row;
}

int cmd_battery(const std::string& config_path, const std::string& out_dir,
                int jobs_flag) {
  json cfg = load_config(config_path);
  const json& problems = cfg.at("battery").at("problems");
  const int jobs = jobs_from(jobs_flag);

  std::vector<json> rows(problems.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex err_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= problems.size() || failed.load()) break;
      try {
        rows[i] = battery_one(problems[static_cast<int>(i)]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<int>(jobs, static_cast<int>(problems.size()));
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error("battery problem failed: " + first_error);

  json results;
  results["problems"] = rows;

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/battery.csv");
  csv << "problem,level,unknowns,weak_residual,interior_l2_error,"
         "direct_vs_variational_l2\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& lr : rows[i]["levels"]) {
      csv << i << "," << lr["level"] << "," << lr["unknowns"] << ","
          << kfp::format_g17(lr["solve"]["weak_residual"].get<double>()) << ",";
      csv << (lr.contains("interior_l2_error")
                  ? kfp::format_g17(lr["interior_l2_error"].get<double>())
                  : std::string(""))
          << ",";
      csv << (lr.contains("direct_vs_variational_l2")
                  ? kfp::format_g17(
                        lr["direct_vs_variational_l2"].get<double>())
                  : std::string(""))
          << "\n";
    }
  }

  json run;
  run["schema_version"] = kSchemaVersion;
  run["config"] = resolve_config(cfg);
  run["results"] = results;
  write_run(out_dir, run);
  std::cout << "battery: " << rows.size() << " problems, " << jobs
            << " job(s)\n";
  return 0;
}

// --------------------------------------------------------------- verify --

int cmd_verify(const std::string& config_path) {
  json cfg = config_path.empty() ? json{{"schema_version", 1}}
                                 : load_config(config_path);
  const int trials = cfg.value("trials", 1000);
  const unsigned seed = cfg.value("seed", 2024u);
  const std::size_t m = cfg.value("m", std::size_t{1});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  auto rand_point = [&] {
    kfp::Point p = kfp::origin(m);
    for (std::size_t i = 0; i < m; ++i) {
      p.X[i] = ud(rng);
      p.Y[i] = ud(rng);
    }
    p.t = ud(rng);
    return p;
  };
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  bool inv_ok = true, assoc_ok = true, dil_ok = true, sym_ok = true;
  for (int i = 0; i < trials; ++i) {
    const kfp::Point p = rand_point(), q = rand_point(), w = rand_point();
    const kfp::Point e = kfp::compose(kfp::inverse(p), p);
    double err = std::fabs(e.t);
    for (std::size_t k = 0; k < m; ++k)
      err = std::max({err, std::fabs(e.X[k]), std::fabs(e.Y[k])});
    inv_ok = inv_ok && err <= 1e-12;

    const kfp::Point ab = kfp::compose(kfp::compose(p, q), w);
    const kfp::Point ba = kfp::compose(p, kfp::compose(q, w));
    double aerr = std::fabs(ab.t - ba.t);
    for (std::size_t k = 0; k < m; ++k)
      aerr = std::max({aerr, std::fabs(ab.X[k] - ba.X[k]),
                       std::fabs(ab.Y[k] - ba.Y[k])});
    assoc_ok = assoc_ok && aerr <= 1e-12 * (1.0 + kfp::homogeneous_norm(ab));

    const double r = 0.1 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double lhs = kfp::homogeneous_norm(kfp::dilate(r, p));
    const double rhs = r * kfp::homogeneous_norm(p);
    dil_ok = dil_ok && std::fabs(lhs - rhs) <= 1e-12 * (1.0 + rhs);

    const double d1 = kfp::quasi_distance(p, q), d2 = kfp::quasi_distance(q, p);
    sym_ok = sym_ok && std::fabs(d1 - d2) <= 1e-12 * (1.0 + d1);
  }
  check("group inverse", inv_ok);
  check("group associativity", assoc_ok);
  check("dilation homogeneity", dil_ok);
  check("quasi-distance symmetry", sym_ok);

  kfp::ProductDomain box;
  box.U_X.assign(m, {-1.0, 1.0});
  box.V_Y.assign(m, {-1.0, 1.0});
  box.T = {0.0, 1.0};
  for (const char* fam : {"constant", "checkerboard", "periodic"}) {
    kfp::EllipticMatrixField A = kfp::make_coefficient_field(
        fam, 4.0, fam == std::string("checkerboard")
                      ? std::vector<double>{4.0, 0.25}
                      : std::vector<double>{},
        m);
    kfp::EllipticityReport er = kfp::verify_ellipticity(A, box, 200, seed);
    check(std::string("ellipticity ") + fam, er.ok);
  }
  return failures == 0 ? 0 : 1;
}

// ------------------------------------------------------------------- mc --

int cmd_mc(const std::string& config_path, const std::string& out_dir) {
  json cfg = load_config(config_path);
  kfp::ProductDomain dom = parse_domain(cfg.at("domain"));
  kfp::EllipticMatrixField A =
      parse_coefficients(cfg.value("coefficients", json::object()), dom.m());
  kfp::PointFn phi = parse_data_fn(cfg.at("data").at("g"), dom);

  kfp::McOptions opts;
  const json mj = cfg.value("mc", json::object());
  opts.paths = mj.value("paths", std::size_t{10000});
  opts.dt = mj.value("dt", 0.0);
  opts.seed = mj.value("seed", std::uint64_t{1});
  opts.antithetic = mj.value("antithetic", false);
  opts.trapezoid = mj.value("trapezoid", false);

  json results;
  json probes = json::array();
  for (const auto& pj : cfg.at("probes")) {
    const kfp::Point probe = parse_point(pj);
    kfp::McEstimate est = kfp::estimate_solution(dom, A, phi, probe, opts);
    json row = kfp::to_json(est);
    row["probe"] = pj;
    probes.push_back(row);
  }
  results["probes"] = probes;
  if (cfg.value("measure", false)) {
    const kfp::Point probe = parse_point(cfg.at("probes").at(0));
    results["measure"] =
        kfp::to_json(kfp::estimate_parabolic_measure(dom, A, probe, opts));
  }

  json run;
  run["schema_version"] = kSchemaVersion;
  run["config"] = resolve_config(cfg);
  run["results"] = results;
  write_run(out_dir, run);
  std::cout << "mc: " << probes.size() << " probe(s), " << opts.paths
            << " paths each\n";
  return 0;
}

// -------------------------------------------------------------- exhaust --

int cmd_exhaust(const std::string& config_path, const std::string& out_dir) {
  json cfg = load_config(config_path);
  const json& gj = cfg.at("graph");
  const std::size_t m = cfg.at("V_Y").size();
  kfp::LipschitzGraphDomain omega = kfp::make_graph_domain(
      gj.at("family"), gj.at("M"),
      gj.value("params", std::vector<double>{}), m);
  std::vector<kfp::Interval> V_Y;
  for (const auto& iv : cfg.at("V_Y")) V_Y.push_back({iv.at(0), iv.at(1)});
  kfp::Interval T{cfg.at("T").at(0), cfg.at("T").at(1)};
  kfp::ProductDomain probe = parse_domain(cfg.at("probe"));
  std::vector<double> R_list = cfg.at("R_list").get<std::vector<double>>();

  kfp::EllipticMatrixField A =
      parse_coefficients(cfg.value("coefficients", json::object()), m);
  // Data functions are evaluated on the unbounded domain; the kernel type
  // needs a reference box for its pole check, so use the largest domain.
  kfp::ProductDomain ref =
      kfp::exhaustion_domain(omega, V_Y, T, R_list.back());
  kfp::PointFn g = parse_data_fn(cfg.at("data").at("g"), ref);
  kfp::PointFn gstar =
      cfg.at("data").contains("gstar")
          ? parse_data_fn(cfg.at("data").at("gstar"), ref)
          : kfp::PointFn([](const kfp::Point&) { return 0.0; });

  kfp::ExhaustionOptions opts;
  const json ej = cfg.value("exhaustion", json::object());
  opts.core_cells = ej.value("core_cells", std::size_t{8});
  opts.core_nodes = ej.value("core_nodes", std::size_t{8});
  opts.core_tnodes = ej.value("core_tnodes", std::size_t{8});
  opts.stretch = ej.value("stretch", 1.35);

  kfp::ExhaustionResult res =
      kfp::solve_exhaustion(omega, V_Y, T, g, gstar, A, R_list, probe, opts);

  json run;
  run["schema_version"] = kSchemaVersion;
  run["config"] = resolve_config(cfg);
  run["results"] = kfp::to_json(res);
  write_run(out_dir, run);
  std::cout << "exhaust: " << res.steps.size() << " domain(s), final diff "
            << res.steps.back().sup_difference << "\n";
  return 0;
}

// -------------------------------------------------------------- compare --

void strip_wall_time(json& j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    for (auto& [k, v] : j.items()) strip_wall_time(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_wall_time(v);
  }
}

void compare_trees(const json& a, const json& b, const std::string& path,
                   double tol, double& worst, std::string& worst_path) {
  if (a.is_object() && b.is_object()) {
    for (auto& [k, v] : a.items()) {
      if (!b.contains(k))
        throw std::invalid_argument("compare: missing key " + path + "/" + k);
      compare_trees(v, b.at(k), path + "/" + k, tol, worst, worst_path);
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size())
      throw std::invalid_argument("compare: size mismatch at " + path + " (" +
                                  std::to_string(a.size()) + " vs " +
                                  std::to_string(b.size()) + ")");
    for (std::size_t i = 0; i < a.size(); ++i)
      compare_trees(a[static_cast<int>(i)], b[static_cast<int>(i)],
                    path + "[" + std::to_string(i) + "]", tol, worst,
                    worst_path);
    return;
  }
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    const double d = std::fabs(x - y) / scale;
    if (d > worst) {
      worst = d;
      worst_path = path;
    }
    return;
  }
  if (a != b)
    throw std::invalid_argument("compare: value mismatch at " + path);
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                double tol) {
  std::ifstream ia(path_a), ib(path_b);
  if (!ia) throw std::invalid_argument("cannot open " + path_a);
  if (!ib) throw std::invalid_argument("cannot open " + path_b);
  json a = json::parse(ia), b = json::parse(ib);
  strip_wall_time(a);
  strip_wall_time(b);
  double worst = 0.0;
  std::string worst_path = "-";
  compare_trees(a.value("results", a), b.value("results", b), "", tol, worst,
                worst_path);
  std::cout << "max relative difference " << kfp::format_g17(worst) << " at "
            << worst_path << "\n";
  return worst <= tol ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenerate Kolmogorov-Fokker-Planck solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::string cmp_a, cmp_b;
  double cmp_tol = 1e-12;
  int jobs = 1;

  auto* solve = app.add_subcommand("solve", "solve one problem from a config");
  solve->add_option("--config", config_path)->required();
  solve->add_option("--out", out_dir);

  auto* battery = app.add_subcommand("battery", "run a battery of problems");
  battery->add_option("--config", config_path)->required();
  battery->add_option("--out", out_dir);
  battery->add_option("--jobs", jobs);

  auto* verify = app.add_subcommand("verify", "algebraic identity suite");
  verify->add_option("--config", config_path);

  auto* mc = app.add_subcommand("mc", "Monte-Carlo boundary representation");
  mc->add_option("--config", config_path)->required();
  mc->add_option("--out", out_dir);

  auto* exhaust = app.add_subcommand("exhaust", "increasing-domain solves");
  exhaust->add_option("--config", config_path)->required();
  exhaust->add_option("--out", out_dir);

  auto* compare = app.add_subcommand("compare", "compare two run.json files");
  compare->add_option("a", cmp_a)->required();
  compare->add_option("b", cmp_b)->required();
  compare->add_option("--tol", cmp_tol);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (battery->parsed()) return cmd_battery(config_path, out_dir, jobs);
    if (verify->parsed()) return cmd_verify(config_path);
    if (mc->parsed()) return cmd_mc(config_path, out_dir);
    if (exhaust->parsed()) return cmd_exhaust(config_path, out_dir);
    if (compare->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_tol);
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#include "fekete/cli_reports.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "fekete/errors.hpp"
#include "fekete/interpolation_ops.hpp"

namespace fekete {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

double get_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs fn(i) for i in [0, n) on worker_count() threads. Exceptions are
// rethrown in index order after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw CliError(exit_code::error, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

fs::path report_path(const RunConfig& c) { return fs::path(c.out) / (c.command + "_report.json"); }

void finish(CommandResult& result, const Stopwatch& watch) {
  result.report.timing["wall_seconds"] = round12(watch.seconds());
  fs::create_directories(result.report.config.out);
  write_json(json(result.report), report_path(result.report.config));
}

std::optional<int> degree_from_comments(const std::vector<std::string>& comments) {
  for (const auto& c : comments) {
    int L = 0, d = 0;
    if (std::sscanf(c.c_str(), "fekete L=%d d=%d", &L, &d) == 2) return L;
  }
  return std::nullopt;
}

PointFile read_input(const fs::path& path) {
  try {
    return read_point_file(path);
  } catch (const std::exception& e) {
    throw CliError(exit_code::unreadable, e.what());
  }
}

// Loads Z(L) for every needed degree from the --points directory.
TriangularArray load_array(const RunConfig& c, const std::set<int>& needed) {
  if (c.points.empty()) throw CliError(exit_code::usage, "--points <directory> is required");
  const fs::path dir = c.points.front();
  if (!fs::is_directory(dir)) throw CliError(exit_code::unreadable, "not a directory: " + dir.string());
  std::vector<int> missing;
  for (int L : needed) {
    if (!fs::exists(dir / fekete_file_name(c.d, L))) missing.push_back(L);
  }
  if (!missing.empty()) {
    std::string list;
    for (int L : missing) list += (list.empty() ? "" : ", ") + std::to_string(L);
    throw CliError(exit_code::missing_degree,
                   "missing Fekete point files in " + dir.string() + " for degrees: " + list);
  }
  TriangularArray z(c.d, "files:" + dir.string());
  for (int L : needed) {
    PointFile f = read_input(dir / fekete_file_name(c.d, L));
    if (f.points.dimension() != c.d) {
      throw CliError(exit_code::unreadable, fekete_file_name(c.d, L) + " has dimension " +
                                                std::to_string(f.points.dimension()));
    }
    z.set(L, std::move(f.points));
  }
  return z;
}

std::vector<double> random_unit_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(static_cast<std::size_t>(n));
  double norm = 0.0;
  for (auto& x : v) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(fmt12(x).c_str(), nullptr);
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 0) throw InvalidArgument("bad degree '" + s + "' in '" + text + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int a = to_int(item.substr(0, dots));
    const int b = to_int(item.substr(dots + 2));
    if (b < a) throw InvalidArgument("empty degree range '" + item + "'");
    for (int L = a; L <= b; ++L) out.push_back(L);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string fekete_file_name(int d, int L) {
  return "fekete_d" + std::to_string(d) + "_L" + std::to_string(L) + ".txt";
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw CliError(exit_code::usage, m); };
  if (d != 1 && d != 2) fail("--d must be 1 or 2");
  for (int L : degrees) {
    if (L < 0) fail("degrees must be >= 0");
  }
  if (!(eps > 0.0)) fail("--eps must be > 0");
  if (command == "interp" && !(eps < 1.0)) fail("--eps must be < 1 for interp");
  for (double a : alphas) {
    if (!(a > 0.0)) fail("--alpha values must be > 0");
  }
  if (radius && !(*radius > 0.0 && *radius <= std::numbers::pi)) fail("--radius must lie in (0, pi]");
  if (samples < 1) fail("--samples must be >= 1");
  if (trials < 1) fail("--trials must be >= 1");
  try {
    MeshSpec::parse(mesh);
    parse_refinement_mode(mode);
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
  if (max_iterations < 1) fail("--max-iter must be >= 1");
  if (!(stop_tolerance > 0.0)) fail("--stop-tol must be > 0");
  if (!(certificate_tolerance >= 0.0)) fail("--cert-tol must be >= 0");
}

FeketeConfig RunConfig::solver_config() const {
  FeketeConfig c;
  c.mesh = MeshSpec::parse(mesh);
  c.mode = parse_refinement_mode(mode);
  c.max_iterations = max_iterations;
  c.stop_tolerance = stop_tolerance;
  c.certificate_tolerance = certificate_tolerance;
  c.seed = seed;
  return c;
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"command", c.command},
           {"d", c.d},
           {"degrees", c.degrees},
           {"eps", num(c.eps)},
           {"alphas", json::array()},
           {"radius", c.radius ? num(*c.radius) : json(nullptr)},
           {"mesh", c.mesh},
           {"mode", c.mode},
           {"max_iterations", c.max_iterations},
           {"stop_tolerance", num(c.stop_tolerance)},
           {"certificate_tolerance", num(c.certificate_tolerance)},
           {"seed", c.seed},
           {"samples", c.samples},
           {"trials", c.trials},
           {"mz", c.mz},
           {"points", c.points},
           {"out", c.out}};
  for (double a : c.alphas) j["alphas"].push_back(num(a));
}

void from_json(const json& j, RunConfig& c) {
  j.at("command").get_to(c.command);
  j.at("d").get_to(c.d);
  j.at("degrees").get_to(c.degrees);
  c.eps = get_num(j.at("eps"));
  c.alphas.clear();
  for (const auto& a : j.at("alphas")) c.alphas.push_back(get_num(a));
  c.radius = j.at("radius").is_null() ? std::nullopt : std::optional<double>(get_num(j.at("radius")));
  j.at("mesh").get_to(c.mesh);
  j.at("mode").get_to(c.mode);
  j.at("max_iterations").get_to(c.max_iterations);
  c.stop_tolerance = get_num(j.at("stop_tolerance"));
  c.certificate_tolerance = get_num(j.at("certificate_tolerance"));
  j.at("seed").get_to(c.seed);
  j.at("samples").get_to(c.samples);
  j.at("trials").get_to(c.trials);
  j.at("mz").get_to(c.mz);
  j.at("points").get_to(c.points);
  j.at("out").get_to(c.out);
}

void to_json(json& j, const Report& r) {
  j = json{{"schema", r.schema}, {"config", r.config}, {"payload", r.payload}, {"timing", r.timing}};
}

void from_json(const json& j, Report& r) {
  j.at("schema").get_to(r.schema);
  if (r.schema != kReportSchema) throw InvalidArgument("unsupported report schema '" + r.schema + "'");
  j.at("config").get_to(r.config);
  r.payload = j.at("payload");
  r.timing = j.at("timing");
}

void to_json(json& j, const SolveLog& s) {
  j = json{{"degree", s.degree},
           {"d", s.d},
           {"mesh", s.mesh},
           {"seed", s.seed},
           {"mode", s.mode},
           {"iterations", s.iterations},
           {"exchange_moves", s.exchange_moves},
           {"ascent_steps", s.ascent_steps},
           {"greedy_logabsdet", num(s.greedy_logabsdet)},
           {"final_logabsdet", num(s.final_logabsdet)},
           {"logabsdet_trace", json::array()},
           {"certificate", num(s.certificate)},
           {"certificate_mesh", s.certificate_mesh},
           {"certificate_ok", s.certificate_ok},
           {"hit_iteration_cap", s.hit_iteration_cap},
           {"min_distance", num(s.min_distance)},
           {"separation_ratio", num(s.separation_ratio)}};
  for (double v : s.logabsdet_trace) j["logabsdet_trace"].push_back(num(v));
}

void from_json(const json& j, SolveLog& s) {
  j.at("degree").get_to(s.degree);
  j.at("d").get_to(s.d);
  j.at("mesh").get_to(s.mesh);
  j.at("seed").get_to(s.seed);
  j.at("mode").get_to(s.mode);
  j.at("iterations").get_to(s.iterations);
  j.at("exchange_moves").get_to(s.exchange_moves);
  j.at("ascent_steps").get_to(s.ascent_steps);
  s.greedy_logabsdet = get_num(j.at("greedy_logabsdet"));
  s.final_logabsdet = get_num(j.at("final_logabsdet"));
  s.logabsdet_trace.clear();
  for (const auto& v : j.at("logabsdet_trace")) s.logabsdet_trace.push_back(get_num(v));
  s.certificate = get_num(j.at("certificate"));
  j.at("certificate_mesh").get_to(s.certificate_mesh);
  j.at("certificate_ok").get_to(s.certificate_ok);
  j.at("hit_iteration_cap").get_to(s.hit_iteration_cap);
  s.min_distance = get_num(j.at("min_distance"));
  s.separation_ratio = get_num(j.at("separation_ratio"));
}

void to_json(json& j, const FrameBounds& f) {
  j = json{{"degree", f.degree}, {"p", num(f.p)},         {"A", num(f.lower)}, {"B", num(f.upper)},
           {"C", num(f.constant)}, {"points", f.points}, {"rank", f.rank}};
}

void from_json(const json& j, FrameBounds& f) {
  j.at("degree").get_to(f.degree);
  f.p = get_num(j.at("p"));
  f.lower = get_num(j.at("A"));
  f.upper = get_num(j.at("B"));
  f.constant = get_num(j.at("C"));
  j.at("points").get_to(f.points);
  j.at("rank").get_to(f.rank);
}

void to_json(json& j, const MzEstimate& m) {
  j = json{{"degree", m.degree},
           {"p", num(m.p)},
           {"estimate", num(m.estimate)},
           {"worst_lower_ratio", num(m.worst_lower_ratio)},
           {"worst_upper_ratio", num(m.worst_upper_ratio)},
           {"trials", m.trials},
           {"seed", m.seed},
           {"unbounded", m.unbounded}};
}

void from_json(const json& j, MzEstimate& m) {
  j.at("degree").get_to(m.degree);
  m.p = get_num(j.at("p"));
  m.estimate = get_num(j.at("estimate"));
  m.worst_lower_ratio = get_num(j.at("worst_lower_ratio"));
  m.worst_upper_ratio = get_num(j.at("worst_upper_ratio"));
  j.at("trials").get_to(m.trials);
  j.at("seed").get_to(m.seed);
  j.at("unbounded").get_to(m.unbounded);
}

void to_json(json& j, const DensityEstimate& e) {
  j = json{{"degree", e.degree},       {"alpha", num(e.alpha)},   {"samples", e.samples},
           {"seed", e.seed},           {"centers", e.centers},    {"min_ratio", num(e.min_ratio)},
           {"max_ratio", num(e.max_ratio)}};
}

void from_json(const json& j, DensityEstimate& e) {
  j.at("degree").get_to(e.degree);
  e.alpha = get_num(j.at("alpha"));
  j.at("samples").get_to(e.samples);
  j.at("seed").get_to(e.seed);
  j.at("centers").get_to(e.centers);
  e.min_ratio = get_num(j.at("min_ratio"));
  e.max_ratio = get_num(j.at("max_ratio"));
}

void to_json(json& j, const EquidistributionReport& e) {
  j = json{{"radius", num(e.radius)}, {"samples", e.samples}, {"seed", e.seed}, {"errors", json::array()}};
  for (const auto& [L, err] : e.errors) j["errors"].push_back(json{{"degree", L}, {"error", num(err)}});
}

void from_json(const json& j, EquidistributionReport& e) {
  e.radius = get_num(j.at("radius"));
  j.at("samples").get_to(e.samples);
  j.at("seed").get_to(e.seed);
  e.errors.clear();
  for (const auto& row : j.at("errors")) e.errors[row.at("degree").get<int>()] = get_num(row.at("error"));
}

void to_json(json& j, const ExtremalConstants& e) {
  j = json{{"degree", e.degree},
           {"omega", num(e.omega)},
           {"fejes_toth_distance", num(e.fejes_toth_distance)},
           {"scaled_distance", num(e.scaled_distance)},
           {"kappa", num(e.kappa)},
           {"molnar_density", num(e.molnar_density)}};
}

void from_json(const json& j, ExtremalConstants& e) {
  j.at("degree").get_to(e.degree);
  e.omega = get_num(j.at("omega"));
  e.fejes_toth_distance = get_num(j.at("fejes_toth_distance"));
  e.scaled_distance = get_num(j.at("scaled_distance"));
  e.kappa = get_num(j.at("kappa"));
  e.molnar_density = get_num(j.at("molnar_density"));
}

void to_json(json& j, const LocalPairScan& s) {
  j = json{{"degree", s.degree},
           {"alpha", num(s.alpha)},
           {"samples", s.samples},
           {"seed", s.seed},
           {"worst_local_min", num(s.worst_local_min)},
           {"caps_scanned", s.caps_scanned},
           {"caps_skipped", s.caps_skipped}};
}

void from_json(const json& j, LocalPairScan& s) {
  j.at("degree").get_to(s.degree);
  s.alpha = get_num(j.at("alpha"));
  j.at("samples").get_to(s.samples);
  j.at("seed").get_to(s.seed);
  s.worst_local_min = get_num(j.at("worst_local_min"));
  j.at("caps_scanned").get_to(s.caps_scanned);
  j.at("caps_skipped").get_to(s.caps_skipped);
}

json without_timing(const json& report) {
  json copy = report;
  copy.erase("timing");
  return copy;
}

unsigned worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FEKETE_SPHERE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

CommandResult cmd_generate(const RunConfig& config) {
  const Stopwatch watch;
  config.validate();
  if (config.degrees.empty()) throw CliError(exit_code::usage, "generate: --L is required");
  const FeketeConfig solver = config.solver_config();
  const fs::path out = config.out;
  fs::create_directories(out);

  const std::size_t n = config.degrees.size();
  std::vector<std::optional<FeketeResult>> results(n);
  std::vector<double> seconds(n);
  parallel_for(n, [&](std::size_t i) {
    const Stopwatch w;
    results[i] = fekete_points(PolySpace(config.d, config.degrees[i]), solver);
    seconds[i] = w.seconds();
  });

  CommandResult result{Report{kReportSchema, config}};
  json rows = json::array();
  bool warning = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int L = config.degrees[i];
    const auto& r = *results[i];
    const std::string name = fekete_file_name(config.d, L);
    write_points(r.points, out / name, {"fekete L=" + std::to_string(L) + " d=" + std::to_string(config.d)});
    warning = warning || !r.log.certificate_ok;
    rows.push_back(json{{"degree", L}, {"file", name}, {"solve", r.log}});
    result.report.timing["per_degree_seconds"][std::to_string(L)] = round12(seconds[i]);
  }
  result.report.payload["degrees"] = rows;
  result.exit_code = warning ? exit_code::certificate_warning : exit_code::ok;
  finish(result, watch);
  return result;
}

CommandResult cmd_analyze(const RunConfig& config) {
  const Stopwatch watch;
  config.validate();
  if (config.points.empty()) throw CliError(exit_code::usage, "analyze: --points is required");

  std::vector<fs::path> files;
  for (const auto& p : config.points) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> inside;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.path().extension() == ".txt") inside.push_back(e.path());
      }
      std::sort(inside.begin(), inside.end());
      files.insert(files.end(), inside.begin(), inside.end());
    } else {
      files.emplace_back(p);
    }
  }

  CommandResult result{Report{kReportSchema, config}};
  json entries = json::array();
  json skipped = json::array();
  auto skip = [&](const std::string& analysis, const std::string& file, const std::string& reason) {
    skipped.push_back(json{{"analysis", analysis}, {"file", file}, {"reason", reason}});
  };
  TriangularArray array(config.d, "analyze");

  for (const auto& path : files) {
    PointFile f = read_input(path);
    const std::string name = path.filename().string();
    const PointSet& pts = f.points;
    std::optional<int> L = degree_from_comments(f.comments);
    if (!L && config.degrees.size() == 1) L = config.degrees.front();

    json entry{{"file", name}, {"d", pts.dimension()}, {"points", pts.size()}};
    entry["degree"] = L ? json(*L) : json(nullptr);

    if (pts.size() >= 2) {
      const double sep = separation(pts);
      entry["separation"]["min_distance"] = num(sep);
      if (L && *L >= 1) {
        entry["separation"]["separation_ratio"] = num(sep / (std::numbers::pi / (2.0 * *L)));
        entry["separation"]["scaled"] = num(sep * *L);
        if (pts.dimension() == 2) {
          const auto ft = fejes_toth_bound(*L);
          entry["separation"]["fejes_toth_bound"] = num(ft.distance);
          entry["separation"]["below_fejes_toth"] = sep <= ft.distance;
          entry["extremal_constants"] = extremal_constants(*L);
        }
      }
    } else {
      skip("separation", name, "fewer than two points");
    }

    if (config.mz) {
      if (L) {
        entry["frame_bounds"] = frame_bounds_p2(PolySpace(pts.dimension(), *L), pts);
      } else {
        skip("frame_bounds", name, "degree unknown (no fekete header and no single --L)");
      }
    }

    if (!config.alphas.empty()) {
      if (!L || *L < 1) {
        skip("density", name, "degree unknown or zero");
      } else {
        TriangularArray single(pts.dimension(), name);
        single.set(*L, pts);
        for (double alpha : config.alphas) {
          if (alpha / *L > std::numbers::pi) {
            skip("density", name, "alpha/L = " + fmt12(alpha / *L) + " exceeds pi");
            continue;
          }
          entry["density"].push_back(density_profile(single, *L, alpha, config.samples, config.seed));
          entry["local_pairs"].push_back(local_pair_scan(single, *L, alpha, config.samples, config.seed));
        }
      }
    }
    if (L && pts.dimension() == config.d && !array.has(*L)) array.set(*L, pts);
    entries.push_back(entry);
  }
  result.report.payload["files"] = entries;

  if (config.radius) {
    const auto degrees = array.degrees();
    if (degrees.empty()) {
      skip("cap_convergence", "", "no input with a known degree");
    } else {
      result.report.payload["cap_convergence"] =
          cap_convergence(array, degrees, *config.radius, config.samples, config.seed);
    }
  }
  result.report.payload["skipped"] = skipped;
  finish(result, watch);
  return result;
}

CommandResult cmd_mz(const RunConfig& config) {
  const Stopwatch watch;
  config.validate();
  if (config.degrees.empty()) throw CliError(exit_code::usage, "mz: --L is required");
  std::set<int> needed;
  for (int L : config.degrees) needed.insert(dilated_degree(L, config.eps, Dilation::up));
  const TriangularArray z = load_array(config, needed);
  const TriangularArray z_eps = dilate_array(z, config.eps, Dilation::up, config.degrees);

  const std::size_t n = config.degrees.size();
  std::vector<json> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const int L = config.degrees[i];
    const int source = dilated_degree(L, config.eps, Dilation::up);
    const PolySpace space(config.d, L);
    const PointSet& nodes = z_eps.at(L);
    json row{{"degree", L}, {"source_degree", source}, {"points", nodes.size()}};
    row["frame_bounds"] = frame_bounds_p2(space, nodes);
    row["p1"] = mz_constant_general_p(space, nodes, 1.0, config.trials, config.seed);
    row["pinf"] = mz_constant_general_p(space, nodes, kInfinity, config.trials, config.seed);

    const WeightPolynomial weight = weight_polynomial(config.d, L, config.eps);
    const WeightedCardinalSum op(CardinalBasis(PolySpace(config.d, source), nodes), weight);
    double worst = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      const auto seed = config.seed + static_cast<std::uint64_t>(t);
      const PolynomialInSpace q = PolynomialInSpace::random(space, seed);
      std::vector<double> v;
      for (const auto& p : nodes) v.push_back(q(p));
      for (const auto& x : sample_centers(config.d, 10, seed)) {
        worst = std::max(worst, std::abs(mz_reconstruct(space, op, v, x) - q(x)));
      }
    }
    row["weight_half_degree"] = weight.half_degree();
    row["representation_error"] = num(worst);
    const OperatorBounds b = weighted_operator_bounds(op, static_cast<int>(space.dim()));
    row["operator_bounds"] = json{{"l1", num(b.l1_constant)}, {"linf", num(b.linf_constant)},
                                  {"weight_sum_sup", num(b.weight_sum_sup)}};
    rows[i] = std::move(row);
  });

  CommandResult result{Report{kReportSchema, config}};
  result.report.payload["eps"] = num(config.eps);
  result.report.payload["rows"] = rows;
  double min_a = kInfinity, max_b = 0.0;
  for (const auto& r : rows) {
    min_a = std::min(min_a, get_num(r["frame_bounds"]["A"]));
    max_b = std::max(max_b, get_num(r["frame_bounds"]["B"]));
  }
  result.report.payload["uniformity"] = json{{"min_A", num(min_a)}, {"max_B", num(max_b)},
                                             {"ratio", num(min_a > 0 ? max_b / min_a : kInfinity)}};
  if (config.d == 1) {
    json baseline = json::array();
    for (int L : config.degrees) {
      const PointSet roots = generate_mesh(1, static_cast<std::size_t>(2 * L + 1), MeshKind::fibonacci);
      baseline.push_back(json{{"degree", L}, {"frame_bounds", frame_bounds_p2(PolySpace(1, L), roots)}});
    }
    result.report.payload["roots_of_unity"] = baseline;
  }
  finish(result, watch);
  return result;
}

CommandResult cmd_interp(const RunConfig& config) {
  const Stopwatch watch;
  config.validate();
  if (config.degrees.empty()) throw CliError(exit_code::usage, "interp: --L is required");
  std::set<int> needed;
  for (int L : config.degrees) needed.insert(dilated_degree(L, config.eps, Dilation::down));
  const TriangularArray z = load_array(config, needed);

  const std::size_t n = config.degrees.size();
  std::vector<json> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const int L = config.degrees[i];
    const int source = dilated_degree(L, config.eps, Dilation::down);
    const PolySpace target(config.d, L);
    const PointSet& nodes = z.at(source);
    const PolySpace node_space(config.d, source);
    const WeightedCardinalSum op(CardinalBasis(node_space, nodes), sparse_weight(config.d, source, L));
    double residual = 0.0, worst_ratio = 0.0, sum_ratio = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      const auto v = random_unit_vector(node_space.dim(), config.seed + static_cast<std::uint64_t>(t));
      const PolynomialInSpace r = interpolate_sparse(target, op, v);
      for (std::size_t j = 0; j < nodes.size(); ++j) residual = std::max(residual, std::abs(r(nodes[j]) - v[j]));
      const double ratio = r.coeffs().norm() / std::sqrt(1.0 / static_cast<double>(node_space.dim()));
      worst_ratio = std::max(worst_ratio, ratio);
      sum_ratio += ratio;
    }
    rows[i] = json{{"degree", L},
                   {"source_degree", source},
                   {"points", nodes.size()},
                   {"weight_half_degree", op.weight().half_degree()},
                   {"residual", num(residual)},
                   {"norm_ratio_max", num(worst_ratio)},
                   {"norm_ratio_mean", num(sum_ratio / config.trials)}};
  });

  CommandResult result{Report{kReportSchema, config}};
  result.report.payload["eps"] = num(config.eps);
  result.report.payload["rows"] = rows;
  finish(result, watch);
  return result;
}

CommandResult cmd_study(const RunConfig& config) {
  const Stopwatch watch;
  config.validate();
  if (config.degrees.empty()) throw CliError(exit_code::usage, "study: degree list is empty (--L)");
  const double radius = config.radius.value_or(1.0);
  const std::set<int> needed(config.degrees.begin(), config.degrees.end());
  const TriangularArray z = load_array(config, needed);
  const EquidistributionReport eq = cap_convergence(z, config.degrees, radius, config.samples, config.seed);
  const double kappa = molnar_kappa();

  const std::size_t n = config.degrees.size();
  std::vector<json> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const int L = config.degrees[i];
    const PointSet& pts = z.at(L);
    json row{{"degree", L}, {"cap_error", num(eq.errors.at(L))}};
    if (pts.size() >= 2) {
      const double sep = separation(pts);
      row["min_distance"] = num(sep);
      row["scaled_min_distance"] = num(L * sep);
    }
    if (config.d == 2 && L >= 1) row["fejes_toth_scaled"] = num(fejes_toth_bound(L).scaled);
    const PolySpace space(config.d, L);
    if (static_cast<Eigen::Index>(pts.size()) == space.dim()) {
      const CardinalBasis basis(space, pts);
      row["lebesgue_proxy"] = num(lebesgue_constant(basis).value);
      row["cardinal_sup"] = num(cardinal_sup(basis).value);
    }
    rows[i] = std::move(row);
  });

  CommandResult result{Report{kReportSchema, config}};
  result.report.payload["radius"] = num(radius);
  result.report.payload["kappa"] = num(kappa);
  result.report.payload["cap_convergence"] = eq;
  result.report.payload["rows"] = rows;

  json assertions = json::array();
  if (n >= 2) {
    const int first = config.degrees.front(), last = config.degrees.back();
    const bool pass = eq.errors.at(last) < eq.errors.at(first);
    assertions.push_back(json{{"name", "cap_error_decreases"},
                              {"detail", "e_" + std::to_string(last) + " < e_" + std::to_string(first)},
                              {"status", pass ? "PASS" : "FAIL"}});
  }
  bool separated = true;
  for (const auto& r : rows) {
    if (r.contains("scaled_min_distance") && r["degree"].get<int>() >= 1) {
      separated = separated && get_num(r["scaled_min_distance"]) >= 0.95 * std::numbers::pi / 2.0;
    }
  }
  assertions.push_back(json{{"name", "separation_scaling"},
                            {"detail", "L * min distance >= 0.95 * pi / 2"},
                            {"status", separated ? "PASS" : "FAIL"}});
  result.report.payload["assertions"] = assertions;

  fs::create_directories(config.out);
  std::ofstream csv(fs::path(config.out) / "study.csv");
  if (!csv) throw CliError(exit_code::error, "cannot write study.csv");
  csv << "L,cap_error,min_distance,L_min_distance,kappa,fejes_toth_L_dL,lebesgue_proxy\n";
  auto cell = [](const json& row, const char* key) {
    return row.contains(key) ? fmt12(get_num(row[key])) : std::string{};
  };
  for (const auto& r : rows) {
    csv << r["degree"].get<int>() << ',' << cell(r, "cap_error") << ',' << cell(r, "min_distance") << ','
        << cell(r, "scaled_min_distance") << ',' << fmt12(kappa) << ',' << cell(r, "fejes_toth_scaled") << ','
        << cell(r, "lebesgue_proxy") << '\n';
  }
  finish(result, watch);
  return result;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate Fekete points on the sphere and diagnostics of their arrays", "fekete-sphere"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string degrees_text;
  std::string radius_text;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"generate", "compute Fekete point files for the requested degrees"},
      {"analyze", "separation, frame bounds, densities and cap counts of point files"},
      {"mz", "frame bounds and reconstruction checks for the dilated arrays Z_eps"},
      {"interp", "interpolation residuals and norm ratios for the arrays Z_-eps"},
      {"study", "equidistribution trend, scaled separation and Lebesgue constants"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--d", cfg.d, "sphere dimension (1 or 2)");
    sub->add_option("--L", degrees_text, "degrees, e.g. 1..4 or 4,8,12");
    sub->add_option("--eps", cfg.eps, "dilation parameter");
    sub->add_option("--alpha", cfg.alphas, "cap scale(s) alpha for radius alpha/L")->delimiter(',');
    sub->add_option("--radius", radius_text, "cap radius for equidistribution checks");
    sub->add_option("--mesh", cfg.mesh, "candidate mesh: fibonacci[:n] | random[:n[:seed]] | grid[:n]");
    sub->add_option("--seed", cfg.seed, "seed for every random element");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--points", cfg.points, "point files or a directory of fekete_d<d>_L<L>.txt files");
    sub->add_option("--mode", cfg.mode, "refinement: exchange | ascent | both");
    sub->add_option("--max-iter", cfg.max_iterations, "refinement iteration cap");
    sub->add_option("--stop-tol", cfg.stop_tolerance, "minimal log|det| gain per step");
    sub->add_option("--cert-tol", cfg.certificate_tolerance, "allowed excess of sup|l_i| over 1");
    sub->add_option("--samples", cfg.samples, "sampled cap centers");
    sub->add_option("--trials", cfg.trials, "random trials for stochastic estimates");
    sub->add_flag("--mz", cfg.mz, "analyze: compute p = 2 frame bounds");
  }

  std::vector<std::string> argv_storage = args;
  argv_storage.insert(argv_storage.begin(), "fekete-sphere");
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "fekete-sphere: " << e.what() << "\n" << app.help();
    return exit_code::usage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!degrees_text.empty()) cfg.degrees = parse_degrees(degrees_text);
    if (!radius_text.empty()) cfg.radius = std::stod(radius_text);
    CommandResult result;
    if (cfg.command == "generate") {
      result = cmd_generate(cfg);
    } else if (cfg.command == "analyze") {
      result = cmd_analyze(cfg);
    } else if (cfg.command == "mz") {
      result = cmd_mz(cfg);
    } else if (cfg.command == "interp") {
      result = cmd_interp(cfg);
    } else {
      result = cmd_study(cfg);
    }
    out << "wrote " << report_path(cfg).string() << "\n";
    if (result.exit_code == exit_code::certificate_warning) {
      err << "fekete-sphere: warning: at least one certificate sup|l_i| exceeds 1 + " << fmt12(cfg.certificate_tolerance)
          << "\n";
    }
    return result.exit_code;
  } catch (const CliError& e) {
    err << "fekete-sphere: " << e.what() << "\n";
    return e.code();
  } catch (const MissingDegreeError& e) {
    err << "fekete-sphere: " << e.what() << "\n";
    return exit_code::missing_degree;
  } catch (const InvalidArgument& e) {
    err << "fekete-sphere: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::invalid_argument& e) {
    err << "fekete-sphere: invalid value: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "fekete-sphere: error: " << e.what() << "\n";
    return exit_code::error;
  }
}

}  // namespace fekete

#include "fekete/fekete_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "fekete/errors.hpp"
#include "fekete/interpolation_ops.hpp"

namespace fekete {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool has_exchange(RefinementMode m) { return m != RefinementMode::ascent; }
bool has_ascent(RefinementMode m) { return m != RefinementMode::exchange; }

double lu_logabsdet(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const auto& m = lu.matrixLU();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) sum += std::log(std::abs(m(i, i)));
  return sum;
}

struct SolverState {
  const PolySpace& space;
  std::vector<SpherePoint> points;
  Eigen::MatrixXd v;
  double logdet;
  std::vector<double>& trace;
};

// Best-improvement single-point exchanges against the columns of `y`. The
// matrix W = V^{-1} Y gives every exchange ratio det(V')/det(V) = W(j, k); an
// accepted swap updates W by a rank-one correction.
int exchange_sweep(SolverState& s, const Eigen::MatrixXd& y, const std::vector<SpherePoint>& cands,
                   double tolerance) {
  const Eigen::Index n = s.v.rows();
  Eigen::MatrixXd w = Eigen::PartialPivLU<Eigen::MatrixXd>(s.v).solve(y);
  int moves = 0;
  int since_refresh = 0;
  const int max_moves = static_cast<int>(20 * n + 100);
  while (moves < max_moves) {
    Eigen::Index j = 0, k = 0;
    const double best = w.cwiseAbs().maxCoeff(&j, &k);
    if (!(std::log(best) > tolerance)) break;
    Eigen::VectorXd u = w.col(k);
    const double pivot = u[j];
    const Eigen::RowVectorXd row = w.row(j);
    u[j] -= 1.0;
    w.noalias() -= (u / pivot) * row;
    s.points[static_cast<std::size_t>(j)] = cands[static_cast<std::size_t>(k)];
    s.v.col(j) = y.col(k);
    s.logdet += std::log(std::abs(pivot));
    s.trace.push_back(s.logdet);
    ++moves;
    if (++since_refresh >= n) {
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(s.v);
      w = lu.solve(y);
      s.logdet = lu_logabsdet(lu);
      since_refresh = 0;
    }
  }
  if (moves > 0) s.logdet = log_abs_det(s.v);
  return moves;
}

// Projected gradient ascent of log|det|. The derivative w.r.t. node j is the
// gradient of its cardinal function at the node: row j of V^{-1} times the
// basis gradient there.
double gradient_ascent(SolverState& s, double& step, double tolerance, int max_steps, int& steps) {
  const Eigen::Index n = s.v.rows();
  double total = 0.0;
  for (int it = 0; it < max_steps; ++it) {
    const Eigen::MatrixXd inv = Eigen::PartialPivLU<Eigen::MatrixXd>(s.v).inverse();
    std::vector<Eigen::VectorXd> moves(static_cast<std::size_t>(n));
    double max_move = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& z = s.points[static_cast<std::size_t>(j)];
      const Eigen::VectorXd g = basis_gradient(s.space, z).transpose() * inv.row(j).transpose();
      moves[static_cast<std::size_t>(j)] = tangent_frame(z) * g;
      max_move = std::max(max_move, moves[static_cast<std::size_t>(j)].norm());
    }
    if (max_move == 0.0) break;
    bool accepted = false;
    double gain = 0.0;
    while (step * max_move > 1e-13) {
      // Limit the largest displacement to a quarter of the Nyquist scale.
      const double scale = std::min(step, 0.25 / ((s.space.degree() + 1.0) * max_move));
      std::vector<SpherePoint> trial;
      trial.reserve(static_cast<std::size_t>(n));
      for (Eigen::Index j = 0; j < n; ++j) {
        trial.push_back(exp_map(s.points[static_cast<std::size_t>(j)], scale * moves[static_cast<std::size_t>(j)]));
      }
      Eigen::MatrixXd v = basis_matrix(s.space, trial);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(v);
      const double logdet = lu_logabsdet(lu);
      if (logdet > s.logdet) {
        gain = logdet - s.logdet;
        s.points = std::move(trial);
        s.v = std::move(v);
        s.logdet = logdet;
        s.trace.push_back(logdet);
        step = scale * 1.5;
        accepted = true;
        break;
      }
      step = scale * 0.5;
    }
    if (!accepted) break;
    ++steps;
    total += gain;
    if (gain < tolerance) break;
  }
  return total;
}

}  // namespace

double log_abs_det(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("log_abs_det: matrix is not square");
  if (m.rows() == 0) return 0.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (lu.rank() < m.rows()) return kNegInf;
  const auto& f = lu.matrixLU();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) sum += std::log(std::abs(f(i, i)));
  return sum;
}

VandermondeSystem vandermonde(const PolySpace& space, const PointSet& points) {
  if (points.dimension() != space.d()) throw InvalidArgument("vandermonde: dimension mismatch");
  VandermondeSystem sys{space, points, basis_matrix(space, points)};
  if (sys.matrix.cols() == 0) {
    sys.rank = 0;
    sys.logabsdet = sys.square() ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    return sys;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.matrix);
  sys.rank = lu.rank();
  if (sys.square()) {
    if (sys.rank < sys.matrix.rows()) {
      sys.logabsdet = kNegInf;
    } else {
      const auto& f = lu.matrixLU();
      double sum = 0.0;
      for (Eigen::Index i = 0; i < f.rows(); ++i) sum += std::log(std::abs(f(i, i)));
      sys.logabsdet = sum;
    }
  } else {
    sys.logabsdet = std::numeric_limits<double>::quiet_NaN();
  }
  return sys;
}

PointSet greedy_select(const PolySpace& space, const PointSet& mesh) {
  if (mesh.dimension() != space.d()) throw InvalidArgument("greedy_select: dimension mismatch");
  const Eigen::Index n = space.dim();
  if (static_cast<Eigen::Index>(mesh.size()) < n) {
    throw SingularError("greedy_select: mesh has " + std::to_string(mesh.size()) +
                        " points, fewer than dim = " + std::to_string(n));
  }
  Eigen::MatrixXd r = basis_matrix(space, mesh);
  Eigen::RowVectorXd norms = r.colwise().squaredNorm();
  const double scale = norms.maxCoeff();
  std::vector<bool> taken(mesh.size(), false);
  std::vector<SpherePoint> chosen;
  chosen.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    for (Eigen::Index k = 0; k < norms.size(); ++k) {
      if (!taken[static_cast<std::size_t>(k)]) best = std::max(best, norms[k]);
    }
    // Relative residual below 1e-8 in norm means the chosen columns span the mesh.
    if (!(best > 1e-16 * scale)) {
      throw SingularError("greedy_select: mesh does not span Pi_L (rank " + std::to_string(step) +
                          " < " + std::to_string(n) + ")");
    }
    // Lowest index among the (numerically) tied maxima.
    Eigen::Index pick = 0;
    for (Eigen::Index k = 0; k < norms.size(); ++k) {
      if (!taken[static_cast<std::size_t>(k)] && norms[k] >= best * (1.0 - 1e-12)) {
        pick = k;
        break;
      }
    }
    taken[static_cast<std::size_t>(pick)] = true;
    chosen.push_back(mesh[static_cast<std::size_t>(pick)]);
    const Eigen::VectorXd q = r.col(pick) / r.col(pick).norm();
    const Eigen::RowVectorXd proj = q.transpose() * r;
    r.noalias() -= q * proj;
    // Recomputed rather than downdated: subtracting |proj|^2 leaves
    // cancellation noise that can hide a rank deficiency.
    norms = r.colwise().squaredNorm();
    norms[pick] = 0.0;
  }
  return PointSet(space.d(), std::move(chosen), "greedy:" + mesh.label());
}

void FeketeConfig::validate(const PolySpace& space) const {
  if (space.d() != 1 && space.d() != 2) throw InvalidArgument("Fekete points are computed for d in {1, 2}");
  if (!(stop_tolerance > 0.0)) throw InvalidArgument("FeketeConfig: stop tolerance must be > 0");
  if (max_iterations < 1) throw InvalidArgument("FeketeConfig: max_iterations must be >= 1");
  if (!(certificate_tolerance >= 0.0)) throw InvalidArgument("FeketeConfig: certificate tolerance must be >= 0");
  if (!(patch_scale > 0.0)) throw InvalidArgument("FeketeConfig: patch scale must be > 0");
  if (mesh.n != 0 && static_cast<Eigen::Index>(mesh.n) < 4 * space.dim()) {
    throw InvalidArgument("FeketeConfig: mesh size " + std::to_string(mesh.n) + " is below 4 * dim = " +
                          std::to_string(4 * space.dim()));
  }
}

MeshSpec FeketeConfig::resolved_mesh(const PolySpace& space) const {
  MeshSpec out = mesh;
  if (out.n == 0) out.n = std::max<std::size_t>(50 * static_cast<std::size_t>(space.dim()), 2000);
  if (out.kind == MeshKind::random && out.seed == 0) out.seed = seed;
  return out;
}

std::string to_string(RefinementMode mode) {
  switch (mode) {
    case RefinementMode::exchange: return "exchange";
    case RefinementMode::ascent: return "ascent";
    case RefinementMode::both: return "both";
  }
  return "both";
}

RefinementMode parse_refinement_mode(const std::string& text) {
  if (text == "exchange") return RefinementMode::exchange;
  if (text == "ascent") return RefinementMode::ascent;
  if (text == "both") return RefinementMode::both;
  throw InvalidArgument("unknown refinement mode '" + text + "'");
}

RefineResult refine_exchange(const PolySpace& space, const PointSet& start, const FeketeConfig& config,
                             const PointSet* candidates) {
  config.validate(space);
  if (start.dimension() != space.d()) throw InvalidArgument("refine_exchange: dimension mismatch");
  if (static_cast<Eigen::Index>(start.size()) != space.dim()) {
    throw InvalidArgument("refine_exchange: start has " + std::to_string(start.size()) +
                          " points, expected " + std::to_string(space.dim()));
  }
  RefineResult result{start, {}};
  std::vector<double>& trace = result.trace;
  SolverState s{space, start.points(), basis_matrix(space, start), 0.0, trace};
  s.logdet = log_abs_det(s.v);
  if (s.logdet == kNegInf) throw SingularError("refine_exchange: start is not unisolvent");
  trace.push_back(s.logdet);
  const int L = space.degree();
  if (L == 0) return result;

  const bool exchange = has_exchange(config.mode);
  const bool ascent = has_ascent(config.mode);
  std::optional<PointSet> own_mesh;
  if (exchange && candidates == nullptr) own_mesh = generate_mesh(space.d(), config.resolved_mesh(space));
  const PointSet* mesh = candidates ? candidates : own_mesh ? &*own_mesh : nullptr;
  Eigen::MatrixXd global_y;
  if (exchange) global_y = basis_matrix(space, *mesh);

  const double base_radius = config.patch_scale / L;
  double radius = base_radius;
  double step = 0.1 / ((L + 1.0) * (L + 1.0));
  bool include_global = true;
  const int ascent_steps_per_iteration = 40;

  for (int iter = 1;; ++iter) {
    if (iter > config.max_iterations) {
      result.hit_iteration_cap = true;
      break;
    }
    result.iterations = iter;
    int moves = 0;
    double gain = 0.0;
    if (exchange) {
      std::vector<SpherePoint> cands;
      if (include_global) cands = mesh->points();
      const std::size_t patch_begin = cands.size();
      for (const auto& z : s.points) {
        auto patch = local_patch(z, radius, 3);
        cands.insert(cands.end(), patch.begin(), patch.end());
      }
      const Eigen::MatrixXd patch_y =
          basis_matrix(space, std::vector<SpherePoint>(cands.begin() + static_cast<std::ptrdiff_t>(patch_begin), cands.end()));
      Eigen::MatrixXd y(space.dim(), static_cast<Eigen::Index>(cands.size()));
      if (include_global) y.leftCols(global_y.cols()) = global_y;
      y.rightCols(patch_y.cols()) = patch_y;
      const double before = s.logdet;
      moves = exchange_sweep(s, y, cands, config.stop_tolerance);
      gain += s.logdet - before;
      result.exchange_moves += moves;
    }
    if (ascent) {
      gain += gradient_ascent(s, step, config.stop_tolerance, ascent_steps_per_iteration, result.ascent_steps);
    }
    if (moves == 0 && gain < config.stop_tolerance) {
      if (exchange && !ascent && radius > 1e-7 * base_radius) {
        radius *= 0.5;
        continue;
      }
      if (exchange && !include_global) {
        include_global = true;
        continue;
      }
      break;
    }
    if (include_global && moves > 0) radius = base_radius;
    include_global = false;
  }

  result.points = PointSet(space.d(), std::move(s.points), "refined");
  return result;
}

FeketeResult fekete_points(const PolySpace& space, const FeketeConfig& config) {
  config.validate(space);
  const MeshSpec mesh_spec = config.resolved_mesh(space);
  const PointSet mesh = generate_mesh(space.d(), mesh_spec);
  const PointSet greedy = greedy_select(space, mesh);
  RefineResult refined = refine_exchange(space, greedy, config, &mesh);

  SolveLog log;
  log.degree = space.degree();
  log.d = space.d();
  log.mesh = mesh_spec.to_string();
  log.seed = config.seed;
  log.mode = to_string(config.mode);
  log.iterations = refined.iterations;
  log.exchange_moves = refined.exchange_moves;
  log.ascent_steps = refined.ascent_steps;
  log.greedy_logabsdet = refined.trace.front();
  log.final_logabsdet = refined.trace.back();
  log.logabsdet_trace = refined.trace;
  log.hit_iteration_cap = refined.hit_iteration_cap;

  const CardinalBasis basis(space, refined.points);
  const SupEstimate cert = cardinal_sup(basis);
  log.certificate = cert.value;
  log.certificate_mesh = cert.mesh;
  log.certificate_ok = cert.value <= 1.0 + config.certificate_tolerance;
  if (space.degree() >= 1) {
    log.min_distance = min_pairwise_distance(refined.points);
    log.separation_ratio = log.min_distance / (std::numbers::pi / (2.0 * space.degree()));
  }
  PointSet points(space.d(), refined.points.points(),
                  "fekete L=" + std::to_string(space.degree()) + " d=" + std::to_string(space.d()));
  return {std::move(points), std::move(log)};
}

void TriangularArray::set(int L, PointSet points) {
  if (points.dimension() != d_) throw InvalidArgument("TriangularArray: dimension mismatch");
  levels_.insert_or_assign(L, std::move(points));
}

const PointSet& TriangularArray::at(int L) const {
  const auto it = levels_.find(L);
  if (it == levels_.end()) throw MissingDegreeError("triangular array has no degree " + std::to_string(L), L);
  return it->second;
}

std::vector<int> TriangularArray::degrees() const {
  std::vector<int> out;
  for (const auto& [L, pts] : levels_) out.push_back(L);
  return out;
}

int dilated_degree(int L, double eps, Dilation direction) {
  if (L < 0) throw InvalidArgument("dilated_degree: L must be >= 0");
  if (!(eps > 0.0)) throw InvalidArgument("dilated_degree: eps must be > 0");
  const double factor = direction == Dilation::up ? 1.0 + eps : 1.0 - eps;
  if (direction == Dilation::down && factor < 0.0) throw InvalidArgument("dilated_degree: eps must be < 1 for down");
  return static_cast<int>(std::floor(factor * L + 1e-9));
}

TriangularArray dilate_array(const TriangularArray& z, double eps, Dilation direction,
                             std::span<const int> degrees) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s eps=%.12g", direction == Dilation::up ? "up" : "down", eps);
  TriangularArray out(z.d(), z.provenance() + " | dilated " + buf);
  for (int L : degrees) {
    const int source = dilated_degree(L, eps, direction);
    if (!z.has(source)) {
      throw MissingDegreeError("dilate_array: degree " + std::to_string(L) + " needs Z(" +
                                   std::to_string(source) + ")",
                               source);
    }
    out.set(L, z.at(source));
  }
  return out;
}

}  // namespace fekete

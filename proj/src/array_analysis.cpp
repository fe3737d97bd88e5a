#include "fekete/array_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "fekete/errors.hpp"

namespace fekete {

double separation(const PointSet& points) {
  if (points.size() < 2) throw InvalidArgument("separation needs at least two points");
  return min_pairwise_distance(points);
}

FrameBounds frame_bounds_p2(const PolySpace& space, const PointSet& points) {
  if (points.dimension() != space.d()) throw InvalidArgument("frame_bounds_p2: dimension mismatch");
  FrameBounds fb;
  fb.degree = space.degree();
  fb.points = points.size();
  const Eigen::MatrixXd y = basis_matrix(space, points);
  const Eigen::MatrixXd gram = (y * y.transpose()) / static_cast<double>(space.dim());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  fb.upper = std::max(ev.maxCoeff(), 0.0);
  const double floor = 1e-12 * std::max(fb.upper, 1e-300);
  fb.rank = static_cast<Eigen::Index>((ev.array() > floor).count());
  fb.lower = fb.rank < space.dim() ? 0.0 : ev.minCoeff();
  fb.constant = fb.lower > 0.0 ? std::max(fb.upper, 1.0 / fb.lower) : std::numeric_limits<double>::infinity();
  return fb;
}

MzEstimate mz_constant_general_p(const PolySpace& space, const PointSet& points, double p, int trials,
                                 std::uint64_t seed) {
  if (p != 1.0 && p != kInfinity) throw InvalidArgument("mz_constant_general_p: p must be 1 or infinity");
  if (trials < 1) throw InvalidArgument("mz_constant_general_p: trials must be >= 1");
  if (points.dimension() != space.d()) throw InvalidArgument("mz_constant_general_p: dimension mismatch");
  MzEstimate est;
  est.degree = space.degree();
  est.p = p;
  est.trials = trials;
  est.seed = seed;

  const Eigen::MatrixXd y = basis_matrix(space, points);
  const Eigen::Index rank = points.empty() ? 0 : Eigen::FullPivLU<Eigen::MatrixXd>(y).rank();
  if (rank < space.dim()) {
    est.unbounded = true;
    est.estimate = kInfinity;
    est.worst_lower_ratio = kInfinity;
    return est;
  }

  const QuadratureRule rule = quadrature_rule(space.d(), 4 * space.degree() + 2);
  const Eigen::MatrixXd rule_y = basis_matrix(space, rule.nodes);
  const double pi_l = static_cast<double>(space.dim());
  for (int t = 0; t < trials; ++t) {
    const PolynomialInSpace q = PolynomialInSpace::random(space, seed + static_cast<std::uint64_t>(t));
    const Eigen::VectorXd at_points = y.transpose() * q.coeffs();
    double discrete = 0.0;
    double continuous = 0.0;
    if (p == 1.0) {
      discrete = at_points.cwiseAbs().sum() / pi_l;
      const Eigen::VectorXd at_nodes = rule_y.transpose() * q.coeffs();
      for (Eigen::Index i = 0; i < at_nodes.size(); ++i) {
        continuous += rule.weights[static_cast<std::size_t>(i)] * std::abs(at_nodes[i]);
      }
    } else {
      discrete = at_points.cwiseAbs().maxCoeff();
      continuous = lp_norm(q, kInfinity, rule).value;
    }
    est.worst_lower_ratio = std::max(est.worst_lower_ratio, continuous / discrete);
    est.worst_upper_ratio = std::max(est.worst_upper_ratio, discrete / continuous);
  }
  est.estimate = std::max(est.worst_lower_ratio, est.worst_upper_ratio);
  return est;
}

std::vector<SpherePoint> sample_centers(int d, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) return {};
  return generate_mesh(d, samples, MeshKind::random, seed).points();
}

DensityEstimate density_profile(const TriangularArray& z, int L, double alpha, std::size_t samples,
                                std::uint64_t seed) {
  const PointSet& pts = z.at(L);
  if (L < 1) throw InvalidArgument("density_profile: L must be >= 1");
  if (!(alpha > 0.0)) throw InvalidArgument("density_profile: alpha must be > 0");
  double radius = alpha / L;
  if (radius > std::numbers::pi * (1.0 + 1e-12)) {
    throw InvalidArgument("density_profile: alpha / L exceeds pi");
  }
  radius = std::min(radius, std::numbers::pi);
  const double measure = cap_measure(radius, z.d());
  const double pi_l = static_cast<double>(space_dimension(z.d(), L));

  std::vector<SpherePoint> centers = sample_centers(z.d(), samples, seed);
  centers.insert(centers.end(), pts.begin(), pts.end());

  DensityEstimate est;
  est.degree = L;
  est.alpha = alpha;
  est.samples = samples;
  est.seed = seed;
  est.centers = centers.size();
  est.min_ratio = kInfinity;
  est.max_ratio = 0.0;
  for (const auto& c : centers) {
    const double count = static_cast<double>(count_in_cap(pts, SphericalCap(c, radius)));
    const double ratio = (count / pi_l) / measure;
    est.min_ratio = std::min(est.min_ratio, ratio);
    est.max_ratio = std::max(est.max_ratio, ratio);
  }
  if (centers.empty()) est.min_ratio = 0.0;
  return est;
}

EquidistributionReport cap_convergence(const TriangularArray& z, std::span<const int> degrees, double radius,
                                       std::size_t samples, std::uint64_t seed) {
  for (int L : degrees) z.at(L);
  if (samples == 0) throw InvalidArgument("cap_convergence: samples must be >= 1");
  const double measure = cap_measure(radius, z.d());
  const std::vector<SpherePoint> centers = sample_centers(z.d(), samples, seed);
  EquidistributionReport report;
  report.radius = radius;
  report.samples = samples;
  report.seed = seed;
  for (int L : degrees) {
    const PointSet& pts = z.at(L);
    const double m = static_cast<double>(pts.size());
    double worst = 0.0;
    for (const auto& c : centers) {
      const double mu = m > 0 ? static_cast<double>(count_in_cap(pts, SphericalCap(c, radius))) / m : 0.0;
      worst = std::max(worst, std::abs(mu - measure));
    }
    report.errors[L] = worst;
  }
  return report;
}

FejesTothBound fejes_toth_bound(int L, int d) {
  if (d != 2) throw InvalidArgument("fejes_toth_bound is defined for d = 2 only");
  if (L < 1) throw InvalidArgument("fejes_toth_bound: L must be >= 1");
  const double n = (L + 1.0) * (L + 1.0);
  const double omega = n / (n - 2.0) * std::numbers::pi / 6.0;
  // arccos((cot^2 omega - 1) / 2) rewritten as 2 asin(...) so that large L does
  // not lose digits: sin^2(d/2) = (2 sin w - 1)(2 sin w + 1) / (4 sin^2 w) and
  // 2 sin w - 1 = 4 cos((w + pi/6) / 2) sin((w - pi/6) / 2).
  const double sixth = std::numbers::pi / 6.0;
  const double gap = std::numbers::pi / (3.0 * (n - 2.0));  // omega - pi/6
  const double sin_w = std::sin(omega);
  const double lower = 4.0 * std::cos((omega + sixth) / 2.0) * std::sin(gap / 2.0);
  const double half = std::sqrt(lower * (2.0 * sin_w + 1.0)) / (2.0 * sin_w);
  const double distance = 2.0 * std::asin(std::min(half, 1.0));
  return {L, omega, distance, L * distance};
}

double molnar_density() { return std::numbers::pi / std::sqrt(12.0); }

double molnar_kappa() { return 4.0 * std::sqrt(molnar_density()); }

double molnar_packing_bound(double alpha, double eta, int L) {
  if (L < 1) throw InvalidArgument("molnar_packing_bound: L must be >= 1");
  if (!(alpha > 0.0) || !(eta > 0.0)) throw InvalidArgument("molnar_packing_bound: radii must be > 0");
  return molnar_density() * cap_measure(alpha / L, 2) / cap_measure(eta / (2.0 * L), 2);
}

ExtremalConstants extremal_constants(int L) {
  const FejesTothBound ft = fejes_toth_bound(L);
  return {L, ft.omega, ft.distance, ft.scaled, molnar_kappa(), molnar_density()};
}

LocalPairScan local_pair_scan(const TriangularArray& z, int L, double alpha, std::size_t samples,
                              std::uint64_t seed) {
  const PointSet& pts = z.at(L);
  if (L < 1) throw InvalidArgument("local_pair_scan: L must be >= 1");
  const double radius = std::min(alpha / L, std::numbers::pi);
  if (!(radius > 0.0)) throw InvalidArgument("local_pair_scan: alpha must be > 0");
  std::vector<SpherePoint> centers = sample_centers(z.d(), samples, seed);
  centers.insert(centers.end(), pts.begin(), pts.end());

  LocalPairScan scan;
  scan.degree = L;
  scan.alpha = alpha;
  scan.samples = samples;
  scan.seed = seed;
  for (const auto& c : centers) {
    const SphericalCap cap(c, radius);
    std::vector<SpherePoint> inside;
    for (const auto& p : pts) {
      if (cap.contains(p)) inside.push_back(p);
    }
    if (inside.size() < 2) {
      ++scan.caps_skipped;
      continue;
    }
    ++scan.caps_scanned;
    const double local = min_pairwise_distance(PointSet(z.d(), std::move(inside), {}, DuplicatePolicy::allow));
    scan.worst_local_min = std::max(scan.worst_local_min, local);
  }
  return scan;
}

}  // namespace fekete

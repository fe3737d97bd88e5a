#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fekete/fekete_solver.hpp"
#include "fekete/harmonics.hpp"
#include "fekete/sphere_geometry.hpp"

namespace fekete {

// Minimum pairwise geodesic distance; throws for fewer than two points.
double separation(const PointSet& points);

// Discrete frame bounds of a point set for Pi_L at p = 2: the extreme
// eigenvalues of (1/pi_L) sum_j y(z_j) y(z_j)^T with y = basis_eval, where
// pi_L is the dimension of the test space.
struct FrameBounds {
  int degree = 0;
  double p = 2.0;
  double lower = 0.0;  // A, set to 0 exactly when the points do not span
  double upper = 0.0;  // B
  double constant = 0.0;  // C_p = max(B, 1/A); +inf when A = 0
  std::size_t points = 0;
  Eigen::Index rank = 0;
};

FrameBounds frame_bounds_p2(const PolySpace& space, const PointSet& points);

// Seeded stochastic lower bound on the MZ constant at p in {1, inf}. The
// estimate is the worst ratio, in either direction, between the continuous
// norm and the normalized discrete norm over random polynomials. When the
// points do not span Pi_L, some polynomial vanishes on them and the estimate
// is +inf with `unbounded` set.
struct MzEstimate {
  int degree = 0;
  double p = 1.0;
  double estimate = 0.0;
  double worst_lower_ratio = 0.0;  // max continuous / discrete
  double worst_upper_ratio = 0.0;  // max discrete / continuous
  int trials = 0;
  std::uint64_t seed = 0;
  bool unbounded = false;
};

MzEstimate mz_constant_general_p(const PolySpace& space, const PointSet& points, double p, int trials,
                                 std::uint64_t seed);

// Ratios (#(Z(L) n B(z, alpha/L)) / pi_L) / sigma(B(z, alpha/L)) over seeded
// uniform centers plus every point of Z(L) as a center. min_ratio tracks the
// lower density, max_ratio the upper density (sup over centers).
struct DensityEstimate {
  int degree = 0;
  double alpha = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t centers = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

DensityEstimate density_profile(const TriangularArray& z, int L, double alpha, std::size_t samples,
                                std::uint64_t seed);

// e_L = max over shared sampled centers of |mu_L(B(z, r)) - sigma(B(z, r))|
// with mu_L the normalized counting measure of Z(L).
struct EquidistributionReport {
  double radius = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::map<int, double> errors;
};

EquidistributionReport cap_convergence(const TriangularArray& z, std::span<const int> degrees, double radius,
                                       std::size_t samples, std::uint64_t seed);

// Seeded uniform centers used by the cap scans.
std::vector<SpherePoint> sample_centers(int d, std::size_t samples, std::uint64_t seed);

struct FejesTothBound {
  int degree;
  double omega;          // (L+1)^2 / ((L+1)^2 - 2) * pi / 6
  double distance;       // d_L = arccos((cot^2 omega - 1) / 2)
  double scaled;         // L * d_L
};

// Upper bound for the minimal distance of (L+1)^2 points on S^2.
FejesTothBound fejes_toth_bound(int L, int d = 2);

// kappa = 4 sqrt(pi / sqrt 12).
double molnar_kappa();

// Packing factor pi / sqrt 12 of the hexagonal arrangement.
double molnar_density();

// Upper bound on the number of disjoint caps of radius eta/(2L) inside a cap
// of radius alpha/L on S^2: (pi/sqrt12) sigma(B(alpha/L)) / sigma(B(eta/(2L))).
double molnar_packing_bound(double alpha, double eta, int L);

struct ExtremalConstants {
  int degree;
  double omega;
  double fejes_toth_distance;
  double scaled_distance;
  double kappa;
  double molnar_density;
};

ExtremalConstants extremal_constants(int L);

// Max over sampled caps B(z, alpha/L) of the minimal pairwise distance among
// the points of Z(L) inside; caps with fewer than two points are skipped.
struct LocalPairScan {
  int degree = 0;
  double alpha = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double worst_local_min = 0.0;
  std::size_t caps_scanned = 0;
  std::size_t caps_skipped = 0;
};

LocalPairScan local_pair_scan(const TriangularArray& z, int L, double alpha, std::size_t samples,
                              std::uint64_t seed);

}  // namespace fekete

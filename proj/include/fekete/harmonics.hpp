#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "fekete/sphere_geometry.hpp"

namespace fekete {

// dim Pi_L = ((d + 2L) / d) * binom(d + L - 1, L), in exact integer arithmetic.
// Throws OverflowError when the value does not fit in int64.
std::int64_t space_dimension(int d, int L);

// Pi_L: spherical harmonics of degree <= L on S^d.
class PolySpace {
 public:
  PolySpace(int d, int L);
  int d() const { return d_; }
  int degree() const { return L_; }
  Eigen::Index dim() const { return dim_; }
  // Index of the first basis element of degree `ell` (blocks are contiguous).
  Eigen::Index block_start(int ell) const;
  Eigen::Index block_size(int ell) const;

  bool operator==(const PolySpace&) const = default;

 private:
  int d_;
  int L_;
  Eigen::Index dim_;
};

struct JacobiParams {
  int n;
  double alpha;
  double beta;
  JacobiParams(int n, double alpha, double beta);
};

// P_n^{(alpha,beta)}(t) normalized by P_n(1) = binom(n + alpha, n), by the
// three-term recurrence.
double jacobi_eval(const JacobiParams& params, double t);

// Real orthonormal basis of Pi_L w.r.t. the normalized measure on S^d.
//
// Ordering is by degree; within degree ell:
//   d = 1: 1 (ell = 0), then sqrt2 cos(ell t), sqrt2 sin(ell t);
//   d = 2: m = -ell..ell where m < 0 is sqrt2 N_{ell|m|} sin(|m| phi), m = 0 is
//          N_{ell 0} and m > 0 is sqrt2 N_{ell m} cos(m phi), with
//          N_{ell m} = sqrt((2ell+1)(ell-m)!/(ell+m)!) P_ell^m(cos theta)
//          (no Condon-Shortley phase).
Eigen::VectorXd basis_eval(const PolySpace& space, const SpherePoint& z);

// pi_L x n matrix whose column j is basis_eval(space, points[j]).
Eigen::MatrixXd basis_matrix(const PolySpace& space, const PointSet& points);
Eigen::MatrixXd basis_matrix(const PolySpace& space, const std::vector<SpherePoint>& points);

// pi_L x d matrix of tangential derivatives, expressed in tangent_frame(z).
Eigen::MatrixXd basis_gradient(const PolySpace& space, const SpherePoint& z);

// Element of Pi_L given by its coefficients in the basis above.
class PolynomialInSpace {
 public:
  PolynomialInSpace(PolySpace space, Eigen::VectorXd coeffs);
  static PolynomialInSpace zero(const PolySpace& space);
  // Gaussian coefficients, so the L2 norm is a chi variable with pi_L dof.
  static PolynomialInSpace random(const PolySpace& space, std::uint64_t seed);

  const PolySpace& space() const { return space_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator()(const SpherePoint& z) const;

 private:
  PolySpace space_;
  Eigen::VectorXd coeffs_;
};

struct QuadratureRule {
  PointSet nodes;
  std::vector<double> weights;
  int exactness;
  // Product structure (for export): colatitudes (d = 2) or angles (d = 1) with
  // their weights, and the number of equispaced longitudes.
  std::vector<double> thetas;
  std::vector<double> theta_weights;
  int n_phi = 1;

  double integrate(const std::function<double(const SpherePoint&)>& f) const;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Positive-weight rule exact for Pi_t with weights summing to 1. On S^2 this
// is Gauss-Legendre in cos(theta) times equispaced longitudes.
QuadratureRule quadrature_rule(int d, int t);

void export_quadrature(const QuadratureRule& rule, const std::filesystem::path& path);

// Coefficients of f in Pi_L, exact when f lies in Pi_L and the rule is exact
// for degree 2L.
Eigen::VectorXd project(const PolySpace& space, const QuadratureRule& rule,
                        const std::function<double(const SpherePoint&)>& f);

struct SupEstimate {
  double value = 0.0;
  SpherePoint argmax{1.0, 0.0};
  std::size_t mesh_size = 0;
  std::string mesh;
};

// Lower bound for sup_z f(z) over S^d: a Fibonacci mesh scaled with the degree
// (>= 40 L^2 points on S^2) followed by pattern search around the best nodes.
SupEstimate estimate_sup(int d, int degree, const std::function<double(const SpherePoint&)>& f,
                         std::size_t min_mesh = 0);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NormResult {
  double value;
  bool exact;  // false for quadrature approximations and mesh sup estimates
  std::size_t mesh_size = 0;
};

// ||Q||_p with respect to the normalized measure. p = 2 is exact given a rule
// of exactness >= 2L; other finite p are quadrature approximations;
// p = kInfinity is a mesh estimate (a lower bound).
NormResult lp_norm(const PolynomialInSpace& q, double p, const QuadratureRule& rule);

}  // namespace fekete

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fekete/harmonics.hpp"
#include "fekete/sphere_geometry.hpp"

namespace fekete {

// Lagrange (cardinal) functions of a unisolvent node set for Pi_L. Column i of
// coefficients() holds l_i in the orthonormal basis, i.e. V^T c_i = e_i with
// V = basis_matrix(space, nodes).
class CardinalBasis {
 public:
  // Throws SingularError when the nodes are not unisolvent for the space.
  CardinalBasis(const PolySpace& space, PointSet nodes);

  const PolySpace& space() const { return space_; }
  const PointSet& nodes() const { return nodes_; }
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }
  double condition_number() const { return condition_; }
  // max_ij |l_i(z_j) - delta_ij| at construction.
  double residual() const { return residual_; }

  // (l_1(z), ..., l_n(z)).
  Eigen::VectorXd evaluate(const SpherePoint& z) const;
  PolynomialInSpace cardinal(std::size_t i) const;

 private:
  PolySpace space_;
  PointSet nodes_;
  Eigen::MatrixXd coeffs_;
  double condition_ = 0.0;
  double residual_ = 0.0;
};

CardinalBasis cardinal_basis(const PolySpace& space, const PointSet& nodes);

// Lambda_L: the interpolant sum_j values_j l_j.
PolynomialInSpace lagrange_interpolate(const CardinalBasis& basis, std::span<const double> values);

// Mesh estimate of max_i sup_z |l_i(z)|; equals 1 for exact Fekete nodes.
SupEstimate cardinal_sup(const CardinalBasis& basis);

// Mesh estimate of the Lebesgue constant sup_z sum_j |l_j(z)|.
SupEstimate lebesgue_constant(const CardinalBasis& basis);

// t -> c * (P_k^{(d/2, d/2 - 1)}(t))^2 with c chosen so that p(1) = 1. With
// k = floor(eps L / 2), multiplying Q in Pi_L by p(<z, .>) lands in
// Pi_{floor((1 + eps) L)}.
class WeightPolynomial {
 public:
  WeightPolynomial(int d, int half_degree, int base_degree = 0, double eps = 0.0);

  int d() const { return d_; }
  int half_degree() const { return k_; }
  int degree() const { return 2 * k_; }
  int base_degree() const { return L_; }
  double eps() const { return eps_; }
  double alpha() const { return d_ / 2.0; }
  double beta() const { return d_ / 2.0 - 1.0; }
  // Multiplier applied to P_k^2 (1 / P_k(1)^2).
  double normalization() const { return 1.0 / (peak_ * peak_); }
  // True when k = 0 and the weight is identically 1 (no localization).
  bool trivial() const { return k_ == 0; }

  double operator()(double t) const;

 private:
  int d_;
  int k_;
  int L_;
  double eps_;
  double peak_;  // P_k(1)
};

// k = floor(eps L / 2) computed with a 1e-9 guard against representation
// error in eps (0.6 * 10 must floor to 6).
int weight_half_degree(int L, double eps);

WeightPolynomial weight_polynomial(int d, int L, double eps);

// sum_j v_j p(<z, z_j>) l_j(z) over the nodes of `basis`. This is an element
// of Pi_{N + deg p} where N is the degree of the node space.
class WeightedCardinalSum {
 public:
  WeightedCardinalSum(CardinalBasis basis, WeightPolynomial weight);

  const CardinalBasis& basis() const { return basis_; }
  const WeightPolynomial& weight() const { return weight_; }
  int output_degree() const { return basis_.space().degree() + weight_.degree(); }

  double operator()(std::span<const double> v, const SpherePoint& z) const;
  // Terms |p(<z, z_j>) l_j(z)| for every j.
  Eigen::VectorXd abs_terms(const SpherePoint& z) const;
  // sum_j p(<z, z_j>).
  double weight_sum(const SpherePoint& z) const;

 private:
  CardinalBasis basis_;
  WeightPolynomial weight_;
  Eigen::MatrixXd node_coords_;
};

// Q_L[v](z) with nodes Z(L_eps) (the basis space) and a weight for (L, eps).
// Throws InvalidArgument when L + deg p exceeds the node degree, since the
// representation identity would then fail.
double mz_reconstruct(const PolySpace& test_space, const WeightedCardinalSum& op,
                      std::span<const double> v, const SpherePoint& z);

// R_L[v] in Pi_L for nodes Z(L_{-eps}). Requires node degree + deg p <= L.
PolynomialInSpace interpolate_sparse(const PolySpace& target, const WeightedCardinalSum& op,
                                     std::span<const double> values);

// Weight for R_L: the largest k with node degree + 2k <= L.
WeightPolynomial sparse_weight(int d, int node_degree, int L);

struct OperatorBounds {
  // max_j pi_test * int |p(<z, z_j>) l_j(z)| dsigma: the exact norm of the
  // operator from (1/pi_test)-weighted l^1 to L^1, up to quadrature error.
  double l1_constant;
  // Mesh estimate of sup_z sum_j |p(<z, z_j>) l_j(z)| (operator norm l^inf -> L^inf).
  double linf_constant;
  // Mesh estimate of sup_z sum_j p(<z, z_j>).
  double weight_sum_sup;
};

OperatorBounds weighted_operator_bounds(const WeightedCardinalSum& op, int test_dim);

// Per-degree data c_{Lj} for a triangular array with the normalized l^p size
// (1/pi_L) sum_j |c_{Lj}|^p tracked per degree.
struct ValueArray {
  int d;
  double p;
  std::map<int, std::vector<double>> values;

  double normalized_power_sum(int L) const;
  double sup_normalized() const;
};

}  // namespace fekete

#include "fekete/interpolation_ops.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "fekete/errors.hpp"

namespace fekete {

CardinalBasis::CardinalBasis(const PolySpace& space, PointSet nodes)
    : space_(space), nodes_(std::move(nodes)) {
  if (nodes_.dimension() != space_.d()) throw InvalidArgument("cardinal_basis: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  if (n != space_.dim()) {
    throw SingularError("cardinal_basis: " + std::to_string(n) + " nodes for a space of dimension " +
                        std::to_string(space_.dim()));
  }
  const Eigen::MatrixXd v = basis_matrix(space_, nodes_);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(v);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (!(smin > 1e-13 * smax)) throw SingularError("cardinal_basis: node set is not unisolvent");
  condition_ = smax / smin;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(v.transpose());
  coeffs_ = lu.solve(Eigen::MatrixXd::Identity(n, n));
  residual_ = (v.transpose() * coeffs_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

Eigen::VectorXd CardinalBasis::evaluate(const SpherePoint& z) const {
  return coeffs_.transpose() * basis_eval(space_, z);
}

PolynomialInSpace CardinalBasis::cardinal(std::size_t i) const {
  if (i >= nodes_.size()) throw InvalidArgument("cardinal: index out of range");
  return PolynomialInSpace(space_, coeffs_.col(static_cast<Eigen::Index>(i)));
}

CardinalBasis cardinal_basis(const PolySpace& space, const PointSet& nodes) {
  return CardinalBasis(space, nodes);
}

PolynomialInSpace lagrange_interpolate(const CardinalBasis& basis, std::span<const double> values) {
  if (static_cast<Eigen::Index>(values.size()) != basis.space().dim()) {
    throw InvalidArgument("lagrange_interpolate: expected " + std::to_string(basis.space().dim()) +
                          " values, got " + std::to_string(values.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  return PolynomialInSpace(basis.space(), basis.coefficients() * v);
}

SupEstimate cardinal_sup(const CardinalBasis& basis) {
  return estimate_sup(basis.space().d(), basis.space().degree(), [&](const SpherePoint& z) {
    return basis.evaluate(z).cwiseAbs().maxCoeff();
  });
}

SupEstimate lebesgue_constant(const CardinalBasis& basis) {
  return estimate_sup(basis.space().d(), basis.space().degree(),
                      [&](const SpherePoint& z) { return basis.evaluate(z).cwiseAbs().sum(); });
}

WeightPolynomial::WeightPolynomial(int d, int half_degree, int base_degree, double eps)
    : d_(d), k_(half_degree), L_(base_degree), eps_(eps) {
  if (d < 1) throw InvalidArgument("WeightPolynomial: d must be >= 1");
  if (half_degree < 0) throw InvalidArgument("WeightPolynomial: half degree must be >= 0");
  peak_ = jacobi_eval(JacobiParams(k_, alpha(), beta()), 1.0);
}

double WeightPolynomial::operator()(double t) const {
  if (k_ == 0) return 1.0;
  const double r = jacobi_eval(JacobiParams(k_, alpha(), beta()), std::clamp(t, -1.0, 1.0)) / peak_;
  return r * r;
}

int weight_half_degree(int L, double eps) {
  if (L < 0) throw InvalidArgument("weight degree: L must be >= 0");
  if (!(eps > 0.0)) throw InvalidArgument("weight degree: eps must be > 0");
  return static_cast<int>(std::floor(eps * L / 2.0 + 1e-9));
}

WeightPolynomial weight_polynomial(int d, int L, double eps) {
  return WeightPolynomial(d, weight_half_degree(L, eps), L, eps);
}

WeightPolynomial sparse_weight(int d, int node_degree, int L) {
  if (node_degree > L) {
    throw InvalidArgument("sparse_weight: node degree " + std::to_string(node_degree) +
                          " exceeds target degree " + std::to_string(L));
  }
  const double eps = node_degree > 0 ? static_cast<double>(L - node_degree) / node_degree : 0.0;
  return WeightPolynomial(d, (L - node_degree) / 2, node_degree, eps);
}

WeightedCardinalSum::WeightedCardinalSum(CardinalBasis basis, WeightPolynomial weight)
    : basis_(std::move(basis)), weight_(weight) {
  if (weight_.d() != basis_.space().d()) throw InvalidArgument("weight and nodes differ in dimension");
  node_coords_ = basis_.nodes().as_matrix();
}

Eigen::VectorXd WeightedCardinalSum::abs_terms(const SpherePoint& z) const {
  const Eigen::VectorXd ell = basis_.evaluate(z);
  const Eigen::VectorXd dots = node_coords_.transpose() * z.coords();
  Eigen::VectorXd out(ell.size());
  for (Eigen::Index j = 0; j < ell.size(); ++j) out[j] = std::abs(weight_(dots[j]) * ell[j]);
  return out;
}

double WeightedCardinalSum::weight_sum(const SpherePoint& z) const {
  const Eigen::VectorXd dots = node_coords_.transpose() * z.coords();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < dots.size(); ++j) sum += weight_(dots[j]);
  return sum;
}

double WeightedCardinalSum::operator()(std::span<const double> v, const SpherePoint& z) const {
  if (static_cast<Eigen::Index>(v.size()) != basis_.space().dim()) {
    throw InvalidArgument("weighted cardinal sum: expected " + std::to_string(basis_.space().dim()) +
                          " values, got " + std::to_string(v.size()));
  }
  const Eigen::VectorXd ell = basis_.evaluate(z);
  const Eigen::VectorXd dots = node_coords_.transpose() * z.coords();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < ell.size(); ++j) {
    sum += v[static_cast<std::size_t>(j)] * weight_(dots[j]) * ell[j];
  }
  return sum;
}

double mz_reconstruct(const PolySpace& test_space, const WeightedCardinalSum& op,
                      std::span<const double> v, const SpherePoint& z) {
  const int node_degree = op.basis().space().degree();
  if (test_space.d() != op.basis().space().d()) throw InvalidArgument("mz_reconstruct: dimension mismatch");
  if (test_space.degree() + op.weight().degree() > node_degree) {
    throw InvalidArgument("mz_reconstruct: L + deg p = " +
                          std::to_string(test_space.degree() + op.weight().degree()) +
                          " exceeds the node degree " + std::to_string(node_degree));
  }
  return op(v, z);
}

PolynomialInSpace interpolate_sparse(const PolySpace& target, const WeightedCardinalSum& op,
                                     std::span<const double> values) {
  if (target.d() != op.basis().space().d()) throw InvalidArgument("interpolate_sparse: dimension mismatch");
  if (op.output_degree() > target.degree()) {
    throw InvalidArgument("interpolate_sparse: node degree + deg p = " +
                          std::to_string(op.output_degree()) + " exceeds L = " +
                          std::to_string(target.degree()));
  }
  if (static_cast<Eigen::Index>(values.size()) != op.basis().space().dim()) {
    throw InvalidArgument("interpolate_sparse: expected " + std::to_string(op.basis().space().dim()) +
                          " values, got " + std::to_string(values.size()));
  }
  const QuadratureRule rule = quadrature_rule(target.d(), 2 * target.degree());
  return PolynomialInSpace(target,
                           project(target, rule, [&](const SpherePoint& z) { return op(values, z); }));
}

OperatorBounds weighted_operator_bounds(const WeightedCardinalSum& op, int test_dim) {
  const int d = op.basis().space().d();
  const int degree = op.output_degree();
  const QuadratureRule rule = quadrature_rule(d, 4 * degree + 2);
  Eigen::VectorXd integrals = Eigen::VectorXd::Zero(op.basis().space().dim());
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    integrals += rule.weights[q] * op.abs_terms(rule.nodes[q]);
  }
  OperatorBounds bounds{};
  bounds.l1_constant = test_dim * integrals.maxCoeff();
  bounds.linf_constant =
      estimate_sup(d, degree, [&](const SpherePoint& z) { return op.abs_terms(z).sum(); }).value;
  bounds.weight_sum_sup =
      estimate_sup(d, degree, [&](const SpherePoint& z) { return op.weight_sum(z); }).value;
  return bounds;
}

double ValueArray::normalized_power_sum(int L) const {
  const auto it = values.find(L);
  if (it == values.end()) throw MissingDegreeError("ValueArray: no values for degree " + std::to_string(L), L);
  double sum = 0.0;
  for (double c : it->second) sum += std::pow(std::abs(c), p);
  return sum / static_cast<double>(space_dimension(d, L));
}

double ValueArray::sup_normalized() const {
  double best = 0.0;
  for (const auto& [L, v] : values) best = std::max(best, normalized_power_sum(L));
  return best;
}

}  // namespace fekete

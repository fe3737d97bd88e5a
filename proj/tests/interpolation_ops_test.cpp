#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "fekete/errors.hpp"
#include "fekete/fekete_solver.hpp"
#include "fekete/interpolation_ops.hpp"

using namespace fekete;

namespace {

const PointSet& fekete_set(int L) {
  static std::map<int, PointSet> cache;
  auto it = cache.find(L);
  if (it == cache.end()) it = cache.emplace(L, fekete_points(PolySpace(2, L)).points).first;
  return it->second;
}

// Unisolvent but unoptimized nodes.
PointSet greedy_set(int d, int L) {
  const PolySpace s(d, L);
  return greedy_select(s, generate_mesh(d, static_cast<std::size_t>(std::max<Eigen::Index>(50 * s.dim(), 2000)),
                                        MeshKind::fibonacci));
}

std::vector<double> sample(const PolynomialInSpace& q, const PointSet& pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(q(p));
  return v;
}

// int_{S^2} f(<z, w>) dsigma(z) = (1/2) int_{-1}^{1} f(t) dt, by composite Simpson.
double zonal_mean(const std::function<double(double)>& f) {
  const int n = 20000;
  const double h = 2.0 / n;
  double s = f(-1.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-1.0 + i * h);
  return 0.5 * s * h / 3.0;
}

}  // namespace

TEST(CardinalBasis, IdentityAtNodes) {
  for (int L : {1, 3, 5}) {
    const CardinalBasis b(PolySpace(2, L), fekete_set(L));
    EXPECT_LT(b.residual(), 1e-8);
    for (std::size_t j = 0; j < b.nodes().size(); ++j) {
      const Eigen::VectorXd l = b.evaluate(b.nodes()[j]);
      for (Eigen::Index i = 0; i < l.size(); ++i) EXPECT_NEAR(l[i], i == static_cast<Eigen::Index>(j) ? 1.0 : 0.0, 1e-8);
    }
    EXPECT_GE(b.condition_number(), 1.0);
  }
}

TEST(CardinalBasis, ConstantSpace) {
  const CardinalBasis b(PolySpace(2, 0), PointSet(2, {random_point(2, 1)}));
  for (std::uint64_t s = 0; s < 10; ++s) EXPECT_NEAR(b.evaluate(random_point(2, 100 + s))[0], 1.0, 1e-15);
}

TEST(CardinalBasis, RejectsBadNodeSets) {
  EXPECT_THROW(CardinalBasis(PolySpace(2, 1), generate_mesh(2, 5, MeshKind::random, 2)), SingularError);
  const SpherePoint p{0, 0, 1};
  const PointSet dup(2, {p, p, SpherePoint{1, 0, 0}, SpherePoint{0, 1, 0}}, "dup", DuplicatePolicy::allow);
  EXPECT_THROW(CardinalBasis(PolySpace(2, 1), dup), SingularError);
}

TEST(CardinalBasis, FeketeCertificate) {
  for (int L = 1; L <= 6; ++L) {
    const CardinalBasis b(PolySpace(2, L), fekete_set(L));
    EXPECT_LE(cardinal_sup(b).value, 1.05) << "L=" << L;
  }
}

TEST(Lagrange, ReproducesPolynomials) {
  for (int d : {1, 2}) {
    for (int L = 0; L <= 10; ++L) {
      const PolySpace s(d, L);
      const CardinalBasis b(s, greedy_set(d, L));
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto q = PolynomialInSpace::random(s, seed);
        const auto r = lagrange_interpolate(b, sample(q, b.nodes()));
        EXPECT_LT((r.coeffs() - q.coeffs()).cwiseAbs().maxCoeff(), 1e-8) << "d=" << d << " L=" << L;
      }
    }
  }
}

TEST(Lagrange, UnitValuesGiveCardinals) {
  const CardinalBasis b(PolySpace(2, 3), fekete_set(3));
  for (std::size_t j = 0; j < b.nodes().size(); ++j) {
    std::vector<double> e(b.nodes().size(), 0.0);
    e[j] = 1.0;
    EXPECT_LT((lagrange_interpolate(b, e).coeffs() - b.cardinal(j).coeffs()).norm(), 1e-12);
  }
  EXPECT_THROW(lagrange_interpolate(b, std::vector<double>(3, 1.0)), InvalidArgument);
}

TEST(Lagrange, LebesgueConstantBelowDimension) {
  const CardinalBasis b(PolySpace(2, 5), fekete_set(5));
  const double lebesgue = lebesgue_constant(b).value;
  EXPECT_GE(lebesgue, 1.0);
  EXPECT_LE(lebesgue, 36.0);
}

TEST(Weight, PeakIsExactlyOne) {
  for (int d : {1, 2}) {
    for (int L = 1; L <= 60; ++L) {
      for (double eps : {0.1, 0.25, 0.4, 0.5, 0.9}) EXPECT_EQ(weight_polynomial(d, L, eps)(1.0), 1.0);
    }
  }
  EXPECT_TRUE(weight_polynomial(2, 3, 0.5).trivial());
  EXPECT_EQ(weight_polynomial(2, 3, 0.5)(-0.3), 1.0);
}

TEST(Weight, NonNegativeAndJacobiShaped) {
  const WeightPolynomial p = weight_polynomial(2, 16, 0.5);
  EXPECT_EQ(p.half_degree(), 4);
  EXPECT_EQ(p.alpha(), 1.0);
  EXPECT_EQ(p.beta(), 0.0);
  const double peak = jacobi_eval({4, 1.0, 0.0}, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = -1.0 + 2.0 * i / 199.0;
    EXPECT_GE(p(t), 0.0);
    EXPECT_NEAR(p(t), std::pow(jacobi_eval({4, 1.0, 0.0}, t) / peak, 2), 1e-14);
  }
  EXPECT_THROW(WeightPolynomial(0, 2), InvalidArgument);
  EXPECT_THROW(WeightPolynomial(2, -1), InvalidArgument);
}

TEST(Weight, DegreeBookkeeping) {
  for (int step = 1; step < 20; ++step) {
    const double eps = 0.05 * step;
    for (int L = 0; L <= 1000; ++L) {
      const int k = weight_half_degree(L, eps);
      EXPECT_EQ(k, static_cast<int>(std::floor(eps * L / 2 + 1e-9)));
      ASSERT_LE(L + 2 * k, dilated_degree(L, eps, Dilation::up)) << "L=" << L << " eps=" << eps;
    }
  }
}

TEST(Weight, IntegralScalesLikeInverseDimension) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int L : {8, 16, 32}) {
    const WeightPolynomial p = weight_polynomial(2, L, 0.5);
    const double scaled = (L + 1.0) * (L + 1.0) * zonal_mean([&](double t) { return p(t); });
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(hi / lo, 4.0);
}

TEST(Reconstruction, UnitVectorsAtNodes) {
  const int L = 4;
  const int source = dilated_degree(L, 0.5, Dilation::up);
  const WeightedCardinalSum op(CardinalBasis(PolySpace(2, source), fekete_set(source)), weight_polynomial(2, L, 0.5));
  const PointSet& nodes = op.basis().nodes();
  for (std::size_t j = 0; j < nodes.size(); j += 5) {
    std::vector<double> e(nodes.size(), 0.0);
    e[j] = 1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_NEAR(op(e, nodes[i]), i == j ? 1.0 : 0.0, 1e-8);
  }
}

TEST(Reconstruction, RepresentationIdentity) {
  const PolySpace s(2, 4);
  const int source = dilated_degree(4, 0.5, Dilation::up);
  const WeightedCardinalSum op(CardinalBasis(PolySpace(2, source), fekete_set(source)), weight_polynomial(2, 4, 0.5));
  EXPECT_EQ(op.output_degree(), 8);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto q = PolynomialInSpace::random(s, seed);
    const auto v = sample(q, op.basis().nodes());
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto z = random_point(2, 10'000 * (seed + 1) + t);
      ASSERT_NEAR(mz_reconstruct(s, op, v, z), q(z), 1e-7);
    }
  }
}

TEST(Reconstruction, RepresentationHoldsForAnyUnisolventNodes) {
  for (int L : {6, 8}) {
    const int source = dilated_degree(L, 0.5, Dilation::up);
    const WeightedCardinalSum op(CardinalBasis(PolySpace(2, source), greedy_set(2, source)),
                                 weight_polynomial(2, L, 0.5));
    const auto q = PolynomialInSpace::random(PolySpace(2, L), 77);
    const auto v = sample(q, op.basis().nodes());
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto z = random_point(2, 500 + t);
      EXPECT_NEAR(mz_reconstruct(PolySpace(2, L), op, v, z), q(z), 1e-7);
    }
  }
}

TEST(Reconstruction, RejectsDegreeOverflow) {
  const WeightedCardinalSum op(CardinalBasis(PolySpace(2, 4), fekete_set(4)), weight_polynomial(2, 4, 0.5));
  const auto v = std::vector<double>(25, 1.0);
  EXPECT_THROW(mz_reconstruct(PolySpace(2, 4), op, v, random_point(2, 1)), InvalidArgument);
  EXPECT_THROW(mz_reconstruct(PolySpace(2, 1), op, std::vector<double>(3, 1.0), random_point(2, 1)),
               InvalidArgument);
}

TEST(Reconstruction, EndpointBounds) {
  for (int L : {2, 4}) {
    const int source = dilated_degree(L, 0.5, Dilation::up);
    const WeightedCardinalSum op(CardinalBasis(PolySpace(2, source), fekete_set(source)),
                                 weight_polynomial(2, L, 0.5));
    const OperatorBounds b = weighted_operator_bounds(op, static_cast<int>(PolySpace(2, L).dim()));
    EXPECT_GT(b.l1_constant, 0.0);
    EXPECT_LE(b.l1_constant, 10.0) << "L=" << L;
    EXPECT_GE(b.linf_constant, 1.0 - 1e-12);
    EXPECT_GE(b.weight_sum_sup, 1.0 - 1e-12);
  }
}

TEST(SparseInterpolation, ZeroAndUnitData) {
  const int L = 10;
  const int source = dilated_degree(L, 0.4, Dilation::down);
  ASSERT_EQ(source, 6);
  const WeightedCardinalSum op(CardinalBasis(PolySpace(2, source), fekete_set(source)), sparse_weight(2, source, L));
  EXPECT_EQ(op.weight().half_degree(), 2);
  const PolySpace target(2, L);
  const std::size_t n = op.basis().nodes().size();
  EXPECT_EQ(interpolate_sparse(target, op, std::vector<double>(n, 0.0)).coeffs().norm(), 0.0);
  for (std::size_t j = 0; j < n; j += 7) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto r = interpolate_sparse(target, op, e);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r(op.basis().nodes()[i]), i == j ? 1.0 : 0.0, 1e-7);
  }
}

TEST(SparseInterpolation, RandomDataResidualAndNorm) {
  const int L = 10;
  const int source = dilated_degree(L, 0.4, Dilation::down);
  const WeightedCardinalSum op(CardinalBasis(PolySpace(2, source), fekete_set(source)), sparse_weight(2, source, L));
  const std::size_t n = op.basis().nodes().size();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(n);
    double sq = 0.0;
    for (auto& x : v) {
      x = g(rng);
      sq += x * x;
    }
    for (auto& x : v) x /= std::sqrt(sq);
    const auto r = interpolate_sparse(PolySpace(2, L), op, v);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(r(op.basis().nodes()[j]), v[j], 1e-7);
    const double ratio = r.coeffs().norm() / std::sqrt(1.0 / static_cast<double>(n));
    EXPECT_LE(ratio, 10.0);
  }
}

TEST(SparseInterpolation, RejectsLongWeight) {
  const WeightedCardinalSum op(CardinalBasis(PolySpace(2, 4), fekete_set(4)), WeightPolynomial(2, 2));
  EXPECT_THROW(interpolate_sparse(PolySpace(2, 6), op, std::vector<double>(25, 0.0)), InvalidArgument);
  EXPECT_THROW(interpolate_sparse(PolySpace(2, 8), op, std::vector<double>(3, 0.0)), InvalidArgument);
  EXPECT_THROW(sparse_weight(2, 8, 6), InvalidArgument);
}

TEST(ValueArray, NormalizedSums) {
  ValueArray a{2, 2.0, {}};
  a.values[1] = std::vector<double>(4, 1.0);
  a.values[2] = std::vector<double>(9, 2.0);
  EXPECT_DOUBLE_EQ(a.normalized_power_sum(1), 1.0);
  EXPECT_DOUBLE_EQ(a.normalized_power_sum(2), 4.0);
  EXPECT_DOUBLE_EQ(a.sup_normalized(), 4.0);
}

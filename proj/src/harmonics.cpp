#include "fekete/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include "fekete/errors.hpp"

namespace fekete {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_evaluated(int d) {
  if (d != 1 && d != 2) {
    throw InvalidArgument("evaluation on S^" + std::to_string(d) + " is not supported (d in {1, 2})");
  }
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("space_dimension overflows int64");
  return r;
}

// Fully normalized associated Legendre values N_{lm}(x) and, for m >= 1, the
// quotients N_{lm} / sin(theta), filled row-major in (l, m) with stride L+1.
void legendre_tables(int L, double x, double s, std::vector<double>& n_table,
                     std::vector<double>* q_table) {
  const int stride = L + 1;
  n_table.assign(static_cast<std::size_t>(stride * stride), 0.0);
  if (q_table) q_table->assign(static_cast<std::size_t>(stride * stride), 0.0);
  auto at = [stride](int l, int m) { return static_cast<std::size_t>(l * stride + m); };

  double nmm = 1.0;
  for (int m = 0; m <= L; ++m) {
    double qmm = 0.0;
    if (m > 0) {
      const double f = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      qmm = f * nmm;
      nmm = qmm * s;
    }
    n_table[at(m, m)] = nmm;
    if (q_table && m > 0) (*q_table)[at(m, m)] = qmm;
    if (m + 1 > L) continue;
    const double c1 = std::sqrt(2.0 * m + 3.0) * x;
    n_table[at(m + 1, m)] = c1 * nmm;
    if (q_table && m > 0) (*q_table)[at(m + 1, m)] = c1 * qmm;
    for (int l = m + 2; l <= L; ++l) {
      const double ll = l, mm = m, l1 = l - 1.0;
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      const double b = std::sqrt((l1 * l1 - mm * mm) / (4.0 * l1 * l1 - 1.0));
      n_table[at(l, m)] = a * (x * n_table[at(l - 1, m)] - b * n_table[at(l - 2, m)]);
      if (q_table && m > 0) {
        (*q_table)[at(l, m)] = a * (x * (*q_table)[at(l - 1, m)] - b * (*q_table)[at(l - 2, m)]);
      }
    }
  }
}

void eval_circle(int L, const SpherePoint& z, double* out) {
  const double c1 = z[0], s1 = z[1];
  out[0] = 1.0;
  double c = 1.0, s = 0.0;
  for (int k = 1; k <= L; ++k) {
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
    out[2 * k - 1] = kSqrt2 * c;
    out[2 * k] = kSqrt2 * s;
  }
}

// Writes the (L+1)^2 values in block order; `scratch` avoids reallocations.
void eval_sphere(int L, const SpherePoint& z, double* out, std::vector<double>& scratch) {
  const double X = z[0], Y = z[1], x = z[2];
  const double s = std::hypot(X, Y);
  const double cphi = s > 0.0 ? X / s : 1.0;
  const double sphi = s > 0.0 ? Y / s : 0.0;
  legendre_tables(L, x, s, scratch, nullptr);
  const int stride = L + 1;
  double cm = 1.0, sm = 0.0;
  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      const double cn = cm * cphi - sm * sphi;
      sm = sm * cphi + cm * sphi;
      cm = cn;
    }
    for (int l = m; l <= L; ++l) {
      const double v = scratch[static_cast<std::size_t>(l * stride + m)];
      const int center = l * l + l;
      if (m == 0) {
        out[center] = v;
      } else {
        out[center + m] = kSqrt2 * v * cm;
        out[center - m] = kSqrt2 * v * sm;
      }
    }
  }
}

}  // namespace

std::int64_t space_dimension(int d, int L) {
  if (d < 1) throw InvalidArgument("space_dimension: d must be >= 1");
  if (L < 0) throw InvalidArgument("space_dimension: L must be >= 0");
  // binom(d + L - 1, d - 1), built so every intermediate quotient is exact.
  std::int64_t binom = 1;
  for (int i = 1; i <= d - 1; ++i) {
    const std::int64_t top = static_cast<std::int64_t>(L) + i;
    const std::int64_t g = std::gcd(binom, static_cast<std::int64_t>(i));
    const std::int64_t b = binom / g;
    const std::int64_t t = top / (i / g);
    binom = checked_mul(b, t);
  }
  const std::int64_t numer = checked_mul(binom, static_cast<std::int64_t>(d) + 2LL * L);
  return numer / d;
}

PolySpace::PolySpace(int d, int L) : d_(d), L_(L) {
  const std::int64_t dim = space_dimension(d, L);
  dim_ = static_cast<Eigen::Index>(dim);
}

Eigen::Index PolySpace::block_start(int ell) const {
  if (ell < 0 || ell > L_) throw InvalidArgument("block_start: degree out of range");
  return ell == 0 ? 0 : static_cast<Eigen::Index>(space_dimension(d_, ell - 1));
}

Eigen::Index PolySpace::block_size(int ell) const {
  return static_cast<Eigen::Index>(space_dimension(d_, ell)) - block_start(ell);
}

JacobiParams::JacobiParams(int n_, double alpha_, double beta_) : n(n_), alpha(alpha_), beta(beta_) {
  if (n < 0) throw InvalidArgument("Jacobi degree must be >= 0");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw InvalidArgument("Jacobi indices must exceed -1");
}

double jacobi_eval(const JacobiParams& params, double t) {
  if (!(t >= -1.0 && t <= 1.0)) throw InvalidArgument("jacobi_eval: t must lie in [-1, 1]");
  const double a = params.alpha, b = params.beta;
  if (params.n == 0) return 1.0;
  double p_prev = 1.0;
  double p = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
  for (int k = 2; k <= params.n; ++k) {
    const double c = 2.0 * k + a + b;
    const double denom = 2.0 * k * (k + a + b) * (c - 2.0);
    const double p_next =
        ((c - 1.0) * (c * (c - 2.0) * t + a * a - b * b) * p - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p_prev) /
        denom;
    p_prev = p;
    p = p_next;
  }
  return p;
}

Eigen::VectorXd basis_eval(const PolySpace& space, const SpherePoint& z) {
  require_evaluated(space.d());
  if (z.dimension() != space.d()) throw InvalidArgument("basis_eval: dimension mismatch");
  Eigen::VectorXd out(space.dim());
  if (space.d() == 1) {
    eval_circle(space.degree(), z, out.data());
  } else {
    std::vector<double> scratch;
    eval_sphere(space.degree(), z, out.data(), scratch);
  }
  return out;
}

Eigen::MatrixXd basis_matrix(const PolySpace& space, const std::vector<SpherePoint>& points) {
  require_evaluated(space.d());
  Eigen::MatrixXd out(space.dim(), static_cast<Eigen::Index>(points.size()));
  std::vector<double> scratch;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto& z = points[j];
    if (z.dimension() != space.d()) throw InvalidArgument("basis_matrix: dimension mismatch");
    double* col = out.col(static_cast<Eigen::Index>(j)).data();
    if (space.d() == 1) {
      eval_circle(space.degree(), z, col);
    } else {
      eval_sphere(space.degree(), z, col, scratch);
    }
  }
  return out;
}

Eigen::MatrixXd basis_matrix(const PolySpace& space, const PointSet& points) {
  return basis_matrix(space, points.points());
}

Eigen::MatrixXd basis_gradient(const PolySpace& space, const SpherePoint& z) {
  require_evaluated(space.d());
  if (z.dimension() != space.d()) throw InvalidArgument("basis_gradient: dimension mismatch");
  const int L = space.degree();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(space.dim(), space.d());

  if (space.d() == 1) {
    const double c1 = z[0], s1 = z[1];
    double c = 1.0, s = 0.0;
    for (int k = 1; k <= L; ++k) {
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
      grad(2 * k - 1, 0) = -kSqrt2 * k * s;
      grad(2 * k, 0) = kSqrt2 * k * c;
    }
    return grad;
  }

  const double X = z[0], Y = z[1], x = z[2];
  const double s = std::hypot(X, Y);
  const double cphi = s > 0.0 ? X / s : 1.0;
  const double sphi = s > 0.0 ? Y / s : 0.0;
  std::vector<double> n_table, q_table;
  legendre_tables(L, x, s, n_table, &q_table);
  const int stride = L + 1;
  auto at = [stride](int l, int m) { return static_cast<std::size_t>(l * stride + m); };

  double cm = 1.0, sm = 0.0;
  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      const double cn = cm * cphi - sm * sphi;
      sm = sm * cphi + cm * sphi;
      cm = cn;
    }
    for (int l = std::max(m, 1); l <= L; ++l) {
      const int center = l * l + l;
      if (m == 0) {
        // d/dtheta N_{l0} = -sqrt(l(l+1)) N_{l1}
        grad(center, 0) = -std::sqrt(static_cast<double>(l) * (l + 1)) * n_table[at(l, 1)];
        continue;
      }
      const double q = q_table[at(l, m)];
      const double q_prev = l - 1 >= m ? q_table[at(l - 1, m)] : 0.0;
      const double ll = l, mm = m;
      const double dtheta =
          ll * x * q - std::sqrt((2.0 * ll + 1.0) * (ll * ll - mm * mm) / (2.0 * ll - 1.0)) * q_prev;
      grad(center + m, 0) = kSqrt2 * dtheta * cm;
      grad(center + m, 1) = -kSqrt2 * mm * q * sm;
      grad(center - m, 0) = kSqrt2 * dtheta * sm;
      grad(center - m, 1) = kSqrt2 * mm * q * cm;
    }
  }
  return grad;
}

PolynomialInSpace::PolynomialInSpace(PolySpace space, Eigen::VectorXd coeffs)
    : space_(space), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.dim()) {
    throw InvalidArgument("PolynomialInSpace: expected " + std::to_string(space_.dim()) +
                          " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

PolynomialInSpace PolynomialInSpace::zero(const PolySpace& space) {
  return PolynomialInSpace(space, Eigen::VectorXd::Zero(space.dim()));
}

PolynomialInSpace PolynomialInSpace::random(const PolySpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd c(space.dim());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = normal(rng);
  return PolynomialInSpace(space, std::move(c));
}

double PolynomialInSpace::operator()(const SpherePoint& z) const {
  return coeffs_.dot(basis_eval(space_, z));
}

double QuadratureRule::integrate(const std::function<double(const SpherePoint&)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = -x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

QuadratureRule quadrature_rule(int d, int t) {
  require_evaluated(d);
  if (t < 0) throw InvalidArgument("quadrature_rule: exactness must be >= 0");
  constexpr double pi = std::numbers::pi;
  std::vector<SpherePoint> pts;
  std::vector<double> weights, thetas, theta_weights;
  int n_phi = 1;
  if (d == 1) {
    const int n = t + 1;
    for (int k = 0; k < n; ++k) {
      const double angle = 2.0 * pi * k / n;
      pts.push_back(SpherePoint::on_circle(angle));
      weights.push_back(1.0 / n);
      thetas.push_back(angle);
      theta_weights.push_back(1.0 / n);
    }
  } else {
    const int n_theta = t / 2 + 1;
    n_phi = t + 1;
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    for (int i = 0; i < n_theta; ++i) {
      const double theta = std::acos(x[static_cast<std::size_t>(i)]);
      thetas.push_back(theta);
      theta_weights.push_back(w[static_cast<std::size_t>(i)] / 2.0);
      for (int k = 0; k < n_phi; ++k) {
        pts.push_back(SpherePoint::from_angles(theta, 2.0 * pi * k / n_phi));
        weights.push_back(w[static_cast<std::size_t>(i)] / 2.0 / n_phi);
      }
    }
  }
  return QuadratureRule{PointSet(d, std::move(pts), "quadrature:" + std::to_string(t)),
                        std::move(weights),
                        t,
                        std::move(thetas),
                        std::move(theta_weights),
                        n_phi};
}

void export_quadrature(const QuadratureRule& rule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# quadrature d=" << rule.nodes.dimension() << " exactness=" << rule.exactness
      << " n_theta=" << rule.thetas.size() << " n_phi=" << rule.n_phi << "\n";
  char buf[96];
  for (std::size_t i = 0; i < rule.thetas.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", rule.thetas[i], rule.theta_weights[i]);
    out << buf;
  }
}

Eigen::VectorXd project(const PolySpace& space, const QuadratureRule& rule,
                        const std::function<double(const SpherePoint&)>& f) {
  if (rule.nodes.dimension() != space.d()) throw InvalidArgument("project: dimension mismatch");
  const Eigen::MatrixXd y = basis_matrix(space, rule.nodes);
  Eigen::VectorXd wf(static_cast<Eigen::Index>(rule.weights.size()));
  for (std::size_t i = 0; i < rule.weights.size(); ++i) {
    wf[static_cast<Eigen::Index>(i)] = rule.weights[i] * f(rule.nodes[i]);
  }
  return y * wf;
}

SupEstimate estimate_sup(int d, int degree, const std::function<double(const SpherePoint&)>& f,
                         std::size_t min_mesh) {
  require_evaluated(d);
  const std::size_t lp1 = static_cast<std::size_t>(std::max(degree, 0) + 1);
  std::size_t n = d == 2 ? std::max<std::size_t>(40 * lp1 * lp1, 1000)
                         : std::max<std::size_t>(40 * (2 * lp1 - 1), 400);
  n = std::max(n, min_mesh);
  const PointSet mesh = generate_mesh(d, n, MeshKind::fibonacci);

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = f(mesh[i]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t top = std::min<std::size_t>(8, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] > values[b] || (values[a] == values[b] && a < b);
                    });

  SupEstimate best{values[order[0]], mesh[order[0]], n, mesh.label()};
  const double spacing = d == 2 ? std::sqrt(4.0 * std::numbers::pi / static_cast<double>(n))
                                : 2.0 * std::numbers::pi / static_cast<double>(n);
  const int directions = d == 2 ? 8 : 2;
  for (std::size_t r = 0; r < top; ++r) {
    SpherePoint z = mesh[order[r]];
    double value = values[order[r]];
    double h = spacing;
    for (int iter = 0; iter < 400 && h > 1e-10; ++iter) {
      const Eigen::MatrixXd frame = tangent_frame(z);
      bool moved = false;
      for (int k = 0; k < directions; ++k) {
        Eigen::VectorXd dir;
        if (d == 2) {
          const double a = 2.0 * std::numbers::pi * k / directions;
          dir = std::cos(a) * frame.col(0) + std::sin(a) * frame.col(1);
        } else {
          dir = (k == 0 ? 1.0 : -1.0) * frame.col(0);
        }
        SpherePoint trial = exp_map(z, h * dir);
        const double v = f(trial);
        if (v > value) {
          value = v;
          z = std::move(trial);
          moved = true;
          break;
        }
      }
      if (!moved) h *= 0.5;
    }
    if (value > best.value) {
      best.value = value;
      best.argmax = z;
    }
  }
  return best;
}

NormResult lp_norm(const PolynomialInSpace& q, double p, const QuadratureRule& rule) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  const PolySpace& space = q.space();
  if (p == kInfinity) {
    const SupEstimate sup =
        estimate_sup(space.d(), space.degree(), [&](const SpherePoint& z) { return std::abs(q(z)); });
    return {sup.value, false, sup.mesh_size};
  }
  if (rule.nodes.dimension() != space.d()) throw InvalidArgument("lp_norm: dimension mismatch");
  if (rule.exactness < 2 * space.degree()) {
    throw InvalidArgument("lp_norm: rule exactness " + std::to_string(rule.exactness) +
                          " is below 2L = " + std::to_string(2 * space.degree()));
  }
  const Eigen::MatrixXd y = basis_matrix(space, rule.nodes);
  const Eigen::VectorXd values = y.transpose() * q.coeffs();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    sum += rule.weights[static_cast<std::size_t>(i)] * std::pow(std::abs(values[i]), p);
  }
  return {std::pow(sum, 1.0 / p), p == 2.0, rule.nodes.size()};
}

}  // namespace fekete

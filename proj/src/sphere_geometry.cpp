#include "fekete/sphere_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

#include "fekete/errors.hpp"

namespace fekete {

namespace {

constexpr double kRenormalizeTolerance = 1e-14;
constexpr double kReadUnitTolerance = 1e-6;

Eigen::VectorXd to_vector(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InvalidArgument("SpherePoint needs at least 2 coordinates");
  const double norm = coords_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("SpherePoint coordinates must be finite and nonzero");
  }
  if (std::abs(norm - 1.0) > kRenormalizeTolerance) coords_ /= norm;
}

SpherePoint::SpherePoint(std::initializer_list<double> coords) : SpherePoint(to_vector(coords)) {}

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  Eigen::VectorXd v(3);
  v << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
  return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::on_circle(double angle) {
  Eigen::VectorXd v(2);
  v << std::cos(angle), std::sin(angle);
  return SpherePoint(std::move(v));
}

double SpherePoint::dot(const SpherePoint& other) const {
  if (other.coords_.size() != coords_.size()) {
    throw InvalidArgument("dimension mismatch: S^" + std::to_string(dimension()) + " vs S^" +
                          std::to_string(other.dimension()));
  }
  return coords_.dot(other.coords_);
}

SphericalCap::SphericalCap(SpherePoint center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0 && radius <= std::numbers::pi)) {
    throw InvalidArgument("cap radius must lie in (0, pi]");
  }
}

bool SphericalCap::contains(const SpherePoint& p) const {
  return geodesic_distance(center_, p) < radius_;
}

PointSet::PointSet(int dimension, std::vector<SpherePoint> points, std::string label,
                   DuplicatePolicy duplicates)
    : dimension_(dimension),
      points_(std::move(points)),
      label_(std::move(label)),
      duplicates_(duplicates) {
  if (dimension < 1) throw InvalidArgument("PointSet dimension must be >= 1");
  for (const auto& p : points_) {
    if (p.dimension() != dimension_) {
      throw InvalidArgument("PointSet: point of dimension " + std::to_string(p.dimension()) +
                            " in a set of dimension " + std::to_string(dimension_));
    }
  }
  if (duplicates_ == DuplicatePolicy::reject && points_.size() > 1) {
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto less = [this](std::size_t a, std::size_t b) {
      const auto& x = points_[a].coords();
      const auto& y = points_[b].coords();
      return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                          y.data() + y.size());
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (points_[order[i]] == points_[order[i - 1]]) {
        throw InvalidArgument("PointSet: duplicate point at indices " +
                              std::to_string(std::min(order[i], order[i - 1])) + " and " +
                              std::to_string(std::max(order[i], order[i - 1])));
      }
    }
  }
}

Eigen::MatrixXd PointSet::as_matrix() const {
  Eigen::MatrixXd m(dimension_ + 1, static_cast<Eigen::Index>(points_.size()));
  for (std::size_t j = 0; j < points_.size(); ++j) {
    m.col(static_cast<Eigen::Index>(j)) = points_[j].coords();
  }
  return m;
}

double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

double cap_measure(double radius, int d) {
  if (!(radius > 0.0 && radius <= std::numbers::pi)) {
    throw InvalidArgument("cap radius must lie in (0, pi]");
  }
  switch (d) {
    case 1:
      return radius / std::numbers::pi;
    case 2:
      // (1 - cos r) / 2 written to keep relative accuracy for small r.
      return std::pow(std::sin(radius / 2.0), 2);
    default:
      throw InvalidArgument("cap_measure supports d in {1, 2}");
  }
}

double min_pairwise_distance(const PointSet& points) {
  // Largest inner product <=> smallest angle; one acos at the end.
  double best = -1.0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, points[i].dot(points[j]));
  }
  return std::acos(std::clamp(best, -1.0, 1.0));
}

std::size_t count_in_cap(const PointSet& points, const SphericalCap& cap) {
  if (!points.empty() && points.dimension() != cap.center().dimension()) {
    throw InvalidArgument("count_in_cap: dimension mismatch");
  }
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [&](const SpherePoint& p) { return cap.contains(p); }));
}

Eigen::MatrixXd tangent_frame(const SpherePoint& p) {
  const auto& c = p.coords();
  if (p.dimension() == 1) {
    Eigen::MatrixXd frame(2, 1);
    frame << -c[1], c[0];
    return frame;
  }
  if (p.dimension() != 2) throw InvalidArgument("tangent_frame supports d in {1, 2}");
  const double s = std::hypot(c[0], c[1]);
  const double cos_phi = s > 0.0 ? c[0] / s : 1.0;
  const double sin_phi = s > 0.0 ? c[1] / s : 0.0;
  Eigen::MatrixXd frame(3, 2);
  frame.col(0) << c[2] * cos_phi, c[2] * sin_phi, -s;
  frame.col(1) << -sin_phi, cos_phi, 0.0;
  return frame;
}

SpherePoint exp_map(const SpherePoint& p, const Eigen::VectorXd& v) {
  const double t = v.norm();
  if (t == 0.0) return p;
  return SpherePoint(std::cos(t) * p.coords() + (std::sin(t) / t) * v);
}

PointSet rotate(const PointSet& points, const Eigen::MatrixXd& rotation) {
  std::vector<SpherePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(rotation * p.coords());
  return PointSet(points.dimension(), std::move(out), points.label(),
                  points.allows_duplicates() ? DuplicatePolicy::allow : DuplicatePolicy::reject);
}

Eigen::MatrixXd random_rotation(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d + 1, d + 1);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i <= d; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

SpherePoint random_point(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d + 1);
  do {
    for (Eigen::Index i = 0; i <= d; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-12);
  return SpherePoint(std::move(v));
}

MeshSpec MeshSpec::parse(const std::string& text) {
  MeshSpec spec;
  std::stringstream ss(text);
  std::string kind;
  std::getline(ss, kind, ':');
  if (kind == "fibonacci") {
    spec.kind = MeshKind::fibonacci;
  } else if (kind == "random") {
    spec.kind = MeshKind::random;
  } else if (kind == "grid" || kind == "product-grid") {
    spec.kind = MeshKind::product_grid;
  } else {
    throw InvalidArgument("unknown mesh kind '" + kind + "'");
  }
  std::string field;
  try {
    if (std::getline(ss, field, ':')) spec.n = std::stoull(field);
    if (std::getline(ss, field, ':')) spec.seed = std::stoull(field);
  } catch (const std::exception&) {
    throw InvalidArgument("malformed mesh spec '" + text + "'");
  }
  return spec;
}

std::string MeshSpec::to_string() const {
  std::string out;
  switch (kind) {
    case MeshKind::fibonacci: out = "fibonacci"; break;
    case MeshKind::random: out = "random"; break;
    case MeshKind::product_grid: out = "grid"; break;
  }
  out += ":" + std::to_string(n);
  if (kind == MeshKind::random) out += ":" + std::to_string(seed);
  return out;
}

PointSet generate_mesh(int d, std::size_t n, MeshKind kind, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("generate_mesh: n must be >= 1");
  if (d != 1 && d != 2) throw InvalidArgument("generate_mesh supports d in {1, 2}");
  constexpr double pi = std::numbers::pi;
  std::vector<SpherePoint> pts;
  pts.reserve(n);
  std::string label;

  if (kind == MeshKind::random) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      do {
        for (Eigen::Index k = 0; k <= d; ++k) v[k] = normal(rng);
      } while (v.norm() < 1e-12);
      pts.emplace_back(v);
    }
    label = "random:" + std::to_string(n) + ":" + std::to_string(seed);
  } else if (d == 1) {
    // Fibonacci on S^1 degenerates to the n-th roots of unity; the grid is the
    // same lattice shifted by half a step.
    const double offset = kind == MeshKind::fibonacci ? 0.0 : 0.5;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(SpherePoint::on_circle(2.0 * pi * (static_cast<double>(i) + offset) /
                                           static_cast<double>(n)));
    }
    label = (kind == MeshKind::fibonacci ? "fibonacci:" : "grid:") + std::to_string(n);
  } else if (kind == MeshKind::fibonacci) {
    const double golden_angle = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i);
      Eigen::VectorXd v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      pts.emplace_back(std::move(v));
    }
    label = "fibonacci:" + std::to_string(n);
  } else {
    const std::size_t rows =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(n / 2.0))));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t count = n / rows + (r < n % rows ? 1 : 0);
      const double theta = pi * (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
      const double shift = (r % 2 == 0) ? 0.0 : 0.5;
      for (std::size_t c = 0; c < count; ++c) {
        pts.push_back(SpherePoint::from_angles(
            theta, 2.0 * pi * (static_cast<double>(c) + shift) / static_cast<double>(count)));
      }
    }
    label = "grid:" + std::to_string(n);
  }
  return PointSet(d, std::move(pts), std::move(label));
}

std::vector<SpherePoint> local_patch(const SpherePoint& center, double radius, int rings) {
  std::vector<SpherePoint> out;
  const Eigen::MatrixXd frame = tangent_frame(center);
  for (int k = 1; k <= rings; ++k) {
    const double rho = radius * k / rings;
    if (center.dimension() == 1) {
      out.push_back(exp_map(center, rho * frame.col(0)));
      out.push_back(exp_map(center, -rho * frame.col(0)));
      continue;
    }
    const int count = 6 * k;
    for (int a = 0; a < count; ++a) {
      const double angle = 2.0 * std::numbers::pi * (a + 0.5 * (k % 2)) / count;
      out.push_back(
          exp_map(center, rho * (std::cos(angle) * frame.col(0) + std::sin(angle) * frame.col(1))));
    }
  }
  return out;
}

PointFile read_point_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point file " + path.string());
  const std::string name = path.string();
  std::string line;
  if (!std::getline(in, line)) throw ParseError(name, 1, "missing '# sphere' header");
  int d = 0;
  std::size_t n = 0;
  if (std::sscanf(line.c_str(), "# sphere d=%d n=%zu", &d, &n) != 2 || d < 1) {
    throw ParseError(name, 1, "expected '# sphere d=<d> n=<count>'");
  }
  std::vector<SpherePoint> pts;
  std::vector<std::string> comments;
  int lineno = 1;
  Eigen::VectorXd v(d + 1);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto start = line.find_first_not_of(' ', 1);
      comments.push_back(start == std::string::npos ? std::string{} : line.substr(start));
      continue;
    }
    std::istringstream row(line);
    for (int k = 0; k <= d; ++k) {
      std::string tok;
      if (!(row >> tok)) throw ParseError(name, lineno, "expected " + std::to_string(d + 1) + " values");
      char* end = nullptr;
      v[k] = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) throw ParseError(name, lineno, "bad number '" + tok + "'");
    }
    std::string extra;
    if (row >> extra) throw ParseError(name, lineno, "too many values on row");
    const double norm = v.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kReadUnitTolerance) {
      throw ParseError(name, lineno, "point is not on the unit sphere (|x| = " +
                                         std::to_string(norm) + ")");
    }
    pts.emplace_back(v);
  }
  if (pts.size() != n) {
    throw ParseError(name, lineno, "header declares n=" + std::to_string(n) + " but file has " +
                                       std::to_string(pts.size()) + " points");
  }
  return {PointSet(d, std::move(pts), path.filename().string(), DuplicatePolicy::allow),
          std::move(comments)};
}

PointSet read_points(const std::filesystem::path& path) { return read_point_file(path).points; }

void write_points(const PointSet& points, const std::filesystem::path& path,
                  const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write point file " + path.string());
  out << "# sphere d=" << points.dimension() << " n=" << points.size() << "\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  char buf[64];
  for (const auto& p : points) {
    for (Eigen::Index k = 0; k < p.coords().size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("error writing point file " + path.string());
}

}  // namespace fekete

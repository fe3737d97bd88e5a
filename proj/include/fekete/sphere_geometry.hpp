#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fekete {

// Unit vector on S^d, stored as d+1 coordinates.
class SpherePoint {
 public:
  // Renormalizes when |coords| deviates from 1 by more than 1e-14; throws on a
  // zero vector or fewer than two coordinates.
  explicit SpherePoint(Eigen::VectorXd coords);
  SpherePoint(std::initializer_list<double> coords);

  // S^2 point from colatitude theta and longitude phi.
  static SpherePoint from_angles(double theta, double phi);
  // S^1 point at the given angle.
  static SpherePoint on_circle(double angle);

  int dimension() const { return static_cast<int>(coords_.size()) - 1; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }
  double dot(const SpherePoint& other) const;

  bool operator==(const SpherePoint& other) const { return coords_ == other.coords_; }

 private:
  Eigen::VectorXd coords_;
};

// Open geodesic cap B(center, radius), 0 < radius <= pi.
class SphericalCap {
 public:
  SphericalCap(SpherePoint center, double radius);
  const SpherePoint& center() const { return center_; }
  double radius() const { return radius_; }
  bool contains(const SpherePoint& p) const;

 private:
  SpherePoint center_;
  double radius_;
};

enum class DuplicatePolicy { reject, allow };

// Immutable list of points of one dimension. Exact duplicates are rejected
// unless the set is constructed with DuplicatePolicy::allow.
class PointSet {
 public:
  explicit PointSet(int dimension, std::vector<SpherePoint> points = {}, std::string label = {},
                    DuplicatePolicy duplicates = DuplicatePolicy::reject);

  int dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const SpherePoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<SpherePoint>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }
  const std::string& label() const { return label_; }
  bool allows_duplicates() const { return duplicates_ == DuplicatePolicy::allow; }

  // (d+1) x n matrix with the points as columns.
  Eigen::MatrixXd as_matrix() const;

 private:
  int dimension_;
  std::vector<SpherePoint> points_;
  std::string label_;
  DuplicatePolicy duplicates_;
};

double geodesic_distance(const SpherePoint& a, const SpherePoint& b);

// Normalized surface measure of a cap of the given radius on S^d, d in {1, 2}.
double cap_measure(double radius, int d);

// Minimum geodesic distance over all pairs; pi for fewer than two points.
double min_pairwise_distance(const PointSet& points);

std::size_t count_in_cap(const PointSet& points, const SphericalCap& cap);

// Orthonormal tangent frame at p as the columns of a (d+1) x d matrix. For d = 2
// this is (e_theta, e_phi) of colatitude/longitude coordinates, continuous away
// from the poles; at a pole longitude 0 is used.
Eigen::MatrixXd tangent_frame(const SpherePoint& p);

// Geodesic step from p along the ambient tangent vector v (|v| is the arc length).
SpherePoint exp_map(const SpherePoint& p, const Eigen::VectorXd& v);

// Apply an orthogonal (d+1)x(d+1) matrix to every point.
PointSet rotate(const PointSet& points, const Eigen::MatrixXd& rotation);

// Haar-random rotation of R^{d+1}.
Eigen::MatrixXd random_rotation(int d, std::uint64_t seed);

SpherePoint random_point(int d, std::uint64_t seed);

enum class MeshKind { fibonacci, random, product_grid };

struct MeshSpec {
  MeshKind kind = MeshKind::fibonacci;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  // "fibonacci:2000", "random:5000:7", "grid:800". A bare kind leaves n = 0.
  static MeshSpec parse(const std::string& text);
  std::string to_string() const;
};

PointSet generate_mesh(int d, std::size_t n, MeshKind kind, std::uint64_t seed = 0);
inline PointSet generate_mesh(int d, const MeshSpec& spec) {
  return generate_mesh(d, spec.n, spec.kind, spec.seed);
}

// Points of `mesh` displaced into a small neighbourhood of `center`: rings of
// radius radius*k/rings, 6k points on ring k (d = 2), or +-radius*k/rings (d = 1).
std::vector<SpherePoint> local_patch(const SpherePoint& center, double radius, int rings);

struct PointFile {
  PointSet points;
  std::vector<std::string> comments;  // comment lines after the header, without '#'
};

// Text format: "# sphere d=<d> n=<n>", optional "#" comment lines, then one
// point per line as d+1 space separated floats.
PointFile read_point_file(const std::filesystem::path& path);
PointSet read_points(const std::filesystem::path& path);
void write_points(const PointSet& points, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

}  // namespace fekete

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fekete/harmonics.hpp"
#include "fekete/sphere_geometry.hpp"

namespace fekete {

// pi_L x m evaluation matrix with column j = basis_eval(space, points[j]).
struct VandermondeSystem {
  PolySpace space;
  PointSet points;
  Eigen::MatrixXd matrix;
  Eigen::Index rank = 0;
  // log|det| for square systems; -inf when singular, NaN when not square.
  double logabsdet = 0.0;

  bool square() const { return matrix.rows() == matrix.cols(); }
};

VandermondeSystem vandermonde(const PolySpace& space, const PointSet& points);

// log|det| of a square matrix via full-pivot LU; -inf below numerical rank.
double log_abs_det(const Eigen::MatrixXd& m);

// Column-pivoted greedy volume maximization: each step takes the mesh point
// whose basis column has maximal residual norm after projection on the span
// of the chosen columns (ties to the lowest index). Throws SingularError if
// the mesh does not span the space.
PointSet greedy_select(const PolySpace& space, const PointSet& mesh);

enum class RefinementMode { exchange, ascent, both };

struct FeketeConfig {
  // n = 0 selects max(50 pi_L, 2000) points.
  MeshSpec mesh{};
  RefinementMode mode = RefinementMode::both;
  int max_iterations = 200;
  // Minimal log|det| gain of an accepted move/iteration.
  double stop_tolerance = 1e-9;
  std::uint64_t seed = 0;
  double certificate_tolerance = 0.05;
  // Radius of the local exchange patches is patch_scale / L.
  double patch_scale = 2.0;

  // Throws InvalidArgument on an inconsistent configuration for this space.
  void validate(const PolySpace& space) const;
  MeshSpec resolved_mesh(const PolySpace& space) const;
};

std::string to_string(RefinementMode mode);
RefinementMode parse_refinement_mode(const std::string& text);

struct RefineResult {
  PointSet points;
  std::vector<double> trace;  // log|det| after every accepted step
  int iterations = 0;
  int exchange_moves = 0;
  int ascent_steps = 0;
  bool hit_iteration_cap = false;
};

// Local maximization of log|det| from a unisolvent start: single-point
// exchanges scored by rank-one updates against the candidate mesh plus local
// patches, and/or projected gradient ascent on the sphere. Every accepted
// step increases log|det|.
RefineResult refine_exchange(const PolySpace& space, const PointSet& start, const FeketeConfig& config,
                             const PointSet* candidates = nullptr);

struct SolveLog {
  int degree = 0;
  int d = 0;
  std::string mesh;
  std::uint64_t seed = 0;
  std::string mode;
  int iterations = 0;
  int exchange_moves = 0;
  int ascent_steps = 0;
  double greedy_logabsdet = 0.0;
  double final_logabsdet = 0.0;
  std::vector<double> logabsdet_trace;
  double certificate = 0.0;  // mesh sup of max_i |l_i|
  std::string certificate_mesh;
  bool certificate_ok = true;
  bool hit_iteration_cap = false;
  double min_distance = 0.0;
  // min distance / (pi / 2L); >= 1 for exact maximizers.
  double separation_ratio = 0.0;
};

struct FeketeResult {
  PointSet points;
  SolveLog log;
};

FeketeResult fekete_points(const PolySpace& space, const FeketeConfig& config = {});

// Per-degree point families Z(L).
class TriangularArray {
 public:
  explicit TriangularArray(int d, std::string provenance = {}) : d_(d), provenance_(std::move(provenance)) {}

  int d() const { return d_; }
  const std::string& provenance() const { return provenance_; }
  void set(int L, PointSet points);
  bool has(int L) const { return levels_.count(L) != 0; }
  // Throws MissingDegreeError.
  const PointSet& at(int L) const;
  std::vector<int> degrees() const;

 private:
  int d_;
  std::string provenance_;
  std::map<int, PointSet> levels_;
};

enum class Dilation { up, down };

// floor((1 + eps) L) or floor((1 - eps) L), guarded by 1e-9 against decimal
// representation error in eps.
int dilated_degree(int L, double eps, Dilation direction);

// Z_eps(L) = Z(floor((1 +- eps) L)) for every L in `degrees`; pure re-indexing.
TriangularArray dilate_array(const TriangularArray& z, double eps, Dilation direction,
                             std::span<const int> degrees);

}  // namespace fekete

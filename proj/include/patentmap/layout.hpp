#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patentmap/execution.hpp"
#include "patentmap/graph.hpp"

namespace patentmap {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// ForceAtlas2 settings. Defaults follow Gephi.
struct LayoutParams {
  int iterations = 1000;
  double scaling = 2.0;  // repulsion coefficient
  double gravity = 1.0;
  bool linlog_mode = false;
  /// Size-aware forces during the last 10% of the iterations.
  bool prevent_overlap = true;
  double edge_weight_influence = 1.0;
  std::uint64_t seed = 1;
  bool strong_gravity = false;
  double jitter_tolerance = 1.0;

  /// Throws Error when a field is out of range.
  void validate() const;
};

struct LayoutPositions {
  std::vector<Point> positions;  // indexed by node id
  LayoutParams params_used;
};

/// Uniform placement in a disc of radius sqrt(n), drawn from `seed`.
std::vector<Point> initial_positions(std::size_t node_count, std::uint64_t seed);

/// Stepwise ForceAtlas2: degree+1 masses, linear (or lin-log) attraction,
/// mass-product repulsion, gravity towards the origin and Gephi's adaptive
/// global speed. Repulsion is exact O(n^2); the parallel kernel gives the
/// same bits as the serial one.
class ForceAtlas2 {
 public:
  /// `node_sizes` (radius per node, default 1) only matters while overlap
  /// prevention is active.
  ForceAtlas2(const Graph& graph, LayoutParams params, std::vector<Point> start,
              std::vector<double> node_sizes = {}, Execution execution = Execution::Parallel);

  /// One iteration. `adjust_sizes` switches to the size-aware force variants.
  void step(bool adjust_sizes = false);

  /// Runs params.iterations steps, enabling overlap prevention for the tail
  /// when requested.
  void run();

  const std::vector<Point>& positions() const noexcept { return positions_; }
  double speed() const noexcept { return speed_; }

 private:
  void repulsion(bool adjust_sizes);

  const Graph& graph_;
  LayoutParams params_;
  Execution execution_;
  std::vector<Point> positions_;
  std::vector<double> mass_;
  std::vector<double> size_;
  std::vector<Point> force_;
  std::vector<Point> old_force_;
  double speed_ = 1.0;
  double speed_efficiency_ = 1.0;
};

/// Seeded initial placement followed by params.iterations steps.
LayoutPositions force_atlas2(const Graph& graph, const LayoutParams& params,
                             std::vector<double> node_sizes = {}, Execution execution = Execution::Parallel);

/// Same, from caller-supplied starting positions.
LayoutPositions force_atlas2(const Graph& graph, const LayoutParams& params, std::vector<Point> start,
                             std::vector<double> node_sizes = {}, Execution execution = Execution::Parallel);

}  // namespace patentmap

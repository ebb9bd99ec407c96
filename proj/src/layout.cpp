#include "patentmap/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "patentmap/error.hpp"

namespace patentmap {

namespace {

double unit_double(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

double edge_weight(double weight, double influence) {
  if (influence == 0.0) return 1.0;
  if (influence == 1.0) return weight;
  return std::pow(weight, influence);
}

}  // namespace

void LayoutParams::validate() const {
  if (iterations < 0) throw Error("layout iterations must be >= 0");
  if (!(scaling > 0.0) || !std::isfinite(scaling)) throw Error("layout scaling must be > 0");
  if (!(gravity >= 0.0) || !std::isfinite(gravity)) throw Error("layout gravity must be >= 0");
  if (!(edge_weight_influence >= 0.0) || !std::isfinite(edge_weight_influence)) {
    throw Error("edge weight influence must be >= 0");
  }
  if (!(jitter_tolerance > 0.0)) throw Error("jitter tolerance must be > 0");
}

std::vector<Point> initial_positions(std::size_t node_count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  const double radius = std::sqrt(static_cast<double>(node_count));
  std::vector<Point> out(node_count);
  for (auto& p : out) {
    const double r = radius * std::sqrt(unit_double(engine));
    const double theta = 2.0 * std::numbers::pi * unit_double(engine);
    p = {r * std::cos(theta), r * std::sin(theta)};
  }
  return out;
}

ForceAtlas2::ForceAtlas2(const Graph& graph, LayoutParams params, std::vector<Point> start,
                         std::vector<double> node_sizes, Execution execution)
    : graph_(graph), params_(params), execution_(execution), positions_(std::move(start)) {
  params_.validate();
  const std::size_t n = graph_.node_count();
  if (positions_.size() != n) throw Error("starting positions do not cover the graph");
  if (node_sizes.empty()) node_sizes.assign(n, 1.0);
  if (node_sizes.size() != n) throw Error("node sizes do not cover the graph");
  size_ = std::move(node_sizes);
  mass_.resize(n);
  for (NodeId v = 0; v < n; ++v) mass_[v] = static_cast<double>(graph_.degree(v)) + 1.0;
  force_.assign(n, {});
  old_force_.assign(n, {});
}

void ForceAtlas2::repulsion(bool adjust_sizes) {
  const auto n = static_cast<std::ptrdiff_t>(positions_.size());
  const double kr = params_.scaling;
  // Each node sums its own pair forces in index order, so threads never share
  // an accumulator and every thread count yields the same bits.
  const auto kernel = [&](std::ptrdiff_t i) {
    const Point pi = positions_[static_cast<std::size_t>(i)];
    const double mi = mass_[static_cast<std::size_t>(i)];
    const double si = size_[static_cast<std::size_t>(i)];
    double fx = 0.0;
    double fy = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Point pj = positions_[static_cast<std::size_t>(j)];
      const double dx = pi.x - pj.x;
      const double dy = pi.y - pj.y;
      const double d2 = dx * dx + dy * dy;
      const double mm = mi * mass_[static_cast<std::size_t>(j)];
      double factor = 0.0;
      if (adjust_sizes) {
        const double gap = std::sqrt(d2) - si - size_[static_cast<std::size_t>(j)];
        if (gap > 0.0) {
          factor = kr * mm / (gap * gap);
        } else if (gap < 0.0) {
          factor = 100.0 * kr * mm;
        }
      } else if (d2 > 0.0) {
        factor = kr * mm / d2;
      }
      fx += dx * factor;
      fy += dy * factor;
    }
    force_[static_cast<std::size_t>(i)].x += fx;
    force_[static_cast<std::size_t>(i)].y += fy;
  };
  if (execution_ == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) kernel(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) kernel(i);
  }
}

void ForceAtlas2::step(bool adjust_sizes) {
  const std::size_t n = positions_.size();
  if (n == 0) return;
  old_force_.swap(force_);
  std::fill(force_.begin(), force_.end(), Point{});

  repulsion(adjust_sizes);

  for (std::size_t v = 0; v < n; ++v) {
    const Point p = positions_[v];
    const double d = std::sqrt(p.x * p.x + p.y * p.y);
    double factor = 0.0;
    if (params_.strong_gravity) {
      factor = mass_[v] * params_.gravity;
    } else if (d > 0.0) {
      factor = mass_[v] * params_.gravity / d;
    }
    force_[v].x -= p.x * factor;
    force_[v].y -= p.y * factor;
  }

  for (const auto& e : graph_.edges()) {
    const Point a = positions_[e.source];
    const Point b = positions_[e.target];
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double w = edge_weight(e.weight, params_.edge_weight_influence);
    double distance = std::sqrt(dx * dx + dy * dy);
    if (adjust_sizes) distance -= size_[e.source] + size_[e.target];
    double factor = 0.0;
    if (params_.linlog_mode) {
      if (distance > 0.0) factor = -w * std::log1p(distance) / distance;
    } else if (!adjust_sizes || distance > 0.0) {
      factor = -w;
    }
    force_[e.source].x += dx * factor;
    force_[e.source].y += dy * factor;
    force_[e.target].x -= dx * factor;
    force_[e.target].y -= dy * factor;
  }

  // Adaptive speed: compare how much nodes oscillate (swinging) with how
  // much they move coherently (traction).
  double total_swinging = 0.0;
  double total_traction = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const Point f = force_[v];
    const Point o = old_force_[v];
    total_swinging += mass_[v] * std::hypot(o.x - f.x, o.y - f.y);
    total_traction += 0.5 * mass_[v] * std::hypot(o.x + f.x, o.y + f.y);
  }
  const double nn = static_cast<double>(n);
  const double estimated_jitter = 0.05 * std::sqrt(nn);
  const double min_jitter = std::sqrt(estimated_jitter);
  constexpr double kMaxJitter = 10.0;
  constexpr double kMinSpeedEfficiency = 0.05;
  double jitter = params_.jitter_tolerance *
                  std::max(min_jitter, std::min(kMaxJitter, estimated_jitter * total_traction / (nn * nn)));
  if (total_traction > 0.0 && total_swinging / total_traction > 2.0) {
    if (speed_efficiency_ > kMinSpeedEfficiency) speed_efficiency_ *= 0.5;
    jitter = std::max(jitter, params_.jitter_tolerance);
  }
  if (total_swinging > 0.0) {
    const double target_speed = jitter * speed_efficiency_ * total_traction / total_swinging;
    if (total_swinging > jitter * total_traction) {
      if (speed_efficiency_ > kMinSpeedEfficiency) speed_efficiency_ *= 0.7;
    } else if (speed_ < 1000.0) {
      speed_efficiency_ *= 1.3;
    }
    constexpr double kMaxRise = 0.5;
    speed_ += std::min(target_speed - speed_, kMaxRise * speed_);
  }

  for (std::size_t v = 0; v < n; ++v) {
    const Point f = force_[v];
    const Point o = old_force_[v];
    const double swinging = mass_[v] * std::hypot(o.x - f.x, o.y - f.y);
    double factor = speed_ / (1.0 + std::sqrt(speed_ * swinging));
    if (adjust_sizes) {
      factor *= 0.1;
      const double magnitude = std::hypot(f.x, f.y);
      factor = magnitude > 0.0 ? std::min(factor * magnitude, 10.0) / magnitude : 0.0;
    }
    positions_[v].x += f.x * factor;
    positions_[v].y += f.y * factor;
  }
}

void ForceAtlas2::run() {
  const int overlap_iterations = params_.prevent_overlap ? params_.iterations / 10 : 0;
  const int plain_iterations = params_.iterations - overlap_iterations;
  for (int i = 0; i < params_.iterations; ++i) step(i >= plain_iterations);
}

LayoutPositions force_atlas2(const Graph& graph, const LayoutParams& params, std::vector<double> node_sizes,
                             Execution execution) {
  return force_atlas2(graph, params, initial_positions(graph.node_count(), params.seed), std::move(node_sizes),
                      execution);
}

LayoutPositions force_atlas2(const Graph& graph, const LayoutParams& params, std::vector<Point> start,
                             std::vector<double> node_sizes, Execution execution) {
  if (graph.node_count() == 0) throw Error("layout needs a non-empty graph");
  ForceAtlas2 engine(graph, params, std::move(start), std::move(node_sizes), execution);
  engine.run();
  LayoutPositions out;
  out.positions = engine.positions();
  out.params_used = params;
  for (const auto& p : out.positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("layout diverged to a non-finite coordinate");
  }
  return out;
}

}  // namespace patentmap

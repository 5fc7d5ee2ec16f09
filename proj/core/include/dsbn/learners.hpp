#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsbn/dependence.hpp"
#include "dsbn/network.hpp"

namespace dsbn {

enum class EdgeOrientation {
  undirected,
  forward,   ///< a -> b
  backward,  ///< b -> a
};

struct LearnedEdge {
  std::size_t a = 0;  ///< a < b
  std::size_t b = 0;
  double weight = 0.0;  ///< dep0
  EdgeOrientation orientation = EdgeOrientation::undirected;
};

struct ColliderCandidate {
  std::size_t x1 = 0;
  std::size_t x2 = 0;
  std::size_t center = 0;
  std::optional<double> value;  ///< empty when the criterion could not be evaluated
  bool positive = false;
};

struct LearnedStructure {
  FramePtr frame;
  std::vector<LearnedEdge> edges;  ///< spanning-tree skeleton
  std::vector<ColliderCandidate> colliders;
  std::vector<std::string> warnings;

  bool has_edge(std::size_t u, std::size_t v) const;
  /// True when the skeleton edge u-v is oriented u -> v.
  bool oriented(std::size_t u, std::size_t v) const;
  /// Learned head-to-head pairs (x1, x2, center), x1 < x2, parents nonadjacent.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> head_to_head() const;
};

struct PolytreeOptions {
  double theta = 0.0;  ///< a candidate is a collider when criterion > theta
};

/// Maximum-weight spanning tree over pairwise dep0 weights.
LearnedStructure learn_tree(const ScoreContext& ctx);
/// Tree skeleton, collider orientation by the criterion, outward propagation.
LearnedStructure learn_polytree(const ScoreContext& ctx, const PolytreeOptions& opts = {});

struct StructureMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double orientation_accuracy = 1.0;  ///< 1 when the truth has no head-to-head pair
  std::size_t true_head_to_head = 0;
  std::size_t recovered_head_to_head = 0;
  std::size_t spurious_colliders = 0;
  bool skeleton_exact() const { return precision == 1.0 && recall == 1.0; }
};

StructureMetrics compare_structures(const Dag& truth, const LearnedStructure& learned);

}  // namespace dsbn

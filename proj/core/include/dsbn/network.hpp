#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsbn/frames.hpp"
#include "dsbn/mass.hpp"

namespace dsbn {

using NodeSet = std::vector<std::size_t>;
using Edge = std::pair<std::size_t, std::size_t>;  ///< parent -> child

/// Directed acyclic graph over nodes 0..n-1.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::size_t n);
  Dag(std::size_t n, const std::vector<Edge>& edges);

  std::size_t size() const noexcept { return parents_.size(); }
  /// Throws ValidationError on self-loops, parallel edges and cycles.
  void add_edge(std::size_t parent, std::size_t child);
  bool has_edge(std::size_t parent, std::size_t child) const;
  bool adjacent(std::size_t a, std::size_t b) const { return has_edge(a, b) || has_edge(b, a); }

  const NodeSet& parents(std::size_t v) const { return parents_.at(v); }
  const NodeSet& children(std::size_t v) const { return children_.at(v); }
  /// Edges sorted by (parent, child).
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;
  std::vector<std::size_t> topological_order() const;
  bool reaches(std::size_t from, std::size_t to) const;

  /// Nodes with at least two parents.
  std::vector<std::size_t> colliders() const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
};

/// A DAG over a frame's variables with one valuation per node over its family
/// scope {X_i} plus parents.
class BeliefNetwork {
 public:
  BeliefNetwork(FramePtr frame, Dag dag, std::vector<MassFunction> valuations);

  const FramePtr& frame() const noexcept { return frame_; }
  const Dag& dag() const noexcept { return dag_; }
  const std::vector<MassFunction>& valuations() const noexcept { return valuations_; }
  const MassFunction& valuation(std::size_t v) const { return valuations_.at(v); }
  Scope family_scope(std::size_t v) const;

  friend bool operator==(const BeliefNetwork& a, const BeliefNetwork& b) {
    return *a.frame_ == *b.frame_ && a.dag_ == b.dag_ && a.valuations_ == b.valuations_;
  }

 private:
  FramePtr frame_;
  Dag dag_;
  std::vector<MassFunction> valuations_;
};

/// Dempster combination of all node valuations, in topological order unless
/// `order` is given. Throws CapacityError above kJointConfigCap configurations.
inline constexpr std::size_t kJointConfigCap = std::size_t{1} << 20;
MassFunction underlying_distribution(const BeliefNetwork& net, const std::vector<std::size_t>& order = {});

/// True iff `l` d-separates `j` from `k` in `dag`.
bool dsep(const Dag& dag, const NodeSet& j, const NodeSet& k, const NodeSet& l);

enum class Verdict { independent, dependent, inconclusive };
const char* to_string(Verdict v);

struct IndependenceStatement {
  NodeSet j, k, l;
  Verdict verdict = Verdict::inconclusive;
  double residual = 0.0;
  std::string note;
};

/// Tests m[J,K,L] == m[J,L | L] (+) m[K,L | L] (+) m[L] within `eps` (L1).
/// Solver failures yield an inconclusive statement.
IndependenceStatement indep_test(const MassFunction& m, const NodeSet& j, const NodeSet& k, const NodeSet& l,
                                 double eps = kDefaultTolerances.residual);

Dag random_tree_structure(std::size_t n, std::uint64_t seed);
/// Tree skeleton with random orientations; at least one collider when n >= 3.
Dag random_polytree_structure(std::size_t n, std::uint64_t seed);

enum class ValuationMode {
  /// Each focal set assigns a nonempty child-value set to every parent
  /// configuration, so a valuation's marginal on the parents is vacuous.
  conditional,
  /// Focal sets drawn from all nonempty subsets of the family space.
  arbitrary,
};

struct GenerationOptions {
  std::size_t focal_budget = 4;
  std::size_t max_resamples = 32;
  ValuationMode mode = ValuationMode::conditional;
};

struct GenerationReport {
  std::size_t conflicts = 0;  ///< node valuations resampled after total conflict
  std::size_t joint_focal_count = 0;
};

BeliefNetwork random_network(const Dag& dag, const FramePtr& frame, const GenerationOptions& opts,
                             std::uint64_t seed, GenerationReport* report = nullptr);

/// Frame of `n` variables X1..Xn with the given domain sizes (labels v0, v1, ...).
FramePtr make_frame(std::size_t n, const std::vector<std::size_t>& domain_sizes);

// JSON network document: {"format", "frame", "edges", "valuations"} plus an
// optional string-valued "summary" object.
void write_network(std::ostream& out, const BeliefNetwork& net,
                   const std::map<std::string, std::string>& summary = {});
BeliefNetwork read_network(std::istream& in);
BeliefNetwork read_network_file(const std::string& path);

const char* to_string(ValuationMode mode);

}  // namespace dsbn

#include "dsbn/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "dsbn/errors.hpp"
#include "dsbn/rng.hpp"

namespace dsbn {

// ---------------------------------------------------------------- Dag

Dag::Dag(std::size_t n) : parents_(n), children_(n) {}

Dag::Dag(std::size_t n, const std::vector<Edge>& edges) : Dag(n) {
  for (const auto& [p, c] : edges) add_edge(p, c);
}

void Dag::add_edge(std::size_t parent, std::size_t child) {
  if (parent >= size() || child >= size()) throw ValidationError("edge endpoint out of range");
  if (parent == child) throw ValidationError("self-loop");
  if (adjacent(parent, child)) throw ValidationError("parallel edge");
  if (reaches(child, parent)) throw ValidationError("edge would create a cycle");
  auto& ps = parents_[child];
  ps.insert(std::upper_bound(ps.begin(), ps.end(), parent), parent);
  auto& cs = children_[parent];
  cs.insert(std::upper_bound(cs.begin(), cs.end(), child), child);
}

bool Dag::has_edge(std::size_t parent, std::size_t child) const {
  const auto& cs = children_.at(parent);
  return std::binary_search(cs.begin(), cs.end(), child);
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (std::size_t p = 0; p < size(); ++p)
    for (auto c : children_[p]) out.emplace_back(p, c);
  return out;
}

std::size_t Dag::edge_count() const {
  std::size_t n = 0;
  for (const auto& cs : children_) n += cs.size();
  return n;
}

std::vector<std::size_t> Dag::topological_order() const {
  std::vector<std::size_t> indegree(size());
  for (std::size_t v = 0; v < size(); ++v) indegree[v] = parents_[v].size();
  // smallest ready node first, so the order is canonical
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < size(); ++v)
    if (indegree[v] == 0) ready.insert(v);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (auto c : children_[v])
      if (--indegree[c] == 0) ready.insert(c);
  }
  return order;
}

bool Dag::reaches(std::size_t from, std::size_t to) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = true;
    for (auto c : children_[v]) stack.push_back(c);
  }
  return false;
}

std::vector<std::size_t> Dag::colliders() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (parents_[v].size() >= 2) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------- BeliefNetwork

BeliefNetwork::BeliefNetwork(FramePtr frame, Dag dag, std::vector<MassFunction> valuations)
    : frame_(std::move(frame)), dag_(std::move(dag)), valuations_(std::move(valuations)) {
  if (!frame_) throw ValidationError("network without frame");
  if (dag_.size() != frame_->size()) throw ValidationError("dag size does not match the frame");
  if (valuations_.size() != dag_.size()) throw ValidationError("one valuation per node required");
  for (std::size_t v = 0; v < valuations_.size(); ++v)
    if (!(valuations_[v].scope() == family_scope(v)))
      throw ScopeError("valuation of '" + frame_->variable(v).name + "' is not over its family scope");
}

Scope BeliefNetwork::family_scope(std::size_t v) const {
  NodeSet vars = dag_.parents(v);
  vars.push_back(v);
  return frame_->scope(std::move(vars));
}

MassFunction underlying_distribution(const BeliefNetwork& net, const std::vector<std::size_t>& order) {
  const Scope full = net.frame()->full_scope();
  if (full.config_count() > kJointConfigCap)
    throw CapacityError("joint space of " + std::to_string(full.config_count()) + " configurations exceeds the cap");
  std::vector<std::size_t> seq = order.empty() ? net.dag().topological_order() : order;
  std::vector<std::size_t> check = seq;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != i || check.size() != net.dag().size())
      throw ValidationError("combination order must be a permutation of the nodes");
  MassFunction acc = MassFunction::vacuous(full);
  for (auto v : seq) acc = combine(acc, net.valuation(v));
  return acc;
}

// ---------------------------------------------------------------- d-separation

namespace {

void validate_sets(std::size_t n, const NodeSet& j, const NodeSet& k, const NodeSet& l) {
  std::vector<int> owner(n, -1);
  int tag = 0;
  for (const NodeSet* s : {&j, &k, &l}) {
    for (auto v : *s) {
      if (v >= n) throw ValidationError("unknown node " + std::to_string(v));
      if (owner[v] != -1 && owner[v] != tag) throw ValidationError("node sets must be disjoint");
      owner[v] = tag;
    }
    ++tag;
  }
}

}  // namespace

bool dsep(const Dag& dag, const NodeSet& j, const NodeSet& k, const NodeSet& l) {
  const std::size_t n = dag.size();
  validate_sets(n, j, k, l);
  std::vector<bool> in_l(n, false);
  for (auto v : l) in_l[v] = true;

  // ancestors of L, L included
  std::vector<bool> anc(n, false);
  std::vector<std::size_t> stack(l.begin(), l.end());
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (anc[v]) continue;
    anc[v] = true;
    for (auto p : dag.parents(v)) stack.push_back(p);
  }

  // reachability over (node, arrived-from-child) states
  enum : int { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::vector<bool> reachable(n, false);
  std::deque<std::pair<std::size_t, int>> queue;
  for (auto v : j) queue.emplace_back(v, kUp);
  while (!queue.empty()) {
    const auto [v, dir] = queue.front();
    queue.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (!in_l[v]) reachable[v] = true;
    if (dir == kUp && !in_l[v]) {
      for (auto p : dag.parents(v)) queue.emplace_back(p, kUp);
      for (auto c : dag.children(v)) queue.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!in_l[v])
        for (auto c : dag.children(v)) queue.emplace_back(c, kDown);
      if (anc[v])
        for (auto p : dag.parents(v)) queue.emplace_back(p, kUp);
    }
  }
  return std::none_of(k.begin(), k.end(), [&](std::size_t v) { return reachable[v]; });
}

// ---------------------------------------------------------------- independence

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::independent: return "independent";
    case Verdict::dependent: return "dependent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

IndependenceStatement indep_test(const MassFunction& m, const NodeSet& j, const NodeSet& k, const NodeSet& l,
                                 double eps) {
  const FramePtr& frame = m.scope().frame();
  if (j.empty() || k.empty()) throw ValidationError("independence statement needs nonempty J and K");
  validate_sets(frame->size(), j, k, l);

  IndependenceStatement st{j, k, l, Verdict::inconclusive, 0.0, {}};
  auto join = [](const NodeSet& a, const NodeSet& b) {
    NodeSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };
  const Scope s_l = frame->scope(l);
  const Scope s_jl = frame->scope(join(j, l));
  const Scope s_kl = frame->scope(join(k, l));
  const Scope s_jkl = frame->scope(join(join(j, k), l));
  if (!s_jkl.is_subset_of(m.scope())) throw ScopeError("statement variables outside the mass scope");

  const MassFunction left = marginalize(m, s_jkl);
  try {
    const MassFunction r_j = mk_conditional(marginalize(m, s_jl), s_l);
    const MassFunction r_k = mk_conditional(marginalize(m, s_kl), s_l);
    const MassFunction right = combine(combine(marginalize(m, s_l), r_j), r_k);
    st.residual = l1_distance(left, right);
    st.verdict = st.residual <= eps ? Verdict::independent : Verdict::dependent;
  } catch (const NoSolutionError& e) {
    st.note = e.what();
  } catch (const ConflictError& e) {
    st.note = e.what();
  }
  return st;
}

// ---------------------------------------------------------------- generators

namespace {

std::vector<Edge> random_recursive_tree(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(perm[rng.below(i)], perm[i]);
  return edges;
}

}  // namespace

Dag random_tree_structure(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("a random structure needs at least two nodes");
  Rng rng(seed);
  return Dag(n, random_recursive_tree(n, rng));
}

Dag random_polytree_structure(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("a random structure needs at least two nodes");
  Rng rng(seed);
  for (;;) {
    auto edges = random_recursive_tree(n, rng);
    for (auto& e : edges)
      if (rng.coin()) std::swap(e.first, e.second);
    Dag dag(n, edges);
    if (n < 3 || !dag.colliders().empty()) return dag;
  }
}

FramePtr make_frame(std::size_t n, const std::vector<std::size_t>& domain_sizes) {
  if (domain_sizes.empty()) throw ValidationError("no domain sizes given");
  if (domain_sizes.size() != 1 && domain_sizes.size() != n)
    throw ValidationError("give one domain size or one per variable");
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = domain_sizes.size() == 1 ? domain_sizes[0] : domain_sizes[i];
    Variable v{"X" + std::to_string(i + 1), {}};
    for (std::size_t l = 0; l < d; ++l) v.labels.push_back("v" + std::to_string(l));
    vars.push_back(std::move(v));
  }
  return Frame::make(std::move(vars));
}

const char* to_string(ValuationMode mode) {
  return mode == ValuationMode::conditional ? "conditional" : "arbitrary";
}

namespace {

std::size_t saturating_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > cap / base) return cap;
    out *= base;
  }
  return std::min(out, cap);
}

Bitset draw_focal_set(const Scope& family, std::size_t child, ValuationMode mode, Rng& rng) {
  const std::size_t configs = family.config_count();
  Bitset bits(configs);
  if (mode == ValuationMode::arbitrary) {
    do {
      for (std::size_t i = 0; i < configs; ++i)
        if (rng.coin()) bits.set(i);
    } while (bits.none());
    return bits;
  }
  const Scope child_scope = family.frame()->scope({child});
  const Scope parent_scope = family.minus(child_scope);
  const std::size_t d = child_scope.config_count();
  const std::size_t subset_count = (std::size_t{1} << d) - 1;
  std::vector<std::uint64_t> child_sets(parent_scope.config_count());
  for (auto& s : child_sets) s = 1 + rng.below(subset_count);
  const Projector to_parent(family, parent_scope);
  const Projector to_child(family, child_scope);
  for (std::size_t i = 0; i < configs; ++i)
    if ((child_sets[to_parent(i)] >> to_child(i)) & 1u) bits.set(i);
  return bits;
}

MassFunction draw_valuation(const Scope& family, std::size_t child, const GenerationOptions& opts, Rng& rng) {
  const std::size_t configs = family.config_count();
  std::size_t available;
  if (opts.mode == ValuationMode::arbitrary) {
    available = configs >= 63 ? opts.focal_budget : (std::size_t{1} << configs) - 1;
  } else {
    const std::size_t d = family.frame()->variable(child).domain_size();
    const std::size_t per = d >= 63 ? opts.focal_budget : (std::size_t{1} << d) - 1;
    available = saturating_pow(per, configs / d, opts.focal_budget);
  }
  const std::size_t budget = std::min(opts.focal_budget, available);
  std::set<Bitset> chosen;
  while (chosen.size() < budget) chosen.insert(draw_focal_set(family, child, opts.mode, rng));
  // Dirichlet(1, ..., 1) weights
  std::vector<double> w;
  double sum = 0.0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    w.push_back(-std::log(rng.uniform_open_zero()));
    sum += w.back();
  }
  FocalMap focal;
  std::size_t i = 0;
  for (const auto& s : chosen) focal.emplace(s, w[i++] / sum);
  return MassFunction::from_focal(family, std::move(focal), true);
}

}  // namespace

BeliefNetwork random_network(const Dag& dag, const FramePtr& frame, const GenerationOptions& opts,
                             std::uint64_t seed, GenerationReport* report) {
  if (opts.focal_budget < 1) throw ValidationError("focal budget must be at least 1");
  if (dag.size() != frame->size()) throw ValidationError("dag size does not match the frame");
  const Scope full = frame->full_scope();
  if (full.config_count() > kJointConfigCap) throw CapacityError("joint space too large for generation");

  Rng rng(seed);
  GenerationReport rep;
  std::vector<MassFunction> valuations(dag.size());
  MassFunction running = MassFunction::vacuous(full);
  for (auto v : dag.topological_order()) {
    NodeSet family_vars = dag.parents(v);
    family_vars.push_back(v);
    const Scope family = frame->scope(family_vars);
    bool placed = false;
    for (std::size_t attempt = 0; attempt <= opts.max_resamples && !placed; ++attempt) {
      MassFunction candidate = draw_valuation(family, v, opts, rng);
      try {
        running = combine(running, candidate);
        valuations[v] = std::move(candidate);
        placed = true;
      } catch (const ConflictError&) {
        ++rep.conflicts;
      }
    }
    if (!placed)
      throw GenerationError("valuation of '" + frame->variable(v).name + "' stayed totally conflicting after " +
                            std::to_string(opts.max_resamples) + " resamples");
  }
  rep.joint_focal_count = running.size();
  if (report) *report = rep;
  return BeliefNetwork(frame, dag, std::move(valuations));
}

}  // namespace dsbn

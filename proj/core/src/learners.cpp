#include "dsbn/learners.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "dsbn/errors.hpp"

namespace dsbn {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
  std::vector<std::size_t> parent;
};

const LearnedEdge* find_edge(const std::vector<LearnedEdge>& edges, std::size_t u, std::size_t v) {
  const auto a = std::min(u, v), b = std::max(u, v);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return &e;
  return nullptr;
}

}  // namespace

bool LearnedStructure::has_edge(std::size_t u, std::size_t v) const { return find_edge(edges, u, v) != nullptr; }

bool LearnedStructure::oriented(std::size_t u, std::size_t v) const {
  const auto* e = find_edge(edges, u, v);
  if (!e) return false;
  return u < v ? e->orientation == EdgeOrientation::forward : e->orientation == EdgeOrientation::backward;
}

std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> LearnedStructure::head_to_head() const {
  const std::size_t n = frame ? frame->size() : 0;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> parents;
    for (std::size_t u = 0; u < n; ++u)
      if (u != c && oriented(u, c)) parents.push_back(u);
    for (std::size_t i = 0; i < parents.size(); ++i)
      for (std::size_t j = i + 1; j < parents.size(); ++j)
        if (!has_edge(parents[i], parents[j])) out.emplace_back(parents[i], parents[j], c);
  }
  return out;
}

LearnedStructure learn_tree(const ScoreContext& ctx) {
  const std::size_t n = ctx.variable_count();
  if (n < 2) throw ValidationError("tree learning needs at least two variables");
  const Frame& frame = *ctx.frame();

  LearnedStructure out;
  out.frame = ctx.frame();
  std::vector<LearnedEdge> candidates;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      Dep0Detail d = dep0_detail(ctx, a, b);
      candidates.push_back({a, b, d.value, EdgeOrientation::undirected});
      for (auto& w : d.warnings) out.warnings.push_back(std::move(w));
    }
  }
  auto name_pair = [&](const LearnedEdge& e) {
    auto x = frame.variable(e.a).name, y = frame.variable(e.b).name;
    if (y < x) std::swap(x, y);
    return std::make_pair(x, y);
  };
  std::stable_sort(candidates.begin(), candidates.end(), [&](const LearnedEdge& l, const LearnedEdge& r) {
    if (l.weight != r.weight) return l.weight > r.weight;
    return name_pair(l) < name_pair(r);
  });
  DisjointSets sets(n);
  for (const auto& e : candidates) {
    if (sets.unite(e.a, e.b)) out.edges.push_back(e);
    if (out.edges.size() == n - 1) break;
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const LearnedEdge& l, const LearnedEdge& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
  return out;
}

LearnedStructure learn_polytree(const ScoreContext& ctx, const PolytreeOptions& opts) {
  const std::size_t n = ctx.variable_count();
  if (n < 3) throw ValidationError("polytree learning needs at least three variables");
  const Frame& frame = *ctx.frame();
  LearnedStructure out = learn_tree(ctx);

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (const auto& e : out.edges) {
    neighbors[e.a].push_back(e.b);
    neighbors[e.b].push_back(e.a);
  }

  // positive[(min, max, center)]
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> positive;
  for (std::size_t c = 0; c < n; ++c) {
    const auto& nb = neighbors[c];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const auto x1 = std::min(nb[i], nb[j]), x2 = std::max(nb[i], nb[j]);
        ColliderCandidate cand{x1, x2, c, std::nullopt, false};
        try {
          cand.value = criterion(ctx, x1, x2, c);
          cand.positive = *cand.value > opts.theta;
        } catch (const NumericalError& e) {
          out.warnings.push_back("criterion(" + frame.variable(x1).name + "," + frame.variable(x2).name + "," +
                                 frame.variable(c).name + ") not evaluated: " + e.what());
        }
        if (cand.positive) positive.emplace(x1, x2, c);
        out.colliders.push_back(cand);
      }
    }
  }

  // Orientation demands per skeleton edge: bit 0 = a->b, bit 1 = b->a.
  std::map<std::pair<std::size_t, std::size_t>, unsigned> demands;
  auto demand = [&](std::size_t from, std::size_t to) {
    const auto key = std::make_pair(std::min(from, to), std::max(from, to));
    demands[key] |= from < to ? 1u : 2u;
  };
  for (const auto& [x1, x2, c] : positive) {
    demand(x1, c);
    demand(x2, c);
  }

  auto direction = [&](std::size_t from, std::size_t to) {
    auto it = demands.find({std::min(from, to), std::max(from, to)});
    if (it == demands.end()) return 0u;
    return it->second;
  };
  auto is_into = [&](std::size_t from, std::size_t to) { return direction(from, to) == (from < to ? 1u : 2u); };

  // Outward propagation: u -> v and v - w with (u, w) not a collider pair at v gives v -> w.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      for (auto u : neighbors[v]) {
        if (!is_into(u, v)) continue;
        for (auto w : neighbors[v]) {
          if (w == u) continue;
          if (positive.count({std::min(u, w), std::max(u, w), v})) continue;
          const unsigned before = direction(v, w);
          const unsigned bit = v < w ? 1u : 2u;
          if ((before & bit) == 0) {
            demand(v, w);
            changed = true;
          }
        }
      }
    }
  }

  for (auto& e : out.edges) {
    const unsigned d = direction(e.a, e.b);
    if (d == 1u) {
      e.orientation = EdgeOrientation::forward;
    } else if (d == 2u) {
      e.orientation = EdgeOrientation::backward;
    } else if (d == 3u) {
      out.warnings.push_back("conflicting orientation demands on " + frame.variable(e.a).name + " - " +
                             frame.variable(e.b).name + "; left undirected");
    }
  }
  return out;
}

StructureMetrics compare_structures(const Dag& truth, const LearnedStructure& learned) {
  if (!learned.frame || learned.frame->size() != truth.size())
    throw ValidationError("learned structure and truth have different variable sets");
  const std::size_t n = truth.size();
  StructureMetrics m;

  std::size_t hits = 0;
  for (const auto& e : learned.edges)
    if (truth.adjacent(e.a, e.b)) ++hits;
  const std::size_t true_edges = truth.edge_count();
  m.precision = learned.edges.empty() ? (true_edges == 0 ? 1.0 : 0.0)
                                      : static_cast<double>(hits) / static_cast<double>(learned.edges.size());
  m.recall = true_edges == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(true_edges);

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> truth_h2h;
  for (std::size_t c = 0; c < n; ++c) {
    const auto& ps = truth.parents(c);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j)
        if (!truth.adjacent(ps[i], ps[j])) truth_h2h.emplace(std::min(ps[i], ps[j]), std::max(ps[i], ps[j]), c);
  }
  m.true_head_to_head = truth_h2h.size();
  for (const auto& [x1, x2, c] : truth_h2h)
    if (learned.oriented(x1, c) && learned.oriented(x2, c)) ++m.recovered_head_to_head;
  m.orientation_accuracy = truth_h2h.empty() ? 1.0
                                             : static_cast<double>(m.recovered_head_to_head) /
                                                   static_cast<double>(truth_h2h.size());
  for (const auto& h : learned.head_to_head())
    if (!truth_h2h.count(h)) ++m.spurious_colliders;
  return m;
}

}  // namespace dsbn

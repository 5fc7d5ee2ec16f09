#include "dsbn/mass.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "dsbn/errors.hpp"

namespace dsbn {

namespace {

MassKind kind_of(const FocalMap& focal) {
  for (const auto& [set, mass] : focal)
    if (mass < 0.0) return MassKind::pseudo;
  return MassKind::proper;
}

void drop_small(FocalMap& focal, double threshold) {
  std::erase_if(focal, [&](const auto& kv) { return std::abs(kv.second) <= threshold; });
}

FocalMap extended_focal(const MassFunction& m, const Scope& target) {
  if (m.scope() == target) return m.focal();
  FocalMap out;
  for (const auto& [set, mass] : m.focal()) out.emplace(cylinder_bits(set, m.scope(), target), mass);
  return out;
}

void require_same_scope(const MassFunction& a, const MassFunction& b, const char* what) {
  if (!(a.scope() == b.scope())) throw ScopeError(std::string(what) + ": mass functions have different scopes");
}

void require_set_scope(const MassFunction& m, const ConfigSet& a) {
  if (!(m.scope() == a.scope())) throw ScopeError("set scope does not match the mass function scope");
}

std::uint32_t to_mask(const Bitset& b) { return static_cast<std::uint32_t>(b.low_word()); }

void require_dense(const Scope& scope) {
  if (scope.config_count() > kDenseConfigCap)
    throw CapacityError("scope with " + std::to_string(scope.config_count()) +
                        " configurations exceeds the dense-lattice cap of " + std::to_string(kDenseConfigCap));
}

// In-place superset-sum (zeta) transform over the subset lattice.
void superset_zeta(std::vector<double>& v, std::size_t n) {
  for (std::size_t bit = 0; bit < n; ++bit) {
    const std::size_t b = std::size_t{1} << bit;
    for (std::size_t mask = 0; mask < v.size(); ++mask)
      if ((mask & b) == 0) v[mask] += v[mask | b];
  }
}

void superset_mobius(std::vector<double>& v, std::size_t n) {
  for (std::size_t bit = 0; bit < n; ++bit) {
    const std::size_t b = std::size_t{1} << bit;
    for (std::size_t mask = 0; mask < v.size(); ++mask)
      if ((mask & b) == 0) v[mask] -= v[mask | b];
  }
}

// A normalized mass with one focal set carries exactly 1 there; summation
// round-off would otherwise make e.g. vacuous marginals compare unequal.
void snap_single(FocalMap& focal) {
  if (focal.size() == 1) focal.begin()->second = 1.0;
}

struct Convolution {
  std::unordered_map<Bitset, double, BitsetHash> cells;
  double conflict = 0.0;
  Scope scope;
};

Convolution convolve(const MassFunction& a, const MassFunction& b) {
  if (!a.scope().same_frame(b.scope())) throw ScopeError("combination across different frames");
  Convolution out;
  out.scope = a.scope().union_with(b.scope());
  const FocalMap fa = extended_focal(a, out.scope);
  const FocalMap fb = extended_focal(b, out.scope);
  out.cells.reserve(fa.size() * fb.size());
  for (const auto& [sa, ma] : fa) {
    for (const auto& [sb, mb] : fb) {
      Bitset c = sa & sb;
      if (c.none())
        out.conflict += ma * mb;
      else
        out.cells[std::move(c)] += ma * mb;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- MassFunction

MassFunction MassFunction::from_focal(Scope scope, FocalMap focal, bool auto_normalize, const Tolerances& tol) {
  double sum = 0.0;
  for (const auto& [set, mass] : focal) {
    if (set.size() != scope.config_count()) throw ScopeError("focal set layout does not match scope");
    if (set.none() && mass != 0.0) throw ValidationError("mass assigned to the empty set");
    if (!std::isfinite(mass)) throw ValidationError("non-finite mass");
    sum += mass;
  }
  std::erase_if(focal, [](const auto& kv) { return kv.first.none(); });
  if (std::abs(sum - 1.0) > tol.algebra) {
    if (!auto_normalize) throw ValidationError("masses sum to " + std::to_string(sum) + ", expected 1");
    if (std::abs(sum) <= tol.algebra) throw ValidationError("cannot normalize masses summing to zero");
    for (auto& [set, mass] : focal) mass /= sum;
  }
  drop_small(focal, tol.drop);
  if (focal.empty()) throw ValidationError("mass function without focal sets");
  snap_single(focal);
  const auto kind = kind_of(focal);
  return MassFunction(std::move(scope), std::move(focal), kind);
}

MassFunction MassFunction::from_normalized(Scope scope, FocalMap focal, const Tolerances& tol) {
  drop_small(focal, tol.drop);
  snap_single(focal);
  const auto kind = kind_of(focal);
  return MassFunction(std::move(scope), std::move(focal), kind);
}

MassFunction MassFunction::vacuous(const Scope& scope) {
  FocalMap focal;
  focal.emplace(Bitset::full(scope.config_count()), 1.0);
  return MassFunction(scope, std::move(focal), MassKind::proper);
}

bool MassFunction::is_vacuous() const {
  return focal_.size() == 1 && focal_.begin()->first.all() && focal_.begin()->second == 1.0;
}

double MassFunction::mass(const Bitset& set) const {
  auto it = focal_.find(set);
  return it == focal_.end() ? 0.0 : it->second;
}

double MassFunction::mass(const ConfigSet& set) const {
  if (!(set.scope() == scope_)) throw ScopeError("set scope does not match the mass function scope");
  return mass(set.bits());
}

double MassFunction::total() const {
  double s = 0.0;
  for (const auto& [set, mass] : focal_) s += mass;
  return s;
}

MassFunction make_mass(const Scope& scope, std::span<const std::pair<ConfigSet, double>> entries,
                       bool auto_normalize) {
  FocalMap focal;
  for (const auto& [set, mass] : entries) {
    if (!(set.scope() == scope)) throw ScopeError("entry scope does not match the mass function scope");
    focal[set.bits()] += mass;
  }
  return MassFunction::from_focal(scope, std::move(focal), auto_normalize);
}

MassFunction make_mass(const Scope& scope, std::initializer_list<std::pair<ConfigSet, double>> entries,
                       bool auto_normalize) {
  return make_mass(scope, std::span<const std::pair<ConfigSet, double>>(entries.begin(), entries.size()),
                   auto_normalize);
}

MassFunction simple_support(const ConfigSet& b) {
  if (b.empty()) throw DegenerateEventError("simple support on the empty set");
  FocalMap focal;
  focal.emplace(b.bits(), 1.0);
  return MassFunction::from_normalized(b.scope(), std::move(focal));
}

// ---------------------------------------------------------------- combination

double conflict(const MassFunction& a, const MassFunction& b) { return convolve(a, b).conflict; }

MassFunction combine(const MassFunction& a, const MassFunction& b, const Tolerances& tol) {
  Convolution conv = convolve(a, b);
  const double normalizer = 1.0 - conv.conflict;
  if (std::abs(normalizer) <= tol.algebra) {
    if (a.is_proper() && b.is_proper()) throw ConflictError("total conflict in Dempster combination");
    throw ConflictError("vanishing normalizer in pseudo-mass combination");
  }
  FocalMap focal;
  for (auto& [set, mass] : conv.cells) focal.emplace(set, mass / normalizer);
  return MassFunction::from_normalized(std::move(conv.scope), std::move(focal), tol);
}

MassFunction combine_all(std::span<const MassFunction> parts, const Tolerances& tol) {
  if (parts.empty()) throw ValidationError("combination of no mass functions");
  MassFunction acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = combine(acc, parts[i], tol);
  return acc;
}

MassFunction marginalize(const MassFunction& m, const Scope& target) {
  if (!target.is_subset_of(m.scope())) throw ScopeError("marginalization target is not a subscope");
  if (target == m.scope()) return m;
  const Projector proj(m.scope(), target);
  FocalMap focal;
  for (const auto& [set, mass] : m.focal()) {
    Bitset out(target.config_count());
    set.for_each([&](std::size_t i) { out.set(proj(i)); });
    focal[std::move(out)] += mass;
  }
  return MassFunction::from_normalized(target, std::move(focal));
}

MassFunction extend(const MassFunction& m, const Scope& target) {
  if (!m.scope().is_subset_of(target)) throw ScopeError("extension target does not contain the scope");
  return MassFunction::from_normalized(target, extended_focal(m, target));
}

MassFunction condition(const MassFunction& m, const ConfigSet& b, const Tolerances& tol) {
  if (!b.scope().is_subset_of(m.scope())) throw ScopeError("conditioning event outside the mass scope");
  const MassFunction support = simple_support(b);
  try {
    return combine(m, support, tol);
  } catch (const ConflictError&) {
    throw ImpossibleEventError("conditioning on an event of zero plausibility");
  }
}

// ---------------------------------------------------------------- functionals

double belief(const MassFunction& m, const ConfigSet& a) {
  require_set_scope(m, a);
  double s = 0.0;
  for (const auto& [set, mass] : m.focal())
    if (set.is_subset_of(a.bits())) s += mass;
  return s;
}

double plausibility(const MassFunction& m, const ConfigSet& a) {
  require_set_scope(m, a);
  double s = 0.0;
  for (const auto& [set, mass] : m.focal())
    if (set.intersects(a.bits())) s += mass;
  return s;
}

double commonality(const MassFunction& m, const ConfigSet& a) {
  require_set_scope(m, a);
  double s = 0.0;
  for (const auto& [set, mass] : m.focal())
    if (a.bits().is_subset_of(set)) s += mass;
  return s;
}

// ---------------------------------------------------------------- dense lattice

std::size_t dense_subset_count(const Scope& scope) {
  require_dense(scope);
  return std::size_t{1} << scope.config_count();
}

std::vector<double> dense_masses(const MassFunction& m) {
  std::vector<double> v(dense_subset_count(m.scope()), 0.0);
  for (const auto& [set, mass] : m.focal()) v[to_mask(set)] = mass;
  return v;
}

std::vector<double> dense_commonality(const MassFunction& m) {
  auto v = dense_masses(m);
  superset_zeta(v, m.scope().config_count());
  return v;
}

MassFunction mobius_mass_from_commonality(const Scope& scope, std::span<const double> q, const Tolerances& tol) {
  const std::size_t count = dense_subset_count(scope);
  if (q.size() != count) throw ValidationError("commonality table has the wrong size");
  std::vector<double> v(q.begin(), q.end());
  superset_mobius(v, scope.config_count());
  FocalMap focal;
  for (std::size_t mask = 1; mask < count; ++mask)
    if (v[mask] != 0.0) focal.emplace(Bitset::from_word(scope.config_count(), mask), v[mask]);
  return MassFunction::from_focal(scope, std::move(focal), false, tol);
}

// ---------------------------------------------------------------- mk-conditional

MkConditionalResult solve_mk_conditional(const MassFunction& m, const Scope& cond_scope, const Tolerances& tol) {
  if (!cond_scope.is_subset_of(m.scope())) throw ScopeError("conditioning scope is not a subscope");
  require_dense(m.scope());

  const MassFunction marginal = marginalize(m, cond_scope);
  const auto q_joint = dense_commonality(m);
  const auto q_ext = dense_commonality(extend(marginal, m.scope()));
  const std::size_t n = m.scope().config_count();
  const std::size_t count = q_joint.size();

  std::string last_failure = "no candidate solution";
  for (const bool zero_as_one : {false, true}) {
    std::vector<double> q(count, 0.0);
    for (std::size_t mask = 1; mask < count; ++mask) {
      if (std::abs(q_ext[mask]) <= tol.drop) {
        if (std::abs(q_joint[mask]) > tol.drop)
          throw NoSolutionError("commonality of the extended marginal vanishes where the joint's does not");
        q[mask] = zero_as_one ? 1.0 : 0.0;
      } else {
        q[mask] = q_joint[mask] / q_ext[mask];
      }
    }
    superset_mobius(q, n);
    double sum = 0.0;
    for (std::size_t mask = 1; mask < count; ++mask) sum += q[mask];
    if (std::abs(sum) <= tol.algebra) {
      last_failure = "quotient masses sum to zero";
      continue;
    }
    FocalMap focal;
    for (std::size_t mask = 1; mask < count; ++mask)
      if (q[mask] != 0.0) focal.emplace(Bitset::from_word(n, mask), q[mask] / sum);
    MassFunction candidate = MassFunction::from_normalized(m.scope(), std::move(focal), tol);
    if (candidate.size() == 0) {
      last_failure = "quotient produced no focal sets";
      continue;
    }
    try {
      const double residual = l1_distance(combine(marginal, candidate, tol), m);
      if (residual <= tol.residual) return {std::move(candidate), residual, zero_as_one};
      last_failure = "recombination residual " + std::to_string(residual) + " exceeds tolerance";
    } catch (const ConflictError&) {
      last_failure = "recombination is totally conflicting";
    }
  }
  throw NoSolutionError("mk-conditional: " + last_failure);
}

MassFunction mk_conditional(const MassFunction& m, const Scope& cond_scope, const Tolerances& tol) {
  return solve_mk_conditional(m, cond_scope, tol).value;
}

// ---------------------------------------------------------------- distances

double l1_distance(const MassFunction& a, const MassFunction& b) {
  require_same_scope(a, b, "l1_distance");
  double s = 0.0;
  auto ia = a.focal().begin();
  auto ib = b.focal().begin();
  while (ia != a.focal().end() || ib != b.focal().end()) {
    if (ib == b.focal().end() || (ia != a.focal().end() && ia->first < ib->first)) {
      s += std::abs(ia->second);
      ++ia;
    } else if (ia == a.focal().end() || ib->first < ia->first) {
      s += std::abs(ib->second);
      ++ib;
    } else {
      s += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return s;
}

bool approx_equal(const MassFunction& a, const MassFunction& b, double eps) { return l1_distance(a, b) <= eps; }

}  // namespace dsbn

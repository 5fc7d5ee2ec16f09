#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dsbn/frames.hpp"

namespace dsbn {

struct Tolerances {
  double algebra = 1e-9;   ///< sums, normalizers, total conflict
  double residual = 1e-6;  ///< mk-conditional recombination and distribution equality
  double drop = 1e-12;     ///< focal entries at or below this magnitude are removed
};

inline constexpr Tolerances kDefaultTolerances{};

/// Largest scope (in configurations) for dense subset-lattice operations.
inline constexpr std::size_t kDenseConfigCap = 16;

enum class MassKind { proper, pseudo };

using FocalMap = std::map<Bitset, double>;

/// Basic (pseudo-)probability assignment over nonempty subsets of a scope.
/// Masses sum to one; proper masses are non-negative.
class MassFunction {
 public:
  MassFunction() = default;

  /// Validating constructor. Throws ValidationError on mass on the empty set,
  /// or when the masses do not sum to one and `auto_normalize` is false.
  static MassFunction from_focal(Scope scope, FocalMap focal, bool auto_normalize = false,
                                 const Tolerances& tol = kDefaultTolerances);
  /// Canonicalizes without checking the sum; the caller guarantees it.
  static MassFunction from_normalized(Scope scope, FocalMap focal, const Tolerances& tol = kDefaultTolerances);
  static MassFunction vacuous(const Scope& scope);

  const Scope& scope() const noexcept { return scope_; }
  MassKind kind() const noexcept { return kind_; }
  bool is_proper() const noexcept { return kind_ == MassKind::proper; }
  const FocalMap& focal() const noexcept { return focal_; }
  std::size_t size() const noexcept { return focal_.size(); }
  bool is_vacuous() const;

  double mass(const Bitset& set) const;
  double mass(const ConfigSet& set) const;
  double total() const;
  ConfigSet set(const Bitset& bits) const { return ConfigSet(scope_, bits); }

  friend bool operator==(const MassFunction& a, const MassFunction& b) {
    return a.scope_ == b.scope_ && a.focal_ == b.focal_;
  }

 private:
  MassFunction(Scope scope, FocalMap focal, MassKind kind)
      : scope_(std::move(scope)), focal_(std::move(focal)), kind_(kind) {}

  Scope scope_;
  FocalMap focal_;
  MassKind kind_ = MassKind::proper;
};

MassFunction make_mass(const Scope& scope, std::span<const std::pair<ConfigSet, double>> entries,
                       bool auto_normalize = false);
MassFunction make_mass(const Scope& scope, std::initializer_list<std::pair<ConfigSet, double>> entries,
                       bool auto_normalize = false);

/// Mass one on `b`. Throws DegenerateEventError for an empty set.
MassFunction simple_support(const ConfigSet& b);

/// Dempster's rule. Operands are extended to the union of their scopes first.
/// Throws ConflictError when the normalizer 1 - K vanishes.
MassFunction combine(const MassFunction& a, const MassFunction& b, const Tolerances& tol = kDefaultTolerances);
MassFunction combine_all(std::span<const MassFunction> parts, const Tolerances& tol = kDefaultTolerances);

/// Conflict mass K of the unnormalized convolution.
double conflict(const MassFunction& a, const MassFunction& b);

MassFunction marginalize(const MassFunction& m, const Scope& target);
MassFunction extend(const MassFunction& m, const Scope& target);

/// Dempster conditioning on `b` (over a subscope of the mass's scope).
/// Throws ImpossibleEventError when Pl(b) = 0.
MassFunction condition(const MassFunction& m, const ConfigSet& b, const Tolerances& tol = kDefaultTolerances);

double belief(const MassFunction& m, const ConfigSet& a);
double plausibility(const MassFunction& m, const ConfigSet& a);
double commonality(const MassFunction& m, const ConfigSet& a);

// Dense subset lattice: subsets of a scope with at most kDenseConfigCap
// configurations are indexed by bitmask (bit i = configuration i).

std::size_t dense_subset_count(const Scope& scope);
std::vector<double> dense_masses(const MassFunction& m);
/// Q(A) for every subset A; entry 0 holds Q(empty) = total mass.
std::vector<double> dense_commonality(const MassFunction& m);
/// m(A) = sum over B containing A of (-1)^|B \ A| Q(B), for nonempty A.
MassFunction mobius_mass_from_commonality(const Scope& scope, std::span<const double> q,
                                          const Tolerances& tol = kDefaultTolerances);

struct MkConditionalResult {
  MassFunction value;
  double residual = 0.0;      ///< L1 gap between marginal (+) value and the joint
  bool zero_cells_as_one = false;  ///< the 0/0 quotient fallback was used
};

/// Pseudo mass R with combine(marginalize(m, cond), R) == m, from the
/// commonality quotient Q_m / Q_ext. Throws NoSolutionError when no verified
/// solution is found; throws CapacityError above the dense cap.
MkConditionalResult solve_mk_conditional(const MassFunction& m, const Scope& cond_scope,
                                         const Tolerances& tol = kDefaultTolerances);
MassFunction mk_conditional(const MassFunction& m, const Scope& cond_scope,
                            const Tolerances& tol = kDefaultTolerances);

double l1_distance(const MassFunction& a, const MassFunction& b);
bool approx_equal(const MassFunction& a, const MassFunction& b, double eps);

}  // namespace dsbn

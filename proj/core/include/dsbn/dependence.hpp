#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsbn/errors.hpp"
#include "dsbn/frames.hpp"
#include "dsbn/mass.hpp"

namespace dsbn {

class Dataset;

/// Supplies marginal mass functions for requested scopes, memoized.
/// Copies share the cache; safe for concurrent read-only use.
class ScoreContext {
 public:
  using Provider = std::function<MassFunction(const Scope&)>;

  ScoreContext(FramePtr frame, Provider provider, std::string description, Tolerances tol = kDefaultTolerances);

  /// Empirical marginals of a dataset.
  static ScoreContext from_dataset(const Dataset& ds, Tolerances tol = kDefaultTolerances);
  /// Exact marginals of a joint mass over the full frame.
  static ScoreContext from_joint(const MassFunction& joint, Tolerances tol = kDefaultTolerances);

  const FramePtr& frame() const noexcept { return frame_; }
  std::size_t variable_count() const noexcept { return frame_->size(); }
  const std::string& description() const noexcept { return description_; }
  const Tolerances& tolerances() const noexcept { return tol_; }

  const MassFunction& marginal(const Scope& scope) const;
  const MassFunction& marginal(std::vector<std::size_t> vars) const;

 private:
  struct Cache;

  FramePtr frame_;
  Provider provider_;
  std::string description_;
  Tolerances tol_;
  std::shared_ptr<Cache> cache_;
};

/// Raised by g_score when the reference p is categorical (f(p;p) = 0).
class DegenerateReferenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// sum over focal A of p of p(A) ln x(A); -infinity if some x(A) <= 0.
double f_score(const MassFunction& x, const MassFunction& p);
/// f(x;p) / f(p;p).
double g_score(const MassFunction& x, const MassFunction& p);
/// exp(1 - g(x;p)) in [0, 1]; for a categorical p, 1 iff f(x;p) = 0.
double a_score(const MassFunction& x, const MassFunction& p, const Tolerances& tol = kDefaultTolerances);

/// Pairwise joint of x1, x2 rebuilt through background x3:
/// (m[x1,x3 | x3] (+) m[x2,x3 | x3] (+) m[x3]) marginalized to {x1, x2}.
MassFunction ternary_joint(const ScoreContext& ctx, std::size_t x1, std::size_t x2, std::size_t x3);

struct BackgroundTerm {
  std::size_t background = 0;
  std::optional<double> a;  ///< empty when the ternary joint could not be built
  std::string failure;
};

struct Dep0Detail {
  double value = 0.0;
  double product_a = 0.0;
  std::vector<BackgroundTerm> backgrounds;
  std::vector<std::string> warnings;
};

/// DEP0 dependence of a pair: 1 minus the best a-score among the independent
/// product and every single-background ternary joint. Symmetric.
double dep0(const ScoreContext& ctx, std::size_t x1, std::size_t x2);
Dep0Detail dep0_detail(const ScoreContext& ctx, std::size_t x1, std::size_t x2);

/// (1 - a(ternary via x3)) - (1 - a(product)). Positive suggests x1 -> x3 <- x2.
double criterion(const ScoreContext& ctx, std::size_t x1, std::size_t x2, std::size_t x3);

}  // namespace dsbn

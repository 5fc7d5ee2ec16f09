#include "dsbn/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "dsbn/errors.hpp"
#include "dsbn/population.hpp"

namespace dsbn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_same_scope(const MassFunction& x, const MassFunction& p) {
  if (!(x.scope() == p.scope())) throw ScopeError("score operands have different scopes");
}

void require_distinct(std::size_t a, std::size_t b, std::size_t n) {
  if (a == b) throw ValidationError("score variables must be distinct");
  if (a >= n || b >= n) throw DomainError("score variable index out of range");
}

bool is_categorical(const MassFunction& p) { return p.size() == 1; }

MassFunction product_approximation(const ScoreContext& ctx, std::size_t x1, std::size_t x2) {
  return combine(ctx.marginal({x1}), ctx.marginal({x2}), ctx.tolerances());
}

}  // namespace

// ---------------------------------------------------------------- ScoreContext

struct ScoreContext::Cache {
  std::mutex mutex;
  std::map<std::vector<std::size_t>, std::unique_ptr<MassFunction>> entries;
};

ScoreContext::ScoreContext(FramePtr frame, Provider provider, std::string description, Tolerances tol)
    : frame_(std::move(frame)),
      provider_(std::move(provider)),
      description_(std::move(description)),
      tol_(tol),
      cache_(std::make_shared<Cache>()) {
  if (!frame_) throw ValidationError("score context without frame");
}

ScoreContext ScoreContext::from_dataset(const Dataset& ds, Tolerances tol) {
  if (ds.empty()) throw ValidationError("score context over an empty dataset");
  auto shared = std::make_shared<const Dataset>(ds);
  return ScoreContext(
      ds.frame(), [shared](const Scope& s) { return empirical_mass(*shared, s); },
      "empirical (" + std::to_string(ds.size()) + " records)", tol);
}

ScoreContext ScoreContext::from_joint(const MassFunction& joint, Tolerances tol) {
  const Scope full = joint.scope().frame()->full_scope();
  if (!(joint.scope() == full)) throw ScopeError("exact context needs a joint over the full frame");
  auto shared = std::make_shared<const MassFunction>(joint);
  return ScoreContext(
      joint.scope().frame(), [shared](const Scope& s) { return marginalize(*shared, s); }, "exact", tol);
}

const MassFunction& ScoreContext::marginal(const Scope& scope) const {
  if (!scope.same_frame(frame_->full_scope())) throw ScopeError("marginal requested for a foreign scope");
  std::lock_guard lock(cache_->mutex);
  auto& slot = cache_->entries[scope.vars()];
  if (!slot) slot = std::make_unique<MassFunction>(provider_(frame_->scope(scope.vars())));
  return *slot;
}

const MassFunction& ScoreContext::marginal(std::vector<std::size_t> vars) const {
  return marginal(frame_->scope(std::move(vars)));
}

// ---------------------------------------------------------------- scores

double f_score(const MassFunction& x, const MassFunction& p) {
  require_same_scope(x, p);
  if (!p.is_proper()) throw ValidationError("reference mass of f(x;p) must be proper");
  double s = 0.0;
  for (const auto& [set, pm] : p.focal()) {
    if (pm <= 0.0) continue;
    const double xm = x.mass(set);
    if (xm <= 0.0) return kNegInf;
    s += pm * std::log(xm);
  }
  return s;
}

double g_score(const MassFunction& x, const MassFunction& p) {
  const double fpp = f_score(p, p);
  if (fpp == 0.0) throw DegenerateReferenceError("g(x;p) undefined for a categorical reference p");
  const double fx = f_score(x, p);
  if (fx == kNegInf) return std::numeric_limits<double>::infinity();
  return fx / fpp;
}

double a_score(const MassFunction& x, const MassFunction& p, const Tolerances& tol) {
  const double fx = f_score(x, p);
  if (is_categorical(p)) return std::abs(fx) <= tol.algebra ? 1.0 : 0.0;
  if (fx == kNegInf) return 0.0;
  const double fpp = f_score(p, p);
  // A pseudo x can put more than p's mass on p's focal sets, giving g < 1.
  return std::min(1.0, std::exp(1.0 - fx / fpp));
}

MassFunction ternary_joint(const ScoreContext& ctx, std::size_t x1, std::size_t x2, std::size_t x3) {
  const auto n = ctx.variable_count();
  require_distinct(x1, x2, n);
  require_distinct(x1, x3, n);
  require_distinct(x2, x3, n);
  const auto& tol = ctx.tolerances();
  const Scope background = ctx.frame()->scope({x3});
  const MassFunction r1 = mk_conditional(ctx.marginal({x1, x3}), background, tol);
  const MassFunction r2 = mk_conditional(ctx.marginal({x2, x3}), background, tol);
  // m[x3] (+) r1 reproduces m[x1,x3]; combining with r2 last keeps the
  // intermediate result proper.
  const MassFunction joint = combine(combine(ctx.marginal({x3}), r1, tol), r2, tol);
  return marginalize(joint, ctx.frame()->scope({x1, x2}));
}

Dep0Detail dep0_detail(const ScoreContext& ctx, std::size_t x1, std::size_t x2) {
  require_distinct(x1, x2, ctx.variable_count());
  if (x2 < x1) std::swap(x1, x2);
  const auto& tol = ctx.tolerances();
  const MassFunction& pair = ctx.marginal({x1, x2});

  Dep0Detail out;
  out.product_a = a_score(product_approximation(ctx, x1, x2), pair, tol);
  double best = out.product_a;
  for (std::size_t x3 = 0; x3 < ctx.variable_count(); ++x3) {
    if (x3 == x1 || x3 == x2) continue;
    BackgroundTerm term{x3, std::nullopt, {}};
    try {
      term.a = a_score(ternary_joint(ctx, x1, x2, x3), pair, tol);
      best = std::max(best, *term.a);
    } catch (const NumericalError& e) {
      term.failure = e.what();
      const auto& f = *ctx.frame();
      out.warnings.push_back("dep0(" + f.variable(x1).name + "," + f.variable(x2).name + "): background " +
                             f.variable(x3).name + " skipped: " + e.what());
    }
    out.backgrounds.push_back(std::move(term));
  }
  out.value = 1.0 - best;
  return out;
}

double dep0(const ScoreContext& ctx, std::size_t x1, std::size_t x2) { return dep0_detail(ctx, x1, x2).value; }

double criterion(const ScoreContext& ctx, std::size_t x1, std::size_t x2, std::size_t x3) {
  const auto n = ctx.variable_count();
  require_distinct(x1, x2, n);
  require_distinct(x1, x3, n);
  require_distinct(x2, x3, n);
  if (x2 < x1) std::swap(x1, x2);
  const auto& tol = ctx.tolerances();
  const MassFunction& pair = ctx.marginal({x1, x2});
  const double a_background = a_score(ternary_joint(ctx, x1, x2, x3), pair, tol);
  const double a_product = a_score(product_approximation(ctx, x1, x2), pair, tol);
  return (1.0 - a_background) - (1.0 - a_product);
}

}  // namespace dsbn

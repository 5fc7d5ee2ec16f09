#include "dsbn/frames.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dsbn/errors.hpp"

namespace dsbn {

// ---------------------------------------------------------------- Frame

Frame::Frame(std::vector<Variable> variables) : variables_(std::move(variables)) {}

std::shared_ptr<const Frame> Frame::make(std::vector<Variable> variables) {
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (v.name.empty()) throw DomainError("variable with empty name");
    if (!names.insert(v.name).second) throw DomainError("duplicate variable name '" + v.name + "'");
    if (v.labels.size() < 2)
      throw DomainError("variable '" + v.name + "' needs at least two values");
    std::set<std::string> labels;
    for (const auto& l : v.labels) {
      if (l.empty()) throw DomainError("empty value label in variable '" + v.name + "'");
      if (!labels.insert(l).second)
        throw DomainError("duplicate label '" + l + "' in variable '" + v.name + "'");
    }
  }
  return std::shared_ptr<const Frame>(new Frame(std::move(variables)));
}

std::optional<std::size_t> Frame::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Frame::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw DomainError("unknown variable '" + std::string(name) + "'");
}

std::size_t Frame::label_index(std::size_t var, std::string_view label) const {
  const auto& labels = variable(var).labels;
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end())
    throw DomainError("unknown value '" + std::string(label) + "' for variable '" +
                      variable(var).name + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

Scope Frame::full_scope() const {
  std::vector<std::size_t> vars(size());
  std::iota(vars.begin(), vars.end(), std::size_t{0});
  return Scope(shared_from_this(), std::move(vars));
}

Scope Frame::scope(std::vector<std::size_t> vars) const { return Scope(shared_from_this(), std::move(vars)); }

Scope Frame::scope_of(const std::vector<std::string>& names) const {
  std::vector<std::size_t> vars;
  vars.reserve(names.size());
  for (const auto& n : names) vars.push_back(index_of(n));
  return scope(std::move(vars));
}

// ---------------------------------------------------------------- Scope

Scope::Scope(FramePtr frame, std::vector<std::size_t> vars) : frame_(std::move(frame)), vars_(std::move(vars)) {
  if (!frame_) throw ScopeError("scope without frame");
  std::sort(vars_.begin(), vars_.end());
  if (std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end())
    throw ScopeError("duplicate variable in scope");
  for (auto v : vars_)
    if (v >= frame_->size()) throw ScopeError("variable index out of range");
  radices_.resize(vars_.size());
  strides_.resize(vars_.size());
  config_count_ = 1;
  for (std::size_t p = vars_.size(); p-- > 0;) {
    radices_[p] = frame_->variable(vars_[p]).domain_size();
    strides_[p] = config_count_;
    config_count_ *= radices_[p];
  }
}

bool Scope::contains(std::size_t var) const noexcept { return std::binary_search(vars_.begin(), vars_.end(), var); }

std::optional<std::size_t> Scope::position(std::size_t var) const noexcept {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
  if (it == vars_.end() || *it != var) return std::nullopt;
  return static_cast<std::size_t>(it - vars_.begin());
}

bool Scope::same_frame(const Scope& other) const noexcept {
  return frame_ && other.frame_ && (frame_ == other.frame_ || *frame_ == *other.frame_);
}

bool Scope::is_subset_of(const Scope& other) const noexcept {
  return same_frame(other) && std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
}

bool Scope::is_disjoint(const Scope& other) const noexcept {
  for (auto v : vars_)
    if (other.contains(v)) return false;
  return true;
}

namespace {
void require_same_frame(const Scope& a, const Scope& b) {
  if (!a.same_frame(b)) throw ScopeError("scopes belong to different frames");
}
}  // namespace

Scope Scope::union_with(const Scope& other) const {
  require_same_frame(*this, other);
  std::vector<std::size_t> out;
  std::set_union(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(), std::back_inserter(out));
  return Scope(frame_, std::move(out));
}

Scope Scope::intersect(const Scope& other) const {
  require_same_frame(*this, other);
  std::vector<std::size_t> out;
  std::set_intersection(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                        std::back_inserter(out));
  return Scope(frame_, std::move(out));
}

Scope Scope::minus(const Scope& other) const {
  require_same_frame(*this, other);
  std::vector<std::size_t> out;
  std::set_difference(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                      std::back_inserter(out));
  return Scope(frame_, std::move(out));
}

std::size_t Scope::config_index(const std::map<std::string, std::string>& assignment) const {
  if (assignment.size() != vars_.size())
    throw DomainError("assignment must cover exactly the scope variables");
  std::vector<std::size_t> values(vars_.size());
  for (const auto& [name, label] : assignment) {
    const auto var = frame_->index_of(name);
    const auto pos = position(var);
    if (!pos) throw DomainError("variable '" + name + "' is not in the scope");
    values[*pos] = frame_->label_index(var, label);
  }
  return config_index(values);
}

std::size_t Scope::config_index(std::span<const std::size_t> values) const {
  if (values.size() != vars_.size()) throw DomainError("assignment arity does not match scope");
  std::size_t idx = 0;
  for (std::size_t p = 0; p < vars_.size(); ++p) {
    if (values[p] >= radices_[p]) throw DomainError("value index out of domain");
    idx += values[p] * strides_[p];
  }
  return idx;
}

std::vector<std::size_t> Scope::decode(std::size_t index) const {
  std::vector<std::size_t> out(vars_.size());
  for (std::size_t p = 0; p < vars_.size(); ++p) out[p] = (index / strides_[p]) % radices_[p];
  return out;
}

std::vector<std::string> Scope::labels_of(std::size_t index) const {
  std::vector<std::string> out;
  out.reserve(vars_.size());
  const auto values = decode(index);
  for (std::size_t p = 0; p < vars_.size(); ++p) out.push_back(frame_->variable(vars_[p]).labels[values[p]]);
  return out;
}

std::vector<std::string> Scope::names() const {
  std::vector<std::string> out;
  for (auto v : vars_) out.push_back(frame_->variable(v).name);
  return out;
}

bool operator==(const Scope& a, const Scope& b) noexcept {
  if (a.vars_ != b.vars_) return false;
  if (!a.frame_ || !b.frame_) return a.frame_ == b.frame_;
  return a.same_frame(b);
}

// ---------------------------------------------------------------- Projector

Projector::Projector(const Scope& source, const Scope& target) {
  if (!target.is_subset_of(source)) throw ScopeError("target scope is not a subset of the source scope");
  for (std::size_t tp = 0; tp < target.arity(); ++tp) {
    const auto sp = *source.position(target.vars()[tp]);
    digits_.push_back({source.stride(sp), source.radix(sp), target.stride(tp)});
  }
}

// ---------------------------------------------------------------- ConfigSet

ConfigSet::ConfigSet(Scope scope, Bitset bits) : scope_(std::move(scope)), bits_(std::move(bits)) {
  if (bits_.size() != scope_.config_count()) throw ScopeError("bit layout does not match scope size");
}

ConfigSet ConfigSet::empty_set(const Scope& scope) { return ConfigSet(scope, Bitset(scope.config_count())); }

ConfigSet ConfigSet::full_set(const Scope& scope) { return ConfigSet(scope, Bitset::full(scope.config_count())); }

ConfigSet ConfigSet::of_indices(const Scope& scope, std::span<const std::size_t> indices) {
  Bitset bits(scope.config_count());
  for (auto i : indices) {
    if (i >= scope.config_count()) throw DomainError("configuration index out of range");
    bits.set(i);
  }
  return ConfigSet(scope, std::move(bits));
}

ConfigSet ConfigSet::of_tuples(const Scope& scope, const std::vector<std::vector<std::string>>& tuples) {
  Bitset bits(scope.config_count());
  std::vector<std::size_t> values(scope.arity());
  for (const auto& t : tuples) {
    if (t.size() != scope.arity()) throw DomainError("tuple arity does not match scope");
    for (std::size_t p = 0; p < t.size(); ++p) values[p] = scope.frame()->label_index(scope.vars()[p], t[p]);
    bits.set(scope.config_index(values));
  }
  return ConfigSet(scope, std::move(bits));
}

std::vector<std::size_t> ConfigSet::indices() const {
  std::vector<std::size_t> out;
  bits_.for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

bool ConfigSet::is_subset_of(const ConfigSet& other) const {
  if (!(scope_ == other.scope_)) throw ScopeError("set comparison across scopes");
  return bits_.is_subset_of(other.bits_);
}

ConfigSet ConfigSet::intersect(const ConfigSet& other) const {
  if (!(scope_ == other.scope_)) throw ScopeError("set intersection across scopes");
  return ConfigSet(scope_, bits_ & other.bits_);
}

ConfigSet ConfigSet::unite(const ConfigSet& other) const {
  if (!(scope_ == other.scope_)) throw ScopeError("set union across scopes");
  return ConfigSet(scope_, bits_ | other.bits_);
}

// ---------------------------------------------------------------- set algebra

Bitset project_bits(const Bitset& bits, const Scope& source, const Scope& target) {
  const Projector proj(source, target);
  Bitset out(target.config_count());
  bits.for_each([&](std::size_t i) { out.set(proj(i)); });
  return out;
}

Bitset cylinder_bits(const Bitset& bits, const Scope& source, const Scope& target) {
  const Projector proj(target, source);
  Bitset out(target.config_count());
  for (std::size_t i = 0; i < target.config_count(); ++i)
    if (bits.test(proj(i))) out.set(i);
  return out;
}

ConfigSet project_set(const ConfigSet& a, const Scope& target) {
  if (!target.is_subset_of(a.scope())) throw ScopeError("projection target is not a subscope");
  return ConfigSet(target, project_bits(a.bits(), a.scope(), target));
}

ConfigSet cylinder_set(const ConfigSet& a, const Scope& target) {
  if (!a.scope().is_subset_of(target)) throw ScopeError("extension target does not contain the set's scope");
  return ConfigSet(target, cylinder_bits(a.bits(), a.scope(), target));
}

ConfigSet product_set(std::span<const ConfigSet> parts) {
  if (parts.empty()) throw ScopeError("product of no parts");
  Scope joint = parts.front().scope();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!joint.is_disjoint(parts[i].scope())) throw ScopeError("product parts have overlapping scopes");
    joint = joint.union_with(parts[i].scope());
  }
  Bitset bits = Bitset::full(joint.config_count());
  for (const auto& p : parts) bits &= cylinder_bits(p.bits(), p.scope(), joint);
  return ConfigSet(joint, std::move(bits));
}

std::optional<std::vector<ConfigSet>> decompose_product(const ConfigSet& a) {
  const auto& scope = a.scope();
  std::vector<ConfigSet> parts;
  parts.reserve(scope.arity());
  for (auto v : scope.vars()) parts.push_back(project_set(a, scope.frame()->scope({v})));
  if (parts.empty()) return parts;
  if (product_set(parts).bits() != a.bits()) return std::nullopt;
  return parts;
}

bool is_product(const ConfigSet& a) { return decompose_product(a).has_value(); }

}  // namespace dsbn

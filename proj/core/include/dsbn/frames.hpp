#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsbn/bitset.hpp"

namespace dsbn {

struct Variable {
  std::string name;
  std::vector<std::string> labels;

  std::size_t domain_size() const noexcept { return labels.size(); }

  friend bool operator==(const Variable&, const Variable&) = default;
};

class Scope;

/// Ordered variables with finite ordered domains. Immutable; shared through
/// FramePtr so that scopes and sets can refer to it cheaply.
class Frame : public std::enable_shared_from_this<Frame> {
 public:
  /// Validates names and labels; every domain needs at least two values.
  static std::shared_ptr<const Frame> make(std::vector<Variable> variables);

  std::size_t size() const noexcept { return variables_.size(); }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws DomainError for unknown names.
  std::size_t index_of(std::string_view name) const;
  std::size_t label_index(std::size_t var, std::string_view label) const;

  Scope full_scope() const;
  Scope scope(std::vector<std::size_t> vars) const;
  Scope scope_of(const std::vector<std::string>& names) const;

  friend bool operator==(const Frame& a, const Frame& b) { return a.variables_ == b.variables_; }

 private:
  explicit Frame(std::vector<Variable> variables);

  std::vector<Variable> variables_;
};

using FramePtr = std::shared_ptr<const Frame>;

/// Subset of a frame's variables in declaration order. Configurations are
/// indexed mixed-radix with the last-listed variable varying fastest.
class Scope {
 public:
  Scope() = default;
  Scope(FramePtr frame, std::vector<std::size_t> vars);

  const FramePtr& frame() const noexcept { return frame_; }
  const std::vector<std::size_t>& vars() const noexcept { return vars_; }
  std::size_t arity() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }
  std::size_t config_count() const noexcept { return config_count_; }
  bool contains(std::size_t var) const noexcept;
  /// Position of `var` within this scope, if present.
  std::optional<std::size_t> position(std::size_t var) const noexcept;
  std::size_t radix(std::size_t pos) const noexcept { return radices_[pos]; }
  std::size_t stride(std::size_t pos) const noexcept { return strides_[pos]; }

  bool same_frame(const Scope& other) const noexcept;
  bool is_subset_of(const Scope& other) const noexcept;
  bool is_disjoint(const Scope& other) const noexcept;
  Scope union_with(const Scope& other) const;
  Scope intersect(const Scope& other) const;
  Scope minus(const Scope& other) const;

  /// Mixed-radix index of a configuration given one label per scope variable.
  std::size_t config_index(const std::map<std::string, std::string>& assignment) const;
  std::size_t config_index(std::span<const std::size_t> values) const;
  /// Per-variable value indices of configuration `index`.
  std::vector<std::size_t> decode(std::size_t index) const;
  std::vector<std::string> labels_of(std::size_t index) const;
  std::vector<std::string> names() const;

  friend bool operator==(const Scope& a, const Scope& b) noexcept;

 private:
  FramePtr frame_;
  std::vector<std::size_t> vars_;
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t config_count_ = 1;
};

/// Maps configuration indices of a source scope to those of a subscope.
class Projector {
 public:
  Projector(const Scope& source, const Scope& target);

  std::size_t operator()(std::size_t source_index) const noexcept {
    std::size_t out = 0;
    for (const auto& d : digits_) out += ((source_index / d.source_stride) % d.radix) * d.target_stride;
    return out;
  }

 private:
  struct Digit {
    std::size_t source_stride;
    std::size_t radix;
    std::size_t target_stride;
  };
  std::vector<Digit> digits_;
};

/// A subset of a scope's configuration space.
class ConfigSet {
 public:
  ConfigSet() = default;
  ConfigSet(Scope scope, Bitset bits);

  static ConfigSet empty_set(const Scope& scope);
  static ConfigSet full_set(const Scope& scope);
  static ConfigSet of_indices(const Scope& scope, std::span<const std::size_t> indices);
  /// Convenience: configurations given as label tuples in scope order.
  static ConfigSet of_tuples(const Scope& scope, const std::vector<std::vector<std::string>>& tuples);

  const Scope& scope() const noexcept { return scope_; }
  const Bitset& bits() const noexcept { return bits_; }
  std::size_t cardinality() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  bool is_full() const noexcept { return bits_.all(); }
  bool contains(std::size_t index) const noexcept { return bits_.test(index); }
  std::vector<std::size_t> indices() const;

  bool is_subset_of(const ConfigSet& other) const;
  ConfigSet intersect(const ConfigSet& other) const;
  ConfigSet unite(const ConfigSet& other) const;

  friend bool operator==(const ConfigSet& a, const ConfigSet& b) noexcept {
    return a.scope_ == b.scope_ && a.bits_ == b.bits_;
  }

 private:
  Scope scope_;
  Bitset bits_;
};

Bitset project_bits(const Bitset& bits, const Scope& source, const Scope& target);
Bitset cylinder_bits(const Bitset& bits, const Scope& source, const Scope& target);

/// Restriction of every member of `a` to `target` (must be a subscope).
ConfigSet project_set(const ConfigSet& a, const Scope& target);
/// Every configuration of `target` whose restriction lies in `a`.
ConfigSet cylinder_set(const ConfigSet& a, const Scope& target);
/// Cartesian product of sets over pairwise disjoint scopes.
ConfigSet product_set(std::span<const ConfigSet> parts);

bool is_product(const ConfigSet& a);
/// Per-variable factors of `a` when it is a product set.
std::optional<std::vector<ConfigSet>> decompose_product(const ConfigSet& a);

}  // namespace dsbn

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsbn/frames.hpp"
#include "dsbn/mass.hpp"

namespace dsbn {

/// A multiset of set-valued records over a frame's full scope. Each record is
/// the narrowest value set known for one object of the population.
class Dataset {
 public:
  Dataset(FramePtr frame, std::vector<Bitset> records, std::string provenance = {});

  const FramePtr& frame() const noexcept { return frame_; }
  Scope scope() const { return frame_->full_scope(); }
  const std::vector<Bitset>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  ConfigSet record(std::size_t i) const { return ConfigSet(scope(), records_.at(i)); }
  const std::string& provenance() const noexcept { return provenance_; }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return *a.frame_ == *b.frame_ && a.records_ == b.records_;
  }

 private:
  FramePtr frame_;
  std::vector<Bitset> records_;
  std::string provenance_;
};

/// Relative frequencies of the records projected onto `scope`.
MassFunction empirical_mass(const Dataset& ds, const Scope& scope);

/// `n` i.i.d. focal-set draws from a proper mass over the full scope.
Dataset sample_population(const MassFunction& m, std::size_t n, std::uint64_t seed);

/// Rejects records disjoint from `b` and narrows the rest to their
/// intersection with `b`. Throws EmptyPopulationError if nothing survives.
Dataset condition_population(const Dataset& ds, const ConfigSet& b);

// Line-oriented text format:
//   #vars X=a|b,Y=c|d
//   a|b,c          product record, one set per variable
//   J:a.c;b.d      general record, explicit configurations
Dataset read_dataset(std::istream& in, const std::string& origin = {});
Dataset read_dataset_file(const std::string& path);
void write_dataset(std::ostream& out, const Dataset& ds);

/// `#vars` header line for a frame (without newline).
std::string frame_header(const Frame& frame);
FramePtr parse_frame_header(const std::string& line, std::size_t line_no);

/// Explicit configuration list `a.c;b.d` over `scope`.
std::string format_config_list(const ConfigSet& set);
ConfigSet parse_config_list(const Scope& scope, const std::string& text);

}  // namespace dsbn

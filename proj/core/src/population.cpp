#include "dsbn/population.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dsbn/errors.hpp"
#include "dsbn/rng.hpp"

namespace dsbn {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

constexpr std::string_view kReserved = "=|,.;:# \t";

void check_token(const std::string& token, const char* what) {
  if (token.empty()) throw ValidationError(std::string("empty ") + what);
  if (token.find_first_of(kReserved) != std::string::npos)
    throw ValidationError(std::string(what) + " '" + token + "' contains a reserved character");
}

}  // namespace

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(FramePtr frame, std::vector<Bitset> records, std::string provenance)
    : frame_(std::move(frame)), records_(std::move(records)), provenance_(std::move(provenance)) {
  if (!frame_) throw ValidationError("dataset without frame");
  const auto configs = frame_->full_scope().config_count();
  for (const auto& r : records_) {
    if (r.size() != configs) throw ScopeError("record layout does not match the frame");
    if (r.none()) throw ValidationError("empty record");
  }
}

MassFunction empirical_mass(const Dataset& ds, const Scope& scope) {
  if (ds.empty()) throw ValidationError("empirical mass of an empty dataset");
  const Scope full = ds.scope();
  if (!scope.is_subset_of(full)) throw ScopeError("estimation scope is not part of the dataset frame");
  std::map<Bitset, std::size_t> counts;
  if (scope == full) {
    for (const auto& r : ds.records()) ++counts[r];
  } else {
    const Projector proj(full, scope);
    for (const auto& r : ds.records()) {
      Bitset out(scope.config_count());
      r.for_each([&](std::size_t i) { out.set(proj(i)); });
      ++counts[std::move(out)];
    }
  }
  const double n = static_cast<double>(ds.size());
  FocalMap focal;
  for (auto& [set, c] : counts) focal.emplace(set, static_cast<double>(c) / n);
  return MassFunction::from_normalized(scope, std::move(focal));
}

Dataset sample_population(const MassFunction& m, std::size_t n, std::uint64_t seed) {
  if (!m.is_proper()) throw SamplingError("cannot sample from a pseudo mass function");
  if (n == 0) throw ValidationError("sample size must be positive");
  const Scope full = m.scope().frame()->full_scope();
  if (!(m.scope() == full)) throw ScopeError("sampling requires a mass over the full frame");

  std::vector<const Bitset*> sets;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& [set, mass] : m.focal()) {
    acc += mass;
    sets.push_back(&set);
    cumulative.push_back(acc);
  }
  Rng rng(seed);
  std::vector<Bitset> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) records.push_back(*sets[sample_index(rng, cumulative)]);
  return Dataset(m.scope().frame(), std::move(records),
                 "sampled n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " rng=" + Rng::kName);
}

Dataset condition_population(const Dataset& ds, const ConfigSet& b) {
  const Scope full = ds.scope();
  if (!b.scope().is_subset_of(full)) throw ScopeError("conditioning event outside the dataset frame");
  if (b.empty()) throw DegenerateEventError("conditioning on the empty set");
  const Bitset event = cylinder_bits(b.bits(), b.scope(), full);
  std::vector<Bitset> kept;
  kept.reserve(ds.size());
  for (const auto& r : ds.records()) {
    Bitset narrowed = r & event;
    if (narrowed.any()) kept.push_back(std::move(narrowed));
  }
  if (kept.empty()) throw EmptyPopulationError("every record contradicts the conditioning event");
  return Dataset(ds.frame(), std::move(kept), ds.provenance().empty() ? "conditioned" : ds.provenance() + " | conditioned");
}

// ---------------------------------------------------------------- text format

std::string frame_header(const Frame& frame) {
  std::string out = "#vars ";
  for (std::size_t v = 0; v < frame.size(); ++v) {
    const auto& var = frame.variable(v);
    check_token(var.name, "variable name");
    if (v) out += ',';
    out += var.name + '=';
    for (std::size_t l = 0; l < var.labels.size(); ++l) {
      check_token(var.labels[l], "value label");
      if (l) out += '|';
      out += var.labels[l];
    }
  }
  return out;
}

FramePtr parse_frame_header(const std::string& line, std::size_t line_no) {
  const std::string body = trim(line.substr(5));
  if (body.empty()) throw ParseError(line_no, "empty #vars header");
  std::vector<Variable> vars;
  for (const auto& decl : split(body, ',')) {
    const auto eq = decl.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "variable declaration without '=': " + decl);
    Variable v{trim(decl.substr(0, eq)), split(trim(decl.substr(eq + 1)), '|')};
    for (auto& l : v.labels) l = trim(l);
    vars.push_back(std::move(v));
  }
  try {
    return Frame::make(std::move(vars));
  } catch (const ValidationError& e) {
    throw ParseError(line_no, e.what());
  }
}

std::string format_config_list(const ConfigSet& set) {
  std::string out;
  bool first = true;
  set.bits().for_each([&](std::size_t i) {
    if (!first) out += ';';
    first = false;
    const auto labels = set.scope().labels_of(i);
    for (std::size_t p = 0; p < labels.size(); ++p) {
      if (p) out += '.';
      out += labels[p];
    }
  });
  return out;
}

ConfigSet parse_config_list(const Scope& scope, const std::string& text) {
  Bitset bits(scope.config_count());
  std::vector<std::size_t> values(scope.arity());
  for (const auto& cfg : split(text, ';')) {
    const auto labels = split(trim(cfg), '.');
    if (scope.arity() == 0) {
      if (!trim(cfg).empty()) throw DomainError("non-empty configuration for an empty scope");
      bits.set(0);
      continue;
    }
    if (labels.size() != scope.arity())
      throw DomainError("configuration '" + cfg + "' has " + std::to_string(labels.size()) + " labels, expected " +
                        std::to_string(scope.arity()));
    for (std::size_t p = 0; p < labels.size(); ++p)
      values[p] = scope.frame()->label_index(scope.vars()[p], trim(labels[p]));
    bits.set(scope.config_index(values));
  }
  return ConfigSet(scope, std::move(bits));
}

namespace {

Bitset parse_product_row(const Frame& frame, const Scope& full, const std::string& row, std::size_t line_no) {
  const auto cells = split(row, ',');
  if (cells.size() != frame.size())
    throw ParseError(line_no, "expected " + std::to_string(frame.size()) + " comma-separated sets, got " +
                                  std::to_string(cells.size()));
  std::vector<ConfigSet> parts;
  parts.reserve(cells.size());
  for (std::size_t v = 0; v < cells.size(); ++v) {
    const Scope single = frame.scope({v});
    Bitset bits(single.config_count());
    for (const auto& label : split(cells[v], '|')) {
      const auto l = trim(label);
      if (l.empty()) throw ParseError(line_no, "empty value in set for '" + frame.variable(v).name + "'");
      try {
        bits.set(frame.label_index(v, l));
      } catch (const DomainError& e) {
        throw ParseError(line_no, e.what());
      }
    }
    parts.emplace_back(single, std::move(bits));
  }
  ConfigSet prod = product_set(parts);
  return cylinder_bits(prod.bits(), prod.scope(), full);
}

}  // namespace

Dataset read_dataset(std::istream& in, const std::string& origin) {
  FramePtr frame;
  Scope full;
  std::vector<Bitset> records;
  std::string provenance = origin;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("#vars", 0) == 0) {
      if (frame) throw ParseError(line_no, "duplicate #vars header");
      frame = parse_frame_header(t, line_no);
      full = frame->full_scope();
      continue;
    }
    if (t.front() == '#') {
      if (t.rfind("# provenance:", 0) == 0 && origin.empty()) provenance = trim(t.substr(13));
      continue;
    }
    if (!frame) throw ParseError(line_no, "record before the #vars header");
    Bitset rec;
    if (t.rfind("J:", 0) == 0) {
      try {
        rec = parse_config_list(full, t.substr(2)).bits();
      } catch (const DomainError& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      rec = parse_product_row(*frame, full, t, line_no);
    }
    if (rec.none()) throw ParseError(line_no, "empty record");
    records.push_back(std::move(rec));
  }
  if (!frame) throw ParseError(line_no, "missing #vars header");
  return Dataset(frame, std::move(records), provenance);
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file '" + path + "'");
  return read_dataset(in, path);
}

void write_dataset(std::ostream& out, const Dataset& ds) {
  const Frame& frame = *ds.frame();
  out << frame_header(frame) << '\n';
  if (!ds.provenance().empty()) out << "# provenance: " << ds.provenance() << '\n';
  const Scope full = ds.scope();
  for (const auto& r : ds.records()) {
    const ConfigSet set(full, r);
    if (auto parts = decompose_product(set)) {
      for (std::size_t v = 0; v < parts->size(); ++v) {
        if (v) out << ',';
        bool first = true;
        (*parts)[v].bits().for_each([&](std::size_t i) {
          if (!first) out << '|';
          first = false;
          out << frame.variable(v).labels[i];
        });
      }
      out << '\n';
    } else {
      out << "J:" << format_config_list(set) << '\n';
    }
  }
}

}  // namespace dsbn

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dsbn/dsbn.hpp"
#include "report.hpp"

namespace dsbn::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_atomically(path, content);
}

NodeSet parse_vars(const Frame& frame, const std::string& list) {
  NodeSet out;
  for (const auto& name : split(list, ','))
    if (!name.empty()) out.push_back(frame.index_of(name));
  return out;
}

std::string names_of(const Frame& frame, const NodeSet& vars) {
  std::vector<std::string> names;
  for (auto v : vars) names.push_back(frame.variable(v).name);
  return names.empty() ? "-" : join(names, ",");
}

std::string orientation_symbol(EdgeOrientation o) {
  switch (o) {
    case EdgeOrientation::forward: return "->";
    case EdgeOrientation::backward: return "<-";
    case EdgeOrientation::undirected: break;
  }
  return "--";
}

/// Event over the full scope: `J:a.c;b.d`, `*`, or per-variable constraints `X=a|b,Y=c`.
ConfigSet parse_event(const Frame& frame, const std::string& text) {
  const Scope full = frame.full_scope();
  if (text.rfind("J:", 0) == 0) return parse_config_list(full, text.substr(2));
  if (text == "*") return ConfigSet::full_set(full);
  std::vector<ConfigSet> parts;
  std::vector<bool> constrained(frame.size(), false);
  for (const auto& clause : split(text, ',')) {
    const auto eq = clause.find('=');
    if (eq == std::string::npos) throw ValidationError("event clause '" + clause + "' is not VAR=values");
    const auto var = frame.index_of(clause.substr(0, eq));
    if (constrained[var]) throw ValidationError("variable constrained twice in event");
    constrained[var] = true;
    const Scope single = frame.scope({var});
    Bitset bits(single.config_count());
    for (const auto& label : split(clause.substr(eq + 1), '|')) bits.set(frame.label_index(var, label));
    parts.emplace_back(single, std::move(bits));
  }
  if (parts.empty()) throw ValidationError("empty event expression");
  return cylinder_set(product_set(parts), full);
}

LearnedStructure read_learned_report(const FramePtr& frame, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open learned report '" + path + "'");
  LearnedStructure ls;
  ls.frame = frame;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, '\t');
    if (cells.front() != "edge") continue;
    if (cells.size() < 5) throw ParseError(line_no, "edge row needs 5 columns");
    std::size_t a = frame->index_of(cells[1]), b = frame->index_of(cells[2]);
    std::string o = cells[4];
    if (b < a) {
      std::swap(a, b);
      if (o == "->")
        o = "<-";
      else if (o == "<-")
        o = "->";
    }
    LearnedEdge e{a, b, std::stod(cells[3]), EdgeOrientation::undirected};
    if (o == "->")
      e.orientation = EdgeOrientation::forward;
    else if (o == "<-")
      e.orientation = EdgeOrientation::backward;
    else if (o != "--")
      throw ParseError(line_no, "unknown orientation '" + o + "'");
    ls.edges.push_back(e);
  }
  return ls;
}

// ---------------------------------------------------------------- commands

struct GenArgs {
  std::string kind = "tree";
  std::size_t vars = 0;
  std::string domain_sizes = "2";
  std::size_t focal_budget = GenerationOptions{}.focal_budget;
  std::size_t max_resamples = GenerationOptions{}.max_resamples;
  std::string valuations = "conditional";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a, const std::string& format, std::ostream& out,
               std::ostream& err) {
  if (a.vars < 2) throw ValidationError("--vars must be at least 2");
  if (a.focal_budget < 1) throw ValidationError("--focal-budget must be positive");
  std::vector<std::size_t> sizes;
  for (const auto& s : split(a.domain_sizes, ',')) sizes.push_back(std::stoul(s));
  for (auto s : sizes)
    if (s < 2) throw ValidationError("domain sizes must be at least 2");
  if (a.kind != "tree" && a.kind != "polytree") throw ValidationError("--kind must be tree or polytree");

  GenerationOptions opts;
  opts.focal_budget = a.focal_budget;
  opts.max_resamples = a.max_resamples;
  opts.mode = a.valuations == "arbitrary" ? ValuationMode::arbitrary : ValuationMode::conditional;

  const FramePtr frame = make_frame(a.vars, sizes);
  const Dag dag = a.kind == "tree" ? random_tree_structure(a.vars, Rng::derive(a.seed, 0))
                                   : random_polytree_structure(a.vars, Rng::derive(a.seed, 0));
  GenerationReport gen;
  const BeliefNetwork net = random_network(dag, frame, opts, Rng::derive(a.seed, 1), &gen);

  RunConfig cfg{"gen", a.seed, format, {}};
  cfg.set("kind", a.kind);
  cfg.set("vars", std::to_string(a.vars));
  cfg.set("domain_sizes", a.domain_sizes);
  cfg.set("focal_budget", std::to_string(a.focal_budget));
  cfg.set("max_resamples", std::to_string(a.max_resamples));
  cfg.set("valuations", to_string(opts.mode));
  cfg.set("rng", Rng::kName);
  cfg.set("out", a.out.empty() ? "-" : a.out);

  std::map<std::string, std::string> summary;
  // the output path stays out of the document so that copies compare equal
  for (const auto& [k, v] : cfg.params)
    if (k != "out") summary["run." + k] = v;
  summary["run.seed"] = std::to_string(a.seed);
  summary["edges"] = std::to_string(dag.edge_count());
  summary["colliders"] = std::to_string(dag.colliders().size());
  summary["joint_focal_count"] = std::to_string(gen.joint_focal_count);
  summary["conflicts_encountered"] = std::to_string(gen.conflicts);

  std::ostringstream doc;
  write_network(doc, net, summary);
  if (!a.out.empty()) write_atomically(a.out, doc.str());

  Report rep("gen report", cfg);
  rep.columns("stat", {"value"});
  rep.row({"stat", "edges", std::to_string(dag.edge_count())});
  rep.row({"stat", "colliders", std::to_string(dag.colliders().size())});
  rep.row({"stat", "joint_focal_count", std::to_string(gen.joint_focal_count)});
  rep.row({"stat", "conflicts_encountered", std::to_string(gen.conflicts)});
  if (a.out.empty()) {
    out << doc.str();
    rep.write(err);
  } else {
    rep.write(out);
  }
  return kOk;
}

struct SampleArgs {
  std::string network;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a, const std::string& format, std::ostream& out,
               std::ostream& err) {
  if (a.n < 1) throw ValidationError("--n must be positive");
  const BeliefNetwork net = read_network_file(a.network);
  const MassFunction joint = underlying_distribution(net);
  const Dataset ds = sample_population(joint, a.n, a.seed);
  const double l1 = l1_distance(empirical_mass(ds, ds.scope()), joint);

  std::ostringstream text;
  write_dataset(text, ds);
  RunConfig cfg{"sample", a.seed, format, {}};
  cfg.set("network", a.network);
  cfg.set("n", std::to_string(a.n));
  cfg.set("rng", Rng::kName);
  cfg.set("out", a.out.empty() ? "-" : a.out);
  Report rep("sample report", cfg);
  rep.columns("stat", {"value"});
  rep.row({"stat", "records", std::to_string(ds.size())});
  rep.row({"stat", "joint_focal_count", std::to_string(joint.size())});
  rep.row({"stat", "l1_empirical_to_exact", format_double(l1)});
  if (a.out.empty()) {
    out << text.str();
    rep.write(err);
  } else {
    write_atomically(a.out, text.str());
    rep.write(out);
  }
  return kOk;
}

struct LearnArgs {
  std::string data;
  std::string network;
  bool exact = false;
  std::string mode = "tree";
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_learn(const LearnArgs& a, const std::string& format, std::ostream& out) {
  if (a.theta < 0.0) throw ValidationError("--theta must be non-negative");
  if (a.mode != "tree" && a.mode != "polytree") throw ValidationError("--mode must be tree or polytree");
  std::optional<ScoreContext> ctx;
  std::string source;
  if (a.exact) {
    if (a.network.empty()) throw ValidationError("--exact needs --network");
    ctx.emplace(ScoreContext::from_joint(underlying_distribution(read_network_file(a.network))));
    source = a.network;
  } else {
    if (a.data.empty()) throw ValidationError("give --data, or --network with --exact");
    ctx.emplace(ScoreContext::from_dataset(read_dataset_file(a.data)));
    source = a.data;
  }
  const LearnedStructure ls =
      a.mode == "tree" ? learn_tree(*ctx) : learn_polytree(*ctx, PolytreeOptions{a.theta});
  const Frame& frame = *ls.frame;

  RunConfig cfg{"learn", a.seed, format, {}};
  cfg.set("input", source);
  cfg.set("exact", a.exact ? "1" : "0");
  cfg.set("mode", a.mode);
  cfg.set("theta", format_double(a.theta));
  cfg.set("out", a.out.empty() ? "-" : a.out);
  Report rep("learn report", cfg);
  rep.note("context", ctx->description());
  rep.columns("edge", {"a", "b", "dep0", "orientation"});
  rep.columns("collider", {"x1", "x2", "center", "criterion", "positive"});
  rep.columns("warning", {"message"});
  for (const auto& e : ls.edges)
    rep.row({"edge", frame.variable(e.a).name, frame.variable(e.b).name, format_double(e.weight),
             orientation_symbol(e.orientation)});
  for (const auto& c : ls.colliders)
    rep.row({"collider", frame.variable(c.x1).name, frame.variable(c.x2).name, frame.variable(c.center).name,
             c.value ? format_double(*c.value) : "nan", c.positive ? "1" : "0"});
  for (const auto& w : ls.warnings) rep.row({"warning", w});
  emit(a.out, rep.str(), out);
  return kOk;
}

struct EvalArgs {
  std::vector<std::string> truth;
  std::vector<std::string> learned;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_eval(const EvalArgs& a, const std::string& format, std::ostream& out) {
  if (a.truth.empty() || a.truth.size() != a.learned.size())
    throw ValidationError("give matching --truth/--learned pairs");
  RunConfig cfg{"eval", a.seed, format, {}};
  cfg.set("truth", join(a.truth, ","));
  cfg.set("learned", join(a.learned, ","));
  cfg.set("out", a.out.empty() ? "-" : a.out);
  Report rep("eval report", cfg);
  const std::vector<std::string> cols = {"truth",    "learned",           "precision",
                                         "recall",   "orientation_accuracy", "true_head_to_head",
                                         "recovered_head_to_head", "spurious_colliders", "skeleton_exact"};
  rep.columns("run", cols);
  rep.columns("mean", cols);
  double sp = 0, sr = 0, so = 0, ss = 0, se = 0;
  std::size_t th = 0, rh = 0;
  for (std::size_t i = 0; i < a.truth.size(); ++i) {
    const BeliefNetwork truth = read_network_file(a.truth[i]);
    const LearnedStructure ls = read_learned_report(truth.frame(), a.learned[i]);
    const StructureMetrics m = compare_structures(truth.dag(), ls);
    rep.row({"run", a.truth[i], a.learned[i], format_double(m.precision), format_double(m.recall),
             format_double(m.orientation_accuracy), std::to_string(m.true_head_to_head),
             std::to_string(m.recovered_head_to_head), std::to_string(m.spurious_colliders),
             m.skeleton_exact() ? "1" : "0"});
    sp += m.precision;
    sr += m.recall;
    so += m.orientation_accuracy;
    ss += static_cast<double>(m.spurious_colliders);
    se += m.skeleton_exact() ? 1.0 : 0.0;
    th += m.true_head_to_head;
    rh += m.recovered_head_to_head;
  }
  const double k = static_cast<double>(a.truth.size());
  rep.row({"mean", "-", "-", format_double(sp / k), format_double(sr / k), format_double(so / k),
           std::to_string(th), std::to_string(rh), format_double(ss / k), format_double(se / k)});
  emit(a.out, rep.str(), out);
  return kOk;
}

struct ConditionArgs {
  std::string data;
  std::string event;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_condition(const ConditionArgs& a, const std::string& format, std::ostream& out,
               std::ostream& err) {
  const Dataset ds = read_dataset_file(a.data);
  const ConfigSet event = parse_event(*ds.frame(), a.event);
  const Dataset conditioned = condition_population(ds, event);

  std::size_t unchanged = 0;
  for (const auto& r : ds.records())
    if (r.is_subset_of(event.bits())) ++unchanged;
  const Scope full = ds.scope();
  const double gap = l1_distance(empirical_mass(conditioned, full), condition(empirical_mass(ds, full), event));

  std::ostringstream text;
  write_dataset(text, conditioned);
  RunConfig cfg{"condition", a.seed, format, {}};
  cfg.set("data", a.data);
  cfg.set("event", a.event);
  cfg.set("out", a.out.empty() ? "-" : a.out);
  Report rep("condition report", cfg);
  rep.columns("stat", {"value"});
  rep.row({"stat", "records_in", std::to_string(ds.size())});
  rep.row({"stat", "records_out", std::to_string(conditioned.size())});
  rep.row({"stat", "rejected", std::to_string(ds.size() - conditioned.size())});
  rep.row({"stat", "narrowed", std::to_string(conditioned.size() - unchanged)});
  rep.row({"stat", "unchanged", std::to_string(unchanged)});
  rep.row({"stat", "l1_gap", format_double(gap)});
  rep.row({"stat", "gap_within_1e-12", gap <= 1e-12 ? "1" : "0"});
  if (a.out.empty()) {
    out << text.str();
    rep.write(err);
  } else {
    write_atomically(a.out, text.str());
    rep.write(out);
  }
  if (gap > 1e-12) throw NumericalError("conditioning equivalence gap " + format_double(gap) + " exceeds 1e-12");
  return kOk;
}

struct IndepArgs {
  std::string data;
  std::string network;
  std::string j, k, l;
  double epsilon = kDefaultTolerances.residual;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_indep(const IndepArgs& a, const std::string& format, std::ostream& out) {
  if (a.epsilon <= 0.0) throw ValidationError("--epsilon must be positive");
  if (a.data.empty() == a.network.empty()) throw ValidationError("give exactly one of --network or --data");
  const MassFunction joint = a.network.empty() ? [&] {
    const Dataset ds = read_dataset_file(a.data);
    return empirical_mass(ds, ds.scope());
  }()
                                               : underlying_distribution(read_network_file(a.network));
  const Frame& frame = *joint.scope().frame();
  const IndependenceStatement st =
      indep_test(joint, parse_vars(frame, a.j), parse_vars(frame, a.k), parse_vars(frame, a.l), a.epsilon);

  RunConfig cfg{"indep", a.seed, format, {}};
  cfg.set("input", a.network.empty() ? a.data : a.network);
  cfg.set("j", a.j);
  cfg.set("k", a.k);
  cfg.set("l", a.l.empty() ? "-" : a.l);
  cfg.set("epsilon", format_double(a.epsilon));
  cfg.set("out", a.out.empty() ? "-" : a.out);
  Report rep("indep report", cfg);
  rep.columns("stat", {"value"});
  rep.row({"stat", "J", names_of(frame, st.j)});
  rep.row({"stat", "K", names_of(frame, st.k)});
  rep.row({"stat", "L", names_of(frame, st.l)});
  rep.row({"stat", "verdict", to_string(st.verdict)});
  rep.row({"stat", "residual", format_double(st.residual)});
  if (!st.note.empty()) rep.row({"stat", "note", st.note});
  emit(a.out, rep.str(), out);
  return st.verdict == Verdict::inconclusive ? kInconclusive : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dempster-Shafer belief networks: generate, sample, learn, evaluate, condition, test"};
  app.require_subcommand(1);
  std::string format = "tsv";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"tsv", "json"}));

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random tree or polytree network");
  g->add_option("--kind", gen.kind, "tree | polytree")->check(CLI::IsMember({"tree", "polytree"}));
  g->add_option("--vars", gen.vars, "number of variables")->required();
  g->add_option("--domain-sizes", gen.domain_sizes, "one size, or a comma list per variable");
  g->add_option("--focal-budget", gen.focal_budget, "focal sets per node valuation");
  g->add_option("--max-resamples", gen.max_resamples, "resamples on total conflict");
  g->add_option("--valuations", gen.valuations, "conditional | arbitrary")
      ->check(CLI::IsMember({"conditional", "arbitrary"}));
  g->add_option("--seed", gen.seed)->required();
  g->add_option("--out", gen.out, "network file (default: stdout)");

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "sample a population from a network's underlying distribution");
  s->add_option("--network", sample.network)->required();
  s->add_option("--n", sample.n, "number of records")->required();
  s->add_option("--seed", sample.seed)->required();
  s->add_option("--out", sample.out, "dataset file (default: stdout)");

  LearnArgs learn;
  auto* l = app.add_subcommand("learn", "recover a tree or polytree structure");
  l->add_option("--data", learn.data, "dataset file");
  l->add_option("--network", learn.network, "network file (with --exact)");
  l->add_flag("--exact", learn.exact, "use exact marginals of the network's distribution");
  l->add_option("--mode", learn.mode, "tree | polytree")->check(CLI::IsMember({"tree", "polytree"}));
  l->add_option("--theta", learn.theta, "collider threshold");
  l->add_option("--seed", learn.seed);
  l->add_option("--out", learn.out, "report file (default: stdout)");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "compare learned structures with their true networks");
  e->add_option("--truth", eval.truth, "true network file(s)")->required();
  e->add_option("--learned", eval.learned, "learn report(s), paired with --truth")->required();
  e->add_option("--seed", eval.seed);
  e->add_option("--out", eval.out, "metrics file (default: stdout)");

  ConditionArgs cond;
  auto* c = app.add_subcommand("condition", "condition a population on an event");
  c->add_option("--data", cond.data)->required();
  c->add_option("--event", cond.event, "X=a|b,Y=c  or  J:a.c;b.d  or  *")->required();
  c->add_option("--seed", cond.seed);
  c->add_option("--out", cond.out, "conditioned dataset (default: stdout)");

  IndepArgs indep;
  auto* i = app.add_subcommand("indep", "test a DS conditional independence statement");
  i->add_option("--network", indep.network);
  i->add_option("--data", indep.data);
  i->add_option("--j", indep.j, "comma-separated variables")->required();
  i->add_option("--k", indep.k, "comma-separated variables")->required();
  i->add_option("--l", indep.l, "comma-separated conditioning variables");
  i->add_option("--epsilon", indep.epsilon, "L1 tolerance");
  i->add_option("--seed", indep.seed);
  i->add_option("--out", indep.out, "report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*g) return cmd_gen(gen, format, out, err);
    if (*s) return cmd_sample(sample, format, out, err);
    if (*l) return cmd_learn(learn, format, out);
    if (*e) return cmd_eval(eval, format, out);
    if (*c) return cmd_condition(cond, format, out, err);
    if (*i) return cmd_indep(indep, format, out);
  } catch (const CapacityError& ex) {
    err << "dsbn: capacity: " << ex.what() << '\n';
    return kCapacity;
  } catch (const NumericalError& ex) {
    err << "dsbn: numerical failure: " << ex.what() << '\n';
    return kNumerical;
  } catch (const ValidationError& ex) {
    err << "dsbn: " << ex.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& ex) {
    err << "dsbn: bad number: " << ex.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("dsbn");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dsbn::cli

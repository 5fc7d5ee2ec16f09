#include <gtest/gtest.h>

#include <sstream>

#include "dsbn/dsbn.hpp"
#include "oracles.hpp"

namespace dsbn {
namespace {

struct Xy : ::testing::Test {
  FramePtr f = Frame::make({{"X", {"a", "b"}}, {"Y", {"c", "d"}}});
  Scope xy = f->full_scope();
  Scope x = f->scope({0});

  Bitset rec(std::vector<std::vector<std::string>> tuples) { return ConfigSet::of_tuples(xy, tuples).bits(); }
  ConfigSet xset(std::vector<std::vector<std::string>> tuples) { return ConfigSet::of_tuples(x, tuples); }
  ConfigSet on_x(std::vector<std::vector<std::string>> tuples) { return cylinder_set(xset(tuples), xy); }
};

TEST_F(Xy, EmpiricalMassCounts) {
  const auto a = rec({{"a", "c"}, {"a", "d"}});
  const auto ab = rec({{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}});
  EXPECT_EQ(empirical_mass(Dataset(f, {a, a, a}), x).mass(xset({{"a"}})), 1.0);
  const auto m = empirical_mass(Dataset(f, {a, a, a, ab}), x);
  EXPECT_EQ(m.mass(xset({{"a"}})), 0.75);
  EXPECT_EQ(m.mass(ConfigSet::full_set(x)), 0.25);
  const auto merged = empirical_mass(Dataset(f, {rec({{"a", "c"}}), rec({{"a", "d"}})}), x);
  EXPECT_EQ(merged.mass(xset({{"a"}})), 1.0);
  EXPECT_THROW(empirical_mass(Dataset(f, {}), x), ValidationError);
}

TEST_F(Xy, ConditionPopulationRejectsKeepsNarrows) {
  const Dataset ds(f, {rec({{"b", "c"}}), rec({{"a", "c"}}), rec({{"a", "c"}, {"b", "c"}})});
  const auto out = condition_population(ds, on_x({{"a"}}));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.records()[0], rec({{"a", "c"}}));
  EXPECT_EQ(out.records()[1], rec({{"a", "c"}}));
  EXPECT_THROW(condition_population(Dataset(f, {rec({{"b", "c"}})}), on_x({{"a"}})), EmptyPopulationError);
  EXPECT_EQ(condition_population(ds, ConfigSet::full_set(xy)), ds);
}

TEST_F(Xy, SampleIsDeterministicAndRejectsPseudo) {
  const auto cat = simple_support(ConfigSet::of_tuples(xy, {{"a", "d"}}));
  const auto ds = sample_population(cat, 50, 1);
  for (const auto& r : ds.records()) EXPECT_EQ(r, rec({{"a", "d"}}));

  const auto m = make_mass(xy, {{ConfigSet::of_tuples(xy, {{"a", "c"}}), 0.5}, {ConfigSet::full_set(xy), 0.5}});
  EXPECT_EQ(sample_population(m, 100, 42), sample_population(m, 100, 42));
  const auto big = empirical_mass(sample_population(m, 10000, 42), xy);
  EXPECT_NEAR(big.mass(ConfigSet::of_tuples(xy, {{"a", "c"}})), 0.5, 0.02);

  const auto pseudo = make_mass(xy, {{ConfigSet::of_tuples(xy, {{"a", "c"}}), 1.2}, {ConfigSet::full_set(xy), -0.2}});
  EXPECT_THROW(sample_population(pseudo, 10, 1), SamplingError);
}

// random datasets of arbitrary joint records
Dataset random_dataset(const FramePtr& f, Rng& rng, std::size_t n) {
  const Scope s = f->full_scope();
  std::vector<Bitset> recs;
  for (std::size_t i = 0; i < n; ++i) {
    Bitset b(s.config_count());
    do {
      for (std::size_t c = 0; c < s.config_count(); ++c)
        if (rng.uniform() < 0.3) b.set(c);
    } while (b.none());
    recs.push_back(b);
  }
  return Dataset(f, std::move(recs));
}

TEST(ConditioningEquivalence, EmpiricalOfConditionedEqualsConditionedEmpirical) {
  Rng rng(77);
  std::size_t checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto f = testing::letters_frame({2, 1 + 1 + rng.below(2)});
    const Scope s = f->full_scope();
    const auto ds = random_dataset(f, rng, 1 + rng.below(30));
    Bitset ev(s.config_count());
    do {
      for (std::size_t c = 0; c < s.config_count(); ++c)
        if (rng.coin()) ev.set(c);
    } while (ev.none());
    const ConfigSet b(s, ev);
    MassFunction lhs, rhs;
    try {
      rhs = condition(empirical_mass(ds, s), b);
    } catch (const ConflictError&) {
      EXPECT_THROW(condition_population(ds, b), EmptyPopulationError);
      continue;
    }
    lhs = empirical_mass(condition_population(ds, b), s);
    EXPECT_LE(l1_distance(lhs, rhs), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 100u);
}

TEST(ConditioningLaws, IdempotentAndComposes) {
  Rng rng(78);
  auto f = testing::letters_frame({2, 3});
  const Scope s = f->full_scope();
  for (int trial = 0; trial < 100; ++trial) {
    const auto ds = random_dataset(f, rng, 20);
    Bitset b1(s.config_count()), b2(s.config_count());
    for (std::size_t c = 0; c < s.config_count(); ++c) {
      if (rng.coin()) b1.set(c);
      if (rng.coin()) b2.set(c);
    }
    Bitset both = b1;
    both &= b2;
    if (both.none()) continue;
    try {
      const auto once = condition_population(ds, ConfigSet(s, b1));
      EXPECT_EQ(condition_population(once, ConfigSet(s, b1)), once);
      const auto twice = condition_population(once, ConfigSet(s, b2));
      EXPECT_EQ(twice, condition_population(ds, ConfigSet(s, both)));
    } catch (const EmptyPopulationError&) {
      EXPECT_THROW(condition_population(ds, ConfigSet(s, both)), EmptyPopulationError);
    }
  }
}

TEST(DatasetFormat, RoundTripAndRowKinds) {
  Rng rng(5);
  auto f = testing::letters_frame({2, 3});
  const auto ds = random_dataset(f, rng, 40);
  std::ostringstream out;
  write_dataset(out, ds);
  std::istringstream in(out.str());
  EXPECT_EQ(read_dataset(in), ds);

  std::istringstream text("#vars X=a|b,Y=c|d\n# provenance: hand\n\na|b,c\nJ:a.c;b.d\n");
  const auto parsed = read_dataset(text);
  ASSERT_EQ(parsed.size(), 2u);
  const Scope xy = parsed.scope();
  EXPECT_EQ(parsed.record(0), ConfigSet::of_tuples(xy, {{"a", "c"}, {"b", "c"}}));
  EXPECT_EQ(parsed.record(1), ConfigSet::of_tuples(xy, {{"a", "c"}, {"b", "d"}}));
  EXPECT_FALSE(is_product(parsed.record(1)));
}

TEST(DatasetFormat, MalformedRowsReportLineNumbers) {
  const char* bad[] = {
      "#vars X=a|b\nz\n",          // unknown label
      "#vars X=a|b,Y=c|d\na\n",    // wrong arity
      "#vars X=a|b\nJ:a.b\n",      // tuple too long
      "a|b\n",                     // missing header
      "#vars X=a\n",               // domain too small
      "#vars X=a|b\n|\n",          // empty set
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(read_dataset(in), ValidationError) << text;
  }
  std::istringstream in("#vars X=a|b\na\n\nq\n");
  try {
    read_dataset(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

}  // namespace
}  // namespace dsbn

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include <wdsat/checks.hpp>
#include <wdsat/saturation.hpp>

#include "support.hpp"

using namespace wdsat;
using ref::P;
using ref::S;

TEST(BoxMinus, WithoutTransitivity) {
  EXPECT_EQ(box_minus(S({"[a]p", "[b]q", "r"}), Modality::a, logics::kab), S({"p"}));
  EXPECT_EQ(box_minus(S({"[a]p", "[b]q", "r"}), Modality::b, logics::kab), S({"q"}));
}

TEST(BoxMinus, WithTransitivityKeepsTheBox) {
  EXPECT_EQ(box_minus(S({"[a]p", "[b]q", "r"}), Modality::a, logics::kab4a), S({"p", "[a]p"}));
  EXPECT_EQ(box_minus(S({"[a]p", "[b]q", "r"}), Modality::b, logics::kab4a), S({"q"}));
  EXPECT_EQ(box_minus(S({"[a]p", "[b]q", "r"}), Modality::b, logics::kab4a4b), S({"q", "[b]q"}));
}

TEST(BoxMinus, IgnoresNegatedBoxes) {
  for (LogicId l : LogicId::all())
    EXPECT_TRUE(box_minus(S({"p", "~[a]q"}), Modality::a, l).empty());
}

TEST(BoxMinus, LowersDegree) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    FormulaSet w{random_formula(rng, 2, 12), random_formula(rng, 2, 12)};
    if (w.degree() == 0) continue;
    for (LogicId l : LogicId::all())
      for (Modality m : {Modality::a, Modality::b})
        if (!l.four(m)) {
          EXPECT_LE(box_minus(w, m, l).degree() + 1, w.degree());
        }
  }
}

TEST(IsCcs, Examples) {
  EXPECT_TRUE(is_ccs(S({"p & q", "p", "q"}), S({"p & q"})));
  EXPECT_FALSE(is_ccs(S({"p & q", "p"}), S({"p & q"})));
  EXPECT_TRUE(is_ccs(S({"p"}), S({"p"})));
  EXPECT_FALSE(is_ccs(S({"p", "~p"}), S({"p", "~p"})));
  EXPECT_FALSE(is_ccs(S({"false"}), S({"false"})));
  EXPECT_FALSE(is_ccs(S({"~~p"}), S({"~~p"})));
  EXPECT_FALSE(is_ccs(S({"p", "q"}), S({"p"})));  // q outside csf
}

TEST(IsCcs, AgreesWithReference) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    FormulaSet u = detail::random_set(rng, 2, 7, 2);
    FormulaSet closure = csf(u);
    // Random supersets of u inside and slightly outside the closure.
    for (int j = 0; j < 20; ++j) {
      FormulaSet w = u;
      for (Formula f : closure)
        if (rng() % 2) w.insert(f);
      if (rng() % 5 == 0) w.insert(random_formula(rng, 2, 3));
      EXPECT_EQ(is_ccs(w, u), ref::saturated(w, u)) << to_string(u) << " / " << to_string(w);
    }
  }
}

TEST(EnumerateCcs, ClashGivesEmptyStream) {
  EXPECT_TRUE(collect(enumerate_ccs(S({"p", "~p"}))).empty());
  EXPECT_TRUE(collect(enumerate_ccs(S({"p & ~p"}))).empty());
  EXPECT_TRUE(collect(enumerate_ccs(S({"false"}))).empty());
}

TEST(EnumerateCcs, ConjunctionHasOneSaturation) {
  auto got = collect(enumerate_ccs(S({"p & q"})));
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], S({"p & q", "p", "q"}));
  auto all = ref::ccs_filter(S({"p & q"}));
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], got[0]);
}

TEST(EnumerateCcs, NegatedConjunctionBranchesLeftRightBoth) {
  auto got = collect(enumerate_ccs(S({"~(p & q)"})));
  std::vector<FormulaSet> expected{S({"~(p & q)", "~p"}), S({"~(p & q)", "~q"}),
                                   S({"~(p & q)", "~p", "~q"})};
  EXPECT_EQ(got, expected);
  auto all = ref::ccs_filter(S({"~(p & q)"}));
  for (const FormulaSet& w : expected) EXPECT_NE(std::find(all.begin(), all.end(), w), all.end());
}

TEST(EnumerateCcs, EmptyInput) {
  auto got = collect(enumerate_ccs(FormulaSet{}));
  ASSERT_EQ(got.size(), 1u);
  EXPECT_TRUE(got[0].empty());
}

TEST(EnumerateCcs, StreamIsSoundAndAgreesOnNonemptiness) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 400) {
    FormulaSet u = detail::random_set(rng, 2, 6, 3);
    auto all = ref::ccs_filter(u);
    if (ref::closure(u).size() > 16) continue;
    ++checked;
    auto got = collect(enumerate_ccs(u));
    EXPECT_EQ(got.empty(), all.empty()) << to_string(u);
    std::set<FormulaSet> distinct(got.begin(), got.end());
    EXPECT_EQ(distinct.size(), got.size()) << "duplicates for " << to_string(u);
    for (const FormulaSet& w : got) {
      EXPECT_NE(std::find(all.begin(), all.end(), w), all.end()) << to_string(w);
      EXPECT_EQ(w.degree(), u.degree());
    }
  }
}

TEST(CcsByFilter, MatchesReferenceFilter) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    FormulaSet u = detail::random_set(rng, 2, 6, 2);
    auto lib = ccs_by_filter(u, 14);
    if (!lib) continue;
    auto mine = ref::ccs_filter(u);
    std::sort(lib->begin(), lib->end());
    std::sort(mine.begin(), mine.end());
    EXPECT_EQ(*lib, mine);
  }
}

TEST(CcsProperties, UnionWithSaturatedPart) {
  // w in CCS(u + w1) and w1 in CCS(v) give w in CCS(u + v).
  FormulaSet u = S({"~(p & q)"}), v = S({"q & [a]p"});
  auto w1s = collect(enumerate_ccs(v));
  ASSERT_EQ(w1s.size(), 1u);
  for (const FormulaSet& w : collect(enumerate_ccs(u.united(w1s[0]))))
    EXPECT_TRUE(ref::saturated(w, u.united(v)));
}

TEST(CcsProperties, SplitByClassicalClosures) {
  FormulaSet u = S({"~(p & q)"}), v = S({"~(q & r)"});
  for (const FormulaSet& w : collect(enumerate_ccs(u.united(v)))) {
    FormulaSet v1 = w.intersected(csf(u)), v2 = w.intersected(csf(v));
    EXPECT_TRUE(ref::saturated(v1, u));
    EXPECT_TRUE(ref::saturated(v2, v));
    EXPECT_EQ(v1.united(v2), w);
  }
}

// Taking both branches of a negated conjunction from w1 lets w grow past w1
// with formulas of w1's degree while u is empty.
TEST(CcsProperties, DegreeOfTheNewPartCanExceedDegreeOfU) {
  FormulaSet u, v = S({"~([a]p & [a]q)"});
  FormulaSet w1 = S({"~([a]p & [a]q)", "~[a]p"});
  FormulaSet w = S({"~([a]p & [a]q)", "~[a]p", "~[a]q"});
  ASSERT_TRUE(ref::saturated(w1, v));
  ASSERT_TRUE(ref::saturated(w, u.united(w1)));
  EXPECT_GT(w.minus(w1).degree(), u.degree());
}

// sf reaches under boxes, csf does not: restricting w to sf(u) can keep a
// box body that is outside csf(u).
TEST(CcsProperties, RestrictionToSubformulasIsNotAlwaysCcs) {
  FormulaSet u = S({"[a]p"});
  FormulaSet v = S({"[a]p", "p"});
  FormulaSet w = v;
  ASSERT_TRUE(ref::saturated(w, v));
  EXPECT_FALSE(ref::saturated(sf(u).intersected(w), u));
  EXPECT_TRUE(ref::saturated(csf(u).intersected(w), u));
}

TEST(CcsProperties, TruthsAtAWorldRestrictedToSubformulasAreNotAlwaysCcs) {
  KripkeModel m;
  m.worlds = {0};
  m.val["p"] = {0};
  FormulaSet u = S({"[a]p"});
  FormulaSet truths;
  for (Formula f : sf(u))
    if (ref::holds(m, 0, f)) truths.insert(f);
  EXPECT_EQ(truths, S({"[a]p", "p"}));
  EXPECT_FALSE(ref::saturated(truths, u));
}

TEST(CcsProperties, TruthsRestrictedToClassicalClosureAreCcs) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    KripkeModel m = detail::random_model(rng, logics::kde);
    FormulaSet u;
    for (Formula f : detail::random_set(rng, 2, 8, 3)) u.insert(ref::holds(m, 0, f) ? f : Formula::neg(f));
    FormulaSet truths;
    for (Formula f : csf(u))
      if (ref::holds(m, 0, f)) truths.insert(f);
    EXPECT_TRUE(ref::saturated(truths, u)) << to_string(u);
  }
}

TEST(PropertySuites, ClassicalItemsHoldOnRandomInstances) {
  Prop1Options opt;
  opt.instances = 1000;
  auto reports = prop1_suite(opt);
  ASSERT_EQ(reports.size(), 7u);
  EXPECT_TRUE(reports[0].ok()) << reports[0].first_failure;
  EXPECT_TRUE(reports[1].ok()) << reports[1].first_failure;
  EXPECT_TRUE(reports[5].ok()) << reports[5].first_failure;
  EXPECT_TRUE(reports[6].ok()) << reports[6].first_failure;
  for (const auto& r : reports) EXPECT_GE(r.instances, 1000u) << r.name;
}

LogicId parse_round_trip(const std::string& name) { return LogicId::parse(name); }

TEST(LogicId, NamesRoundTrip) {
  for (LogicId l : LogicId::all_including_experimental()) EXPECT_EQ(parse_round_trip(l.name()), l);
  EXPECT_THROW(LogicId::parse("kab4b"), std::invalid_argument);
  EXPECT_FALSE((LogicId{false, false, true}).supported());
  EXPECT_TRUE((LogicId{true, false, true}).experimental());
}

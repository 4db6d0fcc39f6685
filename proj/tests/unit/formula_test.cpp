#include <random>

#include <gtest/gtest.h>

#include <wdsat/formula.hpp>
#include <wdsat/oracle.hpp>
#include <wdsat/syntax.hpp>

#include "support.hpp"

using namespace wdsat;
using ref::P;
using ref::S;

namespace {

Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }

}  // namespace

TEST(Parse, Atom) { EXPECT_EQ(P("p"), p()); }

TEST(Parse, DiamondIsNegatedBoxOfNegation) {
  EXPECT_EQ(P("<a>p"), Formula::neg(Formula::box(Modality::a, Formula::neg(p()))));
}

TEST(Parse, ImplicationExpands) {
  Formula bab = Formula::box(Modality::a, Formula::box(Modality::b, p()));
  Formula ap = Formula::box(Modality::a, p());
  EXPECT_EQ(P("[a]([b]p) -> [a]p"), Formula::neg(Formula::conj(bab, Formula::neg(ap))));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(P("~p & q"), Formula::conj(Formula::neg(p()), q()));
  EXPECT_EQ(P("p & q | p"), Formula::disj(Formula::conj(p(), q()), p()));
  EXPECT_EQ(P("p -> q -> p"), Formula::implies(p(), Formula::implies(q(), p())));
  EXPECT_EQ(P("[a]p & q"), Formula::conj(Formula::box(Modality::a, p()), q()));
  EXPECT_EQ(P("true"), Formula::neg(Formula::falsum()));
}

TEST(Parse, RejectsGarbage) {
  for (const char* bad : {"", "p &", "(p", "p q", "[c]p", "<a>", "p)", "~", "->p"})
    EXPECT_THROW(parse(bad), ParseError) << bad;
}

TEST(Parse, ErrorCarriesOffset) {
  try {
    parse("p & & q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Degree, Examples) {
  EXPECT_EQ(P("p").degree(), 0u);
  EXPECT_EQ(P("[a](p & [b]q)").degree(), 2u);
  EXPECT_EQ(P("~[a]p & [b]p").degree(), 1u);
  EXPECT_EQ(FormulaSet{}.degree(), 0u);
}

TEST(Size, Examples) {
  EXPECT_EQ(P("p").size(), 1u);
  EXPECT_EQ(P("~p").size(), 2u);
  EXPECT_EQ(P("p & ~p").size(), 4u);
  EXPECT_EQ(FormulaSet{}.size(), 0u);
}

TEST(HashConsing, EqualStructureSameHandle) {
  EXPECT_EQ(P("[a](p & q)"), Formula::box(Modality::a, Formula::conj(p(), q())));
  EXPECT_NE(P("~~p"), p());
  EXPECT_EQ(P("~~p").child().child(), p());
}

TEST(FormulaSet, CanonicalOrderIgnoresInsertionOrder) {
  FormulaSet a{P("q"), P("p & q"), P("p")};
  FormulaSet b{P("p"), P("p & q"), P("q"), P("p")};
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.count(), 3u);
  EXPECT_EQ(a.elements().front(), P("p"));
}

TEST(Csf, Examples) {
  EXPECT_EQ(csf(S({"p & q"})), S({"p & q", "p", "q"}));
  EXPECT_EQ(csf(S({"~(p & q)"})), S({"~(p & q)", "~p", "~q", "p & q", "p", "q"}));
  EXPECT_EQ(csf(FormulaSet{}), FormulaSet{});
}

TEST(Sf, Examples) {
  EXPECT_EQ(sf(S({"[a]p"})), S({"[a]p", "p"}));
  EXPECT_EQ(sf(S({"p"})), S({"p"}));
  // ~[b]p gives ~p by the negated-box rule; ~phi => phi adds [b]p and p.
  EXPECT_EQ(sf(S({"~[b]p"})), S({"~[b]p", "[b]p", "~p", "p"}));
}

TEST(Closures, AgreeWithReferenceOnRandomSets) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    FormulaSet w;
    for (int j = 0; j < 3; ++j) w.insert(random_formula(rng, 2, 10));
    auto rc = ref::closure(w), rs = ref::closure(w, true);
    EXPECT_EQ(csf(w), FormulaSet(std::vector<Formula>(rc.begin(), rc.end())));
    EXPECT_EQ(sf(w), FormulaSet(std::vector<Formula>(rs.begin(), rs.end())));
  }
}

TEST(Closures, Laws) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    FormulaSet w;
    for (int j = 0; j < 3; ++j) w.insert(random_formula(rng, 2, 12));
    FormulaSet c = csf(w), s = sf(w);
    EXPECT_TRUE(w.subset_of(c));
    EXPECT_EQ(csf(c), c);
    EXPECT_EQ(sf(s), s);
    EXPECT_TRUE(c.subset_of(s));
    EXPECT_EQ(c.degree(), w.degree());
  }
}

TEST(Printer, RoundTripsRandomFormulas) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, 3, 20);
    EXPECT_EQ(parse(to_string(f)), f) << to_string(f);
  }
  for (int i = 0; i < 500; ++i) {
    Formula f = random_modal_formula(rng, 2, 30);
    EXPECT_EQ(parse(to_string(f)), f) << to_string(f);
  }
}

TEST(Printer, UsesDerivedConnectives) {
  EXPECT_EQ(to_string(P("<a>p")), "<a>p");
  EXPECT_EQ(to_string(P("p -> q")), "p -> q");
  EXPECT_EQ(to_string(P("p | q")), "p | q");
}

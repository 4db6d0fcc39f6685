#pragma once

// Reference implementations written independently of the library, used as
// oracles by the unit tests. They favour directness over speed.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <wdsat/formula.hpp>
#include <wdsat/kripke.hpp>
#include <wdsat/syntax.hpp>

namespace ref {

using wdsat::Formula;
using wdsat::FormulaSet;
using wdsat::Kind;

inline Formula P(const std::string& text) { return wdsat::parse(text); }

inline FormulaSet S(std::initializer_list<const char*> texts) {
  FormulaSet s;
  for (const char* t : texts) s.insert(P(t));
  return s;
}

// Least set containing w and closed under the propositional rules.
inline std::set<Formula, wdsat::CanonicalLess> closure(const FormulaSet& w, bool through_boxes = false) {
  std::set<Formula, wdsat::CanonicalLess> out(w.begin(), w.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Formula> add;
    for (Formula f : out) {
      if (f.is_conj()) {
        add.push_back(f.left());
        add.push_back(f.right());
      }
      if (f.is_neg()) {
        Formula g = f.child();
        add.push_back(g);
        if (g.is_conj()) {
          add.push_back(Formula::neg(g.left()));
          add.push_back(Formula::neg(g.right()));
        }
        if (through_boxes && g.is_box()) add.push_back(Formula::neg(g.child()));
      }
      if (through_boxes && f.is_box()) add.push_back(f.child());
    }
    for (Formula f : add) grew |= out.insert(f).second;
  }
  return out;
}

inline bool subset(const FormulaSet& a, const std::set<Formula, wdsat::CanonicalLess>& b) {
  for (Formula f : a)
    if (!b.count(f)) return false;
  return true;
}

// The five saturation clauses plus u <= w <= csf(u).
inline bool saturated(const FormulaSet& w, const FormulaSet& u) {
  if (!u.subset_of(w) || !subset(w, closure(u))) return false;
  for (Formula f : w) {
    if (f.is_falsum()) return false;
    if (f.is_conj() && !(w.contains(f.left()) && w.contains(f.right()))) return false;
    if (f.is_neg()) {
      Formula g = f.child();
      if (w.contains(g)) return false;
      if (g.is_neg() && !w.contains(g.child())) return false;
      if (g.is_conj() && !w.contains(Formula::neg(g.left())) && !w.contains(Formula::neg(g.right())))
        return false;
    }
  }
  return true;
}

// All w with u <= w <= csf(u) that pass is_ccs.
inline std::vector<FormulaSet> ccs_filter(const FormulaSet& u) {
  std::vector<Formula> free;
  for (Formula f : closure(u))
    if (!u.contains(f)) free.push_back(f);
  std::vector<FormulaSet> out;
  for (unsigned long mask = 0; mask < (1ul << free.size()); ++mask) {
    FormulaSet w = u;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (mask >> i & 1) w.insert(free[i]);
    if (saturated(w, u)) out.push_back(w);
  }
  return out;
}

// Direct recursive satisfaction over a model, no memo.
inline bool holds(const wdsat::KripkeModel& m, wdsat::WorldId x, Formula f) {
  switch (f.kind()) {
    case Kind::atom: {
      auto it = m.val.find(f.name());
      return it != m.val.end() && it->second.count(x);
    }
    case Kind::falsum:
      return false;
    case Kind::neg:
      return !holds(m, x, f.child());
    case Kind::conj:
      return holds(m, x, f.left()) && holds(m, x, f.right());
    default: {
      const auto& rel = f.kind() == Kind::box_a ? m.ra : m.rb;
      for (auto [s, t] : rel)
        if (s == x && !holds(m, t, f.child())) return false;
      return true;
    }
  }
}

inline bool weakly_dense(const wdsat::KripkeModel& m) {
  for (auto [s, t] : m.ra) {
    bool ok = false;
    for (wdsat::WorldId u : m.worlds) ok |= m.ra.count({s, u}) && m.rb.count({u, t});
    if (!ok) return false;
  }
  return true;
}

inline bool transitive(const wdsat::Relation& r) {
  for (auto [s, t] : r)
    for (auto [t2, u] : r)
      if (t == t2 && !r.count({s, u})) return false;
  return true;
}

inline bool is_model_of(const wdsat::KripkeModel& m, Formula f, wdsat::LogicId logic) {
  if (logic.de && !weakly_dense(m)) return false;
  if (logic.four_a && !transitive(m.ra)) return false;
  if (logic.four_b && !transitive(m.rb)) return false;
  return holds(m, m.root, f);
}

// Number of formulas of size exactly n over `atoms` atoms: atoms and falsum
// at size 1; three unary constructors; one binary.
inline unsigned long long count_of_size(std::size_t atoms, std::size_t n) {
  std::vector<unsigned long long> c(n + 1, 0);
  if (n >= 1) c[1] = atoms + 1;
  for (std::size_t s = 2; s <= n; ++s) {
    c[s] = 3 * c[s - 1];
    for (std::size_t l = 1; l + 1 < s; ++l) c[s] += c[l] * c[s - 1 - l];
  }
  return c[n];
}

}  // namespace ref

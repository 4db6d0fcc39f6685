#pragma once

// Logics, box-minus projections, and consistent classical saturations (CCS).

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "formula.hpp"

namespace wdsat {

/// Selects one of the supported logics by its axiom flags.
struct LogicId {
  bool de = false;      // weak density
  // R_a transitive. Read from the propagation rule and the frame
  // condition; the written 4(a) axiom (boxes collapsing) looks like a slip.
  bool four_a = false;
  bool four_b = false;  // R_b transitive

  bool operator==(const LogicId&) const = default;

  bool four(Modality m) const { return m == Modality::a ? four_a : four_b; }
  bool has_transitivity() const { return four_a || four_b; }

  bool is_standard() const { return four_a || !four_b; }
  /// KDe with 4(b) but without 4(a): accepted, not one of the six standard logics.
  bool experimental() const { return de && four_b && !four_a; }
  bool supported() const { return is_standard() || experimental(); }

  std::string name() const {
    std::string n = de ? "kde" : "kab";
    if (four_a) n += "4a";
    if (four_b) n += "4b";
    return n;
  }

  static LogicId parse(std::string_view name) {
    for (const LogicId& l : all_including_experimental())
      if (l.name() == name) return l;
    throw std::invalid_argument("unknown logic '" + std::string(name) + "'");
  }

  static std::vector<LogicId> all() {
    return {{false, false, false}, {false, true, false}, {false, true, true},
            {true, false, false},  {true, true, false},  {true, true, true}};
  }

  static std::vector<LogicId> all_including_experimental() {
    auto v = all();
    v.push_back({true, false, true});
    return v;
  }
};

namespace logics {
inline constexpr LogicId kab{false, false, false};
inline constexpr LogicId kab4a{false, true, false};
inline constexpr LogicId kab4a4b{false, true, true};
inline constexpr LogicId kde{true, false, false};
inline constexpr LogicId kde4a{true, true, false};
inline constexpr LogicId kde4a4b{true, true, true};
}  // namespace logics

/// Formulas handed to an m-successor; with 4(m) the boxes travel along.
inline FormulaSet box_minus(const FormulaSet& w, Modality m, LogicId logic) {
  std::vector<Formula> out;
  for (Formula f : w) {
    if (!f.is_box(m)) continue;
    out.push_back(f.child());
    if (logic.four(m)) out.push_back(f);
  }
  return FormulaSet(std::move(out));
}

/// Reference predicate: w is a consistent classical saturation of u.
inline bool is_ccs(const FormulaSet& w, const FormulaSet& u) {
  if (!u.subset_of(w)) return false;
  if (!w.subset_of(csf(u))) return false;
  for (Formula f : w) {
    if (f.is_falsum()) return false;
    if (f.is_conj()) {
      if (!w.contains(f.left()) || !w.contains(f.right())) return false;
    } else if (f.is_neg()) {
      Formula g = f.child();
      if (w.contains(g)) return false;
      if (g.is_conj() && !w.contains(Formula::neg(g.left())) &&
          !w.contains(Formula::neg(g.right())))
        return false;
      if (g.is_neg() && !w.contains(g.child())) return false;
    }
  }
  return true;
}

/// Lazy depth-first enumeration of CCS(u) by tableau branching.
///
/// Open negated conjunctions are expanded in canonical order; each one
/// branches into ~left, ~right, then both. Saturated clash-free branches are
/// yielded once each. An empty stream means u is classically inconsistent.
class CcsStream {
 public:
  explicit CcsStream(FormulaSet u) {
    FormulaSet start = std::move(u);
    if (saturate(start)) stack_.push_back(std::move(start));
  }

  std::optional<FormulaSet> next() {
    while (!stack_.empty()) {
      FormulaSet s = std::move(stack_.back());
      stack_.pop_back();
      std::optional<Formula> open = first_open(s);
      if (!open) {
        if (yielded_.insert(s).second) return s;
        continue;
      }
      Formula nl = Formula::neg(open->left());
      Formula nr = Formula::neg(open->right());
      // Pushed in reverse so that ~left is explored first.
      push_branch(s, {nl, nr});
      push_branch(s, {nr});
      push_branch(s, {nl});
    }
    return std::nullopt;
  }

 private:
  void push_branch(const FormulaSet& s, std::initializer_list<Formula> extra) {
    FormulaSet t = s;
    for (Formula f : extra) t.insert(f);
    if (saturate(t)) stack_.push_back(std::move(t));
  }

  // Applies the deterministic rules (conjunction split, double negation) and
  // reports false on a clash.
  static bool saturate(FormulaSet& s) {
    std::vector<Formula> work(s.begin(), s.end());
    while (!work.empty()) {
      Formula f = work.back();
      work.pop_back();
      if (f.is_conj()) {
        if (s.insert(f.left())) work.push_back(f.left());
        if (s.insert(f.right())) work.push_back(f.right());
      } else if (f.is_neg() && f.child().is_neg()) {
        Formula g = f.child().child();
        if (s.insert(g)) work.push_back(g);
      }
    }
    for (Formula f : s) {
      if (f.is_falsum()) return false;
      if (f.is_neg() && s.contains(f.child())) return false;
    }
    return true;
  }

  static std::optional<Formula> first_open(const FormulaSet& s) {
    for (Formula f : s) {
      if (!f.is_neg() || !f.child().is_conj()) continue;
      Formula g = f.child();
      if (!s.contains(Formula::neg(g.left())) && !s.contains(Formula::neg(g.right()))) return g;
    }
    return std::nullopt;
  }

  std::vector<FormulaSet> stack_;
  std::unordered_set<FormulaSet> yielded_;
};

inline CcsStream enumerate_ccs(FormulaSet u) { return CcsStream(std::move(u)); }

/// Drains a stream into a vector.
template <typename Stream>
auto collect(Stream stream) {
  std::vector<std::decay_t<decltype(*stream.next())>> out;
  while (auto item = stream.next()) out.push_back(std::move(*item));
  return out;
}

}  // namespace wdsat

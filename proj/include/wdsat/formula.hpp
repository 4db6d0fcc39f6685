#pragma once

// Formulas of the bimodal language over atoms, falsum, negation, conjunction
// and the two boxes [a], [b]. Nodes are hash-consed: two formulas are equal
// iff they share a node, so equality and hashing are O(1).

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wdsat {

enum class Kind : std::uint8_t { atom, falsum, neg, conj, box_a, box_b };

enum class Modality : std::uint8_t { a, b };

inline char modality_char(Modality m) { return m == Modality::a ? 'a' : 'b'; }

namespace detail {

struct FormulaNode {
  Kind kind;
  std::string name;  // atoms only
  const FormulaNode* lhs = nullptr;
  const FormulaNode* rhs = nullptr;
  std::size_t size = 1;
  std::size_t degree = 0;
  std::uint32_t id = 0;
  std::string key;  // preorder serialization, second component of the canonical order
  mutable std::atomic<const FormulaNode*> negation{nullptr};
};

struct InternKey {
  Kind kind;
  std::string name;
  std::uint32_t lhs;
  std::uint32_t rhs;

  bool operator==(const InternKey&) const = default;
};

struct InternKeyHash {
  std::size_t operator()(const InternKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.name);
    h ^= (static_cast<std::size_t>(k.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    h ^= (static_cast<std::size_t>(k.lhs) * 0x100000001b3ULL + (h << 6) + (h >> 2));
    h ^= (static_cast<std::size_t>(k.rhs) * 0xc6a4a7935bd1e995ULL + (h << 6) + (h >> 2));
    return h;
  }
};

// Process-wide node table. Nodes are never freed; handles stay valid for the
// lifetime of the program and may be shared across threads.
class Interner {
 public:
  static Interner& instance() {
    static Interner interner;
    return interner;
  }

  const FormulaNode* make(Kind kind, std::string name, const FormulaNode* lhs,
                          const FormulaNode* rhs) {
    InternKey key{kind, name, lhs ? lhs->id + 1 : 0, rhs ? rhs->id + 1 : 0};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();

    auto node = std::make_unique<FormulaNode>();
    node->kind = kind;
    node->name = std::move(name);
    node->lhs = lhs;
    node->rhs = rhs;
    node->id = static_cast<std::uint32_t>(table_.size());
    switch (kind) {
      case Kind::atom:
        node->key = node->name;
        break;
      case Kind::falsum:
        node->key = "false";
        break;
      case Kind::neg:
        node->size = 1 + lhs->size;
        node->degree = lhs->degree;
        node->key = "~ " + lhs->key;
        break;
      case Kind::conj:
        node->size = 1 + lhs->size + rhs->size;
        node->degree = std::max(lhs->degree, rhs->degree);
        node->key = "& " + lhs->key + " " + rhs->key;
        break;
      case Kind::box_a:
      case Kind::box_b:
        node->size = 1 + lhs->size;
        node->degree = 1 + lhs->degree;
        node->key = (kind == Kind::box_a ? "[a] " : "[b] ") + lhs->key;
        break;
    }
    const FormulaNode* raw = node.get();
    table_.emplace(std::move(key), std::move(node));
    return raw;
  }

 private:
  Interner() = default;
  std::mutex mutex_;
  std::unordered_map<InternKey, std::unique_ptr<FormulaNode>, InternKeyHash> table_;
};

}  // namespace detail

/// Immutable handle to an interned formula.
class Formula {
 public:
  static Formula atom(std::string name) {
    if (name.empty()) throw std::invalid_argument("atom name must be nonempty");
    return Formula(detail::Interner::instance().make(Kind::atom, std::move(name), nullptr, nullptr));
  }
  static Formula falsum() {
    return Formula(detail::Interner::instance().make(Kind::falsum, {}, nullptr, nullptr));
  }
  static Formula neg(Formula f) {
    const detail::FormulaNode* n = f.node_->negation.load(std::memory_order_acquire);
    if (!n) {
      n = detail::Interner::instance().make(Kind::neg, {}, f.node_, nullptr);
      f.node_->negation.store(n, std::memory_order_release);
    }
    return Formula(n);
  }
  static Formula conj(Formula l, Formula r) {
    return Formula(detail::Interner::instance().make(Kind::conj, {}, l.node_, r.node_));
  }
  static Formula box(Modality m, Formula f) {
    return Formula(detail::Interner::instance().make(m == Modality::a ? Kind::box_a : Kind::box_b,
                                                     {}, f.node_, nullptr));
  }

  // Derived connectives. They expand immediately; the AST never stores them.
  static Formula top() { return neg(falsum()); }
  static Formula disj(Formula l, Formula r) { return neg(conj(neg(l), neg(r))); }
  static Formula implies(Formula l, Formula r) { return neg(conj(l, neg(r))); }
  static Formula diamond(Modality m, Formula f) { return neg(box(m, neg(f))); }

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::atom; }
  bool is_falsum() const { return kind() == Kind::falsum; }
  bool is_neg() const { return kind() == Kind::neg; }
  bool is_conj() const { return kind() == Kind::conj; }
  bool is_box() const { return kind() == Kind::box_a || kind() == Kind::box_b; }
  bool is_box(Modality m) const { return kind() == (m == Modality::a ? Kind::box_a : Kind::box_b); }
  Modality modality() const {
    if (!is_box()) throw std::logic_error("modality() on a non-box formula");
    return kind() == Kind::box_a ? Modality::a : Modality::b;
  }

  const std::string& name() const { return node_->name; }
  /// Operand of a negation or box; left operand of a conjunction.
  Formula child() const { return Formula(node_->lhs); }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }

  std::size_t size() const { return node_->size; }
  /// Modal depth: both boxes count alike.
  std::size_t degree() const { return node_->degree; }
  std::uint32_t id() const { return node_->id; }
  const std::string& key() const { return node_->key; }

  bool operator==(const Formula& o) const { return node_ == o.node_; }
  bool operator!=(const Formula& o) const { return node_ != o.node_; }

 private:
  explicit Formula(const detail::FormulaNode* n) : node_(n) {}
  const detail::FormulaNode* node_;
};

inline std::size_t degree(Formula f) { return f.degree(); }
inline std::size_t size(Formula f) { return f.size(); }

/// Canonical total order: by size, then by preorder serialization.
struct CanonicalLess {
  bool operator()(const Formula& x, const Formula& y) const {
    if (x == y) return false;
    if (x.size() != y.size()) return x.size() < y.size();
    return x.key() < y.key();
  }
};

/// If `f` is ~[m]psi, returns psi.
inline bool match_negated_box(Formula f, Modality m, Formula* body = nullptr) {
  if (!f.is_neg() || !f.child().is_box(m)) return false;
  if (body) *body = f.child().child();
  return true;
}

/// Finite set of formulas stored in canonical order.
class FormulaSet {
 public:
  using const_iterator = std::vector<Formula>::const_iterator;

  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> items) : items_(items) { normalize(); }
  explicit FormulaSet(std::vector<Formula> items) : items_(std::move(items)) { normalize(); }

  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  std::size_t count() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Formula>& elements() const { return items_; }

  bool contains(Formula f) const {
    return std::binary_search(items_.begin(), items_.end(), f, CanonicalLess{});
  }

  /// Returns true if `f` was not present.
  bool insert(Formula f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f, CanonicalLess{});
    if (it != items_.end() && *it == f) return false;
    items_.insert(it, f);
    return true;
  }

  bool subset_of(const FormulaSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end(),
                         CanonicalLess{});
  }

  FormulaSet united(const FormulaSet& other) const {
    FormulaSet out;
    out.items_.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out.items_), CanonicalLess{});
    return out;
  }
  FormulaSet intersected(const FormulaSet& other) const {
    FormulaSet out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out.items_), CanonicalLess{});
    return out;
  }
  FormulaSet minus(const FormulaSet& other) const {
    FormulaSet out;
    std::set_difference(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                        std::back_inserter(out.items_), CanonicalLess{});
    return out;
  }

  /// d(w); zero for the empty set.
  std::size_t degree() const {
    std::size_t d = 0;
    for (Formula f : items_) d = std::max(d, f.degree());
    return d;
  }
  /// |w|; zero for the empty set.
  std::size_t size() const {
    std::size_t s = 0;
    for (Formula f : items_) s += f.size();
    return s;
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Formula f : items_) h = (h ^ f.id()) * 0x100000001b3ULL;
    return h;
  }

  bool operator==(const FormulaSet& o) const { return items_ == o.items_; }
  bool operator!=(const FormulaSet& o) const { return !(*this == o); }
  bool operator<(const FormulaSet& o) const {
    return std::lexicographical_compare(items_.begin(), items_.end(), o.items_.begin(),
                                        o.items_.end(), CanonicalLess{});
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end(), CanonicalLess{});
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }
  std::vector<Formula> items_;
};

namespace detail {

template <bool Modal>
FormulaSet close(const FormulaSet& w) {
  FormulaSet out = w;
  std::vector<Formula> work(w.begin(), w.end());
  auto add = [&](Formula f) {
    if (out.insert(f)) work.push_back(f);
  };
  while (!work.empty()) {
    Formula f = work.back();
    work.pop_back();
    if (f.is_conj()) {
      add(f.left());
      add(f.right());
    } else if (f.is_neg()) {
      Formula g = f.child();
      add(g);
      if (g.is_conj()) {
        add(Formula::neg(g.left()));
        add(Formula::neg(g.right()));
      } else if (Modal && g.is_box()) {
        add(Formula::neg(g.child()));
      }
    } else if (Modal && f.is_box()) {
      add(f.child());
    }
  }
  return out;
}

}  // namespace detail

/// Closure under the classical decomposition rules only.
inline FormulaSet csf(const FormulaSet& w) { return detail::close<false>(w); }

/// Closure under the classical rules plus the box / negated-box rules.
inline FormulaSet sf(const FormulaSet& w) { return detail::close<true>(w); }

}  // namespace wdsat

template <>
struct std::hash<wdsat::Formula> {
  std::size_t operator()(const wdsat::Formula& f) const noexcept { return f.id(); }
};

template <>
struct std::hash<wdsat::FormulaSet> {
  std::size_t operator()(const wdsat::FormulaSet& s) const noexcept { return s.hash(); }
};

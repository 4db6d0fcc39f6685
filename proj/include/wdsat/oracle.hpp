#pragma once

// Ground truth at desk scale: exhaustive search for small models, and
// exhaustive / random formula generation.
//
// The model search evaluates a formula on one frame under all valuations at
// once. An extension is stored world-major: block x has one bit per
// valuation, and bit v of block x says whether the formula holds at world x
// under valuation v.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "formula.hpp"
#include "kripke.hpp"
#include "saturation.hpp"

namespace wdsat {

struct SearchBudget {
  std::size_t max_worlds = 3;
  /// Frame-valuation pairs examined before giving up; 0 means unlimited.
  std::uint64_t max_models = 0;
};

class OracleBudgetExhausted : public std::runtime_error {
 public:
  OracleBudgetExhausted() : std::runtime_error("oracle model budget exhausted") {}
};

/// Atom names in order of first occurrence (preorder).
inline std::vector<std::string> atoms_of(Formula f) {
  std::vector<std::string> out;
  std::vector<Formula> work{f};
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    switch (g.kind()) {
      case Kind::atom:
        if (std::find(out.begin(), out.end(), g.name()) == out.end()) out.push_back(g.name());
        break;
      case Kind::falsum:
        break;
      case Kind::conj:
        work.push_back(g.right());
        work.push_back(g.left());
        break;
      default:
        work.push_back(g.child());
    }
  }
  return out;
}

namespace detail {

// A frame on worlds 0..n-1, relations as successor bitmasks.
struct SmallFrame {
  std::size_t n;
  std::uint8_t ra[4];
  std::uint8_t rb[4];
};

inline bool small_transitive(const std::uint8_t* r, std::size_t n) {
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if ((r[x] >> y & 1) && (r[y] & ~r[x])) return false;
  return true;
}

inline bool small_weakly_dense(const SmallFrame& fr) {
  for (std::size_t s = 0; s < fr.n; ++s)
    for (std::size_t t = 0; t < fr.n; ++t) {
      if (!(fr.ra[s] >> t & 1)) continue;
      bool ok = false;
      for (std::size_t u = 0; u < fr.n && !ok; ++u) ok = (fr.ra[s] >> u & 1) && (fr.rb[u] >> t & 1);
      if (!ok) return false;
    }
  return true;
}

inline bool small_all_reachable(const SmallFrame& fr) {
  std::uint8_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint8_t next = 0;
    for (std::size_t x = 0; x < fr.n; ++x)
      if (frontier >> x & 1) next |= fr.ra[x] | fr.rb[x];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << fr.n) - 1;
}

// Relabelling worlds other than the root gives isomorphic models; keep the
// lexicographically smallest labelling only.
inline bool small_canonical(const SmallFrame& fr) {
  std::vector<std::size_t> perm(fr.n);
  for (std::size_t i = 0; i < fr.n; ++i) perm[i] = i;
  auto code = [&](const std::vector<std::size_t>& p) {
    std::uint64_t c = 0;
    for (std::size_t x = 0; x < fr.n; ++x) {
      std::uint8_t a = 0, b = 0;
      for (std::size_t y = 0; y < fr.n; ++y) {
        if (fr.ra[x] >> y & 1) a |= std::uint8_t(1u << p[y]);
        if (fr.rb[x] >> y & 1) b |= std::uint8_t(1u << p[y]);
      }
      c |= (std::uint64_t(a) | std::uint64_t(b) << 4) << (8 * p[x]);
    }
    return c;
  };
  const std::uint64_t mine = code(perm);
  while (std::next_permutation(perm.begin() + 1, perm.end()))
    if (code(perm) < mine) return false;
  return true;
}

inline const std::vector<SmallFrame>& small_frames(std::size_t n, LogicId logic) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::string>, std::vector<SmallFrame>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n, logic.name());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<SmallFrame> frames;
  const std::size_t bits = n * n;
  for (std::uint32_t a = 0; a < (1u << bits); ++a)
    for (std::uint32_t b = 0; b < (1u << bits); ++b) {
      SmallFrame fr{n, {}, {}};
      for (std::size_t x = 0; x < n; ++x) {
        fr.ra[x] = std::uint8_t(a >> (x * n) & ((1u << n) - 1));
        fr.rb[x] = std::uint8_t(b >> (x * n) & ((1u << n) - 1));
      }
      if (!small_all_reachable(fr) || !small_canonical(fr)) continue;
      if (logic.de && !small_weakly_dense(fr)) continue;
      if (logic.four_a && !small_transitive(fr.ra, n)) continue;
      if (logic.four_b && !small_transitive(fr.rb, n)) continue;
      frames.push_back(fr);
    }
  return cache.emplace(key, std::move(frames)).first->second;
}

class BlockEvaluator {
 public:
  BlockEvaluator(Formula f, std::size_t n) : n_(n), atoms_(atoms_of(f)) {
    vbits_ = n * atoms_.size();
    if (vbits_ > 20) throw std::invalid_argument("too many atoms for the model oracle");
    nv_ = std::size_t(1) << vbits_;
    words_ = (nv_ + 63) / 64;
    tail_ = nv_ % 64 == 0 ? ~std::uint64_t(0) : (std::uint64_t(1) << (nv_ % 64)) - 1;
    collect(f);
    // Atoms and falsum do not depend on the frame.
    for (std::size_t i = 0; i < order_.size(); ++i)
      if (order_[i].is_atom() || order_[i].is_falsum()) eval(i, SmallFrame{n, {}, {}});
  }

  std::size_t valuations() const { return nv_; }
  const std::vector<std::string>& atoms() const { return atoms_; }

  /// A valuation index under which `f` holds at world 0, if any.
  std::optional<std::size_t> root_witness(const SmallFrame& fr) {
    for (std::size_t i = 0; i < order_.size(); ++i)
      if (!order_[i].is_atom() && !order_[i].is_falsum()) eval(i, fr);
    const std::uint64_t* root = &ext_.back()[0];
    for (std::size_t w = 0; w < words_; ++w)
      if (root[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(root[w]));
    return std::nullopt;
  }

  bool atom_true(std::size_t valuation, std::size_t atom, std::size_t world) const {
    return valuation >> (atom * n_ + world) & 1;
  }

 private:
  std::size_t index_of(Formula g) const { return pos_.at(g); }

  void collect(Formula f) {
    if (pos_.count(f)) return;
    if (f.is_conj()) {
      collect(f.left());
      collect(f.right());
    } else if (!f.is_atom() && !f.is_falsum()) {
      collect(f.child());
    }
    pos_[f] = order_.size();
    order_.push_back(f);
    ext_.emplace_back(n_ * words_, 0);
  }

  void eval(std::size_t i, const SmallFrame& fr) {
    Formula g = order_[i];
    std::vector<std::uint64_t>& out = ext_[i];
    switch (g.kind()) {
      case Kind::atom: {
        const std::size_t a =
            std::find(atoms_.begin(), atoms_.end(), g.name()) - atoms_.begin();
        for (std::size_t x = 0; x < n_; ++x) {
          const std::size_t bit = a * n_ + x;
          for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = 0;
            if (bit >= 6) {
              word = (w >> (bit - 6) & 1) ? ~std::uint64_t(0) : 0;
            } else {
              for (std::size_t v = 0; v < 64; ++v)
                if (v >> bit & 1) word |= std::uint64_t(1) << v;
            }
            out[x * words_ + w] = word & mask(w);
          }
        }
        break;
      }
      case Kind::falsum:
        std::fill(out.begin(), out.end(), 0);
        break;
      case Kind::neg: {
        const auto& c = ext_[index_of(g.child())];
        for (std::size_t x = 0; x < n_; ++x)
          for (std::size_t w = 0; w < words_; ++w)
            out[x * words_ + w] = ~c[x * words_ + w] & mask(w);
        break;
      }
      case Kind::conj: {
        const auto& l = ext_[index_of(g.left())];
        const auto& r = ext_[index_of(g.right())];
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = l[k] & r[k];
        break;
      }
      case Kind::box_a:
      case Kind::box_b: {
        const auto& c = ext_[index_of(g.child())];
        const std::uint8_t* rel = g.kind() == Kind::box_a ? fr.ra : fr.rb;
        for (std::size_t x = 0; x < n_; ++x)
          for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t acc = mask(w);
            for (std::size_t y = 0; y < n_; ++y)
              if (rel[x] >> y & 1) acc &= c[y * words_ + w];
            out[x * words_ + w] = acc;
          }
        break;
      }
    }
  }

  std::uint64_t mask(std::size_t w) const { return w + 1 == words_ ? tail_ : ~std::uint64_t(0); }

  std::size_t n_;
  std::vector<std::string> atoms_;
  std::size_t vbits_ = 0, nv_ = 1, words_ = 1;
  std::uint64_t tail_ = 0;
  std::unordered_map<Formula, std::size_t> pos_;
  std::vector<Formula> order_;
  std::vector<std::vector<std::uint64_t>> ext_;
};

}  // namespace detail

/// First model (fewest worlds first) of `f` over a frame of `logic` with at
/// most budget.max_worlds worlds, all reachable from the root 0. Absence is not
/// a proof of unsatisfiability. Throws OracleBudgetExhausted.
inline std::optional<KripkeModel> bounded_sat(Formula f, LogicId logic, SearchBudget budget = {}) {
  if (budget.max_worlds < 1 || budget.max_worlds > 3)
    throw std::invalid_argument("the model oracle handles 1 to 3 worlds");
  std::uint64_t examined = 0;
  for (std::size_t n = 1; n <= budget.max_worlds; ++n) {
    detail::BlockEvaluator ev(f, n);
    for (const detail::SmallFrame& fr : detail::small_frames(n, logic)) {
      examined += ev.valuations();
      if (budget.max_models && examined > budget.max_models) throw OracleBudgetExhausted();
      auto v = ev.root_witness(fr);
      if (!v) continue;
      KripkeModel m;
      m.root = 0;
      for (std::size_t x = 0; x < n; ++x) {
        m.worlds.insert(WorldId(x));
        for (std::size_t y = 0; y < n; ++y) {
          if (fr.ra[x] >> y & 1) m.ra.insert({WorldId(x), WorldId(y)});
          if (fr.rb[x] >> y & 1) m.rb.insert({WorldId(x), WorldId(y)});
        }
        for (std::size_t a = 0; a < ev.atoms().size(); ++a)
          if (ev.atom_true(*v, a, x)) m.val[ev.atoms()[a]].insert(WorldId(x));
      }
      return m;
    }
  }
  return std::nullopt;
}

/// p, q, r, ... then p4, p5, ...
inline std::string atom_name(std::size_t i) {
  static const char* names[] = {"p", "q", "r", "s", "t"};
  return i < 5 ? names[i] : "p" + std::to_string(i);
}

/// Every formula over `atoms` atoms with size at most `max_size`, in
/// canonical order.
inline std::vector<Formula> enumerate_corpus(std::size_t atoms, std::size_t max_size) {
  std::vector<std::vector<Formula>> by_size(max_size + 1);
  if (max_size >= 1) {
    for (std::size_t i = 0; i < atoms; ++i) by_size[1].push_back(Formula::atom(atom_name(i)));
    by_size[1].push_back(Formula::falsum());
  }
  for (std::size_t s = 2; s <= max_size; ++s) {
    auto& out = by_size[s];
    for (Formula g : by_size[s - 1]) {
      out.push_back(Formula::neg(g));
      out.push_back(Formula::box(Modality::a, g));
      out.push_back(Formula::box(Modality::b, g));
    }
    for (std::size_t l = 1; l + 1 < s; ++l)
      for (Formula x : by_size[l])
        for (Formula y : by_size[s - 1 - l]) out.push_back(Formula::conj(x, y));
  }
  std::vector<Formula> all;
  for (auto& layer : by_size) {
    std::sort(layer.begin(), layer.end(), CanonicalLess{});
    all.insert(all.end(), layer.begin(), layer.end());
  }
  return all;
}

/// A random formula of size exactly `size` over `atoms` atoms.
template <typename Rng>
Formula random_formula_of_size(Rng& rng, std::size_t atoms, std::size_t size) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  if (size <= 1) {
    std::size_t i = pick(0, atoms);
    return i == atoms ? Formula::falsum() : Formula::atom(atom_name(i));
  }
  if (size == 2 || pick(0, 1) == 0) {
    Formula c = random_formula_of_size(rng, atoms, size - 1);
    switch (pick(0, 2)) {
      case 0:
        return Formula::neg(c);
      case 1:
        return Formula::box(Modality::a, c);
      default:
        return Formula::box(Modality::b, c);
    }
  }
  std::size_t l = pick(1, size - 2);
  Formula x = random_formula_of_size(rng, atoms, l);
  return Formula::conj(x, random_formula_of_size(rng, atoms, size - 1 - l));
}

/// Like random_formula_of_size, but builds diamonds, disjunctions and boxes
/// as units so that modal obligations are frequent. The size is approximate.
template <typename Rng>
Formula random_modal_formula(Rng& rng, std::size_t atoms, std::size_t size) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  if (size <= 2) {
    Formula a = Formula::atom(atom_name(pick(0, atoms - 1)));
    return pick(0, 1) ? a : Formula::neg(a);
  }
  const Modality m = pick(0, 1) ? Modality::a : Modality::b;
  switch (pick(0, 4)) {
    case 0:
      return Formula::diamond(m, random_modal_formula(rng, atoms, size - 3));
    case 1:
      return Formula::box(m, random_modal_formula(rng, atoms, size - 1));
    case 2: {
      std::size_t l = pick(1, size - 2);
      return Formula::disj(random_modal_formula(rng, atoms, l),
                           random_modal_formula(rng, atoms, size - 1 - l));
    }
    default: {
      std::size_t l = pick(1, size - 2);
      return Formula::conj(random_modal_formula(rng, atoms, l),
                           random_modal_formula(rng, atoms, size - 1 - l));
    }
  }
}

template <typename Rng>
Formula random_formula(Rng& rng, std::size_t atoms, std::size_t max_size) {
  return random_formula_of_size(
      rng, atoms, std::uniform_int_distribution<std::size_t>(1, max_size)(rng));
}

}  // namespace wdsat

#pragma once

// Windows: finite b-chains of a-successors witnessing a diamond-a obligation
// under weak density, their continuations, and repetition detection.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "formula.hpp"
#include "saturation.hpp"

namespace wdsat {

/// Cells w_0 ... w_k of a window for `parent`. When `goal` is set it is the
/// obligation that w_0 must contain (seeded into w_0's saturation input).
struct Window {
  std::vector<FormulaSet> cells;
  FormulaSet parent;
  std::optional<Formula> goal;

  std::size_t k() const { return cells.empty() ? 0 : cells.size() - 1; }

  /// Cell-wise equality; parent and goal do not take part.
  bool same_cells(const Window& other) const { return cells == other.cells; }
};

/// Input set from which cell `i` of a window for `parent` is saturated,
/// given its right neighbour (nullptr for the last cell).
inline FormulaSet window_cell_input(const FormulaSet& parent, const FormulaSet* right,
                                    bool first, const std::optional<Formula>& goal,
                                    LogicId logic) {
  FormulaSet in = box_minus(parent, Modality::a, logic);
  if (right) in = in.united(box_minus(*right, Modality::b, logic));
  if (first && goal) in.insert(*goal);
  return in;
}

/// Reference predicate for the window clauses. With 4(b) the last cell must
/// also absorb its own b-projection, so that it can carry a reflexive b-edge.
inline bool is_window(const Window& t, LogicId logic) {
  if (t.cells.empty()) return false;
  const std::size_t k = t.k();
  for (std::size_t i = 0; i <= k; ++i) {
    const FormulaSet* right = i < k ? &t.cells[i + 1] : nullptr;
    FormulaSet in = window_cell_input(t.parent, right, i == 0, t.goal, logic);
    if (i == k && logic.four_b) in = in.united(box_minus(t.cells[k], Modality::b, logic));
    if (!is_ccs(t.cells[i], in)) return false;
  }
  if (logic.four_b) {
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = i; j <= k; ++j)
        if (!box_minus(t.cells[j], Modality::b, logic)
                 .subset_of(box_minus(t.cells[i], Modality::b, logic)))
          return false;
  }
  return true;
}

/// Continuation clauses: `next` = (w~_1 .. w~_{k+1}) stored at indices 0..k,
/// with w~_i in CCS(box_b^-(w~_{i+1}) u w_i) for 1 <= i <= k, and w~_{k+1} in
/// CCS(box_a^-(parent)).
inline bool is_continuation(const Window& prev, const Window& next, LogicId logic) {
  if (prev.cells.size() != next.cells.size() || prev.parent != next.parent) return false;
  const std::size_t k = prev.k();
  if (!is_ccs(next.cells[k], box_minus(prev.parent, Modality::a, logic))) return false;
  for (std::size_t i = 1; i <= k; ++i) {
    FormulaSet in = box_minus(next.cells[i], Modality::b, logic).united(prev.cells[i]);
    if (!is_ccs(next.cells[i - 1], in)) return false;
  }
  return true;
}

/// (w_0, w~_1, ..., w~_{k+1}): the (k+1)-sequence obtained by prefixing a
/// continuation with the first cell of its predecessor.
inline Window splice(const Window& prev, const Window& next) {
  Window out{{prev.cells.front()}, prev.parent, prev.goal};
  out.cells.insert(out.cells.end(), next.cells.begin(), next.cells.end());
  return out;
}

namespace detail {

using SetStream = std::function<std::optional<FormulaSet>()>;

inline SetStream ccs_stream(FormulaSet input) {
  auto s = std::make_shared<CcsStream>(std::move(input));
  return [s]() { return s->next(); };
}

// Sets v in CCS(base u box_b^-(v)), found by repeatedly saturating
// v u box_b^-(v) until the b-projection is absorbed. Needs 4(b): the
// projection then only grows along the iteration.
inline SetStream b_fixpoint_stream(FormulaSet base, LogicId logic) {
  struct State {
    std::vector<CcsStream> stack;
    std::unordered_set<FormulaSet> yielded;
    LogicId logic;
  };
  auto st = std::make_shared<State>();
  st->logic = logic;
  st->stack.emplace_back(std::move(base));
  return [st]() -> std::optional<FormulaSet> {
    while (!st->stack.empty()) {
      auto v = st->stack.back().next();
      if (!v) {
        st->stack.pop_back();
        continue;
      }
      FormulaSet proj = box_minus(*v, Modality::b, st->logic);
      if (proj.subset_of(*v)) {
        if (st->yielded.insert(*v).second) return v;
        continue;
      }
      st->stack.emplace_back(v->united(proj));
    }
    return std::nullopt;
  };
}

}  // namespace detail

/// First cells already known to fail; shared by the streams of one search.
using RejectedCells = std::unordered_set<FormulaSet>;

/// Depth-first enumeration of windows, built right to left: the stream for
/// each cell depends on the cells already chosen to its right.
///
/// A consumer may report that the first cell of the window it just received
/// is no good (reject_last). The stream then skips that set as a first cell,
/// and once every window under some chosen cell c has been rejected it skips
/// any later cell at the same index with the same b-projection as c, since
/// the cells to the left of c depend on c only through that projection.
/// Without feedback the stream yields every window.
class WindowStream {
 public:
  enum class Mode { fresh, two_window, continuation };

  static WindowStream fresh(FormulaSet parent, Formula goal, std::size_t k, LogicId logic) {
    return WindowStream(Mode::fresh, std::move(parent), goal, k, logic, {});
  }
  static WindowStream two_window(FormulaSet parent, Formula goal, LogicId logic) {
    return WindowStream(Mode::two_window, std::move(parent), goal, 1, logic, {});
  }
  static WindowStream continuation(const Window& prev, LogicId logic) {
    return WindowStream(Mode::continuation, prev.parent, std::nullopt, prev.k(), logic,
                        prev.cells);
  }

  /// Shares a rejection set with other streams (e.g. all streams of one
  /// obligation).
  void share_rejections(std::shared_ptr<RejectedCells> rejected) { rejected_ = std::move(rejected); }

  /// The first cell of the window last returned by next() is no good.
  void reject_last() {
    if (!pending_) return;
    pending_ = false;
    rejected_->insert(chosen_.back());
  }

  std::optional<Window> next() {
    if (!started_) {
      started_ = true;
      streams_.push_back(make_stream(0));
    } else if (chosen_.size() == levels()) {
      settle();
      chosen_.pop_back();
      alive_.pop_back();
    }
    while (!streams_.empty()) {
      auto item = streams_.back()();
      if (!item) {
        streams_.pop_back();
        if (!chosen_.empty()) {
          if (!alive_.back()) no_good_.insert(key(chosen_.size() - 1, chosen_.back()));
          const bool alive = alive_.back();
          chosen_.pop_back();
          alive_.pop_back();
          if (alive && !alive_.empty()) alive_.back() = true;
        }
        continue;
      }
      const std::size_t level = chosen_.size();
      if (level + 1 == levels()) {
        if (rejected_->count(*item)) continue;
      } else if (no_good_.count(key(level, *item))) {
        continue;
      }
      chosen_.push_back(std::move(*item));
      alive_.push_back(false);
      if (chosen_.size() == levels()) {
        pending_ = true;
        return build();
      }
      streams_.push_back(make_stream(chosen_.size()));
    }
    return std::nullopt;
  }

 private:
  WindowStream(Mode mode, FormulaSet parent, std::optional<Formula> goal, std::size_t k,
               LogicId logic, std::vector<FormulaSet> prev_cells)
      : mode_(mode),
        parent_(std::move(parent)),
        goal_(goal),
        k_(k),
        logic_(logic),
        prev_cells_(std::move(prev_cells)),
        rejected_(std::make_shared<RejectedCells>()) {}

  std::size_t levels() const { return k_ + 1; }

  // An unrejected window keeps every level above it alive.
  void settle() {
    if (pending_)
      for (std::size_t j = 0; j + 1 < alive_.size(); ++j) alive_[j] = true;
    pending_ = false;
  }

  struct PrefixKey {
    std::size_t level;
    FormulaSet projection;
    bool operator==(const PrefixKey&) const = default;
  };
  struct PrefixKeyHash {
    std::size_t operator()(const PrefixKey& k) const noexcept {
      return k.projection.hash() * 31 + k.level;
    }
  };

  PrefixKey key(std::size_t level, const FormulaSet& cell) const {
    return {level, box_minus(cell, Modality::b, logic_)};
  }

  // Level j fills cell index k - j; its right neighbour is chosen_[j - 1].
  detail::SetStream make_stream(std::size_t level) const {
    const std::size_t index = k_ - level;
    const FormulaSet* right = level == 0 ? nullptr : &chosen_[level - 1];
    switch (mode_) {
      case Mode::fresh:
        return detail::ccs_stream(window_cell_input(parent_, right, index == 0, goal_, logic_));
      case Mode::two_window:
        if (index == 1)
          return detail::b_fixpoint_stream(box_minus(parent_, Modality::a, logic_), logic_);
        return detail::ccs_stream(window_cell_input(parent_, right, true, goal_, logic_));
      case Mode::continuation:
        if (!right) return detail::ccs_stream(box_minus(parent_, Modality::a, logic_));
        return detail::ccs_stream(
            box_minus(*right, Modality::b, logic_).united(prev_cells_[index + 1]));
    }
    return {};
  }

  Window build() const {
    Window w{{chosen_.rbegin(), chosen_.rend()}, parent_, goal_};
    return w;
  }

  Mode mode_;
  FormulaSet parent_;
  std::optional<Formula> goal_;
  std::size_t k_;
  LogicId logic_;
  std::vector<FormulaSet> prev_cells_;
  std::shared_ptr<RejectedCells> rejected_;
  bool started_ = false;
  bool pending_ = false;
  std::vector<detail::SetStream> streams_;
  std::vector<FormulaSet> chosen_;
  std::vector<bool> alive_;
  std::unordered_set<PrefixKey, PrefixKeyHash> no_good_;
};

/// Windows for `w` whose first cell contains `goal`: 2-windows when 4(b) is in
/// the logic, d(w)-windows otherwise. An empty stream means none exists.
inline WindowStream find_window(const FormulaSet& w, Formula goal, LogicId logic) {
  if (logic.four_b) return WindowStream::two_window(w, goal, logic);
  return WindowStream::fresh(w, goal, w.degree(), logic);
}

inline WindowStream find_continuation(const Window& t, LogicId logic) {
  return WindowStream::continuation(t, logic);
}

/// Index of the first window in `seen` with the same cells as `next`.
inline std::optional<std::size_t> find_repeat(const std::vector<Window>& seen, const Window& next) {
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i].same_cells(next)) return i;
  return std::nullopt;
}

inline bool window_sequence_loops(const std::vector<Window>& seen, const Window& next) {
  return find_repeat(seen, next).has_value();
}

}  // namespace wdsat

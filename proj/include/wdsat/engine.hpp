#pragma once

// Backtracking decision procedures.
//
// Logics without weak density use the context-stack tableau: every
// diamond-obligation opens an heir context, and a context already on the
// stack closes the branch as a backward loop. Logics with weak density
// satisfy diamond-a obligations through windows: a chain of windows, each a
// continuation of the previous one, is followed until it repeats (or, in fuel
// mode, for N steps). With 4(b) a single 2-window suffices.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "countermodel.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "saturation.hpp"
#include "trace.hpp"
#include "windows.hpp"

namespace wdsat {

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t nodes)
      : std::runtime_error("node budget of " + std::to_string(nodes) + " exhausted") {}
};

struct EngineOptions {
  enum class Termination { loop_detect, fuel };
  Termination termination = Termination::loop_detect;
  std::size_t fuel = 64;
  std::uint64_t budget_nodes = 10'000'000;
  /// Treat a repeated context as a refutation instead of a backward loop.
  bool literal_loop_rule = false;
};

struct SatStats {
  std::size_t max_stack_depth = 0;
  std::size_t max_window_chain = 0;
  std::uint64_t ccs_enumerated = 0;
  std::uint64_t nodes_visited = 0;
  std::uint64_t windows_enumerated = 0;
  std::uint64_t context_loops = 0;
  std::uint64_t fact1_checks = 0;
  std::uint64_t fact1_violations = 0;
  /// Plain KDe only: recursive calls whose set is not of smaller degree.
  std::uint64_t degree_violations = 0;
  /// Fuel mode: chains that ran out of fuel before repeating.
  std::uint64_t fuel_chains_without_loop = 0;
  /// Largest |w| / |u| over the saturations drawn, u nonempty.
  double max_ccs_ratio = 0.0;

  void merge(const SatStats& o) {
    max_stack_depth = std::max(max_stack_depth, o.max_stack_depth);
    max_window_chain = std::max(max_window_chain, o.max_window_chain);
    ccs_enumerated += o.ccs_enumerated;
    nodes_visited += o.nodes_visited;
    windows_enumerated += o.windows_enumerated;
    context_loops += o.context_loops;
    fact1_checks += o.fact1_checks;
    fact1_violations += o.fact1_violations;
    degree_violations += o.degree_violations;
    fuel_chains_without_loop += o.fuel_chains_without_loop;
    max_ccs_ratio = std::max(max_ccs_ratio, o.max_ccs_ratio);
  }
};

struct SatResult {
  bool satisfiable = false;
  std::optional<KripkeModel> model;
  /// certify() of the extracted model; false when no model could be built.
  bool certified = false;
  SatStats stats;
};

/// One decision run. Not thread-safe; use one Engine per thread.
class Engine {
 public:
  Engine(LogicId logic, EngineOptions opts = {}) : logic_(logic), opts_(opts) {
    if (!logic.supported()) throw std::invalid_argument("unsupported logic " + logic.name());
  }

  /// Decides a saturated root set; resets the trace and the stack but keeps
  /// statistics and the node budget running.
  bool run(const FormulaSet& w0, std::size_t root_degree) {
    trace_ = Trace{};
    sigma_ = ContextStack{};
    root_degree_ = root_degree;
    NodeId root = enter(w0);
    return sat(root, w0);
  }
  bool run(const FormulaSet& w0) { return run(w0, w0.degree()); }

  /// Dispatches on the logic.
  bool sat(NodeId id, const FormulaSet& w) { return logic_.de ? sat_kde(id, w) : sat_kab(id, w); }

  /// Every diamond of either modality gets a heir; repeated contexts loop back.
  bool sat_kab(NodeId id, const FormulaSet& w) {
    for (Modality x : {Modality::a, Modality::b})
      for (Formula f : w) {
        Formula body = f;
        if (match_negated_box(f, x, &body) && !obligation(id, w, x, Formula::neg(body)))
          return false;
      }
    return true;
  }

  /// b-diamonds as in the plain tableau, then a-diamonds through windows.
  bool sat_kde(NodeId id, const FormulaSet& w) {
    for (Modality x : {Modality::b, Modality::a})
      for (Formula f : w) {
        Formula body = f;
        if (match_negated_box(f, x, &body) && !obligation(id, w, x, Formula::neg(body)))
          return false;
      }
    return true;
  }

  /// Follows continuations of `t` (a window for `parent`) under the current
  /// stack. Returns whether the chain closes.
  bool sat_window(NodeId parent, ObligationId ob, const Window& t) {
    ObligationMemo memo;
    return (logic_.four_b ? two_window(parent, ob, t) : start_chain(parent, ob, t, memo)) ==
           ChainOutcome::closed;
  }

  /// Logs a node and charges it to the budget.
  NodeId enter(const FormulaSet& w) {
    if (++stats_.nodes_visited > opts_.budget_nodes) throw BudgetExhausted(opts_.budget_nodes);
    NodeId id = next_node_++;
    trace_.append(event::NodeEntered{id, w});
    return id;
  }

  ObligationId new_obligation() { return next_obligation_++; }

  const Trace& trace() const { return trace_; }
  const SatStats& stats() const { return stats_; }
  ContextStack& sigma() { return sigma_; }
  LogicId logic() const { return logic_; }

 private:
  bool uses_loop_check() const { return !logic_.de || logic_.has_transitivity(); }
  bool plain_kde() const { return logic_.de && !logic_.has_transitivity(); }
  bool fuel_mode() const { return opts_.termination == EngineOptions::Termination::fuel; }

  void note_ccs(const FormulaSet& w, const FormulaSet& u) {
    ++stats_.ccs_enumerated;
    if (u.size() > 0)
      stats_.max_ccs_ratio =
          std::max(stats_.max_ccs_ratio, static_cast<double>(w.size()) / static_cast<double>(u.size()));
  }

  void note_recursion(const FormulaSet& caller, const FormulaSet& callee) {
    if (plain_kde() && callee.degree() >= caller.degree() && !caller.empty())
      ++stats_.degree_violations;
  }

  // Heir alternation: entry n of another type than entry n-1 must have a
  // smaller degree than entry n-2 (the root input counts as entry -1).
  void push_context(Context ctx, Anchor anchor) {
    const auto& es = sigma_.entries();
    const std::size_t n = es.size();
    if (n >= 1 && es[n - 1].ctx.heir != ctx.heir) {
      ++stats_.fact1_checks;
      std::size_t before = n >= 2 ? es[n - 2].ctx.degree() : root_degree_;
      if (ctx.degree() >= before) ++stats_.fact1_violations;
    }
    sigma_.push(std::move(ctx), anchor);
    stats_.max_stack_depth = std::max(stats_.max_stack_depth, sigma_.depth());
  }

  bool obligation(NodeId from, const FormulaSet& w, Modality x, Formula goal) {
    Context ctx{x, box_minus(w, x, logic_), goal};
    if (uses_loop_check()) {
      if (const auto* earlier = sigma_.find(ctx)) {
        ++stats_.context_loops;
        if (opts_.literal_loop_rule) return false;
        trace_.append(event::ContextLoop{from, ctx, earlier->anchor});
        return true;
      }
    }
    bool windowed = logic_.de && x == Modality::a;
    ObligationId ob = windowed ? new_obligation() : 0;
    push_context(ctx, windowed ? Anchor::chain(ob) : Anchor::node(0));
    bool ok = windowed ? windows_for(from, w, ob, goal) : successor(from, w, x, goal);
    sigma_.pop();
    return ok;
  }

  bool successor(NodeId from, const FormulaSet& w, Modality x, Formula goal) {
    FormulaSet input = sigma_.last().ctx.context_set;
    input.insert(goal);
    CcsStream stream(input);
    while (auto v = stream.next()) {
      note_ccs(*v, input);
      const std::size_t mark = trace_.mark();
      NodeId n = enter(*v);
      sigma_.last().anchor = Anchor::node(n);
      note_recursion(w, *v);
      if (sat(n, *v)) {
        trace_.append(event::Edge{x, from, n});
        return true;
      }
      trace_.truncate(mark);
    }
    return false;
  }

  enum class ChainOutcome { closed, first_cell_failed, dead };

  struct CellsHash {
    std::size_t operator()(const std::vector<FormulaSet>& cells) const noexcept {
      std::size_t h = 0;
      for (const FormulaSet& c : cells) h = h * 1000003 ^ c.hash();
      return h;
    }
  };

  // Search state of one a-obligation. The stack below the obligation's entry
  // does not change while it is explored, so failures are final: a rejected
  // cell fails Sat again, and a dead window reaches no repetition (in fuel
  // mode: no path of the recorded length).
  struct ObligationMemo {
    std::shared_ptr<RejectedCells> rejected = std::make_shared<RejectedCells>();
    std::unordered_map<std::vector<FormulaSet>, std::size_t, CellsHash> dead;

    bool is_dead(const Window& t, std::size_t fuel) const {
      auto it = dead.find(t.cells);
      return it != dead.end() && fuel >= it->second;
    }
    void mark_dead(const Window& t, std::size_t fuel) {
      auto [it, fresh] = dead.emplace(t.cells, fuel);
      if (!fresh) it->second = std::min(it->second, fuel);
    }
  };

  std::size_t chain_fuel() const { return fuel_mode() ? opts_.fuel : 0; }

  bool windows_for(NodeId from, const FormulaSet& w, ObligationId ob, Formula goal) {
    ObligationMemo memo;
    WindowStream stream = find_window(w, goal, logic_);
    stream.share_rejections(memo.rejected);
    while (auto t = stream.next()) {
      ++stats_.windows_enumerated;
      if (memo.is_dead(*t, chain_fuel())) continue;
      const std::size_t mark = trace_.mark();
      ChainOutcome out = logic_.four_b ? two_window(from, ob, *t) : start_chain(from, ob, *t, memo);
      if (out == ChainOutcome::closed) return true;
      trace_.truncate(mark);
      if (out == ChainOutcome::first_cell_failed) stream.reject_last();
      else memo.mark_dead(*t, chain_fuel());
    }
    return false;
  }

  ChainOutcome start_chain(NodeId parent, ObligationId ob, const Window& t, ObligationMemo& memo) {
    std::vector<Window> seen;
    std::vector<NodeId> cells;
    return chain(parent, ob, t, seen, cells, opts_.fuel, memo);
  }

  NodeId enter_cell(const FormulaSet& parent, const FormulaSet& cell) {
    note_ccs(cell, box_minus(parent, Modality::a, logic_));
    note_recursion(parent, cell);
    return enter(cell);
  }

  // w R_a w0, w R_a w1, w1 R_b w0, w1 R_b w1.
  ChainOutcome two_window(NodeId parent, ObligationId ob, const Window& t) {
    const std::size_t mark = trace_.mark();
    NodeId n0 = enter_cell(t.parent, t.cells[0]);
    if (!sat(n0, t.cells[0])) {
      trace_.truncate(mark);
      return ChainOutcome::first_cell_failed;
    }
    NodeId n1 = enter_cell(t.parent, t.cells[1]);
    if (!sat(n1, t.cells[1])) {
      trace_.truncate(mark);
      return ChainOutcome::dead;
    }
    trace_.append(event::WindowChain{parent, ob, {n0, n1}, 1});
    stats_.max_window_chain = std::max<std::size_t>(stats_.max_window_chain, 2);
    return ChainOutcome::closed;
  }

  // Depth-first over continuations. `seen` and `cells` hold the windows and
  // first-cell nodes of the current path.
  ChainOutcome chain(NodeId parent, ObligationId ob, const Window& t, std::vector<Window>& seen,
                     std::vector<NodeId>& cells, std::size_t fuel, ObligationMemo& memo) {
    if (fuel_mode() && fuel == 0) {
      close_chain(parent, ob, seen, cells, std::nullopt);
      return ChainOutcome::closed;
    }
    const std::size_t mark = trace_.mark();
    NodeId c = enter_cell(t.parent, t.cells[0]);
    if (!sat(c, t.cells[0])) {
      trace_.truncate(mark);
      return ChainOutcome::first_cell_failed;
    }
    seen.push_back(t);
    cells.push_back(c);
    stats_.max_window_chain = std::max(stats_.max_window_chain, seen.size());
    WindowStream conts = find_continuation(t, logic_);
    conts.share_rejections(memo.rejected);
    const std::size_t next_fuel = fuel_mode() ? fuel - 1 : 0;
    while (auto next = conts.next()) {
      ++stats_.windows_enumerated;
      if (!fuel_mode()) {
        if (auto h = find_repeat(seen, *next)) {
          close_chain(parent, ob, seen, cells, *h);
          return ChainOutcome::closed;
        }
      }
      if (memo.is_dead(*next, next_fuel)) continue;
      const std::size_t inner = trace_.mark();
      ChainOutcome out = chain(parent, ob, *next, seen, cells, fuel_mode() ? fuel - 1 : fuel, memo);
      if (out == ChainOutcome::closed) return out;
      trace_.truncate(inner);
      if (out == ChainOutcome::first_cell_failed) conts.reject_last();
      else memo.mark_dead(*next, next_fuel);
    }
    seen.pop_back();
    cells.pop_back();
    trace_.truncate(mark);
    return ChainOutcome::dead;
  }

  // Logs the chain with its loop-back index. In fuel mode the first
  // repetition along the path is located after the fact, and the chain is cut
  // there.
  void close_chain(NodeId parent, ObligationId ob, const std::vector<Window>& seen,
                   const std::vector<NodeId>& cells, std::optional<std::size_t> loop_back) {
    std::vector<NodeId> kept = cells;
    std::size_t back = kNoLoop;
    if (loop_back) {
      back = *loop_back;
    } else {
      for (std::size_t j = 1; j < seen.size() && back == kNoLoop; ++j)
        for (std::size_t i = 0; i < j; ++i)
          if (seen[i].same_cells(seen[j])) {
            back = i;
            kept.resize(j);
            break;
          }
      if (back == kNoLoop) ++stats_.fuel_chains_without_loop;
    }
    trace_.append(event::WindowChain{parent, ob, std::move(kept), back});
  }

  LogicId logic_;
  EngineOptions opts_;
  Trace trace_;
  ContextStack sigma_;
  SatStats stats_;
  std::size_t root_degree_ = 0;
  NodeId next_node_ = 0;
  ObligationId next_obligation_ = 0;
};

/// Satisfiability of `f` in `logic`. Tries each root saturation of {f}; on
/// success the model is extracted from the trace and certified.
/// Throws BudgetExhausted when the node budget runs out.
inline SatResult decide(Formula f, LogicId logic, EngineOptions opts = {}) {
  SatResult r;
  Engine engine(logic, opts);
  CcsStream roots(FormulaSet{f});
  while (auto w0 = roots.next()) {
    if (!engine.run(*w0, f.degree())) continue;
    r.satisfiable = true;
    try {
      r.model = build_countermodel(engine.trace(), logic);
      r.certified = certify(*r.model, f, logic);
    } catch (const ModelError&) {
      r.model.reset();
      r.certified = false;
    }
    break;
  }
  r.stats = engine.stats();
  return r;
}

inline bool valid(Formula f, LogicId logic, EngineOptions opts = {}) {
  return !decide(Formula::neg(f), logic, opts).satisfiable;
}

}  // namespace wdsat

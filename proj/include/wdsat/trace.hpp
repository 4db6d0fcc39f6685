#pragma once

// Contexts, the context stack, and the event log a decision run leaves
// behind for countermodel extraction.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "formula.hpp"

namespace wdsat {

using NodeId = std::uint32_t;
using ObligationId = std::uint32_t;

/// (heir type, u, goal): u is the box-minus image handed to the heir.
struct Context {
  Modality heir;
  FormulaSet context_set;
  Formula goal;

  bool operator==(const Context& o) const {
    return heir == o.heir && goal == o.goal && context_set == o.context_set;
  }

  /// d(u u {goal}), the measure the heir-alternation lemma talks about.
  std::size_t degree() const { return std::max(context_set.degree(), goal.degree()); }
};

/// What a backward loop should point at: a single node, or every cell of the
/// window chain of an a-obligation.
struct Anchor {
  enum class Kind : std::uint8_t { node, chain } kind = Kind::node;
  std::uint32_t id = 0;

  static Anchor node(NodeId n) { return {Kind::node, n}; }
  static Anchor chain(ObligationId o) { return {Kind::chain, o}; }
  bool operator==(const Anchor&) const = default;
};

class ContextStack {
 public:
  struct Entry {
    Context ctx;
    Anchor anchor;
  };

  void push(Context c, Anchor anchor) { entries_.push_back({std::move(c), anchor}); }
  void pop() { entries_.pop_back(); }
  std::size_t depth() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& last() const { return entries_.back(); }
  Entry& last() { return entries_.back(); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Earliest entry equal to `c` (equal contexts share the heir type).
  const Entry* find(const Context& c) const {
    for (const Entry& e : entries_)
      if (e.ctx == c) return &e;
    return nullptr;
  }

 private:
  std::vector<Entry> entries_;
};

namespace event {

struct NodeEntered {
  NodeId id;
  FormulaSet set;
};

struct Edge {
  Modality modality;
  NodeId from;
  NodeId to;
};

/// First cells c_0..c_{m-1} of the windows of one chain. c_{j+1} R_b c_j and
/// the chain closes with c_{loop_back} R_b c_{m-1}; the parent sees every cell.
struct WindowChain {
  NodeId parent;
  ObligationId obligation;
  std::vector<NodeId> cells;
  std::size_t loop_back;
};

struct ContextLoop {
  NodeId from;
  Context matched;
  Anchor target;
};

}  // namespace event

using TraceEvent =
    std::variant<event::NodeEntered, event::Edge, event::WindowChain, event::ContextLoop>;

inline constexpr std::size_t kNoLoop = std::numeric_limits<std::size_t>::max();

/// Append-only log; failed branches are cut off with truncate().
class Trace {
 public:
  void append(TraceEvent e) { events_.push_back(std::move(e)); }
  std::size_t mark() const { return events_.size(); }
  void truncate(std::size_t mark) { events_.resize(mark); }
  const std::vector<TraceEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

 private:
  std::vector<TraceEvent> events_;
};

}  // namespace wdsat

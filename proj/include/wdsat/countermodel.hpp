#pragma once

// Turns the trace of a successful run into a finite Kripke model.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kripke.hpp"
#include "saturation.hpp"
#include "trace.hpp"

namespace wdsat {

/// Worlds are node occurrences, not set contents. Window chains become
/// b-cycles (the periodic quotient of the infinite window); context loops
/// become backward edges. Relations are closed transitively as the logic asks.
/// Throws ModelError on a malformed trace.
inline KripkeModel build_countermodel(const Trace& trace, LogicId logic) {
  std::map<NodeId, const FormulaSet*> nodes;
  std::map<ObligationId, const event::WindowChain*> chains;
  std::optional<NodeId> root;
  for (const TraceEvent& ev : trace.events()) {
    if (auto* n = std::get_if<event::NodeEntered>(&ev)) {
      if (!nodes.emplace(n->id, &n->set).second) throw ModelError("node logged twice");
      if (!root) root = n->id;
    } else if (auto* c = std::get_if<event::WindowChain>(&ev)) {
      if (!chains.emplace(c->obligation, c).second) throw ModelError("window chain logged twice");
    }
  }
  if (!root) throw ModelError("trace has no nodes");

  auto need = [&](NodeId id) {
    if (!nodes.count(id)) throw ModelError("edge references unknown node " + std::to_string(id));
    return id;
  };

  KripkeModel m;
  m.root = *root;
  for (auto [id, set] : nodes) m.worlds.insert(id);

  for (const TraceEvent& ev : trace.events()) {
    if (auto* e = std::get_if<event::Edge>(&ev)) {
      m.rel(e->modality).insert({need(e->from), need(e->to)});
    } else if (auto* c = std::get_if<event::WindowChain>(&ev)) {
      const auto& cells = c->cells;
      if (cells.empty()) throw ModelError("empty window chain");
      if (c->loop_back >= cells.size())
        throw ModelError("window chain without a repetition cannot be closed");
      for (NodeId cell : cells) m.ra.insert({need(c->parent), need(cell)});
      for (std::size_t j = 0; j + 1 < cells.size(); ++j) m.rb.insert({cells[j + 1], cells[j]});
      m.rb.insert({cells[c->loop_back], cells.back()});
    } else if (auto* l = std::get_if<event::ContextLoop>(&ev)) {
      need(l->from);
      if (l->target.kind == Anchor::Kind::node) {
        m.rel(l->matched.heir).insert({l->from, need(l->target.id)});
      } else {
        auto it = chains.find(l->target.id);
        if (it == chains.end()) throw ModelError("loop into an unknown window chain");
        for (NodeId cell : it->second->cells) m.ra.insert({l->from, cell});
      }
    }
  }

  for (auto [id, set] : nodes)
    for (Formula f : *set)
      if (f.is_atom()) m.val[f.name()].insert(id);

  m = reachable_part(m);
  if (logic.four_a) m.ra = transitive_closure(m.ra);
  if (logic.four_b) m.rb = transitive_closure(m.rb);

  // Dense renumbering, in order of first occurrence.
  std::map<NodeId, WorldId> dense;
  for (WorldId w : m.worlds) dense.emplace(w, static_cast<WorldId>(dense.size()));
  KripkeModel out;
  for (auto [old, id] : dense) out.worlds.insert(id);
  out.root = dense.at(m.root);
  for (Modality mod : {Modality::a, Modality::b})
    for (auto [s, t] : m.rel(mod)) out.rel(mod).insert({dense.at(s), dense.at(t)});
  for (const auto& [atom, ws] : m.val)
    for (WorldId w : ws) out.val[atom].insert(dense.at(w));
  return out;
}

}  // namespace wdsat

#pragma once

// Finite Kripke models over two relations: semantics, frame conditions,
// certification and the JSON document format
//   {"worlds":[ids],"root":id,"ra":[[i,j]],"rb":[[i,j]],"val":{"p":[ids]}}

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "formula.hpp"
#include "saturation.hpp"

namespace wdsat {

using WorldId = std::uint32_t;
using Relation = std::set<std::pair<WorldId, WorldId>>;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KripkeModel {
  std::set<WorldId> worlds;
  WorldId root = 0;
  Relation ra;
  Relation rb;
  std::map<std::string, std::set<WorldId>> val;

  const Relation& rel(Modality m) const { return m == Modality::a ? ra : rb; }
  Relation& rel(Modality m) { return m == Modality::a ? ra : rb; }

  bool operator==(const KripkeModel&) const = default;

  /// Throws ModelError unless relations, valuation and root stay inside `worlds`.
  void validate() const {
    if (worlds.empty()) throw ModelError("model has no worlds");
    if (!worlds.count(root)) throw ModelError("root is not a world");
    for (const Relation* r : {&ra, &rb})
      for (auto [s, t] : *r)
        if (!worlds.count(s) || !worlds.count(t)) throw ModelError("edge outside the worlds");
    for (const auto& [atom, ws] : val)
      for (WorldId w : ws)
        if (!worlds.count(w)) throw ModelError("valuation of '" + atom + "' outside the worlds");
  }
};

/// Bottom-up evaluator; caches the extension of every subformula it visits.
class ModelChecker {
 public:
  explicit ModelChecker(const KripkeModel& m) : m_(m) {
    m.validate();
    ids_.assign(m.worlds.begin(), m.worlds.end());
    for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = i;
    for (Modality mod : {Modality::a, Modality::b}) {
      auto& succ = succ_[static_cast<int>(mod)];
      succ.assign(ids_.size(), {});
      for (auto [s, t] : m.rel(mod)) succ[index_.at(s)].push_back(index_.at(t));
    }
  }

  bool holds(WorldId x, Formula f) {
    auto it = index_.find(x);
    if (it == index_.end()) throw ModelError("unknown world " + std::to_string(x));
    return extension(f)[it->second];
  }

  /// Truth value of `f` at every world, in increasing world-id order.
  const std::vector<bool>& extension(Formula f) {
    auto cached = memo_.find(f);
    if (cached != memo_.end()) return cached->second;
    std::vector<bool> ext(ids_.size(), false);
    switch (f.kind()) {
      case Kind::atom: {
        auto v = m_.val.find(f.name());
        if (v != m_.val.end())
          for (WorldId w : v->second) ext[index_.at(w)] = true;
        break;
      }
      case Kind::falsum:
        break;
      case Kind::neg: {
        const auto& c = extension(f.child());
        for (std::size_t i = 0; i < ext.size(); ++i) ext[i] = !c[i];
        break;
      }
      case Kind::conj: {
        std::vector<bool> l = extension(f.left());
        const auto& r = extension(f.right());
        for (std::size_t i = 0; i < ext.size(); ++i) ext[i] = l[i] && r[i];
        break;
      }
      case Kind::box_a:
      case Kind::box_b: {
        const auto& c = extension(f.child());
        const auto& succ = succ_[f.kind() == Kind::box_a ? 0 : 1];
        for (std::size_t i = 0; i < ext.size(); ++i)
          ext[i] = std::all_of(succ[i].begin(), succ[i].end(), [&](std::size_t j) { return c[j]; });
        break;
      }
    }
    return memo_.emplace(f, std::move(ext)).first->second;
  }

 private:
  const KripkeModel& m_;
  std::vector<WorldId> ids_;
  std::unordered_map<WorldId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_[2];
  std::unordered_map<Formula, std::vector<bool>> memo_;
};

inline bool model_check(const KripkeModel& m, WorldId x, Formula f) {
  return ModelChecker(m).holds(x, f);
}

/// sR_a t implies some u with sR_a u and uR_b t.
inline bool is_weakly_dense(const KripkeModel& m) {
  std::map<WorldId, std::vector<WorldId>> a_succ;
  for (auto [s, t] : m.ra) a_succ[s].push_back(t);
  for (auto [s, t] : m.ra) {
    bool witnessed = false;
    for (WorldId u : a_succ[s])
      if (m.rb.count({u, t})) {
        witnessed = true;
        break;
      }
    if (!witnessed) return false;
  }
  return true;
}

inline bool is_transitive(const Relation& rel) {
  std::map<WorldId, std::vector<WorldId>> succ;
  for (auto [s, t] : rel) succ[s].push_back(t);
  for (auto [s, t] : rel)
    for (WorldId u : succ[t])
      if (!rel.count({s, u})) return false;
  return true;
}

inline Relation transitive_closure(const Relation& rel) {
  Relation out = rel;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<WorldId, std::vector<WorldId>> succ;
    for (auto [s, t] : out) succ[s].push_back(t);
    std::vector<std::pair<WorldId, WorldId>> add;
    for (auto [s, t] : out)
      for (WorldId u : succ[t])
        if (!out.count({s, u})) add.emplace_back(s, u);
    for (auto& e : add) changed |= out.insert(e).second;
  }
  return out;
}

inline bool frame_satisfies_logic(const KripkeModel& m, LogicId logic) {
  if (logic.de && !is_weakly_dense(m)) return false;
  if (logic.four_a && !is_transitive(m.ra)) return false;
  if (logic.four_b && !is_transitive(m.rb)) return false;
  return true;
}

/// Frame conditions of `logic` hold and `f` is true at the root.
inline bool certify(const KripkeModel& m, Formula f, LogicId logic) {
  try {
    return frame_satisfies_logic(m, logic) && model_check(m, m.root, f);
  } catch (const ModelError&) {
    return false;
  }
}

/// Submodel generated by the root.
inline KripkeModel reachable_part(const KripkeModel& m) {
  std::map<WorldId, std::vector<WorldId>> succ;
  for (const Relation* r : {&m.ra, &m.rb})
    for (auto [s, t] : *r) succ[s].push_back(t);
  std::set<WorldId> seen{m.root};
  std::vector<WorldId> work{m.root};
  while (!work.empty()) {
    WorldId s = work.back();
    work.pop_back();
    for (WorldId t : succ[s])
      if (seen.insert(t).second) work.push_back(t);
  }
  KripkeModel out;
  out.worlds = seen;
  out.root = m.root;
  for (Modality mod : {Modality::a, Modality::b})
    for (auto e : m.rel(mod))
      if (seen.count(e.first)) out.rel(mod).insert(e);
  for (const auto& [atom, ws] : m.val)
    for (WorldId w : ws)
      if (seen.count(w)) out.val[atom].insert(w);
  return out;
}

inline nlohmann::json to_json(const KripkeModel& m) {
  nlohmann::json j;
  j["worlds"] = std::vector<WorldId>(m.worlds.begin(), m.worlds.end());
  j["root"] = m.root;
  auto edges = [](const Relation& r) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto [s, t] : r) arr.push_back({s, t});
    return arr;
  };
  j["ra"] = edges(m.ra);
  j["rb"] = edges(m.rb);
  nlohmann::json val = nlohmann::json::object();
  for (const auto& [atom, ws] : m.val) val[atom] = std::vector<WorldId>(ws.begin(), ws.end());
  j["val"] = val;
  return j;
}

/// Parses and validates a model document. Throws ModelError.
inline KripkeModel model_from_json(const nlohmann::json& j) {
  try {
    KripkeModel m;
    for (const auto& w : j.at("worlds")) m.worlds.insert(w.get<WorldId>());
    m.root = j.at("root").get<WorldId>();
    for (const char* key : {"ra", "rb"}) {
      Relation& r = std::string(key) == "ra" ? m.ra : m.rb;
      for (const auto& e : j.at(key)) {
        if (!e.is_array() || e.size() != 2) throw ModelError(std::string("bad edge in ") + key);
        r.insert({e[0].get<WorldId>(), e[1].get<WorldId>()});
      }
    }
    for (const auto& [atom, ws] : j.at("val").items())
      for (const auto& w : ws) m.val[atom].insert(w.get<WorldId>());
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace wdsat

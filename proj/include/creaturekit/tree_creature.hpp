#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "creaturekit/norm.hpp"
#include "creaturekit/partial_fn.hpp"

namespace creaturekit {

/// A local tree creature at node eta: its possibilities are one-step extensions of eta.
struct TreeCreature {
  Seq eta;
  Norm nor;
  std::vector<Value> successors;  // sorted values a with eta^a in pos
  std::vector<Value> excluded;    // system payload, empty for tabulated creatures

  std::vector<Seq> pos_set() const {
    std::vector<Seq> out;
    for (Value a : successors) {
      Seq s = eta;
      s.push_back(a);
      out.push_back(std::move(s));
    }
    return out;
  }

  Level level() const { return static_cast<Level>(eta.size()); }
};

inline TreeCreature make_tabulated_tree_creature(const HSpec& h, Seq eta, std::vector<Value> successors, Norm nor) {
  for (std::size_t i = 0; i < eta.size(); ++i)
    require(h.contains(static_cast<Level>(i), eta[i]), "tree creature root outside the alphabet");
  std::sort(successors.begin(), successors.end());
  successors.erase(std::unique(successors.begin(), successors.end()), successors.end());
  require(!successors.empty(), "tree creature must have a possibility");
  for (Value a : successors)
    require(h.contains(static_cast<Level>(eta.size()), a), "tree creature successor outside the alphabet");
  return TreeCreature{std::move(eta), std::move(nor), std::move(successors), {}};
}

}  // namespace creaturekit

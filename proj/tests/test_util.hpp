#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "creaturekit/partial_fn.hpp"

namespace cktest {

using namespace creaturekit;

inline PartialFn pf(std::initializer_list<std::pair<int, int>> es, const HSpec& h) {
  return PartialFn(std::vector<PartialFn::Entry>(es.begin(), es.end()), h);
}

inline Family fam(std::initializer_list<std::initializer_list<std::pair<int, int>>> fs, const HSpecPtr& h) {
  std::vector<PartialFn> v;
  for (auto f : fs) v.push_back(pf(f, *h));
  return Family(std::move(v), h);
}

}  // namespace cktest

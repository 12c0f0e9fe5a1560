#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "creaturekit/error.hpp"

namespace creaturekit {

using Level = int;
using Value = int;
/// A finite sequence; position i holds a value in H(i).
using Seq = std::vector<Value>;

/// Finite prefix of the alphabet sequence: level i carries values {0,...,sizes[i]-1}.
class HSpec {
 public:
  HSpec() = default;
  explicit HSpec(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    for (std::size_t i = 0; i < sizes_.size(); ++i)
      require(sizes_[i] >= 2, "alphabet size at level " + std::to_string(i) + " must be at least 2");
  }

  std::size_t length() const noexcept { return sizes_.size(); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }

  int size(Level level) const {
    require(level >= 0 && static_cast<std::size_t>(level) < sizes_.size(),
            "level " + std::to_string(level) + " outside the alphabet prefix");
    return sizes_[static_cast<std::size_t>(level)];
  }

  bool contains(Level level, Value v) const {
    return level >= 0 && static_cast<std::size_t>(level) < sizes_.size() && v >= 0 &&
           v < sizes_[static_cast<std::size_t>(level)];
  }

  /// Product of sizes over [lo, hi), saturating at `limit`.
  std::uint64_t product(Level lo, Level hi, std::uint64_t limit = UINT64_MAX) const {
    std::uint64_t p = 1;
    for (Level i = lo; i < hi; ++i) {
      const auto s = static_cast<std::uint64_t>(size(i));
      if (p > limit / s) return limit;
      p *= s;
    }
    return p;
  }

  bool operator==(const HSpec&) const = default;

 private:
  std::vector<int> sizes_;
};

using HSpecPtr = std::shared_ptr<const HSpec>;

inline HSpecPtr make_hspec(std::vector<int> sizes) {
  return std::make_shared<const HSpec>(std::move(sizes));
}

/// Finite nonempty partial function from levels to values, kept sorted by level.
class PartialFn {
 public:
  using Entry = std::pair<Level, Value>;

  PartialFn(std::vector<Entry> entries, const HSpec& h) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    require(!entries_.empty(), "partial function must have nonempty domain");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto [lv, v] = entries_[i];
      require(i == 0 || entries_[i - 1].first != lv,
              "partial function assigns level " + std::to_string(lv) + " twice");
      require(h.contains(lv, v), "partial function entry (" + std::to_string(lv) + "," +
                                     std::to_string(v) + ") outside the alphabet");
    }
  }

  /// Builds from entries already sorted by level, nonempty and duplicate-free.
  static PartialFn from_sorted(std::vector<Entry> entries) {
    PartialFn f;
    f.entries_ = std::move(entries);
    return f;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Level min_level() const { return entries_.front().first; }
  Level max_level() const { return entries_.back().first; }

  std::vector<Level> domain() const {
    std::vector<Level> d;
    d.reserve(entries_.size());
    for (const auto& e : entries_) d.push_back(e.first);
    return d;
  }

  std::optional<Value> at(Level level) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{level, INT32_MIN});
    if (it != entries_.end() && it->first == level) return it->second;
    return std::nullopt;
  }

  /// True when this function is a restriction of `f`.
  bool subfunction_of(const PartialFn& f) const {
    return std::includes(f.entries_.begin(), f.entries_.end(), entries_.begin(), entries_.end());
  }

  /// True when every level of the domain lies in [lo, hi).
  bool within(Level lo, Level hi) const { return min_level() >= lo && max_level() < hi; }

  /// True when `seq` (indexed from `offset`) agrees with this function on its whole domain.
  bool contained_in(std::span<const Value> seq, Level offset = 0) const {
    for (const auto& [lv, v] : entries_) {
      const Level i = lv - offset;
      if (i < 0 || static_cast<std::size_t>(i) >= seq.size() || seq[static_cast<std::size_t>(i)] != v)
        return false;
    }
    return true;
  }

  auto operator<=>(const PartialFn&) const = default;

 private:
  PartialFn() = default;
  std::vector<Entry> entries_;
};

/// f restricted to [lo, hi); empty when no level of dom f falls inside.
inline std::optional<PartialFn> restrict(const PartialFn& f, Level lo, Level hi) {
  std::vector<PartialFn::Entry> out;
  for (const auto& e : f.entries())
    if (e.first >= lo && e.first < hi) out.push_back(e);
  if (out.empty()) return std::nullopt;
  return PartialFn::from_sorted(std::move(out));
}

/// f restricted to the given sorted level set (which must meet dom f).
inline PartialFn restrict_to(const PartialFn& f, std::span<const Level> levels) {
  std::vector<PartialFn::Entry> out;
  for (const auto& e : f.entries())
    if (std::binary_search(levels.begin(), levels.end(), e.first)) out.push_back(e);
  require(!out.empty(), "restriction to a set disjoint from the domain");
  return PartialFn::from_sorted(std::move(out));
}

/// Nonempty finite set of partial functions over a common alphabet.
class Family {
 public:
  Family(std::vector<PartialFn> members, HSpecPtr h) : members_(std::move(members)), h_(std::move(h)) {
    require(h_ != nullptr, "family without alphabet");
    require(!members_.empty(), "family must be nonempty");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (const auto& f : members_)
      for (const auto& [lv, v] : f.entries())
        require(h_->contains(lv, v), "family member outside the alphabet");
  }

  const std::vector<PartialFn>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const HSpec& hspec() const noexcept { return *h_; }
  const HSpecPtr& hspec_ptr() const noexcept { return h_; }

  /// Membership in the family space over [lo, hi).
  bool within(Level lo, Level hi) const {
    return std::all_of(members_.begin(), members_.end(), [&](const PartialFn& f) { return f.within(lo, hi); });
  }

  std::size_t total_domain() const {
    std::size_t t = 0;
    for (const auto& f : members_) t += f.size();
    return t;
  }

  bool contains(const PartialFn& f) const { return std::binary_search(members_.begin(), members_.end(), f); }

  bool operator==(const Family& o) const { return members_ == o.members_ && *h_ == *o.h_; }

 private:
  std::vector<PartialFn> members_;
  HSpecPtr h_;
};

/// d0 refines into d1: every member of d0 extends some member of d1.
inline bool refines(const Family& d0, const Family& d1) {
  require(d0.hspec() == d1.hspec(), "refinement between families over different alphabets");
  for (const auto& f : d0.members()) {
    bool found = false;
    for (const auto& g : d1.members())
      if (g.subfunction_of(f)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

inline bool pairwise_disjoint_domains(std::span<const PartialFn> fs) {
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      const auto& a = fs[i].entries();
      const auto& b = fs[j].entries();
      std::size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x].first == b[y].first) return false;
        if (a[x].first < b[y].first) ++x; else ++y;
      }
    }
  return true;
}

}  // namespace creaturekit

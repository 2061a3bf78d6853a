#pragma once

#include <cstdint>

#include "mdlocal/graph.hpp"
#include "mdlocal/rng.hpp"

namespace mdlocal {

/// Random total order over vertices, materialized lazily.
///
/// Each vertex v receives a uniform draw a_v derived from (seed, v) alone, so
/// only vertices actually touched are ever drawn and repeated or concurrent
/// lookups agree. Ties on a_v are broken by vertex id.
class VertexOrder {
 public:
  explicit VertexOrder(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t raw_draw(VertexId v) const { return rng::draw(seed_, v); }
  double draw(VertexId v) const { return rng::to_unit(raw_draw(v)); }

  // True when u ranks at or above v. Reflexive; total.
  bool precedes(VertexId u, VertexId v) const {
    if (u == v) return true;
    const auto au = raw_draw(u);
    const auto av = raw_draw(v);
    return au != av ? au > av : u > v;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace mdlocal

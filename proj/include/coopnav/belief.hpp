#pragma once

#include <cstdint>
#include <vector>

#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"

namespace coopnav {

enum class EdgeStatus : std::uint8_t { unknown, open, blocked };

struct EdgeKnowledge {
  EdgeStatus status = EdgeStatus::unknown;
  double fraction = 0.0;  // damage position, meaningful when blocked
  bool operator==(const EdgeKnowledge&) const = default;
};

// What one robot (or the shared channel) knows about edge statuses. Knowledge
// only moves from unknown to open or blocked.
class Belief {
 public:
  Belief() = default;
  explicit Belief(std::size_t edge_count) : edges_(edge_count) {}

  const EdgeKnowledge& operator[](EdgeIndex e) const { return edges_.at(e); }
  EdgeStatus status(EdgeIndex e) const { return edges_.at(e).status; }
  bool known(EdgeIndex e) const { return status(e) != EdgeStatus::unknown; }
  bool is_open(EdgeIndex e) const { return status(e) == EdgeStatus::open; }
  bool is_blocked(EdgeIndex e) const { return status(e) == EdgeStatus::blocked; }
  std::size_t edge_count() const { return edges_.size(); }

  // Records a discovery. Returns true if it added information; repeating an
  // identical discovery is a no-op and a contradicting one throws.
  bool learn(EdgeIndex e, const EdgeKnowledge& found) {
    if (found.status == EdgeStatus::unknown) throw Error("cannot learn an unknown status");
    if (found.status == EdgeStatus::blocked && !(found.fraction > 0.0 && found.fraction < 1.0)) {
      throw Error("blocked status needs a damage fraction in (0,1)");
    }
    EdgeKnowledge& current = edges_.at(e);
    if (current.status == EdgeStatus::unknown) {
      current = found;
      if (found.status == EdgeStatus::open) current.fraction = 0.0;
      if (found.status == EdgeStatus::blocked) blocked_.insert(e);
      return true;
    }
    if (current.status != found.status ||
        (found.status == EdgeStatus::blocked && current.fraction != found.fraction)) {
      throw Error("contradiction: edge status already known differently");
    }
    return false;
  }

  // Copies everything `other` knows that this belief does not. Returns the
  // newly learned edges in index order.
  std::vector<EdgeIndex> merge(const Belief& other) {
    std::vector<EdgeIndex> added;
    for (EdgeIndex e = 0; e < other.edges_.size(); ++e) {
      if (other.edges_[e].status != EdgeStatus::unknown && learn(e, other.edges_[e])) {
        added.push_back(e);
      }
    }
    return added;
  }

  const EdgeSet& blocked_edges() const { return blocked_; }

 private:
  std::vector<EdgeKnowledge> edges_;
  EdgeSet blocked_;
};

inline Belief apply_discovery(Belief belief, EdgeIndex e, const EdgeKnowledge& found) {
  belief.learn(e, found);
  return belief;
}

}  // namespace coopnav

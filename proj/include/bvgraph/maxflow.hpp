#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bvgraph {

/// Dinic max-flow on real capacities. After `max_flow`, `source_side`
/// returns the vertices reachable from the source in the residual network,
/// which is the unique inclusion-minimal minimum cut.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes);

  std::size_t num_nodes() const noexcept { return head_.size(); }

  /// One arc pair a->b / b->a with the given capacities (an undirected
  /// edge of weight w is add_edge(a, b, w, w)).
  void add_edge(std::size_t a, std::size_t b, double cap_ab, double cap_ba);
  /// Arc whose capacity exceeds every finite cut.
  void add_infinite_edge(std::size_t a, std::size_t b);

  double max_flow(std::size_t source, std::size_t sink);
  std::vector<std::uint8_t> source_side() const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t next;
    double cap;
  };

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t push_arc(std::size_t from, std::size_t to, double cap);
  bool build_levels(std::size_t source, std::size_t sink);

  std::vector<std::size_t> head_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> infinite_arcs_;
  std::vector<int> level_;
  double finite_total_ = 0.0;
  double eps_ = 0.0;
  std::size_t source_ = kNone;
};

}  // namespace bvgraph

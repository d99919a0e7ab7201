#include "bvgraph/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "bvgraph/error.hpp"

namespace bvgraph {

FlowNetwork::FlowNetwork(std::size_t nodes) : head_(nodes, kNone), level_(nodes, -1) {}

std::size_t FlowNetwork::push_arc(std::size_t from, std::size_t to, double cap) {
  arcs_.push_back({to, head_[from], cap});
  head_[from] = arcs_.size() - 1;
  return arcs_.size() - 1;
}

void FlowNetwork::add_edge(std::size_t a, std::size_t b, double cap_ab, double cap_ba) {
  if (a >= num_nodes() || b >= num_nodes()) throw Error(Errc::invalid_input, "flow edge outside network");
  if (!(cap_ab >= 0.0) || !(cap_ba >= 0.0) || !std::isfinite(cap_ab) || !std::isfinite(cap_ba)) {
    throw Error(Errc::invalid_weight, "flow capacities must be finite and nonnegative");
  }
  // arcs are stored in pairs so that arc ^ 1 is the reverse arc
  push_arc(a, b, cap_ab);
  push_arc(b, a, cap_ba);
  finite_total_ += cap_ab + cap_ba;
}

void FlowNetwork::add_infinite_edge(std::size_t a, std::size_t b) {
  if (a >= num_nodes() || b >= num_nodes()) throw Error(Errc::invalid_input, "flow edge outside network");
  infinite_arcs_.push_back(push_arc(a, b, 0.0));
  push_arc(b, a, 0.0);
}

bool FlowNetwork::build_levels(std::size_t source, std::size_t sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::deque<std::size_t> queue{source};
  level_[source] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t a = head_[v]; a != kNone; a = arcs_[a].next) {
      if (arcs_[a].cap > eps_ && level_[arcs_[a].to] < 0) {
        level_[arcs_[a].to] = level_[v] + 1;
        queue.push_back(arcs_[a].to);
      }
    }
  }
  return level_[sink] >= 0;
}

double FlowNetwork::max_flow(std::size_t source, std::size_t sink) {
  if (source >= num_nodes() || sink >= num_nodes() || source == sink) {
    throw Error(Errc::invalid_input, "flow needs distinct source and sink inside the network");
  }
  const double big = 2.0 * finite_total_ + 1.0;
  for (std::size_t a : infinite_arcs_) arcs_[a].cap = big;
  eps_ = 1e-13 * std::max(finite_total_, 1e-300);
  source_ = source;

  double flow = 0.0;
  std::vector<std::size_t> current(num_nodes());
  std::vector<std::size_t> path;
  while (build_levels(source, sink)) {
    current = head_;
    for (;;) {
      // advance/retreat search for one augmenting path in the level graph
      path.clear();
      std::size_t v = source;
      while (v != sink) {
        std::size_t& a = current[v];
        while (a != kNone && !(arcs_[a].cap > eps_ && level_[arcs_[a].to] == level_[v] + 1)) a = arcs_[a].next;
        if (a != kNone) {
          path.push_back(a);
          v = arcs_[a].to;
          continue;
        }
        level_[v] = -1;
        if (path.empty()) break;
        path.pop_back();
        v = path.empty() ? source : arcs_[path.back()].to;
        current[v] = arcs_[current[v]].next;
      }
      if (v != sink) break;
      double push = std::numeric_limits<double>::infinity();
      for (std::size_t a : path) push = std::min(push, arcs_[a].cap);
      for (std::size_t a : path) {
        arcs_[a].cap -= push;
        arcs_[a ^ 1].cap += push;
      }
      flow += push;
    }
  }
  return flow;
}

std::vector<std::uint8_t> FlowNetwork::source_side() const {
  if (source_ == kNone) throw Error(Errc::invalid_input, "source_side requested before max_flow");
  std::vector<std::uint8_t> side(num_nodes(), 0);
  std::vector<std::size_t> stack{source_};
  side[source_] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t a = head_[v]; a != kNone; a = arcs_[a].next) {
      if (arcs_[a].cap > eps_ && !side[arcs_[a].to]) {
        side[arcs_[a].to] = 1;
        stack.push_back(arcs_[a].to);
      }
    }
  }
  return side;
}

}  // namespace bvgraph

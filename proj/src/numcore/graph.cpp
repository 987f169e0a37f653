#include "wit/numcore/graph.hpp"

#include <string>

#include "wit/errors.hpp"

namespace wit::num {

const Tensor& BackwardContext::output() const { return graph_.nodes_[node_].value; }

const Tensor& BackwardContext::output_grad() const { return *graph_.nodes_[node_].grad; }

const Tensor& BackwardContext::input(std::size_t i) const {
  return graph_.nodes_[graph_.nodes_[node_].inputs.at(i)].value;
}

Tensor* BackwardContext::input_grad(std::size_t i) {
  const std::size_t id = graph_.nodes_[node_].inputs.at(i);
  if (!graph_.nodes_[id].requires_grad) return nullptr;
  return &graph_.grad_slot(id);
}

Var Graph::input(Tensor value) {
  if (!value.all_finite()) throw EvaluationError("non-finite graph input");
  nodes_.push_back(Node{std::move(value), std::nullopt, {}, {}, false, true});
  return Var{this, nodes_.size() - 1};
}

Var Graph::param(Tensor value) {
  if (!value.all_finite()) throw EvaluationError("non-finite parameter");
  nodes_.push_back(Node{std::move(value), std::nullopt, {}, {}, true, true});
  return Var{this, nodes_.size() - 1};
}

const Graph::Node& Graph::node(Var v) const {
  if (v.graph != this || v.id >= nodes_.size()) throw UsageError("variable belongs to another graph");
  return nodes_[v.id];
}

const Tensor& Graph::value(Var v) const { return node(v).value; }

const Tensor& Graph::grad(Var v) const {
  const Node& n = node(v);
  if (!n.grad) {
    // Leaves that the loss never reached report zeros.
    auto& slot = const_cast<Graph*>(this)->nodes_[v.id].grad;
    slot.emplace(n.value.shape());
  }
  return *nodes_[v.id].grad;
}

bool Graph::requires_grad(Var v) const { return node(v).requires_grad; }

Tensor& Graph::grad_slot(std::size_t id) {
  auto& g = nodes_[id].grad;
  if (!g) g.emplace(nodes_[id].value.shape());
  return *g;
}

Var Graph::record(Tensor value, std::vector<Var> inputs, BackwardFn fn) {
  if (!value.all_finite()) throw EvaluationError("operation produced non-finite values");
  Node n;
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    const Node& src = node(in);
    n.inputs.push_back(in.id);
    n.requires_grad = n.requires_grad || src.requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

void Graph::backward(Var loss) {
  const Node& root = node(loss);
  if (root.value.size() != 1) {
    throw UsageError("backward needs a scalar loss, got shape " + shape_string(root.value.shape()));
  }
  for (auto& n : nodes_) n.grad.reset();
  if (!root.requires_grad) return;
  grad_slot(loss.id)[0] = 1.0;
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.grad || !n.backward) continue;
    BackwardContext ctx(*this, id);
    n.backward(ctx);
  }
}

}  // namespace wit::num

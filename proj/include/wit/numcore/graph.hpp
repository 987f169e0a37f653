#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "wit/numcore/tensor.hpp"

namespace wit::num {

class Graph;

/// Handle to a node of a Graph. Cheap to copy; valid while its graph lives.
struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;
};

/// What a node's local-gradient closure sees during the reverse sweep.
class BackwardContext {
 public:
  const Tensor& output() const;
  const Tensor& output_grad() const;
  const Tensor& input(std::size_t i) const;
  /// Gradient accumulator for input i, or nullptr when that input does not
  /// need a gradient. Accumulators start at zero and are added to.
  Tensor* input_grad(std::size_t i);

 private:
  friend class Graph;
  BackwardContext(Graph& g, std::size_t node) : graph_(g), node_(node) {}
  Graph& graph_;
  std::size_t node_;
};

using BackwardFn = std::function<void(BackwardContext&)>;

/// Tape of operation records. Nodes are appended in evaluation order, which
/// is a topological order, and backward walks them in reverse exactly once.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Constant input; never receives a gradient.
  Var input(Tensor value);
  /// Leaf whose gradient is reported by backward.
  Var param(Tensor value);

  const Tensor& value(Var v) const;
  /// Gradient of the last backward's loss w.r.t. v (zeros if v was not
  /// reached).
  const Tensor& grad(Var v) const;
  bool requires_grad(Var v) const;

  /// Reverse sweep from a scalar node. Clears gradients from any earlier
  /// sweep first.
  void backward(Var loss);

  /// Records an operation. The closure runs only if some input needs a
  /// gradient.
  Var record(Tensor value, std::vector<Var> inputs, BackwardFn fn);

  std::size_t size() const { return nodes_.size(); }

 private:
  friend class BackwardContext;

  struct Node {
    Tensor value;
    std::optional<Tensor> grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    bool is_leaf = false;
  };

  const Node& node(Var v) const;
  Tensor& grad_slot(std::size_t id);

  std::vector<Node> nodes_;
};

}  // namespace wit::num

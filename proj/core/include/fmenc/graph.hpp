#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "fmenc/tensor.hpp"

namespace fmenc {

using Var = std::int32_t;

// Reverse-mode tape. Nodes only reference earlier nodes, so creation order is
// a topological order and the graph is acyclic by construction. A graph is
// built for one forward pass and discarded; backward may run once.
template <class S>
class GraphT {
 public:
  struct Node {
    TensorT<S> value;
    TensorT<S> grad;  // allocated lazily during backward
    std::vector<Var> parents;
    std::function<void(GraphT&, Node&)> backward_rule;
    const char* op = "";
    bool needs_grad = false;
    bool is_param = false;
  };

  // Leaves.
  Var input(TensorT<S> v, const char* op = "input");
  Var param(TensorT<S> v);

  // Escape hatch for custom rules (and for negative tests of the checker).
  Var make_node(TensorT<S> value, std::vector<Var> parents,
                std::function<void(GraphT&, Node&)> backward_rule, const char* op = "custom");

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var neg(Var a);
  Var add_scalar(Var a, S c);
  Var mul_scalar(Var a, S c);
  Var add_rowvec(Var a, Var v);  // v broadcast over all leading axes of a

  Var matmul(Var a, Var b);
  Var transpose(Var a);  // swaps the trailing two axes
  Var reshape(Var a, Shape sh);
  Var slice_axis(Var a, int axis, std::int64_t from, std::int64_t to);
  Var concat_axis(const std::vector<Var>& parts, int axis);
  Var select_cols(Var a, std::vector<std::int64_t> cols);  // rank-2 column gather

  Var sum_axis(Var a, int axis);
  Var mean_axis(Var a, int axis);
  Var sum_all(Var a);
  Var mean_all(Var a);

  Var sqrt_(Var a);
  Var tanh_(Var a);
  Var gelu(Var a);  // tanh approximation
  Var softmax_last(Var a, bool causal = false);
  Var layer_norm(Var x, Var gain, Var bias, S eps);
  Var rope(Var a, double base);  // rotate trailing-axis pairs by position along axis -2
  Var embed_row(Var table, std::int64_t row);
  Var broadcast_rows(Var v, std::int64_t n);
  Var conv1d_causal(Var x, Var kernel);

  // Seeds d(root)=1 and runs every reachable backward rule in reverse
  // topological order. root must be scalar; a second call throws.
  void backward(Var root);

  const TensorT<S>& value(Var v) const { return node(v).value; }
  // Gradient of the last backward; empty tensor when none flowed.
  const TensorT<S>& grad(Var v) const { return node(v).grad; }
  bool has_grad(Var v) const { return !node(v).grad.data.empty(); }
  bool backward_done() const { return backward_done_; }

  Node& node(Var v) { return nodes_[static_cast<std::size_t>(v)]; }
  const Node& node(Var v) const { return nodes_[static_cast<std::size_t>(v)]; }
  std::int64_t n_nodes() const { return static_cast<std::int64_t>(nodes_.size()); }

  // Accumulate into a parent's gradient (allocates zeros on first touch).
  void accum(Var parent, const TensorT<S>& g);
  TensorT<S>& ensure_grad(Var v);

  bool check_finite = true;  // scan every op output; NaN/Inf is an error state

 private:
  std::deque<Node> nodes_;
  bool backward_done_ = false;

  Var push(Node n);
  Var unary(Var a, TensorT<S> value, std::function<void(GraphT&, Node&)> bw, const char* op);
};

using GraphF = GraphT<float>;
using GraphD = GraphT<double>;

// Max over selected coordinates of |g_ad - g_fd| / (|g_fd| + 1e-8), with
// central differences of step h. `build` must return a scalar node and be a
// pure function of its input var. Empty coords means every coordinate.
template <class S>
double grad_check(const std::function<Var(GraphT<S>&, Var)>& build, const TensorT<S>& x, S h,
                  const std::vector<std::int64_t>& coords = {});

}  // namespace fmenc

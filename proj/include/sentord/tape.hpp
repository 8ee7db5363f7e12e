#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "sentord/tensor.hpp"

namespace sentord {

/// Handle to a node on a Tape.
struct Var {
    std::size_t idx = 0;
};

/// Record of primitive operations for one forward pass, replayed in reverse
/// creation order by backward(). Rebuilt per batch; ops may only reference
/// earlier nodes, so reverse creation order is a reverse topological order.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Constant input. Gradients still flow through it but go nowhere.
    Var leaf(Tensor value);

    /// Leaf bound to a trainable parameter; backward() flushes the node
    /// gradient into p.grad. One node per parameter per tape.
    Var param(Parameter& p);

    const Tensor& value(Var v) const { return nodes_[v.idx].value; }
    const Tensor& grad(Var v) const { return nodes_[v.idx].grad; }
    std::size_t size() const { return nodes_.size(); }

    // -- primitives ---------------------------------------------------------
    Var matmul(Var a, Var b);              // (m,k) x (k,n) -> (m,n)
    Var matvec_t(Var w, Var x);            // (m,n), (m,) -> (n,) = W^T x
    Var dot(Var a, Var b);                 // (n,) . (n,) -> (1,)
    Var add(Var a, Var b);                 // same shape
    Var add_n(const std::vector<Var>& parts);
    Var concat(const std::vector<Var>& parts);  // rank-1 pieces
    Var slice(Var v, std::size_t offset, std::size_t len);
    Var row(Var m, std::size_t i);         // (n,d) -> (d,)
    Var lookup(Var table, const std::vector<int>& ids);  // (|V|,d) -> (n,d)
    Var mean_rows(Var m);                  // (n,d) -> (d,)
    Var max_over(const std::vector<Var>& parts);  // elementwise max reduce
    Var mul(Var a, Var b);                 // hadamard
    Var scale(Var a, double c);
    Var sigmoid(Var a);
    Var tanh(Var a);
    Var log(Var a);
    Var softplus(Var a);                   // log(1+e^x), stable
    Var sum_squares(Var a);                // -> (1,)

    /// Populate gradients of everything `root` depends on. `root` must hold
    /// exactly one element.
    void backward(Var root);

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Tape&)> back;
        Parameter* bound = nullptr;
    };

    Var push(Tensor value, std::function<void(Tape&)> back);
    Tensor& grad_mut(Var v) { return nodes_[v.idx].grad; }

    std::vector<Node> nodes_;
    std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

/// Numerically stable logistic function, clamped into the open interval (0,1)
/// so downstream logs stay finite.
double stable_sigmoid(double x);

}  // namespace sentord

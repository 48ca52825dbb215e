#pragma once

#include <span>
#include <vector>

#include "gridrl/numerics/tensor.hpp"

namespace gridrl {

// Reverse-mode autodiff over an eagerly-evaluated op record. Values are
// computed when an op is pushed; backward() replays the record in exact
// reverse order and accumulates gradients additively into every tracked
// node. Single-threaded by contract; use one tape per rollout when
// parallelizing.
class Tape {
public:
    using Id = int;

    // Leaf carrying (a copy of) external data. Tracked iff t.requires_grad.
    Id leaf(const Tensor& t);
    // Untracked leaf.
    Id constant(Tensor t);
    Id constant_scalar(double v) { return constant(Tensor::scalar(v)); }

    // Elementwise; shapes must match.
    Id add(Id a, Id b);
    Id sub(Id a, Id b);
    Id mul(Id a, Id b);
    Id neg(Id a);
    Id scale(Id a, double s);
    Id add_scalar(Id a, double s);
    Id exp(Id a);
    Id log(Id a);
    Id sigmoid(Id a);
    Id tanh(Id a);
    Id square(Id a);
    Id clip(Id a, double lo, double hi);
    Id min2(Id a, Id b);

    // w: [m x n], x: [n] -> [m].
    Id matvec(Id w, Id x);
    Id concat(std::span<const Id> parts);
    // 1-D distributions.
    Id softmax(Id a);
    Id log_softmax(Id a);
    // Reductions to scalar.
    Id sum(Id a);
    Id mean(Id a);
    Id sum_of(std::span<const Id> scalars);
    // Gathers.
    Id pick(Id a, int index);
    Id embed_row(Id table, int row);

    const Tensor& value(Id id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    double scalar_value(Id id) const { return value(id).item(); }

    // Gradient of the last backward() loss w.r.t. a tracked node. Empty
    // tensor (numel 0, ndim 0) if the node was never reached.
    const Tensor& grad(Id id) const;

    // Scalar loss only; a second call without reset_gradients() is an error.
    void backward(Id loss);
    void reset_gradients();
    void clear();

    std::size_t size() const { return nodes_.size(); }

private:
    enum class Op : unsigned char {
        kLeaf, kAdd, kSub, kMul, kNeg, kScale, kAddScalar, kExp, kLog,
        kSigmoid, kTanh, kSquare, kClip, kMin2, kMatvec, kConcat,
        kSoftmax, kLogSoftmax, kSum, kMean, kSumOf, kPick, kEmbedRow,
    };

    struct Node {
        Op op;
        Id a = -1;
        Id b = -1;
        int aux = 0;         // pick index / embed row
        double p0 = 0.0;     // scale factor / clip lo
        double p1 = 0.0;     // clip hi
        int list_begin = 0;  // concat / sum_of parents
        int list_len = 0;
        bool tracked = false;
        Tensor value;
        Tensor grad;
    };

    Id push(Node n);
    bool tracked(Id id) const { return nodes_[static_cast<std::size_t>(id)].tracked; }
    Tensor& ensure_grad(Id id);
    void backprop_node(int i);

    std::vector<Node> nodes_;
    std::vector<Id> aux_ids_;
    bool backward_done_ = false;
    Tensor empty_grad_;
};

}  // namespace gridrl

#include "gridrl/numerics/tape.hpp"

#include <cmath>

#include "gridrl/numerics/vecmath.hpp"

namespace gridrl {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ArgumentError(std::string(op) + ": shape mismatch");
    }
}

}  // namespace

Tape::Id Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size()) - 1;
}

Tape::Id Tape::leaf(const Tensor& t) {
    Node n;
    n.op = Op::kLeaf;
    n.value = t;
    n.tracked = t.requires_grad;
    return push(std::move(n));
}

Tape::Id Tape::constant(Tensor t) {
    Node n;
    n.op = Op::kLeaf;
    n.value = std::move(t);
    n.tracked = false;
    return push(std::move(n));
}

Tape::Id Tape::add(Id a, Id b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    check_same_shape(va, vb, "add");
    Node n;
    n.op = Op::kAdd;
    n.a = a;
    n.b = b;
    n.tracked = tracked(a) || tracked(b);
    n.value = Tensor(va.shape());
    vecmath::add(va.vec(), vb.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::sub(Id a, Id b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    check_same_shape(va, vb, "sub");
    Node n;
    n.op = Op::kSub;
    n.a = a;
    n.b = b;
    n.tracked = tracked(a) || tracked(b);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = va[i] - vb[i];
    return push(std::move(n));
}

Tape::Id Tape::mul(Id a, Id b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    check_same_shape(va, vb, "mul");
    Node n;
    n.op = Op::kMul;
    n.a = a;
    n.b = b;
    n.tracked = tracked(a) || tracked(b);
    n.value = Tensor(va.shape());
    vecmath::mul(va.vec(), vb.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::neg(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kNeg;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = -va[i];
    return push(std::move(n));
}

Tape::Id Tape::scale(Id a, double s) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kScale;
    n.a = a;
    n.p0 = s;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = s * va[i];
    return push(std::move(n));
}

Tape::Id Tape::add_scalar(Id a, double s) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kAddScalar;
    n.a = a;
    n.p0 = s;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = va[i] + s;
    return push(std::move(n));
}

Tape::Id Tape::exp(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kExp;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = std::exp(va[i]);
    return push(std::move(n));
}

Tape::Id Tape::log(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kLog;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = std::log(va[i]);
    return push(std::move(n));
}

Tape::Id Tape::sigmoid(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kSigmoid;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    vecmath::sigmoid_vec(va.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::tanh(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kTanh;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    vecmath::tanh_vec(va.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::square(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kSquare;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = va[i] * va[i];
    return push(std::move(n));
}

Tape::Id Tape::clip(Id a, double lo, double hi) {
    if (!(lo <= hi)) throw ArgumentError("clip: lo > hi");
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kClip;
    n.a = a;
    n.p0 = lo;
    n.p1 = hi;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) {
        double v = va[i];
        n.value[i] = v < lo ? lo : (v > hi ? hi : v);
    }
    return push(std::move(n));
}

Tape::Id Tape::min2(Id a, Id b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    check_same_shape(va, vb, "min2");
    Node n;
    n.op = Op::kMin2;
    n.a = a;
    n.b = b;
    n.tracked = tracked(a) || tracked(b);
    n.value = Tensor(va.shape());
    for (int i = 0; i < va.numel(); ++i) n.value[i] = va[i] <= vb[i] ? va[i] : vb[i];
    return push(std::move(n));
}

Tape::Id Tape::matvec(Id w, Id x) {
    const Tensor& vw = value(w);
    const Tensor& vx = value(x);
    if (vw.ndim() != 2 || vx.ndim() != 1 || vw.cols() != vx.numel()) {
        throw ArgumentError("matvec: expected [m x n] * [n]");
    }
    Node n;
    n.op = Op::kMatvec;
    n.a = w;
    n.b = x;
    n.tracked = tracked(w) || tracked(x);
    n.value = Tensor::zeros(vw.rows());
    vecmath::matvec(vw.vec(), vw.rows(), vw.cols(), vx.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::concat(std::span<const Id> parts) {
    if (parts.empty()) throw ArgumentError("concat: no parts");
    int total = 0;
    bool any_tracked = false;
    for (Id p : parts) {
        if (value(p).ndim() > 1) throw ArgumentError("concat: 1-D parts only");
        total += value(p).numel();
        any_tracked = any_tracked || tracked(p);
    }
    Node n;
    n.op = Op::kConcat;
    n.tracked = any_tracked;
    n.list_begin = static_cast<int>(aux_ids_.size());
    n.list_len = static_cast<int>(parts.size());
    for (Id p : parts) aux_ids_.push_back(p);
    n.value = Tensor::zeros(total);
    int off = 0;
    for (Id p : parts) {
        const Tensor& vp = value(p);
        for (int i = 0; i < vp.numel(); ++i) n.value[off + i] = vp[i];
        off += vp.numel();
    }
    return push(std::move(n));
}

Tape::Id Tape::softmax(Id a) {
    const Tensor& va = value(a);
    if (va.ndim() != 1) throw ArgumentError("softmax: 1-D input only");
    Node n;
    n.op = Op::kSoftmax;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    vecmath::softmax(va.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::log_softmax(Id a) {
    const Tensor& va = value(a);
    if (va.ndim() != 1) throw ArgumentError("log_softmax: 1-D input only");
    Node n;
    n.op = Op::kLogSoftmax;
    n.a = a;
    n.tracked = tracked(a);
    n.value = Tensor(va.shape());
    vecmath::log_softmax(va.vec(), n.value.vec());
    return push(std::move(n));
}

Tape::Id Tape::sum(Id a) {
    const Tensor& va = value(a);
    Node n;
    n.op = Op::kSum;
    n.a = a;
    n.tracked = tracked(a);
    double acc = 0.0;
    for (int i = 0; i < va.numel(); ++i) acc += va[i];
    n.value = Tensor::scalar(acc);
    return push(std::move(n));
}

Tape::Id Tape::mean(Id a) {
    const Tensor& va = value(a);
    if (va.numel() == 0) throw ArgumentError("mean of empty tensor");
    Node n;
    n.op = Op::kMean;
    n.a = a;
    n.tracked = tracked(a);
    double acc = 0.0;
    for (int i = 0; i < va.numel(); ++i) acc += va[i];
    n.value = Tensor::scalar(acc / va.numel());
    return push(std::move(n));
}

Tape::Id Tape::sum_of(std::span<const Id> scalars) {
    if (scalars.empty()) throw ArgumentError("sum_of: no terms");
    Node n;
    n.op = Op::kSumOf;
    n.list_begin = static_cast<int>(aux_ids_.size());
    n.list_len = static_cast<int>(scalars.size());
    double acc = 0.0;
    for (Id s : scalars) {
        acc += value(s).item();
        n.tracked = n.tracked || tracked(s);
        aux_ids_.push_back(s);
    }
    n.value = Tensor::scalar(acc);
    return push(std::move(n));
}

Tape::Id Tape::pick(Id a, int index) {
    const Tensor& va = value(a);
    if (index < 0 || index >= va.numel()) throw ArgumentError("pick: index out of range");
    Node n;
    n.op = Op::kPick;
    n.a = a;
    n.aux = index;
    n.tracked = tracked(a);
    n.value = Tensor::scalar(va[index]);
    return push(std::move(n));
}

Tape::Id Tape::embed_row(Id table, int row) {
    const Tensor& vt = value(table);
    if (vt.ndim() != 2 || row < 0 || row >= vt.rows()) {
        throw ArgumentError("embed_row: bad table or row");
    }
    Node n;
    n.op = Op::kEmbedRow;
    n.a = table;
    n.aux = row;
    n.tracked = tracked(table);
    n.value = Tensor::zeros(vt.cols());
    for (int j = 0; j < vt.cols(); ++j) n.value[j] = vt.at(row, j);
    return push(std::move(n));
}

const Tensor& Tape::grad(Id id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    return n.grad.empty() && n.grad.numel() == 0 ? empty_grad_ : n.grad;
}

Tensor& Tape::ensure_grad(Id id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.numel() == 0 && n.value.numel() != 0) n.grad = Tensor(n.value.shape());
    return n.grad;
}

void Tape::backward(Id loss) {
    if (backward_done_) {
        throw ArgumentError("backward called twice without reset_gradients");
    }
    const Tensor& lv = value(loss);
    if (lv.numel() != 1) throw ArgumentError("backward: loss must be scalar");
    backward_done_ = true;
    if (!tracked(loss)) return;  // constant loss, all gradients are zero
    ensure_grad(loss)[0] = 1.0;
    for (int i = loss; i >= 0; --i) backprop_node(i);
}

void Tape::backprop_node(int i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.tracked || n.grad.numel() == 0) return;
    const Tensor& g = n.grad;
    auto add_into = [&](Id target, auto&& fn) {
        if (target < 0 || !tracked(target)) return;
        fn(ensure_grad(target));
    };
    switch (n.op) {
        case Op::kLeaf:
            break;
        case Op::kAdd:
            add_into(n.a, [&](Tensor& ga) { for (int k = 0; k < g.numel(); ++k) ga[k] += g[k]; });
            add_into(n.b, [&](Tensor& gb) { for (int k = 0; k < g.numel(); ++k) gb[k] += g[k]; });
            break;
        case Op::kSub:
            add_into(n.a, [&](Tensor& ga) { for (int k = 0; k < g.numel(); ++k) ga[k] += g[k]; });
            add_into(n.b, [&](Tensor& gb) { for (int k = 0; k < g.numel(); ++k) gb[k] -= g[k]; });
            break;
        case Op::kMul: {
            const Tensor& va = value(n.a);
            const Tensor& vb = value(n.b);
            add_into(n.a, [&](Tensor& ga) { for (int k = 0; k < g.numel(); ++k) ga[k] += g[k] * vb[k]; });
            add_into(n.b, [&](Tensor& gb) { for (int k = 0; k < g.numel(); ++k) gb[k] += g[k] * va[k]; });
            break;
        }
        case Op::kNeg:
            add_into(n.a, [&](Tensor& ga) { for (int k = 0; k < g.numel(); ++k) ga[k] -= g[k]; });
            break;
        case Op::kScale:
            add_into(n.a, [&](Tensor& ga) { for (int k = 0; k < g.numel(); ++k) ga[k] += n.p0 * g[k]; });
            break;
        case Op::kAddScalar:
            add_into(n.a, [&](Tensor& ga) { for (int k = 0; k < g.numel(); ++k) ga[k] += g[k]; });
            break;
        case Op::kExp:
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) ga[k] += g[k] * n.value[k];
            });
            break;
        case Op::kLog: {
            const Tensor& va = value(n.a);
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) ga[k] += g[k] / va[k];
            });
            break;
        }
        case Op::kSigmoid:
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) {
                    double y = n.value[k];
                    ga[k] += g[k] * y * (1.0 - y);
                }
            });
            break;
        case Op::kTanh:
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) {
                    double y = n.value[k];
                    ga[k] += g[k] * (1.0 - y * y);
                }
            });
            break;
        case Op::kSquare: {
            const Tensor& va = value(n.a);
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) ga[k] += 2.0 * g[k] * va[k];
            });
            break;
        }
        case Op::kClip: {
            const Tensor& va = value(n.a);
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) {
                    if (va[k] >= n.p0 && va[k] <= n.p1) ga[k] += g[k];
                }
            });
            break;
        }
        case Op::kMin2: {
            const Tensor& va = value(n.a);
            const Tensor& vb = value(n.b);
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < g.numel(); ++k) {
                    if (va[k] <= vb[k]) ga[k] += g[k];
                }
            });
            add_into(n.b, [&](Tensor& gb) {
                for (int k = 0; k < g.numel(); ++k) {
                    if (vb[k] < va[k]) gb[k] += g[k];
                }
            });
            break;
        }
        case Op::kMatvec: {
            const Tensor& vw = value(n.a);
            const Tensor& vx = value(n.b);
            int rows = vw.rows(), cols = vw.cols();
            add_into(n.a, [&](Tensor& gw) {
                for (int r = 0; r < rows; ++r) {
                    double gr = g[r];
                    double* grow = gw.data() + static_cast<std::size_t>(r) * cols;
                    const double* x = vx.data();
                    for (int c = 0; c < cols; ++c) grow[c] += gr * x[c];
                }
            });
            add_into(n.b, [&](Tensor& gx) {
                for (int r = 0; r < rows; ++r) {
                    double gr = g[r];
                    const double* wrow = vw.data() + static_cast<std::size_t>(r) * cols;
                    for (int c = 0; c < cols; ++c) gx[c] += gr * wrow[c];
                }
            });
            break;
        }
        case Op::kConcat: {
            int off = 0;
            for (int p = 0; p < n.list_len; ++p) {
                Id part = aux_ids_[static_cast<std::size_t>(n.list_begin + p)];
                int len = value(part).numel();
                add_into(part, [&](Tensor& gp) {
                    for (int k = 0; k < len; ++k) gp[k] += g[off + k];
                });
                off += len;
            }
            break;
        }
        case Op::kSoftmax: {
            // dx = y * (g - <g, y>)
            add_into(n.a, [&](Tensor& ga) {
                double dot = 0.0;
                for (int k = 0; k < g.numel(); ++k) dot += g[k] * n.value[k];
                for (int k = 0; k < g.numel(); ++k) ga[k] += n.value[k] * (g[k] - dot);
            });
            break;
        }
        case Op::kLogSoftmax: {
            // dx = g - exp(y) * sum(g)
            add_into(n.a, [&](Tensor& ga) {
                double gs = 0.0;
                for (int k = 0; k < g.numel(); ++k) gs += g[k];
                for (int k = 0; k < g.numel(); ++k) ga[k] += g[k] - std::exp(n.value[k]) * gs;
            });
            break;
        }
        case Op::kSum:
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < ga.numel(); ++k) ga[k] += g[0];
            });
            break;
        case Op::kMean: {
            int count = value(n.a).numel();
            add_into(n.a, [&](Tensor& ga) {
                for (int k = 0; k < ga.numel(); ++k) ga[k] += g[0] / count;
            });
            break;
        }
        case Op::kSumOf:
            for (int p = 0; p < n.list_len; ++p) {
                Id term = aux_ids_[static_cast<std::size_t>(n.list_begin + p)];
                add_into(term, [&](Tensor& gt) { gt[0] += g[0]; });
            }
            break;
        case Op::kPick:
            add_into(n.a, [&](Tensor& ga) { ga[n.aux] += g[0]; });
            break;
        case Op::kEmbedRow: {
            int cols = value(n.a).cols();
            add_into(n.a, [&](Tensor& gt) {
                double* row = gt.data() + static_cast<std::size_t>(n.aux) * cols;
                for (int k = 0; k < cols; ++k) row[k] += g[k];
            });
            break;
        }
    }
}

void Tape::reset_gradients() {
    for (Node& n : nodes_) n.grad = Tensor();
    backward_done_ = false;
}

void Tape::clear() {
    nodes_.clear();
    aux_ids_.clear();
    backward_done_ = false;
}

}  // namespace gridrl

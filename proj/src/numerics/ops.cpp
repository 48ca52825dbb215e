#include "gridrl/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridrl/numerics/vecmath.hpp"

namespace gridrl {

Tensor softmax(const Tensor& logits, double temperature) {
    if (!(temperature > 0.0)) throw ArgumentError("softmax: temperature must be positive");
    if (!logits.all_finite()) throw ArgumentError("softmax: non-finite logits");
    Tensor scaled(logits.shape());
    for (int i = 0; i < logits.numel(); ++i) scaled[i] = logits[i] / temperature;
    Tensor out(logits.shape());
    vecmath::softmax(scaled.vec(), out.vec());
    return out;
}

double finite_diff_check(const ScalarFn& f, const Tensor& x, double h) {
    if (!(h >= 1e-7 && h <= 1e-3)) throw ArgumentError("finite_diff_check: h outside [1e-7, 1e-3]");

    const double nan = std::numeric_limits<double>::quiet_NaN();

    Tensor x0 = x;
    x0.requires_grad = true;
    Tape tape;
    Tape::Id xid = tape.leaf(x0);
    Tape::Id loss = f(tape, xid);
    if (tape.value(loss).numel() != 1) throw ArgumentError("finite_diff_check: f must be scalar");
    if (!tape.value(loss).all_finite()) return nan;
    tape.backward(loss);
    Tensor analytic = tape.grad(xid);
    if (analytic.numel() == 0) analytic = Tensor(x.shape());  // f constant in x
    if (!analytic.all_finite()) return nan;

    auto eval = [&](const Tensor& point) {
        Tensor p = point;
        p.requires_grad = false;
        Tape t;
        Tape::Id id = t.leaf(p);
        return t.scalar_value(f(t, id));
    };

    double max_err = 0.0;
    for (int i = 0; i < x.numel(); ++i) {
        Tensor hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        double fp = eval(hi);
        double fm = eval(lo);
        if (!std::isfinite(fp) || !std::isfinite(fm)) return nan;
        double central = (fp - fm) / (2.0 * h);
        double err = std::abs(analytic[i] - central) / std::max(1.0, std::abs(analytic[i]));
        max_err = std::max(max_err, err);
    }
    return max_err;
}

}  // namespace gridrl

#pragma once

#include <functional>

#include "gridrl/numerics/tape.hpp"
#include "gridrl/numerics/tensor.hpp"

namespace gridrl {

// Temperature-scaled softmax over a logit vector, max-subtracted. The
// differentiable path is tape.softmax(tape.scale(logits, 1/t)).
Tensor softmax(const Tensor& logits, double temperature = 1.0);

// A scalar-valued differentiable function: builds the computation on the
// given tape from the leaf id of x and returns the loss node.
using ScalarFn = std::function<Tape::Id(Tape&, Tape::Id)>;

// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
// Returns NaN when f produces a non-finite value anywhere (check failure).
double finite_diff_check(const ScalarFn& f, const Tensor& x, double h);

}  // namespace gridrl

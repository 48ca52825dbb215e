#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace gridrl::vecmath {

// Shared inner loops. The tape ops and the tape-free policy forward both
// route through these so the two paths produce bit-identical values.

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline void matvec(std::span<const double> w, int rows, int cols, std::span<const double> x,
                   std::span<double> out) {
    for (int i = 0; i < rows; ++i) {
        const double* row = w.data() + static_cast<std::size_t>(i) * cols;
        double acc = 0.0;
        for (int j = 0; j < cols; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

inline void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

inline void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

inline void sigmoid_vec(std::span<const double> a, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid(a[i]);
}

inline void tanh_vec(std::span<const double> a, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(a[i]);
}

// y = x - max(x) - log(sum(exp(x - max(x)))), the max-subtracted log-softmax.
inline void log_softmax(std::span<const double> x, std::span<double> out) {
    double m = x[0];
    for (double v : x) m = std::max(m, v);
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] - m;
        z += std::exp(out[i]);
    }
    double lz = std::log(z);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= lz;
}

inline void softmax(std::span<const double> x, std::span<double> out) {
    double m = x[0];
    for (double v : x) m = std::max(m, v);
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::exp(x[i] - m);
        z += out[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= z;
}

// Shannon entropy of the distribution given by a log-probability vector.
inline double entropy_from_logp(std::span<const double> logp) {
    double h = 0.0;
    for (double lp : logp) h -= std::exp(lp) * lp;
    return h;
}

}  // namespace gridrl::vecmath

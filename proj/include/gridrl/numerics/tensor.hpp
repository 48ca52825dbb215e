#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gridrl/errors.hpp"

namespace gridrl {

// Dense row-major 64-bit float tensor. Rank 0 (scalar), 1 and 2 are the
// only shapes the engine uses; no broadcasting.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
        data_.assign(static_cast<std::size_t>(count(shape_)), 0.0);
    }

    Tensor(std::vector<int> shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (static_cast<std::size_t>(count(shape_)) != data_.size()) {
            throw ArgumentError("tensor shape does not match data length");
        }
    }

    static Tensor scalar(double v) { return Tensor({}, {v}); }
    static Tensor zeros(int n) { return Tensor({n}); }
    static Tensor zeros(int rows, int cols) { return Tensor({rows, cols}); }

    const std::vector<int>& shape() const { return shape_; }
    int ndim() const { return static_cast<int>(shape_.size()); }
    int numel() const { return static_cast<int>(data_.size()); }
    bool empty() const { return data_.empty() && shape_.empty(); }

    int rows() const { return shape_.size() == 2 ? shape_[0] : (shape_.empty() ? 1 : shape_[0]); }
    int cols() const { return shape_.size() == 2 ? shape_[1] : 1; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](int i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols() + c]; }

    // Scalar extraction; anything else is a caller bug.
    double item() const {
        if (numel() != 1) throw ArgumentError("item() on non-scalar tensor");
        return data_[0];
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool requires_grad = false;

private:
    static long long count(const std::vector<int>& shape) {
        long long n = 1;
        for (int d : shape) {
            if (d < 0) throw ArgumentError("negative tensor dimension");
            n *= d;
        }
        return n;
    }

    std::vector<int> shape_;
    std::vector<double> data_;
};

}  // namespace gridrl

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gti/errors.hpp"

namespace gti::nn {

struct Shape4 {
    std::size_t n = 0, c = 0, h = 0, w = 0;

    std::size_t size() const { return n * c * h * w; }
    std::size_t per_sample() const { return c * h * w; }
    friend bool operator==(const Shape4&, const Shape4&) = default;
};

inline std::string to_string(const Shape4& s) {
    return "(" + std::to_string(s.n) + "," + std::to_string(s.c) + "," + std::to_string(s.h) + "," +
           std::to_string(s.w) + ")";
}

/// Storage with a fixed base alignment, so Eigen kernels over Maps sum in the same order on every allocation.
using Buffer = std::vector<double, Eigen::aligned_allocator<double>>;

/// Dense NCHW tensor of doubles.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape4 shape, double fill = 0.0) : shape_(shape), data_(shape.size(), fill) {}
    Tensor(Shape4 shape, const std::vector<double>& data) : Tensor(shape, Buffer(data.begin(), data.end())) {}
    Tensor(Shape4 shape, Buffer data) : shape_(shape), data_(std::move(data)) {
        if (data_.size() != shape_.size())
            throw ShapeError("tensor data has " + std::to_string(data_.size()) + " values, shape " +
                             to_string(shape_) + " needs " + std::to_string(shape_.size()));
    }

    const Shape4& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    Buffer& values() { return data_; }
    const Buffer& values() const { return data_; }

    double& operator()(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
        return data_[((n * shape_.c + c) * shape_.h + h) * shape_.w + w];
    }
    double operator()(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
        return data_[((n * shape_.c + c) * shape_.h + h) * shape_.w + w];
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    /// Same values under a new shape with equal element count.
    Tensor reshaped(Shape4 shape) const& { return Tensor(shape, data_); }
    Tensor reshaped(Shape4 shape) && { return Tensor(shape, std::move(data_)); }

private:
    Shape4 shape_{};
    Buffer data_;
};

inline double dot(const Tensor& a, const Tensor& b) {
    if (!(a.shape() == b.shape())) throw ShapeError("dot: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

}  // namespace gti::nn

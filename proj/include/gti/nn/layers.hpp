#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gti/errors.hpp"
#include "gti/nn/tensor.hpp"
#include "gti/rng.hpp"

namespace gti::nn {

using MatR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapR = Eigen::Map<MatR>;
using ConstMapR = Eigen::Map<const MatR>;

// All convolutions use 4x4 kernels, stride 2, zero padding 1.
inline constexpr std::size_t kKernel = 4;
inline constexpr std::size_t kStride = 2;
inline constexpr std::size_t kPad = 1;

inline std::size_t conv_out_dim(std::size_t in) { return (in + 2 * kPad - kKernel) / kStride + 1; }

struct Param {
    std::string name;
    std::vector<std::size_t> dims;
    Buffer value;
    Buffer grad;
    bool trainable = true;

    Param(std::string n, std::vector<std::size_t> d, bool train = true) : name(std::move(n)), dims(std::move(d)), trainable(train) {
        std::size_t count = 1;
        for (auto x : dims) count *= x;
        value.assign(count, 0.0);
        grad.assign(count, 0.0);
    }
    void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

enum class LayerKind { FC, Conv, Deconv, BatchNorm, LeakyReLU, Sigmoid, Tanh, Reshape };

inline std::string_view to_string(LayerKind k) {
    switch (k) {
        case LayerKind::FC: return "fc";
        case LayerKind::Conv: return "conv";
        case LayerKind::Deconv: return "deconv";
        case LayerKind::BatchNorm: return "batchnorm";
        case LayerKind::LeakyReLU: return "leaky_relu";
        case LayerKind::Sigmoid: return "sigmoid";
        case LayerKind::Tanh: return "tanh";
        case LayerKind::Reshape: return "reshape";
    }
    return "?";
}

/// A differentiable layer. `forward` caches what `backward` needs; parameter
/// gradients accumulate into Param::grad until zeroed.
class Layer {
public:
    virtual ~Layer() = default;
    virtual LayerKind kind() const = 0;
    virtual Tensor forward(const Tensor& x, bool training) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Param*> params() { return {}; }
    virtual void init(Rng&) {}

protected:
    void require_cache(const Tensor& grad_out) const {
        if (!cached_) throw StateError(std::string(to_string(kind())) + ": backward called without a forward cache");
        if (!(grad_out.shape() == out_shape_))
            throw ShapeError(std::string(to_string(kind())) + ": grad shape " + to_string(grad_out.shape()) +
                             ", expected " + to_string(out_shape_));
    }
    void expect_channels(const Tensor& x, std::size_t c) const {
        if (x.shape().c != c)
            throw ShapeError(std::string(to_string(kind())) + ": expected " + std::to_string(c) +
                             " input channels, got shape " + to_string(x.shape()));
    }

    bool cached_ = false;
    Shape4 in_shape_{};
    Shape4 out_shape_{};
};

namespace detail {

// col rows: (c*16 + ky*4 + kx); cols: (n*Ho*Wo + oy*Wo + ox).
inline void im2col(const double* x, const Shape4& s, std::size_t ho, std::size_t wo, MatR& col) {
    const std::size_t cols = s.n * ho * wo;
    col.setZero(static_cast<Eigen::Index>(s.c * kKernel * kKernel), static_cast<Eigen::Index>(cols));
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t ky = 0; ky < kKernel; ++ky)
            for (std::size_t kx = 0; kx < kKernel; ++kx) {
                double* row = col.data() + ((c * kKernel + ky) * kKernel + kx) * cols;
                for (std::size_t n = 0; n < s.n; ++n) {
                    const double* plane = x + (n * s.c + c) * s.h * s.w;
                    for (std::size_t oy = 0; oy < ho; ++oy) {
                        const long iy = static_cast<long>(oy * kStride + ky) - static_cast<long>(kPad);
                        if (iy < 0 || iy >= static_cast<long>(s.h)) continue;
                        double* dst = row + (n * ho + oy) * wo;
                        const double* src = plane + static_cast<std::size_t>(iy) * s.w;
                        for (std::size_t ox = 0; ox < wo; ++ox) {
                            const long ix = static_cast<long>(ox * kStride + kx) - static_cast<long>(kPad);
                            if (ix >= 0 && ix < static_cast<long>(s.w)) dst[ox] = src[ix];
                        }
                    }
                }
            }
}

// Adjoint of im2col: scatter-add columns back into an NCHW buffer (zeroed by caller).
inline void col2im(const MatR& col, const Shape4& s, std::size_t ho, std::size_t wo, double* x) {
    const std::size_t cols = s.n * ho * wo;
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t ky = 0; ky < kKernel; ++ky)
            for (std::size_t kx = 0; kx < kKernel; ++kx) {
                const double* row = col.data() + ((c * kKernel + ky) * kKernel + kx) * cols;
                for (std::size_t n = 0; n < s.n; ++n) {
                    double* plane = x + (n * s.c + c) * s.h * s.w;
                    for (std::size_t oy = 0; oy < ho; ++oy) {
                        const long iy = static_cast<long>(oy * kStride + ky) - static_cast<long>(kPad);
                        if (iy < 0 || iy >= static_cast<long>(s.h)) continue;
                        const double* src = row + (n * ho + oy) * wo;
                        double* dst = plane + static_cast<std::size_t>(iy) * s.w;
                        for (std::size_t ox = 0; ox < wo; ++ox) {
                            const long ix = static_cast<long>(ox * kStride + kx) - static_cast<long>(kPad);
                            if (ix >= 0 && ix < static_cast<long>(s.w)) dst[ix] += src[ox];
                        }
                    }
                }
            }
}

// NCHW tensor <-> (C x N*H*W) channel-major matrix.
inline void to_channel_major(const Tensor& t, MatR& m) {
    const auto& s = t.shape();
    const std::size_t p = s.h * s.w;
    m.resize(static_cast<Eigen::Index>(s.c), static_cast<Eigen::Index>(s.n * p));
    for (std::size_t n = 0; n < s.n; ++n)
        for (std::size_t c = 0; c < s.c; ++c)
            std::copy_n(t.data() + (n * s.c + c) * p, p, m.data() + c * s.n * p + n * p);
}

inline void from_channel_major(const MatR& m, Tensor& t) {
    const auto& s = t.shape();
    const std::size_t p = s.h * s.w;
    for (std::size_t n = 0; n < s.n; ++n)
        for (std::size_t c = 0; c < s.c; ++c)
            std::copy_n(m.data() + c * s.n * p + n * p, p, t.data() + (n * s.c + c) * p);
}

inline void normal_fill(Buffer& v, Rng& rng, double mean, double stddev) {
    std::normal_distribution<double> dist(mean, stddev);
    for (auto& x : v) x = dist(rng);
}

}  // namespace detail

/// Fully connected: flattens (N, C, H, W) to (N, C*H*W), outputs (N, out, 1, 1).
class Linear final : public Layer {
public:
    Linear(std::size_t in, std::size_t out, std::string name = "fc")
        : in_(in), out_(out), weight_(name + ".weight", {out, in}), bias_(name + ".bias", {out}) {}

    LayerKind kind() const override { return LayerKind::FC; }
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    void init(Rng& rng) override {
        detail::normal_fill(weight_.value, rng, 0.0, 0.02);
        std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
    }
    Param& weight() { return weight_; }
    Param& bias() { return bias_; }

    Tensor forward(const Tensor& x, bool) override {
        if (x.shape().per_sample() != in_)
            throw ShapeError("fc: expected " + std::to_string(in_) + " features per sample, got shape " +
                             to_string(x.shape()));
        in_shape_ = x.shape();
        out_shape_ = {x.shape().n, out_, 1, 1};
        input_ = x;
        cached_ = true;
        const auto n = static_cast<Eigen::Index>(x.shape().n);
        Tensor y(out_shape_);
        ConstMapR X(x.data(), n, static_cast<Eigen::Index>(in_));
        ConstMapR W(weight_.value.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
        Eigen::Map<const Eigen::RowVectorXd> b(bias_.value.data(), static_cast<Eigen::Index>(out_));
        MapR Y(y.data(), n, static_cast<Eigen::Index>(out_));
        Y.noalias() = X * W.transpose();
        Y.rowwise() += b;
        return y;
    }

    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        const auto n = static_cast<Eigen::Index>(in_shape_.n);
        ConstMapR dY(grad_out.data(), n, static_cast<Eigen::Index>(out_));
        ConstMapR X(input_.data(), n, static_cast<Eigen::Index>(in_));
        ConstMapR W(weight_.value.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
        MapR dW(weight_.grad.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
        Eigen::Map<Eigen::RowVectorXd> db(bias_.grad.data(), static_cast<Eigen::Index>(out_));
        dW.noalias() += dY.transpose() * X;
        db += dY.colwise().sum();
        Tensor dx(in_shape_);
        MapR dX(dx.data(), n, static_cast<Eigen::Index>(in_));
        dX.noalias() = dY * W;
        return dx;
    }

private:
    std::size_t in_, out_;
    Param weight_, bias_;
    Tensor input_;
};

/// (N, C*H*W, 1, 1) -> (N, C, H, W) without copying semantics change.
class Reshape final : public Layer {
public:
    Reshape(std::size_t c, std::size_t h, std::size_t w) : c_(c), h_(h), w_(w) {}
    LayerKind kind() const override { return LayerKind::Reshape; }

    Tensor forward(const Tensor& x, bool) override {
        if (x.shape().per_sample() != c_ * h_ * w_)
            throw ShapeError("reshape: cannot view " + to_string(x.shape()) + " as (" + std::to_string(c_) + "," +
                             std::to_string(h_) + "," + std::to_string(w_) + ")");
        in_shape_ = x.shape();
        out_shape_ = {x.shape().n, c_, h_, w_};
        cached_ = true;
        return x.reshaped(out_shape_);
    }
    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        return grad_out.reshaped(in_shape_);
    }

private:
    std::size_t c_, h_, w_;
};

/// Strided cross-correlation; halves the spatial size.
class Conv2d final : public Layer {
public:
    Conv2d(std::size_t in_channels, std::size_t out_channels, std::string name = "conv")
        : cin_(in_channels), cout_(out_channels),
          weight_(name + ".weight", {out_channels, in_channels, kKernel, kKernel}), bias_(name + ".bias", {out_channels}) {}

    LayerKind kind() const override { return LayerKind::Conv; }
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    void init(Rng& rng) override {
        detail::normal_fill(weight_.value, rng, 0.0, 0.02);
        std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
    }
    Param& weight() { return weight_; }
    Param& bias() { return bias_; }

    Tensor forward(const Tensor& x, bool) override {
        expect_channels(x, cin_);
        if (x.shape().h < 2 || x.shape().w < 2) throw ShapeError("conv: spatial size below 2 in " + to_string(x.shape()));
        in_shape_ = x.shape();
        const std::size_t ho = conv_out_dim(x.shape().h), wo = conv_out_dim(x.shape().w);
        out_shape_ = {x.shape().n, cout_, ho, wo};
        detail::im2col(x.data(), in_shape_, ho, wo, col_);
        cached_ = true;

        ConstMapR W(weight_.value.data(), static_cast<Eigen::Index>(cout_), static_cast<Eigen::Index>(cin_ * 16));
        MatR out = W * col_;
        for (std::size_t c = 0; c < cout_; ++c) out.row(static_cast<Eigen::Index>(c)).array() += bias_.value[c];
        Tensor y(out_shape_);
        detail::from_channel_major(out, y);
        return y;
    }

    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        MatR dout;
        detail::to_channel_major(grad_out, dout);
        ConstMapR W(weight_.value.data(), static_cast<Eigen::Index>(cout_), static_cast<Eigen::Index>(cin_ * 16));
        MapR dW(weight_.grad.data(), static_cast<Eigen::Index>(cout_), static_cast<Eigen::Index>(cin_ * 16));
        dW.noalias() += dout * col_.transpose();
        for (std::size_t c = 0; c < cout_; ++c) bias_.grad[c] += dout.row(static_cast<Eigen::Index>(c)).sum();
        MatR dcol = W.transpose() * dout;
        Tensor dx(in_shape_);
        detail::col2im(dcol, in_shape_, out_shape_.h, out_shape_.w, dx.data());
        return dx;
    }

private:
    std::size_t cin_, cout_;
    Param weight_, bias_;
    MatR col_;
};

/// Transposed convolution (adjoint of Conv2d's data path); doubles the spatial size.
/// Weight layout (in, out, 4, 4) so that a Deconv2d sharing a Conv2d's weight
/// buffer computes exactly that conv's backward-data map.
class Deconv2d final : public Layer {
public:
    Deconv2d(std::size_t in_channels, std::size_t out_channels, std::string name = "deconv")
        : cin_(in_channels), cout_(out_channels),
          weight_(name + ".weight", {in_channels, out_channels, kKernel, kKernel}), bias_(name + ".bias", {out_channels}) {}

    LayerKind kind() const override { return LayerKind::Deconv; }
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    void init(Rng& rng) override {
        detail::normal_fill(weight_.value, rng, 0.0, 0.02);
        std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
    }
    Param& weight() { return weight_; }
    Param& bias() { return bias_; }

    Tensor forward(const Tensor& x, bool) override {
        expect_channels(x, cin_);
        in_shape_ = x.shape();
        out_shape_ = {x.shape().n, cout_, x.shape().h * kStride, x.shape().w * kStride};
        detail::to_channel_major(x, xmat_);
        cached_ = true;

        ConstMapR W(weight_.value.data(), static_cast<Eigen::Index>(cin_), static_cast<Eigen::Index>(cout_ * 16));
        MatR col = W.transpose() * xmat_;
        Tensor y(out_shape_);
        detail::col2im(col, out_shape_, in_shape_.h, in_shape_.w, y.data());
        const std::size_t p = out_shape_.h * out_shape_.w;
        for (std::size_t n = 0; n < out_shape_.n; ++n)
            for (std::size_t c = 0; c < cout_; ++c) {
                double* plane = y.data() + (n * cout_ + c) * p;
                for (std::size_t i = 0; i < p; ++i) plane[i] += bias_.value[c];
            }
        return y;
    }

    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        MatR dcol;
        detail::im2col(grad_out.data(), out_shape_, in_shape_.h, in_shape_.w, dcol);
        ConstMapR W(weight_.value.data(), static_cast<Eigen::Index>(cin_), static_cast<Eigen::Index>(cout_ * 16));
        MapR dW(weight_.grad.data(), static_cast<Eigen::Index>(cin_), static_cast<Eigen::Index>(cout_ * 16));
        dW.noalias() += xmat_ * dcol.transpose();
        const std::size_t p = out_shape_.h * out_shape_.w;
        for (std::size_t n = 0; n < out_shape_.n; ++n)
            for (std::size_t c = 0; c < cout_; ++c) {
                const double* plane = grad_out.data() + (n * cout_ + c) * p;
                double s = 0.0;
                for (std::size_t i = 0; i < p; ++i) s += plane[i];
                bias_.grad[c] += s;
            }
        MatR dx = W * dcol;
        Tensor out(in_shape_);
        detail::from_channel_major(dx, out);
        return out;
    }

private:
    std::size_t cin_, cout_;
    Param weight_, bias_;
    MatR xmat_;
};

/// Per-channel normalization over (N, H, W). Batch statistics in training
/// mode, running statistics otherwise.
class BatchNorm final : public Layer {
public:
    explicit BatchNorm(std::size_t channels, std::string name = "bn", double eps = 1e-6, double momentum = 0.1)
        : c_(channels), eps_(eps), momentum_(momentum), gamma_(name + ".gamma", {channels}),
          beta_(name + ".beta", {channels}), running_mean_(name + ".running_mean", {channels}, false),
          running_var_(name + ".running_var", {channels}, false) {
        std::fill(gamma_.value.begin(), gamma_.value.end(), 1.0);
        std::fill(running_var_.value.begin(), running_var_.value.end(), 1.0);
    }

    LayerKind kind() const override { return LayerKind::BatchNorm; }
    std::vector<Param*> params() override { return {&gamma_, &beta_, &running_mean_, &running_var_}; }
    void init(Rng& rng) override {
        detail::normal_fill(gamma_.value, rng, 1.0, 0.02);
        std::fill(beta_.value.begin(), beta_.value.end(), 0.0);
    }
    Param& gamma() { return gamma_; }
    Param& beta() { return beta_; }

    Tensor forward(const Tensor& x, bool training) override {
        expect_channels(x, c_);
        in_shape_ = out_shape_ = x.shape();
        training_ = training;
        const auto& s = x.shape();
        const std::size_t p = s.h * s.w;
        const double count = static_cast<double>(s.n * p);
        xhat_ = Tensor(s);
        invstd_.assign(c_, 0.0);
        Tensor y(s);
        for (std::size_t c = 0; c < c_; ++c) {
            double mean, var;
            if (training) {
                double sum = 0.0;
                for (std::size_t n = 0; n < s.n; ++n)
                    for (std::size_t i = 0; i < p; ++i) sum += x.data()[(n * c_ + c) * p + i];
                mean = sum / count;
                double sq = 0.0;
                for (std::size_t n = 0; n < s.n; ++n)
                    for (std::size_t i = 0; i < p; ++i) {
                        double d = x.data()[(n * c_ + c) * p + i] - mean;
                        sq += d * d;
                    }
                var = sq / count;
                running_mean_.value[c] = (1 - momentum_) * running_mean_.value[c] + momentum_ * mean;
                running_var_.value[c] = (1 - momentum_) * running_var_.value[c] + momentum_ * var;
            } else {
                mean = running_mean_.value[c];
                var = running_var_.value[c];
            }
            const double inv = 1.0 / std::sqrt(var + eps_);
            invstd_[c] = inv;
            for (std::size_t n = 0; n < s.n; ++n)
                for (std::size_t i = 0; i < p; ++i) {
                    const std::size_t idx = (n * c_ + c) * p + i;
                    const double xh = (x.data()[idx] - mean) * inv;
                    xhat_.data()[idx] = xh;
                    y.data()[idx] = gamma_.value[c] * xh + beta_.value[c];
                }
        }
        cached_ = true;
        return y;
    }

    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        const auto& s = in_shape_;
        const std::size_t p = s.h * s.w;
        const double count = static_cast<double>(s.n * p);
        Tensor dx(s);
        for (std::size_t c = 0; c < c_; ++c) {
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (std::size_t n = 0; n < s.n; ++n)
                for (std::size_t i = 0; i < p; ++i) {
                    const std::size_t idx = (n * c_ + c) * p + i;
                    sum_dy += grad_out.data()[idx];
                    sum_dy_xhat += grad_out.data()[idx] * xhat_.data()[idx];
                }
            gamma_.grad[c] += sum_dy_xhat;
            beta_.grad[c] += sum_dy;
            const double g = gamma_.value[c] * invstd_[c];
            for (std::size_t n = 0; n < s.n; ++n)
                for (std::size_t i = 0; i < p; ++i) {
                    const std::size_t idx = (n * c_ + c) * p + i;
                    if (training_)
                        dx.data()[idx] =
                            g * (grad_out.data()[idx] - sum_dy / count - xhat_.data()[idx] * sum_dy_xhat / count);
                    else
                        dx.data()[idx] = g * grad_out.data()[idx];
                }
        }
        return dx;
    }

private:
    std::size_t c_;
    double eps_, momentum_;
    Param gamma_, beta_, running_mean_, running_var_;
    bool training_ = true;
    Tensor xhat_;
    std::vector<double> invstd_;
};

/// max(x, slope*x)
class LeakyReLU final : public Layer {
public:
    explicit LeakyReLU(double slope = 0.2) : slope_(slope) {}
    LayerKind kind() const override { return LayerKind::LeakyReLU; }

    Tensor forward(const Tensor& x, bool) override {
        in_shape_ = out_shape_ = x.shape();
        input_ = x;
        cached_ = true;
        Tensor y(x.shape());
        for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] = std::max(x.data()[i], slope_ * x.data()[i]);
        return y;
    }
    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        Tensor dx(in_shape_);
        for (std::size_t i = 0; i < dx.size(); ++i)
            dx.data()[i] = grad_out.data()[i] * (input_.data()[i] > 0.0 ? 1.0 : slope_);
        return dx;
    }

private:
    double slope_;
    Tensor input_;
};

class Sigmoid final : public Layer {
public:
    LayerKind kind() const override { return LayerKind::Sigmoid; }
    Tensor forward(const Tensor& x, bool) override {
        in_shape_ = out_shape_ = x.shape();
        output_ = Tensor(x.shape());
        for (std::size_t i = 0; i < x.size(); ++i) output_.data()[i] = 1.0 / (1.0 + std::exp(-x.data()[i]));
        cached_ = true;
        return output_;
    }
    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        Tensor dx(in_shape_);
        for (std::size_t i = 0; i < dx.size(); ++i) {
            const double y = output_.data()[i];
            dx.data()[i] = grad_out.data()[i] * y * (1.0 - y);
        }
        return dx;
    }

private:
    Tensor output_;
};

class Tanh final : public Layer {
public:
    LayerKind kind() const override { return LayerKind::Tanh; }
    Tensor forward(const Tensor& x, bool) override {
        in_shape_ = out_shape_ = x.shape();
        output_ = Tensor(x.shape());
        for (std::size_t i = 0; i < x.size(); ++i) output_.data()[i] = std::tanh(x.data()[i]);
        cached_ = true;
        return output_;
    }
    Tensor backward(const Tensor& grad_out) override {
        require_cache(grad_out);
        Tensor dx(in_shape_);
        for (std::size_t i = 0; i < dx.size(); ++i) {
            const double y = output_.data()[i];
            dx.data()[i] = grad_out.data()[i] * (1.0 - y * y);
        }
        return dx;
    }

private:
    Tensor output_;
};

/// Layer stack. Rejects non-finite activations between layers.
class Sequential {
public:
    Sequential() = default;
    Sequential(Sequential&&) = default;
    Sequential& operator=(Sequential&&) = default;

    template <class L, class... Args>
    L& add(Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L& ref = *layer;
        layers_.push_back(std::move(layer));
        return ref;
    }

    Tensor forward(const Tensor& x, bool training) {
        Tensor h = x;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            h = layers_[i]->forward(h, training);
            if (!h.all_finite())
                throw NumericError("non-finite activation after layer " + std::to_string(i) + " (" +
                                   std::string(to_string(layers_[i]->kind())) + ")");
        }
        return h;
    }

    Tensor backward(const Tensor& grad_out) {
        Tensor g = grad_out;
        for (std::size_t i = layers_.size(); i-- > 0;) g = layers_[i]->backward(g);
        return g;
    }

    std::vector<Param*> params() {
        std::vector<Param*> out;
        for (auto& l : layers_)
            for (auto* p : l->params()) out.push_back(p);
        return out;
    }

    void init(Rng& rng) {
        for (auto& l : layers_) l->init(rng);
    }

    void zero_grad() {
        for (auto* p : params()) p->zero_grad();
    }

    std::size_t size() const { return layers_.size(); }
    Layer& operator[](std::size_t i) { return *layers_[i]; }

private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

struct LossResult {
    double loss = 0.0;
    Tensor grad;  // d(loss)/d(logits)
};

/// Mean binary cross-entropy of sigmoid(logits) against a constant label.
inline LossResult bce_with_logits(const Tensor& logits, double label) {
    LossResult r;
    r.grad = Tensor(logits.shape());
    const double count = static_cast<double>(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double z = logits.data()[i];
        r.loss += std::max(z, 0.0) - z * label + std::log1p(std::exp(-std::abs(z)));
        r.grad.data()[i] = (1.0 / (1.0 + std::exp(-z)) - label) / count;
    }
    r.loss /= count;
    return r;
}

}  // namespace gti::nn

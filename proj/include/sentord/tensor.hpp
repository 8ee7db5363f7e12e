#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sentord {

/// Dense row-major tensor of doubles. Rank 1 and 2 cover everything here.
/// Construction from raw data rejects NaN/Inf.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);  // zero-filled
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor scalar(double v);
    static Tensor zeros_like(const Tensor& t) { return Tensor(t.shape_); }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t numel() const { return data_.size(); }
    std::size_t rank() const { return shape_.size(); }
    std::size_t rows() const;
    std::size_t cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    /// Value of a one-element tensor.
    double item() const;

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    void fill(double v);
    void check_finite(const std::string& where) const;

    std::string shape_str() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
    std::size_t cols_ = 0;  // stride of the last axis for rank-2 access
};

/// Trainable value with a persistent gradient accumulator of the same shape.
/// `frozen_row` marks one row (rank-2 values) excluded from updates; used to
/// pin the PAD embedding at zero.
struct Parameter {
    Tensor value;
    Tensor grad;
    std::string name;
    std::optional<std::size_t> frozen_row;

    Parameter() = default;
    Parameter(std::string n, Tensor v)
        : value(std::move(v)), grad(Tensor::zeros_like(value)), name(std::move(n)) {}

    void zero_grad() { grad.fill(0.0); }
};

}  // namespace sentord

#include "sentord/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sentord/errors.hpp"

namespace sentord {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    for (std::size_t d : shape_) {
        if (d == 0) throw ShapeError("tensor axis of size 0 in " + shape_str());
    }
    data_.assign(shape_product(shape_), 0.0);
    cols_ = shape_.empty() ? 1 : shape_.back();
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_product(shape_)) {
        std::ostringstream os;
        os << "tensor data length " << data_.size() << " does not match shape " << shape_str();
        throw ShapeError(os.str());
    }
    cols_ = shape_.empty() ? 1 : shape_.back();
    check_finite("construction");
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

std::size_t Tensor::rows() const {
    if (shape_.size() != 2) throw ShapeError("rows() on tensor of shape " + shape_str());
    return shape_[0];
}

std::size_t Tensor::cols() const {
    if (shape_.size() != 2) throw ShapeError("cols() on tensor of shape " + shape_str());
    return shape_[1];
}

double Tensor::item() const {
    if (numel() != 1) throw NotScalar("item() on tensor of shape " + shape_str());
    return data_[0];
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::check_finite(const std::string& where) const {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw NumericError("non-finite value in tensor (" + where + ")");
        }
    }
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (i) os << ",";
        os << shape_[i];
    }
    os << ")";
    return os.str();
}

}  // namespace sentord

// Dense row-major tensor of 64-bit reals. Shapes are validated eagerly;
// public math ops reject inconsistent shapes instead of broadcasting.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace choice::num {

class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, std::vector<double> data);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // 2-D accessors (row, col); valid only for rank-2 tensors.
  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  int rows() const { return shape_[0]; }
  int cols() const { return shape_[1]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  std::span<const double> view() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_str() const;

  bool all_finite() const;
  // Throws NumericalError naming `what` if any entry is NaN/Inf.
  void require_finite(const std::string& what) const;

  void fill(double v);

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

// Thrown when a training-time quantity goes non-finite.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace choice::num

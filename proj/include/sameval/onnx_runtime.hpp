#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "sameval/error.hpp"

namespace sameval::onnx {

/// Dense float tensor, row-major. INT64 tensors (shape operands) are held
/// in the i64 member with is_i64 set.
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> data;
  std::vector<std::int64_t> i64;
  bool is_i64 = false;

  std::int64_t element_count() const {
    std::int64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }

  static Tensor zeros(std::vector<std::int64_t> shape);
};

// Minimal CPU evaluator for ONNX graphs covering the feed-forward
// operator subset used by small convolutional feature extractors:
//   Conv (group=1), Relu, MaxPool, AveragePool, GlobalAveragePool,
//   Add / Sub / Mul / Div (multidirectional broadcasting), Gemm, MatMul,
//   Flatten, Reshape, Concat, BatchNormalization, Transpose, Identity,
//   Constant.
// Anything else raises InferenceError naming the operator.
class Model {
 public:
  static Model load(const std::filesystem::path& path);
  static Model parse(const void* bytes, std::size_t size);

  /// Name of the single graph input that is not bound to an initializer.
  const std::string& input_name() const;
  /// Declared input shape; -1 for symbolic (typically the batch) dims.
  const std::vector<std::int64_t>& input_shape() const;
  const std::string& output_name() const;

  /// Feeds `input` to the graph input and returns the graph output.
  Tensor run(const Tensor& input) const;

 private:
  struct Impl;
  explicit Model(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace sameval::onnx

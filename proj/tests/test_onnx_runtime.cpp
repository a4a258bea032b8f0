#include <doctest.h>

#include <cmath>

#include "sameval/onnx_runtime.hpp"
#include "support/tmpdir.hpp"
#include "support/toy_model.hpp"

using namespace sameval;
using sameval::onnx::Model;
using sameval::onnx::Tensor;
namespace ts = testsupport;

namespace {

Model model_from_proto(const ts::pb::ModelProto& proto) {
  std::string bytes;
  proto.SerializeToString(&bytes);
  return Model::parse(bytes.data(), bytes.size());
}

Tensor make_input(std::vector<std::int64_t> shape, std::vector<float> values) {
  Tensor t;
  t.shape = std::move(shape);
  t.data = std::move(values);
  return t;
}

}  // namespace

TEST_SUITE("onnx_runtime") {

TEST_CASE("conv 1x1 with bias") {
  auto proto = ts::make_model("conv");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {-1, 2, 2, 2});
  // 2 -> 1 channel mix: w = [2, 10], bias 1
  ts::set_float_tensor(graph->add_initializer(), "w", {1, 2, 1, 1}, {2.0f, 10.0f});
  ts::set_float_tensor(graph->add_initializer(), "b", {1}, {1.0f});
  auto* conv = ts::add_node(graph, "Conv", {"x", "w", "b"}, {"y"});
  ts::add_ints_attr(conv, "kernel_shape", {1, 1});
  ts::set_value_info(graph->add_output(), "y", {-1, 1, 2, 2});

  const Model model = model_from_proto(proto);
  // channel 0 = [1,2,3,4], channel 1 = [10,20,30,40]
  const Tensor out = model.run(make_input({1, 2, 2, 2}, {1, 2, 3, 4, 10, 20, 30, 40}));
  REQUIRE(out.shape == std::vector<std::int64_t>{1, 1, 2, 2});
  CHECK(out.data[0] == doctest::Approx(2 * 1 + 10 * 10 + 1));
  CHECK(out.data[3] == doctest::Approx(2 * 4 + 10 * 40 + 1));
}

TEST_CASE("conv 3x3 with padding matches hand arithmetic") {
  auto proto = ts::make_model("conv3");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {-1, 1, 3, 3});
  // all-ones 3x3 kernel = neighborhood sum
  ts::set_float_tensor(graph->add_initializer(), "w", {1, 1, 3, 3},
                       std::vector<float>(9, 1.0f));
  auto* conv = ts::add_node(graph, "Conv", {"x", "w"}, {"y"});
  ts::add_ints_attr(conv, "kernel_shape", {3, 3});
  ts::add_ints_attr(conv, "pads", {1, 1, 1, 1});
  ts::set_value_info(graph->add_output(), "y", {-1, 1, 3, 3});

  const Model model = model_from_proto(proto);
  const Tensor out = model.run(make_input({1, 1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  // center = sum of all = 45; corner (0,0) = 1+2+4+5 = 12
  CHECK(out.data[4] == doctest::Approx(45.0));
  CHECK(out.data[0] == doctest::Approx(12.0));
}

TEST_CASE("average pool and max pool") {
  auto proto = ts::make_model("pool");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {-1, 1, 4, 4});
  auto* avg = ts::add_node(graph, "AveragePool", {"x"}, {"a"});
  ts::add_ints_attr(avg, "kernel_shape", {2, 2});
  ts::add_ints_attr(avg, "strides", {2, 2});
  auto* mx = ts::add_node(graph, "MaxPool", {"a"}, {"y"});
  ts::add_ints_attr(mx, "kernel_shape", {2, 2});
  ts::add_ints_attr(mx, "strides", {1, 1});
  ts::set_value_info(graph->add_output(), "y", {-1, 1, 1, 1});

  std::vector<float> x(16);
  for (int i = 0; i < 16; ++i) x[static_cast<std::size_t>(i)] = static_cast<float>(i);
  const Model model = model_from_proto(proto);
  const Tensor out = model.run(make_input({1, 1, 4, 4}, x));
  // avg pools: [[2.5, 4.5], [10.5, 12.5]]; max of those = 12.5
  REQUIRE(out.data.size() == 1);
  CHECK(out.data[0] == doctest::Approx(12.5));
}

TEST_CASE("global average pool, flatten, gemm") {
  auto proto = ts::make_model("gap_gemm");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {-1, 2, 2, 2});
  ts::add_node(graph, "GlobalAveragePool", {"x"}, {"g"});
  auto* flatten = ts::add_node(graph, "Flatten", {"g"}, {"f"});
  ts::add_int_attr(flatten, "axis", 1);
  // y = f * W^T + c with W = [[1, 2], [3, 4], [5, 6]], c = [0.5, 0.5, 0.5]
  ts::set_float_tensor(graph->add_initializer(), "w", {3, 2}, {1, 2, 3, 4, 5, 6});
  ts::set_float_tensor(graph->add_initializer(), "c", {3}, {0.5f, 0.5f, 0.5f});
  auto* gemm = ts::add_node(graph, "Gemm", {"f", "w", "c"}, {"y"});
  ts::add_int_attr(gemm, "transB", 1);
  ts::set_value_info(graph->add_output(), "y", {-1, 3});

  const Model model = model_from_proto(proto);
  // channel means: (1+2+3+4)/4 = 2.5 and (5+6+7+8)/4 = 6.5
  const Tensor out = model.run(make_input({1, 2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8}));
  REQUIRE(out.shape == std::vector<std::int64_t>{1, 3});
  CHECK(out.data[0] == doctest::Approx(1 * 2.5 + 2 * 6.5 + 0.5));
  CHECK(out.data[1] == doctest::Approx(3 * 2.5 + 4 * 6.5 + 0.5));
  CHECK(out.data[2] == doctest::Approx(5 * 2.5 + 6 * 6.5 + 0.5));
}

TEST_CASE("elementwise broadcasting and batch norm") {
  auto proto = ts::make_model("bn");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {-1, 2, 1, 2});
  ts::set_float_tensor(graph->add_initializer(), "scale", {2}, {1.0f, 2.0f});
  ts::set_float_tensor(graph->add_initializer(), "bias", {2}, {0.0f, 1.0f});
  ts::set_float_tensor(graph->add_initializer(), "mean", {2}, {1.0f, 2.0f});
  ts::set_float_tensor(graph->add_initializer(), "var", {2}, {4.0f, 9.0f});
  auto* bn = ts::add_node(graph, "BatchNormalization", {"x", "scale", "bias", "mean", "var"}, {"n"});
  ts::add_float_attr(bn, "epsilon", 0.0f);
  // add a [C,1,1]-shaped constant, exercising broadcast
  ts::set_float_tensor(graph->add_initializer(), "offset", {2, 1, 1}, {10.0f, 20.0f});
  ts::add_node(graph, "Add", {"n", "offset"}, {"y"});
  ts::set_value_info(graph->add_output(), "y", {-1, 2, 1, 2});

  const Model model = model_from_proto(proto);
  const Tensor out = model.run(make_input({1, 2, 1, 2}, {1, 5, 2, 8}));
  // ch0: (1-1)/2*1+0 = 0, (5-1)/2 = 2; +10 -> 10, 12
  // ch1: (2-2)/3*2+1 = 1, (8-2)/3*2+1 = 5; +20 -> 21, 25
  CHECK(out.data[0] == doctest::Approx(10.0));
  CHECK(out.data[1] == doctest::Approx(12.0));
  CHECK(out.data[2] == doctest::Approx(21.0));
  CHECK(out.data[3] == doctest::Approx(25.0));
}

TEST_CASE("reshape with -1 and transpose") {
  auto proto = ts::make_model("reshape");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {2, 3});
  ts::set_int64_tensor(graph->add_initializer(), "shape", {2}, {3, -1});
  ts::add_node(graph, "Reshape", {"x", "shape"}, {"r"});
  auto* tr = ts::add_node(graph, "Transpose", {"r"}, {"y"});
  ts::add_ints_attr(tr, "perm", {1, 0});
  ts::set_value_info(graph->add_output(), "y", {2, 3});

  const Model model = model_from_proto(proto);
  const Tensor out = model.run(make_input({2, 3}, {1, 2, 3, 4, 5, 6}));
  REQUIRE(out.shape == std::vector<std::int64_t>{2, 3});
  // reshape to [3,2] row-major then transpose
  CHECK(out.data == std::vector<float>{1, 3, 5, 2, 4, 6});
}

TEST_CASE("concat along channels") {
  auto proto = ts::make_model("concat");
  auto* graph = proto.mutable_graph();
  ts::set_value_info(graph->add_input(), "x", {-1, 1, 1, 2});
  ts::add_node(graph, "Relu", {"x"}, {"a"});
  auto* concat = ts::add_node(graph, "Concat", {"x", "a"}, {"y"});
  ts::add_int_attr(concat, "axis", 1);
  ts::set_value_info(graph->add_output(), "y", {-1, 2, 1, 2});

  const Model model = model_from_proto(proto);
  const Tensor out = model.run(make_input({1, 1, 1, 2}, {-1.0f, 2.0f}));
  CHECK(out.data == std::vector<float>{-1.0f, 2.0f, 0.0f, 2.0f});
}

TEST_CASE("unsupported operator raises InferenceError naming it") {
  testsupport::TempDir tmp("onnx");
  const auto path = tmp / "bad.onnx";
  ts::write_unsupported_op_model(path);
  const Model model = Model::load(path);
  try {
    model.run(make_input({1, 1, 1, 1}, {1.0f}));
    FAIL("expected InferenceError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InferenceError);
    CHECK(std::string(e.what()).find("Softmax") != std::string::npos);
  }
}

TEST_CASE("input shape validation against declared dims") {
  testsupport::TempDir tmp("onnx");
  const auto path = tmp / "toy.onnx";
  ts::write_toy_extractor(path, 3, 4, 32, 4, 1);
  const Model model = Model::load(path);
  REQUIRE(model.input_shape() == std::vector<std::int64_t>{-1, 3, 32, 32});
  try {
    model.run(Tensor::zeros({1, 3, 16, 16}));
    FAIL("expected InferenceError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InferenceError);
  }
}

TEST_CASE("model file loading errors") {
  try {
    Model::load("/nonexistent/model.onnx");
    FAIL("expected ModelLoadError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ModelLoadError);
  }
  const char garbage[] = "this is not a protobuf at all, definitely not";
  CHECK_THROWS_AS(Model::parse(garbage, sizeof(garbage)), Error);
}

}  // TEST_SUITE

#include "toy_model.hpp"

#include <fstream>
#include <random>
#include <stdexcept>

namespace testsupport {

void set_float_tensor(pb::TensorProto* tensor, const std::string& name,
                      const std::vector<std::int64_t>& dims, const std::vector<float>& values) {
  tensor->set_name(name);
  tensor->set_data_type(pb::TensorProto::FLOAT);
  for (auto d : dims) tensor->add_dims(d);
  for (float v : values) tensor->add_float_data(v);
}

void set_int64_tensor(pb::TensorProto* tensor, const std::string& name,
                      const std::vector<std::int64_t>& dims,
                      const std::vector<std::int64_t>& values) {
  tensor->set_name(name);
  tensor->set_data_type(pb::TensorProto::INT64);
  for (auto d : dims) tensor->add_dims(d);
  for (auto v : values) tensor->add_int64_data(v);
}

pb::NodeProto* add_node(pb::GraphProto* graph, const std::string& op,
                        const std::vector<std::string>& inputs,
                        const std::vector<std::string>& outputs) {
  pb::NodeProto* node = graph->add_node();
  node->set_op_type(op);
  for (const auto& in : inputs) node->add_input(in);
  for (const auto& out : outputs) node->add_output(out);
  return node;
}

void add_int_attr(pb::NodeProto* node, const std::string& name, std::int64_t value) {
  pb::AttributeProto* attr = node->add_attribute();
  attr->set_name(name);
  attr->set_type(pb::AttributeProto::INT);
  attr->set_i(value);
}

void add_ints_attr(pb::NodeProto* node, const std::string& name,
                   const std::vector<std::int64_t>& values) {
  pb::AttributeProto* attr = node->add_attribute();
  attr->set_name(name);
  attr->set_type(pb::AttributeProto::INTS);
  for (auto v : values) attr->add_ints(v);
}

void add_float_attr(pb::NodeProto* node, const std::string& name, float value) {
  pb::AttributeProto* attr = node->add_attribute();
  attr->set_name(name);
  attr->set_type(pb::AttributeProto::FLOAT);
  attr->set_f(value);
}

void set_value_info(pb::ValueInfoProto* info, const std::string& name,
                    const std::vector<std::int64_t>& dims) {
  info->set_name(name);
  auto* tensor_type = info->mutable_type()->mutable_tensor_type();
  tensor_type->set_elem_type(pb::TensorProto::FLOAT);
  auto* shape = tensor_type->mutable_shape();
  int symbol = 0;
  for (auto d : dims) {
    auto* dim = shape->add_dim();
    if (d < 0) {
      dim->set_dim_param("sym" + std::to_string(symbol++));
    } else {
      dim->set_dim_value(d);
    }
  }
}

pb::ModelProto make_model(const std::string& graph_name) {
  pb::ModelProto model;
  model.set_ir_version(8);
  model.set_producer_name("sameval-tests");
  auto* opset = model.add_opset_import();
  opset->set_domain("");
  opset->set_version(13);
  model.mutable_graph()->set_name(graph_name);
  return model;
}

void save_model(const pb::ModelProto& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model fixture " + path.string());
  std::string bytes;
  model.SerializeToString(&bytes);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_gap_model(const std::filesystem::path& path, int channels) {
  pb::ModelProto model = make_model("gap");
  auto* graph = model.mutable_graph();
  set_value_info(graph->add_input(), "input", {-1, channels, -1, -1});
  add_node(graph, "GlobalAveragePool", {"input"}, {"pooled"});
  auto* flatten = add_node(graph, "Flatten", {"pooled"}, {"features"});
  add_int_attr(flatten, "axis", 1);
  set_value_info(graph->add_output(), "features", {-1, channels});
  save_model(model, path);
}

void write_toy_extractor(const std::filesystem::path& path, int in_channels, int out_channels,
                         int hw, int grid, unsigned seed) {
  if (hw % grid != 0) throw std::runtime_error("hw must be a multiple of grid");
  const int pool = hw / grid;

  pb::ModelProto model = make_model("toy_extractor");
  auto* graph = model.mutable_graph();
  set_value_info(graph->add_input(), "input", {-1, in_channels, hw, hw});

  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-0.5f, 0.5f);
  std::vector<float> weights(static_cast<std::size_t>(out_channels) * in_channels);
  for (float& w : weights) w = dist(rng);
  std::vector<float> bias(static_cast<std::size_t>(out_channels));
  for (float& b : bias) b = dist(rng);

  set_float_tensor(graph->add_initializer(), "conv_w", {out_channels, in_channels, 1, 1}, weights);
  set_float_tensor(graph->add_initializer(), "conv_b", {out_channels}, bias);

  auto* conv = add_node(graph, "Conv", {"input", "conv_w", "conv_b"}, {"mixed"});
  add_ints_attr(conv, "kernel_shape", {1, 1});
  add_node(graph, "Relu", {"mixed"}, {"act"});
  auto* pool_node = add_node(graph, "AveragePool", {"act"}, {"pooled"});
  add_ints_attr(pool_node, "kernel_shape", {pool, pool});
  add_ints_attr(pool_node, "strides", {pool, pool});
  auto* flatten = add_node(graph, "Flatten", {"pooled"}, {"features"});
  add_int_attr(flatten, "axis", 1);

  set_value_info(graph->add_output(), "features", {-1, out_channels * grid * grid});
  save_model(model, path);
}

void write_unsupported_op_model(const std::filesystem::path& path) {
  pb::ModelProto model = make_model("unsupported");
  auto* graph = model.mutable_graph();
  set_value_info(graph->add_input(), "input", {-1, 1, -1, -1});
  add_node(graph, "Softmax", {"input"}, {"out"});
  set_value_info(graph->add_output(), "out", {-1, 1, -1, -1});
  save_model(model, path);
}

}  // namespace testsupport

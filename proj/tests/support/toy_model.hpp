#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "onnx_mini.pb.h"

namespace testsupport {

namespace pb = sameval::onnx_pb;

// -- low-level proto assembly helpers, shared by runtime tests and fixtures

void set_float_tensor(pb::TensorProto* tensor, const std::string& name,
                      const std::vector<std::int64_t>& dims, const std::vector<float>& values);
void set_int64_tensor(pb::TensorProto* tensor, const std::string& name,
                      const std::vector<std::int64_t>& dims,
                      const std::vector<std::int64_t>& values);

pb::NodeProto* add_node(pb::GraphProto* graph, const std::string& op,
                        const std::vector<std::string>& inputs,
                        const std::vector<std::string>& outputs);

void add_int_attr(pb::NodeProto* node, const std::string& name, std::int64_t value);
void add_ints_attr(pb::NodeProto* node, const std::string& name,
                   const std::vector<std::int64_t>& values);
void add_float_attr(pb::NodeProto* node, const std::string& name, float value);

/// dims entry < 0 becomes a symbolic dim_param.
void set_value_info(pb::ValueInfoProto* info, const std::string& name,
                    const std::vector<std::int64_t>& dims);

pb::ModelProto make_model(const std::string& graph_name);
void save_model(const pb::ModelProto& model, const std::filesystem::path& path);

// -- ready-made fixture models

// input [N, channels, H, W] (all but channels symbolic)
//   -> GlobalAveragePool -> Flatten -> [N, channels]
void write_gap_model(const std::filesystem::path& path, int channels);

// input [N, in_channels, hw, hw] -> Conv 1x1 (seeded deterministic weights)
// -> Relu -> AveragePool hw/grid stride hw/grid -> Flatten
// -> [N, out_channels * grid * grid]
void write_toy_extractor(const std::filesystem::path& path, int in_channels, int out_channels,
                         int hw, int grid, unsigned seed);

/// Single node with an operator the runtime does not implement.
void write_unsupported_op_model(const std::filesystem::path& path);

}  // namespace testsupport

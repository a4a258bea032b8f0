#include "sameval/onnx_runtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "onnx_mini.pb.h"

namespace sameval::onnx {

namespace {

[[noreturn]] void fail(const std::string& message) { raise(ErrorKind::InferenceError, message); }

std::int64_t checked_elements(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (auto d : shape) {
    if (d < 0) fail("negative dimension in runtime shape");
    n *= d;
  }
  return n;
}

// --- TensorProto decoding -------------------------------------------------

float le_f32(const unsigned char* p) {
  std::uint32_t bits = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
                       std::uint32_t(p[3]) << 24;
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

std::int64_t le_i64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return static_cast<std::int64_t>(v);
}

Tensor tensor_from_proto(const onnx_pb::TensorProto& proto) {
  Tensor t;
  t.shape.assign(proto.dims().begin(), proto.dims().end());
  const std::int64_t count = checked_elements(t.shape);
  const auto* raw = reinterpret_cast<const unsigned char*>(proto.raw_data().data());

  switch (proto.data_type()) {
    case onnx_pb::TensorProto::FLOAT:
      t.data.reserve(static_cast<std::size_t>(count));
      if (!proto.raw_data().empty()) {
        if (proto.raw_data().size() != static_cast<std::size_t>(count) * 4) {
          fail("tensor '" + proto.name() + "': raw_data size mismatch");
        }
        for (std::int64_t i = 0; i < count; ++i) t.data.push_back(le_f32(raw + 4 * i));
      } else {
        if (proto.float_data_size() != count) {
          fail("tensor '" + proto.name() + "': float_data size mismatch");
        }
        t.data.assign(proto.float_data().begin(), proto.float_data().end());
      }
      return t;
    case onnx_pb::TensorProto::INT64:
      t.is_i64 = true;
      t.i64.reserve(static_cast<std::size_t>(count));
      if (!proto.raw_data().empty()) {
        if (proto.raw_data().size() != static_cast<std::size_t>(count) * 8) {
          fail("tensor '" + proto.name() + "': raw_data size mismatch");
        }
        for (std::int64_t i = 0; i < count; ++i) t.i64.push_back(le_i64(raw + 8 * i));
      } else {
        if (proto.int64_data_size() != count) {
          fail("tensor '" + proto.name() + "': int64_data size mismatch");
        }
        t.i64.assign(proto.int64_data().begin(), proto.int64_data().end());
      }
      return t;
    case onnx_pb::TensorProto::INT32:
      t.is_i64 = true;
      if (proto.int32_data_size() != count) {
        fail("tensor '" + proto.name() + "': int32_data size mismatch");
      }
      t.i64.assign(proto.int32_data().begin(), proto.int32_data().end());
      return t;
    case onnx_pb::TensorProto::DOUBLE:
      if (proto.double_data_size() != count) {
        fail("tensor '" + proto.name() + "': double_data size mismatch");
      }
      t.data.reserve(static_cast<std::size_t>(count));
      for (double v : proto.double_data()) t.data.push_back(static_cast<float>(v));
      return t;
    default:
      fail("tensor '" + proto.name() + "': unsupported data type " +
           std::to_string(proto.data_type()));
  }
}

// --- attribute helpers ----------------------------------------------------

struct Attrs {
  const onnx_pb::NodeProto* node;

  const onnx_pb::AttributeProto* find(const std::string& name) const {
    for (const auto& a : node->attribute()) {
      if (a.name() == name) return &a;
    }
    return nullptr;
  }
  std::int64_t get_int(const std::string& name, std::int64_t fallback) const {
    const auto* a = find(name);
    return a ? a->i() : fallback;
  }
  float get_float(const std::string& name, float fallback) const {
    const auto* a = find(name);
    return a ? a->f() : fallback;
  }
  std::string get_string(const std::string& name, std::string fallback) const {
    const auto* a = find(name);
    return a ? a->s() : fallback;
  }
  std::vector<std::int64_t> get_ints(const std::string& name,
                                     std::vector<std::int64_t> fallback) const {
    const auto* a = find(name);
    if (!a) return fallback;
    return {a->ints().begin(), a->ints().end()};
  }
};

// --- operators ------------------------------------------------------------

struct PoolGeometry {
  std::int64_t n, c, h, w;
  std::int64_t kh, kw, sh, sw;
  std::int64_t pad_top, pad_left, pad_bottom, pad_right;
  std::int64_t oh, ow;
};

PoolGeometry pool_geometry(const Tensor& x, const Attrs& attrs, const char* op) {
  if (x.shape.size() != 4) fail(std::string(op) + ": expected NCHW input");
  const auto kernel = attrs.get_ints("kernel_shape", {});
  if (kernel.size() != 2) fail(std::string(op) + ": kernel_shape must have 2 entries");
  const auto strides = attrs.get_ints("strides", {1, 1});
  const auto pads = attrs.get_ints("pads", {0, 0, 0, 0});
  const auto auto_pad = attrs.get_string("auto_pad", "NOTSET");
  if (auto_pad != "NOTSET" && auto_pad != "VALID") {
    fail(std::string(op) + ": auto_pad mode '" + auto_pad + "' not supported");
  }
  if (strides.size() != 2 || pads.size() != 4) {
    fail(std::string(op) + ": strides/pads attribute rank not supported");
  }
  if (attrs.get_int("ceil_mode", 0) != 0) fail(std::string(op) + ": ceil_mode not supported");

  PoolGeometry g;
  g.n = x.shape[0];
  g.c = x.shape[1];
  g.h = x.shape[2];
  g.w = x.shape[3];
  g.kh = kernel[0];
  g.kw = kernel[1];
  g.sh = strides[0];
  g.sw = strides[1];
  g.pad_top = auto_pad == "VALID" ? 0 : pads[0];
  g.pad_left = auto_pad == "VALID" ? 0 : pads[1];
  g.pad_bottom = auto_pad == "VALID" ? 0 : pads[2];
  g.pad_right = auto_pad == "VALID" ? 0 : pads[3];
  g.oh = (g.h + g.pad_top + g.pad_bottom - g.kh) / g.sh + 1;
  g.ow = (g.w + g.pad_left + g.pad_right - g.kw) / g.sw + 1;
  if (g.oh < 1 || g.ow < 1) fail(std::string(op) + ": kernel larger than padded input");
  return g;
}

Tensor op_pool(const Tensor& x, const Attrs& attrs, bool is_max) {
  const auto g = pool_geometry(x, attrs, is_max ? "MaxPool" : "AveragePool");
  const bool include_pad = !is_max && attrs.get_int("count_include_pad", 0) != 0;
  Tensor y = Tensor::zeros({g.n, g.c, g.oh, g.ow});

  const std::int64_t in_plane = g.h * g.w;
  const std::int64_t out_plane = g.oh * g.ow;
  for (std::int64_t nc = 0; nc < g.n * g.c; ++nc) {
    const float* src = x.data.data() + nc * in_plane;
    float* dst = y.data.data() + nc * out_plane;
    for (std::int64_t oy = 0; oy < g.oh; ++oy) {
      for (std::int64_t ox = 0; ox < g.ow; ++ox) {
        const std::int64_t y0 = oy * g.sh - g.pad_top;
        const std::int64_t x0 = ox * g.sw - g.pad_left;
        float best = -std::numeric_limits<float>::infinity();
        double sum = 0.0;
        std::int64_t valid = 0;
        for (std::int64_t ky = 0; ky < g.kh; ++ky) {
          for (std::int64_t kx = 0; kx < g.kw; ++kx) {
            const std::int64_t iy = y0 + ky;
            const std::int64_t ix = x0 + kx;
            if (iy < 0 || iy >= g.h || ix < 0 || ix >= g.w) continue;
            const float v = src[iy * g.w + ix];
            best = std::max(best, v);
            sum += v;
            ++valid;
          }
        }
        if (is_max) {
          dst[oy * g.ow + ox] = valid > 0 ? best : 0.0f;
        } else {
          const std::int64_t denom = include_pad ? g.kh * g.kw : std::max<std::int64_t>(valid, 1);
          dst[oy * g.ow + ox] = static_cast<float>(sum / static_cast<double>(denom));
        }
      }
    }
  }
  return y;
}

Tensor op_global_average_pool(const Tensor& x) {
  if (x.shape.size() != 4) fail("GlobalAveragePool: expected NCHW input");
  const std::int64_t planes = x.shape[0] * x.shape[1];
  const std::int64_t plane = x.shape[2] * x.shape[3];
  Tensor y = Tensor::zeros({x.shape[0], x.shape[1], 1, 1});
  for (std::int64_t p = 0; p < planes; ++p) {
    double sum = 0.0;
    const float* src = x.data.data() + p * plane;
    for (std::int64_t i = 0; i < plane; ++i) sum += src[i];
    y.data[static_cast<std::size_t>(p)] = static_cast<float>(sum / static_cast<double>(plane));
  }
  return y;
}

Tensor op_conv(const Tensor& x, const Tensor& w, const Tensor* bias, const Attrs& attrs) {
  if (x.shape.size() != 4 || w.shape.size() != 4) fail("Conv: expected 4-D input and weights");
  if (attrs.get_int("group", 1) != 1) fail("Conv: grouped convolution not supported");
  const auto dilations = attrs.get_ints("dilations", {1, 1});
  if (dilations != std::vector<std::int64_t>{1, 1}) fail("Conv: dilations not supported");
  const auto strides = attrs.get_ints("strides", {1, 1});
  const auto pads = attrs.get_ints("pads", {0, 0, 0, 0});
  const auto auto_pad = attrs.get_string("auto_pad", "NOTSET");
  if (auto_pad != "NOTSET" && auto_pad != "VALID") {
    fail("Conv: auto_pad mode '" + auto_pad + "' not supported");
  }
  if (strides.size() != 2 || pads.size() != 4) fail("Conv: strides/pads rank not supported");

  const std::int64_t n = x.shape[0], c = x.shape[1], h = x.shape[2], iw = x.shape[3];
  const std::int64_t m = w.shape[0], wc = w.shape[1], kh = w.shape[2], kw = w.shape[3];
  if (wc != c) fail("Conv: weight channels do not match input");
  if (bias && (bias->shape.size() != 1 || bias->shape[0] != m)) fail("Conv: bad bias shape");
  const std::int64_t pad_top = auto_pad == "VALID" ? 0 : pads[0];
  const std::int64_t pad_left = auto_pad == "VALID" ? 0 : pads[1];
  const std::int64_t pad_bottom = auto_pad == "VALID" ? 0 : pads[2];
  const std::int64_t pad_right = auto_pad == "VALID" ? 0 : pads[3];
  const std::int64_t oh = (h + pad_top + pad_bottom - kh) / strides[0] + 1;
  const std::int64_t ow = (iw + pad_left + pad_right - kw) / strides[1] + 1;
  if (oh < 1 || ow < 1) fail("Conv: kernel larger than padded input");

  Tensor y = Tensor::zeros({n, m, oh, ow});
  const std::int64_t in_plane = h * iw;
  const std::int64_t out_plane = oh * ow;
  for (std::int64_t b = 0; b < n; ++b) {
    const float* batch = x.data.data() + b * c * in_plane;
    for (std::int64_t f = 0; f < m; ++f) {
      const float* kernel = w.data.data() + f * c * kh * kw;
      float* dst = y.data.data() + (b * m + f) * out_plane;
      const float bias_v = bias ? bias->data[static_cast<std::size_t>(f)] : 0.0f;
      for (std::int64_t oy = 0; oy < oh; ++oy) {
        for (std::int64_t ox = 0; ox < ow; ++ox) {
          double acc = bias_v;
          const std::int64_t y0 = oy * strides[0] - pad_top;
          const std::int64_t x0 = ox * strides[1] - pad_left;
          for (std::int64_t ch = 0; ch < c; ++ch) {
            const float* plane = batch + ch * in_plane;
            const float* kplane = kernel + ch * kh * kw;
            for (std::int64_t ky = 0; ky < kh; ++ky) {
              const std::int64_t iy = y0 + ky;
              if (iy < 0 || iy >= h) continue;
              for (std::int64_t kx = 0; kx < kw; ++kx) {
                const std::int64_t ix = x0 + kx;
                if (ix < 0 || ix >= iw) continue;
                acc += static_cast<double>(plane[iy * iw + ix]) * kplane[ky * kw + kx];
              }
            }
          }
          dst[oy * ow + ox] = static_cast<float>(acc);
        }
      }
    }
  }
  return y;
}

std::vector<std::int64_t> broadcast_shape(const std::vector<std::int64_t>& a,
                                          const std::vector<std::int64_t>& b) {
  const std::size_t rank = std::max(a.size(), b.size());
  std::vector<std::int64_t> out(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const std::int64_t da = i < rank - a.size() ? 1 : a[i - (rank - a.size())];
    const std::int64_t db = i < rank - b.size() ? 1 : b[i - (rank - b.size())];
    if (da != db && da != 1 && db != 1) fail("elementwise op: shapes are not broadcastable");
    out[i] = std::max(da, db);
  }
  return out;
}

std::vector<std::int64_t> broadcast_strides(const std::vector<std::int64_t>& shape,
                                            std::size_t out_rank) {
  // Stride 0 marks broadcast dimensions.
  std::vector<std::int64_t> strides(out_rank, 0);
  std::int64_t stride = 1;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const std::size_t axis = shape.size() - 1 - i;
    strides[out_rank - 1 - i] = shape[axis] == 1 ? 0 : stride;
    stride *= shape[axis];
  }
  return strides;
}

template <typename F>
Tensor op_elementwise(const Tensor& a, const Tensor& b, F f) {
  if (a.is_i64 || b.is_i64) fail("elementwise op: integer tensors not supported");
  const auto out_shape = broadcast_shape(a.shape, b.shape);
  Tensor y = Tensor::zeros(out_shape);
  const auto sa = broadcast_strides(a.shape, out_shape.size());
  const auto sb = broadcast_strides(b.shape, out_shape.size());

  std::vector<std::int64_t> index(out_shape.size(), 0);
  const std::int64_t total = y.element_count();
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t ia = 0, ib = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
      ia += index[k] * sa[k];
      ib += index[k] * sb[k];
    }
    y.data[static_cast<std::size_t>(flat)] =
        f(a.data[static_cast<std::size_t>(ia)], b.data[static_cast<std::size_t>(ib)]);
    for (std::size_t k = index.size(); k-- > 0;) {
      if (++index[k] < out_shape[k]) break;
      index[k] = 0;
    }
  }
  return y;
}

Tensor op_gemm(const Tensor& a, const Tensor& b, const Tensor* c, const Attrs& attrs) {
  if (a.shape.size() != 2 || b.shape.size() != 2) fail("Gemm: expected 2-D operands");
  const bool trans_a = attrs.get_int("transA", 0) != 0;
  const bool trans_b = attrs.get_int("transB", 0) != 0;
  const float alpha = attrs.get_float("alpha", 1.0f);
  const float beta = attrs.get_float("beta", 1.0f);

  const std::int64_t m = trans_a ? a.shape[1] : a.shape[0];
  const std::int64_t k = trans_a ? a.shape[0] : a.shape[1];
  const std::int64_t kb = trans_b ? b.shape[1] : b.shape[0];
  const std::int64_t n = trans_b ? b.shape[0] : b.shape[1];
  if (k != kb) fail("Gemm: inner dimensions do not match");

  auto at = [&](std::int64_t i, std::int64_t j) {
    return trans_a ? a.data[static_cast<std::size_t>(j * a.shape[1] + i)]
                   : a.data[static_cast<std::size_t>(i * a.shape[1] + j)];
  };
  auto bt = [&](std::int64_t i, std::int64_t j) {
    return trans_b ? b.data[static_cast<std::size_t>(j * b.shape[1] + i)]
                   : b.data[static_cast<std::size_t>(i * b.shape[1] + j)];
  };

  Tensor y = Tensor::zeros({m, n});
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::int64_t p = 0; p < k; ++p) {
        acc += static_cast<double>(at(i, p)) * bt(p, j);
      }
      y.data[static_cast<std::size_t>(i * n + j)] = alpha * static_cast<float>(acc);
    }
  }
  if (c && beta != 0.0f) {
    Tensor scaled_c = *c;
    return op_elementwise(y, scaled_c, [beta](float yy, float cc) { return yy + beta * cc; });
  }
  return y;
}

Tensor op_matmul(const Tensor& a, const Tensor& b) {
  if (a.shape.size() != 2 || b.shape.size() != 2) fail("MatMul: only 2-D operands supported");
  if (a.shape[1] != b.shape[0]) fail("MatMul: inner dimensions do not match");
  const std::int64_t m = a.shape[0], k = a.shape[1], n = b.shape[1];
  Tensor y = Tensor::zeros({m, n});
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::int64_t p = 0; p < k; ++p) {
        acc += static_cast<double>(a.data[static_cast<std::size_t>(i * k + p)]) *
               b.data[static_cast<std::size_t>(p * n + j)];
      }
      y.data[static_cast<std::size_t>(i * n + j)] = static_cast<float>(acc);
    }
  }
  return y;
}

Tensor op_flatten(const Tensor& x, const Attrs& attrs) {
  const std::int64_t rank = static_cast<std::int64_t>(x.shape.size());
  std::int64_t axis = attrs.get_int("axis", 1);
  if (axis < 0) axis += rank;
  if (axis < 0 || axis > rank) fail("Flatten: axis out of range");
  std::int64_t outer = 1, inner = 1;
  for (std::int64_t i = 0; i < axis; ++i) outer *= x.shape[static_cast<std::size_t>(i)];
  for (std::int64_t i = axis; i < rank; ++i) inner *= x.shape[static_cast<std::size_t>(i)];
  Tensor y = x;
  y.shape = {outer, inner};
  return y;
}

Tensor op_reshape(const Tensor& x, const Tensor& shape) {
  if (!shape.is_i64) fail("Reshape: shape operand must be int64");
  std::vector<std::int64_t> target(shape.i64.begin(), shape.i64.end());
  std::int64_t known = 1;
  int infer_axis = -1;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0) target[i] = i < x.shape.size() ? x.shape[i] : 0;
    if (target[i] == -1) {
      if (infer_axis >= 0) fail("Reshape: more than one -1");
      infer_axis = static_cast<int>(i);
    } else {
      known *= target[i];
    }
  }
  const std::int64_t total = x.element_count();
  if (infer_axis >= 0) {
    if (known == 0 || total % known != 0) fail("Reshape: cannot infer dimension");
    target[static_cast<std::size_t>(infer_axis)] = total / known;
  } else if (known != total) {
    fail("Reshape: element count mismatch");
  }
  Tensor y = x;
  y.shape = std::move(target);
  return y;
}

Tensor op_concat(const std::vector<const Tensor*>& inputs, const Attrs& attrs) {
  if (inputs.empty()) fail("Concat: no inputs");
  const std::int64_t rank = static_cast<std::int64_t>(inputs[0]->shape.size());
  std::int64_t axis = attrs.get_int("axis", 0);
  if (axis < 0) axis += rank;
  if (axis < 0 || axis >= rank) fail("Concat: axis out of range");

  std::vector<std::int64_t> out_shape = inputs[0]->shape;
  std::int64_t axis_total = 0;
  for (const Tensor* t : inputs) {
    if (static_cast<std::int64_t>(t->shape.size()) != rank) fail("Concat: rank mismatch");
    for (std::int64_t i = 0; i < rank; ++i) {
      if (i != axis && t->shape[static_cast<std::size_t>(i)] != out_shape[static_cast<std::size_t>(i)]) {
        fail("Concat: non-axis dimensions differ");
      }
    }
    axis_total += t->shape[static_cast<std::size_t>(axis)];
  }
  out_shape[static_cast<std::size_t>(axis)] = axis_total;
  Tensor y = Tensor::zeros(out_shape);

  std::int64_t outer = 1, inner = 1;
  for (std::int64_t i = 0; i < axis; ++i) outer *= out_shape[static_cast<std::size_t>(i)];
  for (std::int64_t i = axis + 1; i < rank; ++i) inner *= out_shape[static_cast<std::size_t>(i)];

  std::int64_t dst_axis_offset = 0;
  for (const Tensor* t : inputs) {
    const std::int64_t t_axis = t->shape[static_cast<std::size_t>(axis)];
    for (std::int64_t o = 0; o < outer; ++o) {
      const float* src = t->data.data() + o * t_axis * inner;
      float* dst = y.data.data() + (o * axis_total + dst_axis_offset) * inner;
      std::copy(src, src + t_axis * inner, dst);
    }
    dst_axis_offset += t_axis;
  }
  return y;
}

Tensor op_batch_norm(const Tensor& x, const Tensor& scale, const Tensor& bias, const Tensor& mean,
                     const Tensor& var, const Attrs& attrs) {
  if (x.shape.size() < 2) fail("BatchNormalization: input rank must be >= 2");
  const std::int64_t channels = x.shape[1];
  for (const Tensor* t : {&scale, &bias, &mean, &var}) {
    if (t->shape.size() != 1 || t->shape[0] != channels) {
      fail("BatchNormalization: parameter shape mismatch");
    }
  }
  const float eps = attrs.get_float("epsilon", 1e-5f);
  std::int64_t inner = 1;
  for (std::size_t i = 2; i < x.shape.size(); ++i) inner *= x.shape[i];

  Tensor y = x;
  for (std::int64_t b = 0; b < x.shape[0]; ++b) {
    for (std::int64_t c = 0; c < channels; ++c) {
      const float s = scale.data[static_cast<std::size_t>(c)];
      const float off = bias.data[static_cast<std::size_t>(c)];
      const float mu = mean.data[static_cast<std::size_t>(c)];
      const float inv = 1.0f / std::sqrt(var.data[static_cast<std::size_t>(c)] + eps);
      float* dst = y.data.data() + (b * channels + c) * inner;
      for (std::int64_t i = 0; i < inner; ++i) dst[i] = s * (dst[i] - mu) * inv + off;
    }
  }
  return y;
}

Tensor op_transpose(const Tensor& x, const Attrs& attrs) {
  const std::size_t rank = x.shape.size();
  std::vector<std::int64_t> perm = attrs.get_ints("perm", {});
  if (perm.empty()) {
    perm.resize(rank);
    for (std::size_t i = 0; i < rank; ++i) perm[i] = static_cast<std::int64_t>(rank - 1 - i);
  }
  if (perm.size() != rank) fail("Transpose: perm rank mismatch");

  std::vector<std::int64_t> out_shape(rank);
  for (std::size_t i = 0; i < rank; ++i) out_shape[i] = x.shape[static_cast<std::size_t>(perm[i])];
  Tensor y = Tensor::zeros(out_shape);

  std::vector<std::int64_t> in_strides(rank, 1);
  for (std::size_t i = rank - 1; i > 0; --i) in_strides[i - 1] = in_strides[i] * x.shape[i];

  std::vector<std::int64_t> index(rank, 0);
  const std::int64_t total = y.element_count();
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t src = 0;
    for (std::size_t k = 0; k < rank; ++k) {
      src += index[k] * in_strides[static_cast<std::size_t>(perm[k])];
    }
    y.data[static_cast<std::size_t>(flat)] = x.data[static_cast<std::size_t>(src)];
    for (std::size_t k = rank; k-- > 0;) {
      if (++index[k] < out_shape[k]) break;
      index[k] = 0;
    }
  }
  return y;
}

}  // namespace

Tensor Tensor::zeros(std::vector<std::int64_t> shape) {
  Tensor t;
  t.shape = std::move(shape);
  t.data.assign(static_cast<std::size_t>(checked_elements(t.shape)), 0.0f);
  return t;
}

struct Model::Impl {
  onnx_pb::ModelProto proto;
  std::map<std::string, Tensor> initializers;
  std::string input_name;
  std::vector<std::int64_t> input_shape;
  std::string output_name;
};

Model Model::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::ModelLoadError, "cannot open model file '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(bytes.data(), bytes.size());
}

Model Model::parse(const void* bytes, std::size_t size) {
  auto impl = std::make_shared<Impl>();
  if (!impl->proto.ParseFromArray(bytes, static_cast<int>(size))) {
    raise(ErrorKind::ModelLoadError, "failed to parse model protobuf");
  }
  if (!impl->proto.has_graph()) raise(ErrorKind::ModelLoadError, "model has no graph");
  const auto& graph = impl->proto.graph();

  for (const auto& init : graph.initializer()) {
    impl->initializers.emplace(init.name(), tensor_from_proto(init));
  }

  for (const auto& input : graph.input()) {
    if (impl->initializers.count(input.name()) != 0) continue;
    if (!impl->input_name.empty()) {
      raise(ErrorKind::ModelLoadError, "expected a single data input, found '" +
                                           impl->input_name + "' and '" + input.name() + "'");
    }
    impl->input_name = input.name();
    for (const auto& dim : input.type().tensor_type().shape().dim()) {
      impl->input_shape.push_back(dim.value_case() == onnx_pb::TensorShapeProto::Dimension::kDimValue
                                      ? dim.dim_value()
                                      : -1);
    }
  }
  if (impl->input_name.empty()) raise(ErrorKind::ModelLoadError, "model has no data input");
  if (graph.output_size() < 1) raise(ErrorKind::ModelLoadError, "model has no output");
  impl->output_name = graph.output(0).name();
  return Model(std::move(impl));
}

const std::string& Model::input_name() const { return impl_->input_name; }
const std::vector<std::int64_t>& Model::input_shape() const { return impl_->input_shape; }
const std::string& Model::output_name() const { return impl_->output_name; }

Tensor Model::run(const Tensor& input) const {
  const auto& graph = impl_->proto.graph();

  // Declared dims must match, symbolic (-1) dims are free.
  if (input.shape.size() != impl_->input_shape.size()) {
    fail("input rank " + std::to_string(input.shape.size()) + " does not match model rank " +
         std::to_string(impl_->input_shape.size()));
  }
  for (std::size_t i = 0; i < input.shape.size(); ++i) {
    if (impl_->input_shape[i] >= 0 && impl_->input_shape[i] != input.shape[i]) {
      fail("input dimension " + std::to_string(i) + " is " + std::to_string(input.shape[i]) +
           ", model expects " + std::to_string(impl_->input_shape[i]));
    }
  }

  std::map<std::string, Tensor> env;
  env.emplace(impl_->input_name, input);

  auto lookup = [&](const std::string& name) -> const Tensor& {
    if (auto it = env.find(name); it != env.end()) return it->second;
    if (auto it = impl_->initializers.find(name); it != impl_->initializers.end()) {
      return it->second;
    }
    fail("node input '" + name + "' is not produced by any earlier node");
  };
  auto lookup_opt = [&](const onnx_pb::NodeProto& node, int index) -> const Tensor* {
    if (index >= node.input_size() || node.input(index).empty()) return nullptr;
    return &lookup(node.input(index));
  };

  for (const auto& node : graph.node()) {
    const Attrs attrs{&node};
    const std::string& op = node.op_type();
    Tensor result;

    if (op == "Conv") {
      result = op_conv(lookup(node.input(0)), lookup(node.input(1)), lookup_opt(node, 2), attrs);
    } else if (op == "Relu") {
      result = lookup(node.input(0));
      for (float& v : result.data) v = std::max(v, 0.0f);
    } else if (op == "MaxPool") {
      result = op_pool(lookup(node.input(0)), attrs, /*is_max=*/true);
    } else if (op == "AveragePool") {
      result = op_pool(lookup(node.input(0)), attrs, /*is_max=*/false);
    } else if (op == "GlobalAveragePool") {
      result = op_global_average_pool(lookup(node.input(0)));
    } else if (op == "Add") {
      result = op_elementwise(lookup(node.input(0)), lookup(node.input(1)),
                              [](float a, float b) { return a + b; });
    } else if (op == "Sub") {
      result = op_elementwise(lookup(node.input(0)), lookup(node.input(1)),
                              [](float a, float b) { return a - b; });
    } else if (op == "Mul") {
      result = op_elementwise(lookup(node.input(0)), lookup(node.input(1)),
                              [](float a, float b) { return a * b; });
    } else if (op == "Div") {
      result = op_elementwise(lookup(node.input(0)), lookup(node.input(1)),
                              [](float a, float b) { return a / b; });
    } else if (op == "Gemm") {
      result = op_gemm(lookup(node.input(0)), lookup(node.input(1)), lookup_opt(node, 2), attrs);
    } else if (op == "MatMul") {
      result = op_matmul(lookup(node.input(0)), lookup(node.input(1)));
    } else if (op == "Flatten") {
      result = op_flatten(lookup(node.input(0)), attrs);
    } else if (op == "Reshape") {
      result = op_reshape(lookup(node.input(0)), lookup(node.input(1)));
    } else if (op == "Concat") {
      std::vector<const Tensor*> inputs;
      for (const auto& name : node.input()) inputs.push_back(&lookup(name));
      result = op_concat(inputs, attrs);
    } else if (op == "BatchNormalization") {
      result = op_batch_norm(lookup(node.input(0)), lookup(node.input(1)), lookup(node.input(2)),
                             lookup(node.input(3)), lookup(node.input(4)), attrs);
    } else if (op == "Transpose") {
      result = op_transpose(lookup(node.input(0)), attrs);
    } else if (op == "Identity") {
      result = lookup(node.input(0));
    } else if (op == "Constant") {
      const auto* value = attrs.find("value");
      if (!value) fail("Constant: only the 'value' attribute form is supported");
      result = tensor_from_proto(value->t());
    } else {
      fail("unsupported operator '" + op + "'");
    }

    if (node.output_size() < 1) fail("node without outputs");
    env[node.output(0)] = std::move(result);
  }

  auto it = env.find(impl_->output_name);
  if (it == env.end()) fail("graph output '" + impl_->output_name + "' was never produced");
  return std::move(it->second);
}

}  // namespace sameval::onnx

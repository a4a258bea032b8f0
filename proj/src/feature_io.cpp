#include "sameval/feature_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <limits>

namespace sameval::extractor {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'M', 'E', 'F', 'E', 'A', 'T'};
constexpr std::uint16_t kVersion = 1;

// The format is explicitly little-endian; write byte by byte rather than
// assuming host order.
template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

float get_le_f32(const unsigned char* p) {
  const std::uint32_t bits = get_le<std::uint32_t>(p);
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

void put_le_f32(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  put_le(out, bits);
}

}  // namespace

void write_features(const FeatureMatrix& features, const std::filesystem::path& path) {
  std::string buffer;
  const std::uint64_t n = static_cast<std::uint64_t>(features.n());
  const std::uint64_t d = static_cast<std::uint64_t>(features.d());
  buffer.reserve(8 + 2 + 8 + 8 + 4 + features.extractor_id().size() + n * d * 4);

  buffer.append(kMagic, sizeof(kMagic));
  put_le(buffer, kVersion);
  put_le(buffer, n);
  put_le(buffer, d);
  if (features.extractor_id().size() > std::numeric_limits<std::uint32_t>::max()) {
    raise(ErrorKind::InvalidArgument, "extractor_id too long");
  }
  put_le(buffer, static_cast<std::uint32_t>(features.extractor_id().size()));
  buffer.append(features.extractor_id());

  const auto& rows = features.rows();
  for (std::uint64_t r = 0; r < n; ++r) {
    for (std::uint64_t c = 0; c < d; ++c) {
      put_le_f32(buffer, rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) raise(ErrorKind::IoError, "short write to '" + path.string() + "'");
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::string buffer((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(buffer.data());
  const std::size_t size = buffer.size();

  constexpr std::size_t kHeaderFixed = 8 + 2 + 8 + 8 + 4;
  if (size < kHeaderFixed) raise(ErrorKind::FormatError, "truncated SAMEFEAT header");
  if (std::memcmp(bytes, kMagic, sizeof(kMagic)) != 0) {
    raise(ErrorKind::FormatError, "'" + path.string() + "' is not a SAMEFEAT file");
  }
  const auto version = get_le<std::uint16_t>(bytes + 8);
  if (version != kVersion) {
    raise(ErrorKind::FormatError, "unsupported SAMEFEAT version " + std::to_string(version));
  }
  const auto n = get_le<std::uint64_t>(bytes + 10);
  const auto d = get_le<std::uint64_t>(bytes + 18);
  const auto id_len = get_le<std::uint32_t>(bytes + 26);
  if (n == 0 || d == 0) raise(ErrorKind::FormatError, "SAMEFEAT with empty matrix");
  if (n > (std::uint64_t(1) << 32) || d > (std::uint64_t(1) << 24)) {
    raise(ErrorKind::FormatError, "implausible SAMEFEAT dimensions");
  }

  const std::size_t data_offset = kHeaderFixed + id_len;
  const std::uint64_t expected = data_offset + n * d * 4;
  if (size != expected) {
    raise(ErrorKind::FormatError, "SAMEFEAT size " + std::to_string(size) + " does not match " +
                                      std::to_string(expected) + " expected from header");
  }
  std::string extractor_id(buffer.data() + kHeaderFixed, id_len);

  Eigen::MatrixXf rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const unsigned char* p = bytes + data_offset;
  for (std::uint64_t r = 0; r < n; ++r) {
    for (std::uint64_t c = 0; c < d; ++c, p += 4) {
      rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_le_f32(p);
    }
  }
  return FeatureMatrix(std::move(rows), std::move(extractor_id));
}

}  // namespace sameval::extractor

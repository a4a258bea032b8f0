#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "sameval/feature_io.hpp"
#include "support/gen.hpp"
#include "support/tmpdir.hpp"

using namespace sameval;
using namespace sameval::extractor;

TEST_SUITE("feature_io") {

TEST_CASE("round trip is bit-exact") {
  testsupport::TempDir tmp("featio");
  std::mt19937_64 rng(31);
  const FeatureMatrix original(testsupport::random_features(rng, 17, 9), "inception-v1/pool3");
  const auto path = tmp / "features.feat";
  write_features(original, path);
  const FeatureMatrix loaded = read_features(path);

  CHECK(loaded.n() == original.n());
  CHECK(loaded.d() == original.d());
  CHECK(loaded.extractor_id() == original.extractor_id());
  CHECK((loaded.rows().array() == original.rows().array()).all());
}

TEST_CASE("truncated file is rejected") {
  testsupport::TempDir tmp("featio");
  std::mt19937_64 rng(32);
  const FeatureMatrix original(testsupport::random_features(rng, 5, 4), "e");
  const auto path = tmp / "features.feat";
  write_features(original, path);

  // drop the last 7 bytes
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 7);
  try {
    read_features(path);
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FormatError);
  }
}

TEST_CASE("bad magic is rejected") {
  testsupport::TempDir tmp("featio");
  const auto path = tmp / "not.feat";
  std::ofstream(path, std::ios::binary) << "HELLO WORLD PADDING PADDING PADDING";
  try {
    read_features(path);
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FormatError);
  }
}

TEST_CASE("missing file raises IoError; empty matrix cannot exist") {
  try {
    read_features("/nonexistent/path.feat");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
  // n = 0 is unconstructible, so an n=0 write attempt is impossible by type
  CHECK_THROWS_AS(FeatureMatrix(Eigen::MatrixXf(0, 3), "e"), Error);
}

}  // TEST_SUITE

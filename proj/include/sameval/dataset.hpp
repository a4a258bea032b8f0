#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sameval/types.hpp"

namespace sameval::data {

struct ResolutionPolicy {
  enum class Mode { Strict, ResizeToReference };
  Mode mode = Mode::Strict;
  int ref_width = 0;
  int ref_height = 0;
};

// Decode one slice file; under ResizeToReference the image is bilinearly
// resized to the reference dimensions (plain resize, no padding or aspect
// preservation). Strict mode returns the image as decoded; dimension
// mismatches then surface at pairing time.
GrayImage load_slice(const std::filesystem::path& path, const ResolutionPolicy& policy = {});

/// Parsed "<case>_s<index>" slice name (extension already stripped).
struct SliceKey {
  std::string case_id;
  int index = 0;
};

std::optional<SliceKey> parse_slice_name(const std::string& stem);

struct PairEntry {
  std::string pair_id;  // relative filename without extension
  std::map<std::string, std::filesystem::path> files;  // domain label -> file
};

struct PairedDataset {
  std::filesystem::path root;
  std::vector<std::string> domains;
  std::vector<PairEntry> pairs;  // sorted by pair_id
  // Files present in some but not all requested domains, per domain.
  std::map<std::string, std::vector<std::string>> unmatched;
};

// Pairs PNG slices across root/<domain> directories by identical relative
// filename. Unmatched files are reported, never silently dropped.
PairedDataset discover_pairs(const std::filesystem::path& root,
                             std::span<const std::string> domains);

// Manifest override: JSON {"pairs": {"<pair_id>": {"<domain>": "relative/path", ...}}}.
PairedDataset load_manifest(const std::filesystem::path& root,
                            const std::filesystem::path& manifest_path,
                            std::span<const std::string> domains);

// Stacks slices into a contiguous volume, axial index as the third
// dimension. `indices` are the encoded slice numbers; a gap raises
// NonContiguousIndices.
ScalarVolume assemble_volume(std::span<const GrayImage> slices, std::span<const int> indices);

/// Inverse of assemble_volume, mainly for round-trip checks.
std::vector<GrayImage> volume_slices(const ScalarVolume& volume);

// Mask stack: a case directory of binary slice PNGs (<case>_s<index>.png,
// nonzero = inside) plus a mask.json sidecar {"dims": [nx, ny, nz],
// "spacing_mm": [sx, sy, sz]?} validated against the stack.
VoxelMask load_mask_stack(const std::filesystem::path& case_dir);
void write_mask_stack(const VoxelMask& mask, const std::string& case_id,
                      const std::filesystem::path& case_dir);

}  // namespace sameval::data

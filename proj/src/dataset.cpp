#include "sameval/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <set>

#include "sameval/png_io.hpp"
#include "sameval/resize.hpp"

namespace sameval::data {

namespace {

using nlohmann::json;

bool is_png(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

std::vector<std::string> list_domain_files(const std::filesystem::path& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_png(entry.path())) continue;
    files.push_back(std::filesystem::relative(entry.path(), dir).generic_string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string strip_extension(const std::string& relative) {
  const auto dot = relative.rfind('.');
  return dot == std::string::npos ? relative : relative.substr(0, dot);
}

}  // namespace

GrayImage load_slice(const std::filesystem::path& path, const ResolutionPolicy& policy) {
  GrayImage image = decode_png(path);
  if (policy.mode == ResolutionPolicy::Mode::ResizeToReference) {
    if (policy.ref_width < 1 || policy.ref_height < 1) {
      raise(ErrorKind::InvalidArgument, "resize_to_reference needs reference dimensions");
    }
    return resize_bilinear(image, policy.ref_width, policy.ref_height);
  }
  return image;
}

std::optional<SliceKey> parse_slice_name(const std::string& stem) {
  const auto sep = stem.rfind("_s");
  if (sep == std::string::npos || sep == 0) return std::nullopt;
  const std::string digits = stem.substr(sep + 2);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  SliceKey key;
  key.case_id = stem.substr(0, sep);
  key.index = std::stoi(digits);
  return key;
}

PairedDataset discover_pairs(const std::filesystem::path& root,
                             std::span<const std::string> domains) {
  if (domains.empty()) raise(ErrorKind::InvalidArgument, "no domains requested");

  PairedDataset dataset;
  dataset.root = root;
  dataset.domains.assign(domains.begin(), domains.end());

  std::map<std::string, std::vector<std::string>> domain_files;
  for (const auto& domain : domains) {
    const auto dir = root / domain;
    if (!std::filesystem::is_directory(dir)) {
      raise(ErrorKind::MissingDomainDir, "domain directory '" + dir.string() + "' does not exist");
    }
    domain_files[domain] = list_domain_files(dir);
  }

  std::set<std::string> all_files;
  for (const auto& [domain, files] : domain_files) all_files.insert(files.begin(), files.end());

  for (const auto& relative : all_files) {
    bool everywhere = true;
    for (const auto& domain : domains) {
      const auto& files = domain_files[domain];
      if (!std::binary_search(files.begin(), files.end(), relative)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) {
      PairEntry entry;
      entry.pair_id = strip_extension(relative);
      for (const auto& domain : domains) entry.files[domain] = root / domain / relative;
      dataset.pairs.push_back(std::move(entry));
    } else {
      for (const auto& domain : domains) {
        const auto& files = domain_files[domain];
        if (std::binary_search(files.begin(), files.end(), relative)) {
          dataset.unmatched[domain].push_back(relative);
        }
      }
    }
  }
  std::sort(dataset.pairs.begin(), dataset.pairs.end(),
            [](const PairEntry& a, const PairEntry& b) { return a.pair_id < b.pair_id; });
  if (dataset.pairs.empty()) {
    raise(ErrorKind::NoPairsFound, "no filenames are shared by all requested domains under '" +
                                       root.string() + "'");
  }
  return dataset;
}

PairedDataset load_manifest(const std::filesystem::path& root,
                            const std::filesystem::path& manifest_path,
                            std::span<const std::string> domains) {
  if (domains.empty()) raise(ErrorKind::InvalidArgument, "no domains requested");
  std::ifstream in(manifest_path);
  if (!in) raise(ErrorKind::IoError, "cannot open manifest '" + manifest_path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    raise(ErrorKind::FormatError, std::string("invalid manifest JSON: ") + e.what());
  }
  if (!j.contains("pairs") || !j.at("pairs").is_object()) {
    raise(ErrorKind::FormatError, "manifest needs a 'pairs' object");
  }

  PairedDataset dataset;
  dataset.root = root;
  dataset.domains.assign(domains.begin(), domains.end());
  for (const auto& [pair_id, mapping] : j.at("pairs").items()) {
    PairEntry entry;
    entry.pair_id = pair_id;
    for (const auto& domain : domains) {
      if (!mapping.contains(domain)) {
        raise(ErrorKind::FormatError,
              "manifest pair '" + pair_id + "' lacks domain '" + domain + "'");
      }
      const auto path = root / mapping.at(domain).get<std::string>();
      if (!std::filesystem::is_regular_file(path)) {
        raise(ErrorKind::IoError, "manifest references missing file '" + path.string() + "'");
      }
      entry.files[domain] = path;
    }
    dataset.pairs.push_back(std::move(entry));
  }
  std::sort(dataset.pairs.begin(), dataset.pairs.end(),
            [](const PairEntry& a, const PairEntry& b) { return a.pair_id < b.pair_id; });
  if (dataset.pairs.empty()) raise(ErrorKind::NoPairsFound, "manifest lists no pairs");
  return dataset;
}

ScalarVolume assemble_volume(std::span<const GrayImage> slices, std::span<const int> indices) {
  if (slices.empty()) raise(ErrorKind::EmptyInput, "no slices to assemble");
  if (indices.size() != slices.size()) {
    raise(ErrorKind::InvalidArgument, "need one encoded index per slice");
  }
  const int w = slices[0].width();
  const int h = slices[0].height();
  for (const auto& slice : slices) {
    if (slice.width() != w || slice.height() != h) {
      raise(ErrorKind::InconsistentDimensions, "slice dimensions vary within the stack");
    }
  }
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] != indices[i - 1] + 1) {
      raise(ErrorKind::NonContiguousIndices,
            "slice indices jump from " + std::to_string(indices[i - 1]) + " to " +
                std::to_string(indices[i]));
    }
  }

  const std::size_t plane = static_cast<std::size_t>(w) * h;
  std::vector<double> voxels;
  voxels.reserve(plane * slices.size());
  for (const auto& slice : slices) {
    voxels.insert(voxels.end(), slice.data().begin(), slice.data().end());
  }
  return ScalarVolume(w, h, static_cast<int>(slices.size()), std::move(voxels),
                      slices[0].max_value(), slices[0].bit_depth_origin());
}

std::vector<GrayImage> volume_slices(const ScalarVolume& volume) {
  std::vector<GrayImage> slices;
  slices.reserve(static_cast<std::size_t>(volume.nz()));
  for (int z = 0; z < volume.nz(); ++z) {
    const auto plane = volume.slice(z);
    slices.emplace_back(volume.nx(), volume.ny(),
                        std::vector<double>(plane.begin(), plane.end()), volume.max_value(),
                        volume.bit_depth_origin());
  }
  return slices;
}

VoxelMask load_mask_stack(const std::filesystem::path& case_dir) {
  const auto sidecar_path = case_dir / "mask.json";
  std::ifstream sidecar(sidecar_path);
  if (!sidecar) raise(ErrorKind::IoError, "missing sidecar '" + sidecar_path.string() + "'");
  json j;
  try {
    sidecar >> j;
  } catch (const json::parse_error& e) {
    raise(ErrorKind::FormatError, std::string("invalid sidecar JSON: ") + e.what());
  }
  if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").size() != 3) {
    raise(ErrorKind::FormatError, "sidecar needs dims [nx, ny, nz]");
  }
  const int nx = j.at("dims")[0].get<int>();
  const int ny = j.at("dims")[1].get<int>();
  const int nz = j.at("dims")[2].get<int>();
  std::optional<std::array<double, 3>> spacing;
  if (j.contains("spacing_mm")) {
    const auto& s = j.at("spacing_mm");
    if (!s.is_array() || s.size() != 3) raise(ErrorKind::FormatError, "spacing_mm needs 3 entries");
    spacing = std::array<double, 3>{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
  }

  // Slices sorted by encoded index, then checked for contiguity.
  std::vector<std::pair<int, std::filesystem::path>> slice_files;
  for (const auto& entry : std::filesystem::directory_iterator(case_dir)) {
    if (!entry.is_regular_file() || !is_png(entry.path())) continue;
    const auto key = parse_slice_name(entry.path().stem().string());
    if (!key.has_value()) {
      raise(ErrorKind::FormatError,
            "mask slice '" + entry.path().filename().string() + "' does not match <case>_s<index>.png");
    }
    slice_files.emplace_back(key->index, entry.path());
  }
  if (slice_files.empty()) raise(ErrorKind::EmptyInput, "no mask slices in '" + case_dir.string() + "'");
  std::sort(slice_files.begin(), slice_files.end());

  std::vector<GrayImage> slices;
  std::vector<int> indices;
  slices.reserve(slice_files.size());
  for (const auto& [index, path] : slice_files) {
    slices.push_back(decode_png(path));
    indices.push_back(index);
  }
  const ScalarVolume volume = assemble_volume(slices, indices);
  if (volume.nx() != nx || volume.ny() != ny || volume.nz() != nz) {
    raise(ErrorKind::InconsistentDimensions,
          "sidecar dims do not match the slice stack in '" + case_dir.string() + "'");
  }

  std::vector<std::uint8_t> voxels(volume.data().size());
  for (std::size_t i = 0; i < voxels.size(); ++i) voxels[i] = volume.data()[i] > 0.0 ? 1 : 0;
  return VoxelMask(nx, ny, nz, std::move(voxels), spacing);
}

void write_mask_stack(const VoxelMask& mask, const std::string& case_id,
                      const std::filesystem::path& case_dir) {
  std::filesystem::create_directories(case_dir);
  const std::size_t plane = static_cast<std::size_t>(mask.nx()) * mask.ny();
  for (int z = 0; z < mask.nz(); ++z) {
    std::vector<double> pixels(plane);
    for (std::size_t i = 0; i < plane; ++i) {
      pixels[i] = mask.data()[static_cast<std::size_t>(z) * plane + i] ? 255.0 : 0.0;
    }
    GrayImage slice(mask.nx(), mask.ny(), std::move(pixels), 255.0, 8);
    char name[32];
    std::snprintf(name, sizeof(name), "_s%03d.png", z + 1);
    encode_png(slice, case_dir / (case_id + name));
  }
  json j;
  j["dims"] = {mask.nx(), mask.ny(), mask.nz()};
  if (mask.spacing_mm().has_value()) {
    j["spacing_mm"] = {(*mask.spacing_mm())[0], (*mask.spacing_mm())[1], (*mask.spacing_mm())[2]};
  }
  std::ofstream out(case_dir / "mask.json", std::ios::trunc);
  if (!out) raise(ErrorKind::IoError, "cannot write mask sidecar");
  out << j.dump(2) << "\n";
}

}  // namespace sameval::data

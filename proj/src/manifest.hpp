#ifndef FACECAP_MANIFEST_HPP_
#define FACECAP_MANIFEST_HPP_

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace facecap {

struct FaceBox {
  double x = 0, y = 0, w = 0, h = 0;
  double area() const { return w * h; }
};

// One JSON-lines record per image:
//   {image_id, path, captions[], split?, n_faces?, face_boxes?}
struct ManifestItem {
  std::string image_id;
  std::string path;
  std::vector<std::string> captions;
  std::string split;  // "", "train", "val" or "test"
  std::optional<int> n_faces;
  std::vector<FaceBox> face_boxes;

  json to_json() const;
  static ManifestItem from_json(const json& j);
};

using Manifest = std::vector<ManifestItem>;

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& items);

struct SubsetReport {
  int retained = 0;
  int excluded = 0;
  int missing = 0;  // unreadable images, skipped with a warning
  std::vector<std::string> warnings;
};

// Keeps the items for which `count_faces` reports at least one face and
// records the count. count_faces may throw IoError/InputError for unreadable
// images; those items are skipped and counted in the report.
Manifest build_face_subset(const Manifest& items,
                           const std::function<int(const ManifestItem&)>& count_faces,
                           SubsetReport* report = nullptr);

// Deterministic train/val/test assignment with proportions 8696:2000:1000
// scaled to the dataset size by largest-remainder rounding.
Manifest split_dataset(const Manifest& items, std::uint64_t seed);

// Largest-remainder allocation of n into the 8696:2000:1000 proportions.
std::array<int, 3> split_counts(int n);

}  // namespace facecap

#endif  // FACECAP_MANIFEST_HPP_

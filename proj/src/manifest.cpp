#include "manifest.hpp"

#include <algorithm>
#include <fstream>

namespace facecap {

json ManifestItem::to_json() const {
  json j{{"image_id", image_id}, {"path", path}, {"captions", captions}};
  if (!split.empty()) j["split"] = split;
  if (n_faces.has_value()) j["n_faces"] = *n_faces;
  if (!face_boxes.empty()) {
    json boxes = json::array();
    for (const auto& b : face_boxes) boxes.push_back({b.x, b.y, b.w, b.h});
    j["face_boxes"] = boxes;
  }
  return j;
}

ManifestItem ManifestItem::from_json(const json& j) {
  ManifestItem item;
  item.image_id = j.at("image_id").get<std::string>();
  item.path = j.value("path", std::string());
  item.captions = j.value("captions", std::vector<std::string>{});
  item.split = j.value("split", std::string());
  if (j.contains("n_faces")) item.n_faces = j.at("n_faces").get<int>();
  if (j.contains("face_boxes")) {
    for (const auto& b : j.at("face_boxes")) {
      if (!b.is_array() || b.size() != 4)
        throw DataError("face_boxes entries must be [x, y, w, h]");
      item.face_boxes.push_back({b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                                 b[3].get<double>()});
    }
  }
  if (!item.split.empty() && item.split != "train" && item.split != "val" &&
      item.split != "test")
    throw DataError("invalid split tag '" + item.split + "' for " + item.image_id);
  return item;
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  Manifest items;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      items.push_back(ManifestItem::from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError("manifest " + path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return items;
}

void write_manifest(const std::string& path, const Manifest& items) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path);
  for (const auto& item : items) out << item.to_json().dump() << "\n";
  if (!out) throw IoError("short write: " + path);
}

Manifest build_face_subset(const Manifest& items,
                           const std::function<int(const ManifestItem&)>& count_faces,
                           SubsetReport* report) {
  SubsetReport local;
  SubsetReport& rep = report ? *report : local;
  Manifest out;
  for (const auto& item : items) {
    int n = 0;
    try {
      n = count_faces(item);
    } catch (const std::exception& e) {
      ++rep.missing;
      rep.warnings.push_back(item.image_id + ": " + e.what());
      continue;
    }
    if (n >= 1) {
      ManifestItem kept = item;
      kept.n_faces = n;
      out.push_back(std::move(kept));
      ++rep.retained;
    } else {
      ++rep.excluded;
    }
  }
  return out;
}

std::array<int, 3> split_counts(int n) {
  // Reference proportions: 8696 train, 2000 val, 1000 test of 11696.
  constexpr double kWeights[3] = {8696.0, 2000.0, 1000.0};
  constexpr double kTotal = 11696.0;
  std::array<int, 3> counts{};
  std::array<double, 3> fracs{};
  int assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = n * kWeights[i] / kTotal;
    counts[static_cast<std::size_t>(i)] = static_cast<int>(exact);
    fracs[static_cast<std::size_t>(i)] = exact - counts[static_cast<std::size_t>(i)];
    assigned += counts[static_cast<std::size_t>(i)];
  }
  int remainder = n - assigned;
  // Distribute by largest fractional part; ties go to the earlier split.
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fracs[static_cast<std::size_t>(a)] > fracs[static_cast<std::size_t>(b)]; });
  for (int i = 0; remainder > 0; i = (i + 1) % 3, --remainder)
    ++counts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  return counts;
}

Manifest split_dataset(const Manifest& items, std::uint64_t seed) {
  if (items.size() < 3) throw InputError("split_dataset needs at least 3 items");
  const auto counts = split_counts(static_cast<int>(items.size()));
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  Manifest out = items;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const char* tag = "test";
    if (pos < static_cast<std::size_t>(counts[0]))
      tag = "train";
    else if (pos < static_cast<std::size_t>(counts[0] + counts[1]))
      tag = "val";
    out[order[pos]].split = tag;
  }
  return out;
}

}  // namespace facecap

#ifndef FACECAP_TEXT_HPP_
#define FACECAP_TEXT_HPP_

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace facecap {

// Lowercase, strip punctuation except intra-word apostrophes/hyphens,
// split on whitespace.
std::vector<std::string> tokenize(const std::string& caption);

// Token ids 0..3 are reserved; real tokens are assigned ids densely from 4
// ordered by (-frequency, token).
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  Vocabulary() = default;

  // train_token_lists: tokenized captions from the training split only.
  static Vocabulary build(const std::vector<std::vector<std::string>>& train_token_lists,
                          int min_count);

  int size() const { return static_cast<int>(id_to_token_.size()); }
  int min_count() const { return min_count_; }

  int id(const std::string& token) const;  // kUnk when absent
  const std::string& token(int id) const;
  bool contains(const std::string& token) const { return token_to_id_.count(token) > 0; }

  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(const std::vector<int>& ids) const;

  json to_json() const;
  static Vocabulary from_json(const json& j);
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  // Content hash over the ordered token list, for checkpoint validation.
  std::uint64_t content_hash() const;

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
  int min_count_ = 1;

  void add_reserved();
};

}  // namespace facecap

#endif  // FACECAP_TEXT_HPP_

#include "text.hpp"

#include <algorithm>

namespace facecap {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

}  // namespace

std::vector<std::string> tokenize(const std::string& caption) {
  const std::string s = lowercase(caption);
  std::string cleaned;
  cleaned.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (is_word_char(c)) {
      cleaned.push_back(c);
    } else if (c == '\'' || c == '-') {
      // Keep only when joining two word characters (don't, rock-climbing).
      const bool prev_ok = !cleaned.empty() && is_word_char(cleaned.back());
      const bool next_ok = i + 1 < s.size() && is_word_char(s[i + 1]);
      cleaned.push_back(prev_ok && next_ok ? c : ' ');
    } else {
      cleaned.push_back(' ');
    }
  }
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : cleaned) {
    if (c == ' ') {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

void Vocabulary::add_reserved() {
  id_to_token_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  token_to_id_.clear();
  for (int i = 0; i < 4; ++i) token_to_id_[id_to_token_[static_cast<std::size_t>(i)]] = i;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& train_token_lists,
                             int min_count) {
  if (min_count < 1) throw InputError("min_count must be >= 1");
  if (train_token_lists.empty()) throw InputError("empty training set for vocabulary");
  std::map<std::string, std::int64_t> freq;
  for (const auto& tokens : train_token_lists)
    for (const auto& t : tokens) ++freq[t];

  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [tok, n] : freq) {
    if (n >= min_count) kept.emplace_back(tok, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.min_count_ = min_count;
  v.add_reserved();
  for (const auto& [tok, n] : kept) {
    (void)n;
    v.token_to_id_[tok] = static_cast<int>(v.id_to_token_.size());
    v.id_to_token_.push_back(tok);
  }
  return v;
}

int Vocabulary::id(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw InputError("token id out of range");
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<std::string> tokens;
  tokens.reserve(ids.size());
  for (int i : ids) tokens.push_back(token(i));
  return tokens;
}

json Vocabulary::to_json() const {
  return json{{"min_count", min_count_}, {"tokens", id_to_token_}};
}

Vocabulary Vocabulary::from_json(const json& j) {
  Vocabulary v;
  v.min_count_ = j.at("min_count").get<int>();
  v.id_to_token_ = j.at("tokens").get<std::vector<std::string>>();
  if (v.id_to_token_.size() < 4) throw DataError("vocabulary missing reserved tokens");
  v.token_to_id_.clear();
  for (std::size_t i = 0; i < v.id_to_token_.size(); ++i) {
    if (!v.token_to_id_.emplace(v.id_to_token_[i], static_cast<int>(i)).second)
      throw DataError("duplicate token in vocabulary: " + v.id_to_token_[i]);
  }
  return v;
}

void Vocabulary::save(const std::string& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

Vocabulary Vocabulary::load(const std::string& path) {
  return from_json(json::parse(read_text_file(path)));
}

std::uint64_t Vocabulary::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : id_to_token_) {
    h = fnv1a64(t.data(), t.size(), h);
    h = fnv1a64("\x1f", 1, h);
  }
  return h;
}

}  // namespace facecap

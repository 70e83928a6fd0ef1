#include "depechemood/emotion_set.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "depechemood/error.hpp"

namespace depechemood {

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

EmotionSet::EmotionSet()
    : EmotionSet(std::vector<std::string>{"AFRAID", "AMUSED", "ANGRY", "ANNOYED",
                                          "DONT_CARE", "HAPPY", "INSPIRED", "SAD"}) {}

EmotionSet::EmotionSet(std::vector<std::string> labels) {
  if (labels.empty()) throw Error("emotion set must contain at least one label");
  std::unordered_set<std::string> seen;
  labels_.reserve(labels.size());
  for (auto& raw : labels) {
    std::string label = to_upper_ascii(raw);
    if (label.empty()) throw Error("empty emotion label");
    if (std::any_of(label.begin(), label.end(),
                    [](unsigned char c) { return std::isspace(c) || c == '\t'; }))
      throw Error("emotion label contains whitespace: '" + label + "'");
    if (!seen.insert(label).second) throw Error("duplicate emotion label: " + label);
    labels_.push_back(std::move(label));
  }
}

EmotionSet EmotionSet::from_list(std::string_view list) {
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
      item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
      item.remove_suffix(1);
    labels.emplace_back(item);
    start = end + 1;
  }
  return EmotionSet(std::move(labels));
}

std::optional<std::size_t> EmotionSet::index_of(std::string_view label) const {
  const std::string key = to_upper_ascii(label);
  auto it = std::find(labels_.begin(), labels_.end(), key);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::string EmotionSet::joined(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += sep;
    out += labels_[i];
  }
  return out;
}

}  // namespace depechemood

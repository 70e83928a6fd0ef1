#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depechemood {

/// Ordered, duplicate-free list of upper-case emotion labels. The order is
/// fixed at construction and indexes every vote vector and lexicon row.
class EmotionSet {
 public:
  /// The eight Rappler Mood Meter dimensions.
  EmotionSet();
  explicit EmotionSet(std::vector<std::string> labels);

  /// Parses "A,B,C" (whitespace around labels is ignored).
  static EmotionSet from_list(std::string_view comma_separated);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Case-insensitive lookup.
  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Comma-joined labels, e.g. for metadata echo.
  std::string joined(char sep = ',') const;

  friend bool operator==(const EmotionSet&, const EmotionSet&) = default;

 private:
  std::vector<std::string> labels_;
};

std::string to_upper_ascii(std::string_view s);

}  // namespace depechemood

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace depechemood {

/// Coarse WordNet part of speech. The enumerator value is the tag character.
enum class PartOfSpeech : char { noun = 'n', verb = 'v', adjective = 'a', adverb = 'r' };

inline constexpr std::array<PartOfSpeech, 4> kAllPartsOfSpeech{
    PartOfSpeech::noun, PartOfSpeech::verb, PartOfSpeech::adjective, PartOfSpeech::adverb};

std::optional<PartOfSpeech> pos_from_char(char c) noexcept;

/// A "lemma#pos" key. Stored in canonical string form, so printing is the
/// identity and parsing validates only.
class LemmaPos {
 public:
  LemmaPos(std::string_view lemma, PartOfSpeech pos);

  /// Parses "lemma#p"; the lemma may itself contain '#', the last one splits.
  /// Throws depechemood::Error on malformed input.
  static LemmaPos parse(std::string_view text);
  static std::optional<LemmaPos> try_parse(std::string_view text) noexcept;

  std::string_view lemma() const noexcept {
    return std::string_view(key_).substr(0, key_.size() - 2);
  }
  PartOfSpeech pos() const noexcept { return static_cast<PartOfSpeech>(key_.back()); }
  const std::string& str() const noexcept { return key_; }

  friend bool operator==(const LemmaPos&, const LemmaPos&) = default;
  friend auto operator<=>(const LemmaPos& a, const LemmaPos& b) { return a.key_ <=> b.key_; }

 private:
  struct Unchecked {};
  LemmaPos(Unchecked, std::string key) : key_(std::move(key)) {}
  std::string key_;
};

/// Set of accepted lemma#pos keys (the WordNet lemma list in practice).
class VocabularyFilter {
 public:
  /// Throws if `entries` is empty: an empty filter is a configuration error.
  explicit VocabularyFilter(std::unordered_set<std::string> entries);

  /// One "lemma#pos" per line; '#' in column 1 starts a comment; blank lines skipped.
  static VocabularyFilter load(std::istream& in);
  static VocabularyFilter load_file(const std::string& path);

  bool contains(const LemmaPos& lp) const { return entries_.contains(lp.str()); }
  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

/// Surface-form lemma lookup with per-PoS suffix rewrite rules as fallback.
class LemmaTable {
 public:
  struct SuffixRule {
    std::string suffix;
    std::string replacement;
  };

  void add_entry(std::string_view surface, PartOfSpeech pos, std::string_view lemma);
  void add_rule(PartOfSpeech pos, std::string_view suffix, std::string_view replacement);

  /// `surface<TAB>pos<TAB>lemma` lines, then an optional `[rules]` section of
  /// `pos<TAB>suffix<TAB>replacement` lines. '#' in column 1 starts a comment.
  static LemmaTable load(std::istream& in);
  static LemmaTable load_file(const std::string& path);

  std::optional<std::string_view> lookup(std::string_view surface, PartOfSpeech pos) const;
  std::span<const SuffixRule> rules(PartOfSpeech pos) const;

  /// Rule-derived lemma candidates for `surface` in rule order; never empty strings.
  std::vector<std::string> apply_rules(std::string_view surface, PartOfSpeech pos) const;

  std::size_t entry_count() const noexcept { return entries_.size(); }

 private:
  static std::size_t pos_slot(PartOfSpeech pos) noexcept;

  std::unordered_map<std::string, std::string> entries_;  // "surface\tp" -> lemma
  std::array<std::vector<SuffixRule>, 4> rules_;
};

/// How many candidates an ambiguous surface form contributes.
enum class AmbiguityPolicy { all, first };

/// Splits on anything that is neither a letter nor a digit, lower-cases, and
/// drops tokens containing digits. Input is UTF-8; invalid bytes separate tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Maps surface tokens to lemma#pos candidates. Per PoS a table hit wins and is
/// always licensed; otherwise the identity form and rule rewrites are licensed
/// when `vocab` accepts them. Tokens with no licensed candidate pass through as
/// (token, n). Table hits come first, then vocabulary candidates, each in n, v, a, r order.
std::vector<LemmaPos> lemmatize(std::span<const std::string> tokens, const LemmaTable& table,
                                const VocabularyFilter* vocab, AmbiguityPolicy policy);

/// Subsequence of `tokens` accepted by `vocab`, duplicates preserved.
std::vector<LemmaPos> filter_vocabulary(std::span<const LemmaPos> tokens,
                                        const VocabularyFilter& vocab);

/// Bundles the tables used to turn raw text into lemma#pos streams.
struct TextPipeline {
  const LemmaTable* table = nullptr;  // null: empty table
  const VocabularyFilter* vocab = nullptr;
  AmbiguityPolicy policy = AmbiguityPolicy::all;

  /// tokenize + lemmatize (no vocabulary filtering).
  std::vector<LemmaPos> lemma_stream(std::string_view text) const;
};

}  // namespace depechemood

template <>
struct std::hash<depechemood::LemmaPos> {
  std::size_t operator()(const depechemood::LemmaPos& lp) const noexcept {
    return std::hash<std::string>{}(lp.str());
  }
};

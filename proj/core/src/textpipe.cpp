#include "depechemood/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <locale>

#include "depechemood/error.hpp"

namespace depechemood {

std::optional<PartOfSpeech> pos_from_char(char c) noexcept {
  switch (c) {
    case 'n': return PartOfSpeech::noun;
    case 'v': return PartOfSpeech::verb;
    case 'a': return PartOfSpeech::adjective;
    case 'r': return PartOfSpeech::adverb;
    default: return std::nullopt;
  }
}

namespace {

bool valid_lemma(std::string_view lemma) noexcept {
  if (lemma.empty()) return false;
  return std::none_of(lemma.begin(), lemma.end(), [](unsigned char c) {
    return std::isspace(c) || std::isupper(c);
  });
}

}  // namespace

LemmaPos::LemmaPos(std::string_view lemma, PartOfSpeech pos) {
  if (!valid_lemma(lemma))
    throw Error("invalid lemma '" + std::string(lemma) + "' (must be non-empty, lower-case, no whitespace)");
  key_.reserve(lemma.size() + 2);
  key_.append(lemma);
  key_ += '#';
  key_ += static_cast<char>(pos);
}

std::optional<LemmaPos> LemmaPos::try_parse(std::string_view text) noexcept {
  if (text.size() < 3 || text[text.size() - 2] != '#') return std::nullopt;
  if (!pos_from_char(text.back())) return std::nullopt;
  if (!valid_lemma(text.substr(0, text.size() - 2))) return std::nullopt;
  return LemmaPos(Unchecked{}, std::string(text));
}

LemmaPos LemmaPos::parse(std::string_view text) {
  auto lp = try_parse(text);
  if (!lp) throw Error("malformed lemma#pos token '" + std::string(text) + "'");
  return *std::move(lp);
}

// ---------------------------------------------------------------------------

VocabularyFilter::VocabularyFilter(std::unordered_set<std::string> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error("vocabulary filter is empty");
}

VocabularyFilter VocabularyFilter::load(std::istream& in) {
  std::unordered_set<std::string> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto lp = LemmaPos::try_parse(line);
    if (!lp) throw ParseError("vocabulary entry is not lemma#pos: '" + line + "'", lineno);
    entries.insert(lp->str());
  }
  return VocabularyFilter(std::move(entries));
}

VocabularyFilter VocabularyFilter::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vocabulary file: " + path);
  return load(in);
}

// ---------------------------------------------------------------------------

std::size_t LemmaTable::pos_slot(PartOfSpeech pos) noexcept {
  switch (pos) {
    case PartOfSpeech::noun: return 0;
    case PartOfSpeech::verb: return 1;
    case PartOfSpeech::adjective: return 2;
    case PartOfSpeech::adverb: return 3;
  }
  return 0;
}

static std::string table_key(std::string_view surface, PartOfSpeech pos) {
  std::string key(surface);
  key += '\t';
  key += static_cast<char>(pos);
  return key;
}

void LemmaTable::add_entry(std::string_view surface, PartOfSpeech pos, std::string_view lemma) {
  if (surface.empty()) throw Error("lemma table: empty surface form");
  if (!valid_lemma(lemma)) throw Error("lemma table: invalid lemma '" + std::string(lemma) + "'");
  entries_[table_key(surface, pos)] = std::string(lemma);
}

void LemmaTable::add_rule(PartOfSpeech pos, std::string_view suffix, std::string_view replacement) {
  if (suffix.empty() && replacement.empty()) throw Error("lemma table: empty rule");
  rules_[pos_slot(pos)].push_back({std::string(suffix), std::string(replacement)});
}

static std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

LemmaTable LemmaTable::load(std::istream& in) {
  LemmaTable table;
  bool in_rules = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line == "[rules]") {
      in_rules = true;
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", lineno);
    try {
      if (in_rules) {
        auto pos = fields[0].size() == 1 ? pos_from_char(fields[0][0]) : std::nullopt;
        if (!pos) throw Error("unknown part of speech '" + std::string(fields[0]) + "'");
        table.add_rule(*pos, fields[1], fields[2]);
      } else {
        auto pos = fields[1].size() == 1 ? pos_from_char(fields[1][0]) : std::nullopt;
        if (!pos) throw Error("unknown part of speech '" + std::string(fields[1]) + "'");
        table.add_entry(fields[0], *pos, fields[2]);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return table;
}

LemmaTable LemmaTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma table: " + path);
  return load(in);
}

std::optional<std::string_view> LemmaTable::lookup(std::string_view surface, PartOfSpeech pos) const {
  auto it = entries_.find(table_key(surface, pos));
  if (it == entries_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::span<const LemmaTable::SuffixRule> LemmaTable::rules(PartOfSpeech pos) const {
  return rules_[pos_slot(pos)];
}

std::vector<std::string> LemmaTable::apply_rules(std::string_view surface, PartOfSpeech pos) const {
  std::vector<std::string> out;
  for (const auto& rule : rules(pos)) {
    if (surface.size() < rule.suffix.size() || !surface.ends_with(rule.suffix)) continue;
    std::string lemma(surface.substr(0, surface.size() - rule.suffix.size()));
    lemma += rule.replacement;
    if (lemma.empty()) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Decodes one UTF-8 scalar at `i`; returns 0 and advances one byte on invalid input.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  int len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++i;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0;
  }
  if (i + len > s.size()) {
    ++i;
    return 0;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return 0;
  }
  i += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Unicode classification through the C.UTF-8 wide ctype facet; ASCII-only
// when no UTF-8 locale is installed.
class CharClass {
 public:
  CharClass() {
    for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
      try {
        locale_ = std::locale(name);
        facet_ = &std::use_facet<std::ctype<wchar_t>>(locale_);
        return;
      } catch (const std::runtime_error&) {
      }
    }
  }

  bool is_letter(char32_t cp) const {
    if (cp < 0x80) return std::isalpha(static_cast<int>(cp)) != 0;
    return facet_ && facet_->is(std::ctype_base::alpha, static_cast<wchar_t>(cp));
  }
  bool is_digit(char32_t cp) const {
    if (cp < 0x80) return cp >= '0' && cp <= '9';
    return facet_ && facet_->is(std::ctype_base::digit, static_cast<wchar_t>(cp));
  }
  char32_t to_lower(char32_t cp) const {
    if (cp < 0x80) return static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
    return facet_ ? static_cast<char32_t>(facet_->tolower(static_cast<wchar_t>(cp))) : cp;
  }

 private:
  std::locale locale_ = std::locale::classic();
  const std::ctype<wchar_t>* facet_ = nullptr;
};

const CharClass& char_class() {
  static const CharClass cc;
  return cc;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  const CharClass& cc = char_class();
  std::vector<std::string> tokens;
  std::string current;
  bool has_digit = false;
  auto flush = [&] {
    if (!current.empty() && !has_digit) tokens.push_back(std::move(current));
    current.clear();
    has_digit = false;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (cp != 0 && cc.is_letter(cp)) {
      encode_utf8(cc.to_lower(cp), current);
    } else if (cp != 0 && cc.is_digit(cp)) {
      has_digit = true;
      current += '0';  // placeholder; the token is discarded anyway
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<LemmaPos> lemmatize(std::span<const std::string> tokens, const LemmaTable& table,
                                const VocabularyFilter* vocab, AmbiguityPolicy policy) {
  std::vector<LemmaPos> out;
  out.reserve(tokens.size());
  std::vector<LemmaPos> candidates;
  for (const std::string& token : tokens) {
    candidates.clear();
    auto push_unique = [&](LemmaPos lp) {
      if (std::find(candidates.begin(), candidates.end(), lp) == candidates.end())
        candidates.push_back(std::move(lp));
    };
    std::array<bool, kAllPartsOfSpeech.size()> table_hit{};
    for (std::size_t k = 0; k < kAllPartsOfSpeech.size(); ++k) {
      if (auto hit = table.lookup(token, kAllPartsOfSpeech[k])) {
        push_unique(LemmaPos(*hit, kAllPartsOfSpeech[k]));
        table_hit[k] = true;
      }
    }
    for (std::size_t k = 0; vocab && k < kAllPartsOfSpeech.size(); ++k) {
      if (table_hit[k]) continue;
      const char tag = static_cast<char>(kAllPartsOfSpeech[k]);
      if (auto id = LemmaPos::try_parse(token + '#' + tag); id && vocab->contains(*id))
        push_unique(*std::move(id));
      for (const std::string& lemma : table.apply_rules(token, kAllPartsOfSpeech[k])) {
        auto lp = LemmaPos::try_parse(lemma + '#' + tag);
        if (lp && vocab->contains(*lp)) push_unique(*std::move(lp));
      }
    }
    if (candidates.empty()) {
      if (auto passthrough = LemmaPos::try_parse(token + "#n")) out.push_back(*std::move(passthrough));
      continue;
    }
    if (policy == AmbiguityPolicy::first) {
      out.push_back(std::move(candidates.front()));
    } else {
      for (auto& c : candidates) out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<LemmaPos> filter_vocabulary(std::span<const LemmaPos> tokens,
                                        const VocabularyFilter& vocab) {
  std::vector<LemmaPos> out;
  out.reserve(tokens.size());
  for (const LemmaPos& lp : tokens)
    if (vocab.contains(lp)) out.push_back(lp);
  return out;
}

std::vector<LemmaPos> TextPipeline::lemma_stream(std::string_view text) const {
  static const LemmaTable kEmpty;
  const auto tokens = tokenize(text);
  return lemmatize(tokens, table ? *table : kEmpty, vocab, policy);
}

}  // namespace depechemood

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "depechemood/corpus.hpp"
#include "depechemood/emotion_set.hpp"
#include "depechemood/matrix.hpp"
#include "depechemood/textpipe.hpp"

namespace depechemood {

/// Significant digits used when serializing lexicon scores.
inline constexpr int kLexiconPrecision = 9;

/// Row-sum tolerance for lexicons built in memory and for lexicon files.
inline constexpr double kBuiltRowTolerance = 1e-9;
inline constexpr double kFileRowTolerance = 1e-6;

/// Ordered `# key: value` lines written above the lexicon header.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Documents x emotions vote fractions (M_DE), row-major.
struct DocumentEmotionMatrix {
  std::vector<std::string> documents;
  std::size_t emotions = 0;
  std::vector<double> values;

  double at(std::size_t d, std::size_t e) const { return values[d * emotions + e]; }
};

DocumentEmotionMatrix make_document_emotion_matrix(std::span<const DocumentRecord> corpus,
                                                   const EmotionSet& emotions);

/// Words x emotions scores, row-major, rows aligned with `terms`.
struct WordEmotionMatrix {
  std::vector<LemmaPos> terms;
  std::size_t emotions = 0;
  std::vector<double> values;

  std::size_t rows() const noexcept { return terms.size(); }
  double& at(std::size_t r, std::size_t e) { return values[r * emotions + e]; }
  double at(std::size_t r, std::size_t e) const { return values[r * emotions + e]; }
  std::span<const double> row(std::size_t r) const {
    return std::span(values).subspan(r * emotions, emotions);
  }
};

enum class ColumnNorm { sum, max };
std::string_view to_string(ColumnNorm mode) noexcept;
std::optional<ColumnNorm> parse_column_norm(std::string_view s) noexcept;

/// out[w, e] = sum_d wd[w, d] * de[d, e], summed in ascending column order of
/// `wd`. The two matrices must cover the same document ids (order may differ).
WordEmotionMatrix emotion_product(const TermDocumentMatrix& wd, const DocumentEmotionMatrix& de,
                                  unsigned workers = 1);

/// Divides every emotion column by its sum (or its maximum). A column with no
/// mass is an error naming the emotion.
WordEmotionMatrix column_normalize(WordEmotionMatrix m, const EmotionSet& emotions,
                                   ColumnNorm mode = ColumnNorm::sum);

struct RowScaleResult {
  WordEmotionMatrix matrix;  // every row sums to 1
  std::size_t dropped_zero_rows = 0;
};

/// Scales rows to sum to one; all-zero rows are removed and counted.
RowScaleResult row_scale(WordEmotionMatrix m);

/// Word-by-emotion lexicon: rows sorted by "lemma#pos", each a distribution
/// over the emotion set.
class EmotionLexicon {
 public:
  /// Rows are sorted by key on construction. Throws on duplicate keys, size
  /// mismatch, entries outside [0, 1], or row sums further than
  /// `row_tolerance` from 1.
  EmotionLexicon(EmotionSet emotions, std::vector<LemmaPos> terms, std::vector<double> scores,
                 Metadata metadata = {}, double row_tolerance = kBuiltRowTolerance);

  const EmotionSet& emotions() const noexcept { return emotions_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const LemmaPos& term(std::size_t i) const { return terms_[i]; }
  const std::vector<LemmaPos>& terms() const noexcept { return terms_; }
  std::span<const double> row(std::size_t i) const {
    return std::span(scores_).subspan(i * emotions_.size(), emotions_.size());
  }
  std::optional<std::size_t> find(const LemmaPos& term) const;
  std::optional<std::size_t> find(const std::string& key) const;

  const Metadata& metadata() const noexcept { return metadata_; }
  void set_metadata(Metadata metadata) { metadata_ = std::move(metadata); }

  /// Lexicon keys as a vocabulary (e.g. to license headline lemmas).
  VocabularyFilter as_vocabulary() const;

 private:
  EmotionSet emotions_;
  std::vector<LemmaPos> terms_;
  std::vector<double> scores_;
  Metadata metadata_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct BuildOptions {
  WeightingScheme scheme = WeightingScheme::normalized;
  ColumnNorm col_norm = ColumnNorm::sum;
  LengthMode nf_length = LengthMode::filtered;
  AmbiguityPolicy ambiguity = AmbiguityPolicy::all;
  std::uint32_t min_df = 1;
  unsigned workers = 1;
};

struct BuildStats {
  std::size_t documents_used = 0;
  std::vector<std::string> dropped_documents;  // no tokens after filtering
  std::size_t terms = 0;                       // rows of M_WD
  std::size_t pruned_terms = 0;                // below min_df
  std::size_t zeroed_terms = 0;                // rows emptied by weighting
  std::size_t dropped_zero_rows = 0;
  std::size_t entries = 0;
};

struct BuildResult {
  EmotionLexicon lexicon;
  BuildStats stats;
};

/// Turns corpus records into vocabulary-filtered lemma streams. Pre-tagged
/// token lists are moved out of `corpus`; text documents go through `pipeline`.
std::vector<TokenizedDocument> prepare_documents(std::vector<DocumentRecord>& corpus,
                                                 const VocabularyFilter& vocab,
                                                 const TextPipeline& pipeline, unsigned workers = 1);

/// textpipe -> count -> weighting -> product with M_DE -> column
/// normalization -> row scaling. Throws if the lexicon comes out empty.
BuildResult build_lexicon(std::vector<DocumentRecord> corpus, const EmotionSet& emotions,
                          const VocabularyFilter& vocab, const LemmaTable* table,
                          const BuildOptions& options = {});

/// Configuration echo recorded in every built lexicon.
Metadata build_metadata(const BuildOptions& options);

/// Tab-separated with a `Lemma#PoS<TAB>EMOTION...` header, metadata lines
/// above it, rows in key order, scores at 9 significant digits.
void write_lexicon(std::ostream& out, const EmotionLexicon& lexicon);
void write_lexicon_file(const std::string& path, const EmotionLexicon& lexicon);

/// Parses the format written by write_lexicon. When `expected` is given the
/// header must list exactly those emotions.
EmotionLexicon read_lexicon(std::istream& in, const EmotionSet* expected = nullptr);
EmotionLexicon read_lexicon_file(const std::string& path, const EmotionSet* expected = nullptr);

/// Shortest "%.9g" rendering used by the lexicon writer.
std::string format_score(double value);

}  // namespace depechemood

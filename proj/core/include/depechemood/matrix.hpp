#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depechemood/textpipe.hpp"

namespace depechemood {

enum class WeightingScheme { raw, normalized, tfidf };

/// Document length used as the denominator of normalized frequencies.
enum class LengthMode { filtered, raw };

/// Recorded in metadata so tf-idf matrices are reproducible.
inline constexpr std::string_view kTfidfVariant = "count*ln(N/df)";

std::string_view to_string(WeightingScheme scheme) noexcept;  // "f", "nf", "tfidf"
std::optional<WeightingScheme> parse_weighting(std::string_view s) noexcept;
std::string_view to_string(LengthMode mode) noexcept;  // "filtered", "raw"
std::optional<LengthMode> parse_length_mode(std::string_view s) noexcept;

/// A document's vocabulary-filtered lemma stream, ready for counting.
struct TokenizedDocument {
  std::string id;
  std::vector<LemmaPos> tokens;
  std::size_t raw_length = 0;  // stream length before vocabulary filtering
};

/// Sparse words x documents matrix in CSR layout. Rows are sorted by
/// "lemma#pos"; columns follow corpus order; column indices within a row are
/// ascending. No explicit zeros are stored.
struct TermDocumentMatrix {
  struct RowView {
    std::span<const std::uint32_t> columns;
    std::span<const double> weights;
  };

  std::vector<LemmaPos> terms;
  std::vector<std::string> documents;
  std::vector<std::size_t> row_offsets{0};  // terms.size() + 1 entries
  std::vector<std::uint32_t> columns;
  std::vector<double> weights;

  std::vector<std::uint32_t> document_frequency;  // per term, from raw counts
  std::vector<std::uint64_t> document_length;     // per document, counted tokens
  std::vector<std::uint64_t> raw_length;          // per document, pre-filter tokens

  WeightingScheme scheme = WeightingScheme::raw;
  LengthMode length_mode = LengthMode::filtered;

  std::size_t rows() const noexcept { return terms.size(); }
  std::size_t cols() const noexcept { return documents.size(); }
  std::size_t nnz() const noexcept { return weights.size(); }
  RowView row(std::size_t r) const;

  /// Weight at (term, doc), 0 when not stored. Linear in the row length.
  double at(std::size_t r, std::size_t c) const;
  std::optional<std::size_t> find_term(const LemmaPos& term) const;
  std::size_t empty_rows() const;
};

struct CountOptions {
  std::uint32_t min_df = 1;  // terms in fewer documents are pruned
  unsigned workers = 1;
};

struct CountResult {
  TermDocumentMatrix matrix;
  std::vector<std::string> dropped_documents;  // empty after filtering/pruning
  std::size_t pruned_terms = 0;                // removed by min_df
};

/// Raw occurrence counts. Documents with no tokens are dropped; throws if none remain.
CountResult count_terms(std::span<const TokenizedDocument> corpus, const CountOptions& options = {});

/// count / doc_len. Throws when doc_len is 0 or count exceeds it.
double normalized_frequency(std::uint64_t count, std::uint64_t doc_len);

/// count * ln(n_docs / df); 0 when count is 0. Throws when df is 0 (or exceeds
/// n_docs) with a positive count.
double tfidf_weight(std::uint64_t count, std::uint64_t df, std::uint64_t n_docs);

/// Entrywise reweighting of a raw count matrix. Entries that become 0 are dropped.
TermDocumentMatrix apply_weighting(const TermDocumentMatrix& raw, WeightingScheme scheme,
                                   LengthMode length_mode = LengthMode::filtered);

/// `lemma#pos<TAB>doc_id<TAB>weight` triples after a `#`-prefixed header.
void write_matrix_dump(std::ostream& out, const TermDocumentMatrix& matrix);

}  // namespace depechemood

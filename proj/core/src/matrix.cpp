#include "depechemood/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <unordered_map>

#include "depechemood/error.hpp"
#include "depechemood/parallel.hpp"

namespace depechemood {

std::string_view to_string(WeightingScheme scheme) noexcept {
  switch (scheme) {
    case WeightingScheme::raw: return "f";
    case WeightingScheme::normalized: return "nf";
    case WeightingScheme::tfidf: return "tfidf";
  }
  return "?";
}

std::optional<WeightingScheme> parse_weighting(std::string_view s) noexcept {
  if (s == "f" || s == "raw") return WeightingScheme::raw;
  if (s == "nf" || s == "normalized") return WeightingScheme::normalized;
  if (s == "tfidf") return WeightingScheme::tfidf;
  return std::nullopt;
}

std::string_view to_string(LengthMode mode) noexcept {
  return mode == LengthMode::filtered ? "filtered" : "raw";
}

std::optional<LengthMode> parse_length_mode(std::string_view s) noexcept {
  if (s == "filtered") return LengthMode::filtered;
  if (s == "raw") return LengthMode::raw;
  return std::nullopt;
}

TermDocumentMatrix::RowView TermDocumentMatrix::row(std::size_t r) const {
  const std::size_t b = row_offsets[r], e = row_offsets[r + 1];
  return {std::span(columns).subspan(b, e - b), std::span(weights).subspan(b, e - b)};
}

double TermDocumentMatrix::at(std::size_t r, std::size_t c) const {
  auto view = row(r);
  auto it = std::lower_bound(view.columns.begin(), view.columns.end(), static_cast<std::uint32_t>(c));
  if (it == view.columns.end() || *it != c) return 0.0;
  return view.weights[static_cast<std::size_t>(it - view.columns.begin())];
}

std::optional<std::size_t> TermDocumentMatrix::find_term(const LemmaPos& term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - terms.begin());
}

std::size_t TermDocumentMatrix::empty_rows() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows(); ++r) n += row_offsets[r] == row_offsets[r + 1];
  return n;
}

namespace {

struct LocalCount {
  const LemmaPos* term;
  std::uint32_t count;
  std::uint32_t id;  // provisional dictionary id
};

// Distinct terms of one document with their counts, sorted by key.
std::vector<LocalCount> count_document(const TokenizedDocument& doc) {
  std::vector<const LemmaPos*> sorted;
  sorted.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const LemmaPos* a, const LemmaPos* b) { return a->str() < b->str(); });
  std::vector<LocalCount> out;
  for (const LemmaPos* t : sorted) {
    if (!out.empty() && out.back().term->str() == t->str()) {
      ++out.back().count;
    } else {
      out.push_back({t, 1, 0});
    }
  }
  return out;
}

}  // namespace

CountResult count_terms(std::span<const TokenizedDocument> corpus, const CountOptions& options) {
  std::vector<std::vector<LocalCount>> local(corpus.size());
  parallel_for(corpus.size(), options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) local[d] = count_document(corpus[d]);
  });

  // Global dictionary, then lexicographic ids.
  std::unordered_map<std::string_view, std::uint32_t> provisional;
  std::vector<const LemmaPos*> provisional_terms;
  std::vector<std::uint32_t> provisional_df;
  for (auto& counts : local) {
    for (auto& lc : counts) {
      auto [it, inserted] = provisional.try_emplace(lc.term->str(), static_cast<std::uint32_t>(provisional_terms.size()));
      if (inserted) {
        provisional_terms.push_back(lc.term);
        provisional_df.push_back(0);
      }
      lc.id = it->second;
      ++provisional_df[it->second];
    }
  }

  CountResult result;
  std::vector<std::uint32_t> order(provisional_terms.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return provisional_terms[a]->str() < provisional_terms[b]->str();
  });
  constexpr std::uint32_t kPruned = UINT32_MAX;
  std::vector<std::uint32_t> final_id(provisional_terms.size(), kPruned);
  TermDocumentMatrix& m = result.matrix;
  for (std::uint32_t p : order) {
    if (provisional_df[p] < options.min_df) {
      ++result.pruned_terms;
      continue;
    }
    final_id[p] = static_cast<std::uint32_t>(m.terms.size());
    m.terms.push_back(*provisional_terms[p]);
    m.document_frequency.push_back(provisional_df[p]);
  }

  // Columns: documents that still hold at least one counted token.
  std::vector<std::size_t> row_nnz(m.terms.size(), 0);
  std::vector<std::uint32_t> column_of(corpus.size(), kPruned);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    std::uint64_t length = 0;
    for (const auto& lc : local[d]) {
      const std::uint32_t id = final_id[lc.id];
      if (id != kPruned) length += lc.count;
    }
    if (length == 0) {
      result.dropped_documents.push_back(corpus[d].id);
      continue;
    }
    column_of[d] = static_cast<std::uint32_t>(m.documents.size());
    m.documents.push_back(corpus[d].id);
    m.document_length.push_back(length);
    m.raw_length.push_back(std::max<std::uint64_t>(corpus[d].raw_length, corpus[d].tokens.size()));
    for (const auto& lc : local[d]) {
      const std::uint32_t id = final_id[lc.id];
      if (id != kPruned) ++row_nnz[id];
    }
  }
  if (m.documents.empty()) throw Error("corpus has no non-empty documents after vocabulary filtering");

  m.row_offsets.assign(m.terms.size() + 1, 0);
  for (std::size_t r = 0; r < m.terms.size(); ++r) m.row_offsets[r + 1] = m.row_offsets[r] + row_nnz[r];
  m.columns.resize(m.row_offsets.back());
  m.weights.resize(m.row_offsets.back());
  std::vector<std::size_t> cursor(m.row_offsets.begin(), m.row_offsets.end() - 1);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    if (column_of[d] == kPruned) continue;
    for (const auto& lc : local[d]) {
      const std::uint32_t id = final_id[lc.id];
      if (id == kPruned) continue;
      const std::size_t slot = cursor[id]++;
      m.columns[slot] = column_of[d];
      m.weights[slot] = static_cast<double>(lc.count);
    }
  }
  m.scheme = WeightingScheme::raw;
  return result;
}

double normalized_frequency(std::uint64_t count, std::uint64_t doc_len) {
  if (doc_len == 0) throw Error("normalized frequency of an empty document");
  if (count > doc_len) throw Error("term count exceeds document length");
  return static_cast<double>(count) / static_cast<double>(doc_len);
}

double tfidf_weight(std::uint64_t count, std::uint64_t df, std::uint64_t n_docs) {
  if (count == 0) return 0.0;
  if (df == 0) throw Error("tf-idf: term occurs but has document frequency 0");
  if (df > n_docs) throw Error("tf-idf: document frequency exceeds corpus size");
  if (df == n_docs) return 0.0;
  return static_cast<double>(count) * std::log(static_cast<double>(n_docs) / static_cast<double>(df));
}

TermDocumentMatrix apply_weighting(const TermDocumentMatrix& raw, WeightingScheme scheme, LengthMode length_mode) {
  if (raw.scheme != WeightingScheme::raw) throw Error("apply_weighting expects a raw count matrix");
  TermDocumentMatrix out;
  out.terms = raw.terms;
  out.documents = raw.documents;
  out.document_frequency = raw.document_frequency;
  out.document_length = raw.document_length;
  out.raw_length = raw.raw_length;
  out.scheme = scheme;
  out.length_mode = length_mode;
  if (scheme == WeightingScheme::raw) {
    out.row_offsets = raw.row_offsets;
    out.columns = raw.columns;
    out.weights = raw.weights;
    return out;
  }

  const auto& lengths = length_mode == LengthMode::filtered ? raw.document_length : raw.raw_length;
  out.row_offsets.assign(raw.rows() + 1, 0);
  out.columns.reserve(raw.nnz());
  out.weights.reserve(raw.nnz());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    auto view = raw.row(r);
    for (std::size_t k = 0; k < view.columns.size(); ++k) {
      const auto count = static_cast<std::uint64_t>(view.weights[k]);
      const std::uint32_t c = view.columns[k];
      const double w = scheme == WeightingScheme::normalized
                           ? normalized_frequency(count, lengths[c])
                           : tfidf_weight(count, raw.document_frequency[r], raw.cols());
      if (w == 0.0) continue;
      out.columns.push_back(c);
      out.weights.push_back(w);
    }
    out.row_offsets[r + 1] = out.weights.size();
  }
  return out;
}

void write_matrix_dump(std::ostream& out, const TermDocumentMatrix& m) {
  out << "# scheme=" << to_string(m.scheme) << " N=" << m.cols() << " tfidf_variant=" << kTfidfVariant;
  if (m.scheme == WeightingScheme::normalized) out << " nf_length=" << to_string(m.length_mode);
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto view = m.row(r);
    for (std::size_t k = 0; k < view.columns.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", view.weights[k]);
      out << m.terms[r].str() << '\t' << m.documents[view.columns[k]] << '\t' << buf << '\n';
    }
  }
}

}  // namespace depechemood

#include "depechemood/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "depechemood/error.hpp"
#include "depechemood/parallel.hpp"

namespace depechemood {

std::string_view to_string(ColumnNorm mode) noexcept { return mode == ColumnNorm::sum ? "sum" : "max"; }

std::optional<ColumnNorm> parse_column_norm(std::string_view s) noexcept {
  if (s == "sum") return ColumnNorm::sum;
  if (s == "max") return ColumnNorm::max;
  return std::nullopt;
}

DocumentEmotionMatrix make_document_emotion_matrix(std::span<const DocumentRecord> corpus,
                                                   const EmotionSet& emotions) {
  DocumentEmotionMatrix de;
  de.emotions = emotions.size();
  de.documents.reserve(corpus.size());
  de.values.reserve(corpus.size() * emotions.size());
  for (const auto& doc : corpus) {
    if (doc.votes.values.size() != emotions.size())
      throw Error("document '" + doc.id + "' vote vector does not match the emotion set");
    de.documents.push_back(doc.id);
    de.values.insert(de.values.end(), doc.votes.values.begin(), doc.votes.values.end());
  }
  return de;
}

WordEmotionMatrix emotion_product(const TermDocumentMatrix& wd, const DocumentEmotionMatrix& de,
                                  unsigned workers) {
  std::unordered_map<std::string_view, std::size_t> de_row;
  de_row.reserve(de.documents.size());
  for (std::size_t d = 0; d < de.documents.size(); ++d) de_row.emplace(de.documents[d], d);

  std::vector<std::size_t> column_to_de(wd.cols());
  std::set<std::string> only_wd, only_de;
  std::unordered_set<std::string_view> seen;
  for (std::size_t c = 0; c < wd.cols(); ++c) {
    seen.insert(wd.documents[c]);
    auto it = de_row.find(wd.documents[c]);
    if (it == de_row.end()) {
      only_wd.insert(wd.documents[c]);
    } else {
      column_to_de[c] = it->second;
    }
  }
  for (const auto& id : de.documents)
    if (!seen.contains(id)) only_de.insert(id);
  if (!only_wd.empty() || !only_de.empty()) {
    std::string msg = "document sets differ between term-document and document-emotion matrices;";
    auto list = [&msg](const char* label, const std::set<std::string>& ids) {
      if (ids.empty()) return;
      msg += std::string(" ") + label + ":";
      std::size_t shown = 0;
      for (const auto& id : ids) {
        if (shown++ == 10) {
          msg += " ...(" + std::to_string(ids.size()) + " total)";
          break;
        }
        msg += " " + id;
      }
    };
    list("only in term-document", only_wd);
    list("only in document-emotion", only_de);
    throw Error(msg);
  }

  WordEmotionMatrix out;
  out.terms = wd.terms;
  out.emotions = de.emotions;
  out.values.assign(wd.rows() * de.emotions, 0.0);
  parallel_for(wd.rows(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double* acc = out.values.data() + r * de.emotions;
      auto view = wd.row(r);
      for (std::size_t k = 0; k < view.columns.size(); ++k) {
        const double w = view.weights[k];
        const double* votes = de.values.data() + column_to_de[view.columns[k]] * de.emotions;
        for (std::size_t e = 0; e < de.emotions; ++e) acc[e] += w * votes[e];
      }
    }
  });
  return out;
}

WordEmotionMatrix column_normalize(WordEmotionMatrix m, const EmotionSet& emotions, ColumnNorm mode) {
  if (m.emotions != emotions.size()) throw Error("column_normalize: emotion count mismatch");
  std::vector<double> scale(m.emotions, 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t e = 0; e < m.emotions; ++e) {
      const double v = m.at(r, e);
      if (v < 0.0 || !std::isfinite(v)) throw Error("column_normalize: negative or non-finite entry");
      scale[e] = mode == ColumnNorm::sum ? scale[e] + v : std::max(scale[e], v);
    }
  }
  for (std::size_t e = 0; e < m.emotions; ++e)
    if (!(scale[e] > 0.0)) throw Error("emotion column " + emotions[e] + " has no mass (no document received this emotion)");
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t e = 0; e < m.emotions; ++e) m.at(r, e) /= scale[e];
  return m;
}

RowScaleResult row_scale(WordEmotionMatrix m) {
  RowScaleResult result;
  WordEmotionMatrix& out = result.matrix;
  out.emotions = m.emotions;
  out.terms.reserve(m.rows());
  out.values.reserve(m.values.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw Error("row_scale: negative entry for " + m.terms[r].str());
      sum += v;
    }
    if (!(sum > 0.0)) {
      ++result.dropped_zero_rows;
      continue;
    }
    out.terms.push_back(std::move(m.terms[r]));
    for (double v : row) out.values.push_back(v / sum);
  }
  return result;
}

// ---------------------------------------------------------------------------

EmotionLexicon::EmotionLexicon(EmotionSet emotions, std::vector<LemmaPos> terms, std::vector<double> scores,
                               Metadata metadata, double row_tolerance)
    : emotions_(std::move(emotions)), metadata_(std::move(metadata)) {
  const std::size_t k = emotions_.size();
  if (scores.size() != terms.size() * k) throw Error("lexicon score matrix does not match terms x emotions");

  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!std::is_sorted(terms.begin(), terms.end()))
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return terms[a] < terms[b]; });

  terms_.reserve(terms.size());
  scores_.reserve(scores.size());
  index_.reserve(terms.size());
  for (std::size_t i : order) {
    if (!terms_.empty() && terms_.back() == terms[i]) throw Error("duplicate lexicon entry " + terms[i].str());
    double sum = 0.0;
    for (std::size_t e = 0; e < k; ++e) {
      const double v = scores[i * k + e];
      if (!(v >= 0.0 && v <= 1.0 + row_tolerance)) throw Error("lexicon score out of [0,1] for " + terms[i].str());
      sum += v;
    }
    if (std::abs(sum - 1.0) > row_tolerance) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "lexicon row " << terms[i].str() << " sums to " << sum;
      throw Error(msg.str());
    }
    index_.emplace(terms[i].str(), terms_.size());
    terms_.push_back(std::move(terms[i]));
    scores_.insert(scores_.end(), scores.begin() + static_cast<std::ptrdiff_t>(i * k),
                   scores.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
  }
}

std::optional<std::size_t> EmotionLexicon::find(const LemmaPos& term) const { return find(term.str()); }

std::optional<std::size_t> EmotionLexicon::find(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VocabularyFilter EmotionLexicon::as_vocabulary() const {
  std::unordered_set<std::string> keys;
  keys.reserve(terms_.size());
  for (const auto& t : terms_) keys.insert(t.str());
  return VocabularyFilter(std::move(keys));
}

// ---------------------------------------------------------------------------

std::vector<TokenizedDocument> prepare_documents(std::vector<DocumentRecord>& corpus, const VocabularyFilter& vocab,
                                                 const TextPipeline& pipeline, unsigned workers) {
  std::vector<TokenizedDocument> docs(corpus.size());
  parallel_for(corpus.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      DocumentRecord& rec = corpus[d];
      TokenizedDocument& out = docs[d];
      out.id = rec.id;
      out.tokens = rec.text ? pipeline.lemma_stream(*rec.text) : std::move(rec.tokens);
      rec.tokens.clear();
      out.raw_length = out.tokens.size();
      std::erase_if(out.tokens, [&](const LemmaPos& lp) { return !vocab.contains(lp); });
    }
  });
  return docs;
}

Metadata build_metadata(const BuildOptions& options) {
  return {
      {"weighting", std::string(to_string(options.scheme))},
      {"col_norm", std::string(to_string(options.col_norm))},
      {"nf_length", std::string(to_string(options.nf_length))},
      {"ambiguity", options.ambiguity == AmbiguityPolicy::all ? "all" : "first"},
      {"min_df", std::to_string(options.min_df)},
      {"tfidf_variant", std::string(kTfidfVariant)},
  };
}

BuildResult build_lexicon(std::vector<DocumentRecord> corpus, const EmotionSet& emotions, const VocabularyFilter& vocab,
                          const LemmaTable* table, const BuildOptions& options) {
  const TextPipeline pipeline{table, &vocab, options.ambiguity};
  DocumentEmotionMatrix de_all = make_document_emotion_matrix(corpus, emotions);
  std::vector<TokenizedDocument> docs = prepare_documents(corpus, vocab, pipeline, options.workers);
  corpus.clear();
  corpus.shrink_to_fit();

  CountResult counted = count_terms(docs, {options.min_df, options.workers});
  docs.clear();
  docs.shrink_to_fit();

  BuildStats stats;
  stats.dropped_documents = std::move(counted.dropped_documents);
  stats.pruned_terms = counted.pruned_terms;

  // M_DE restricted to the documents that made it into M_WD, in column order.
  DocumentEmotionMatrix de;
  de.emotions = de_all.emotions;
  {
    std::unordered_map<std::string_view, std::size_t> row_of;
    for (std::size_t d = 0; d < de_all.documents.size(); ++d) row_of.emplace(de_all.documents[d], d);
    for (const auto& id : counted.matrix.documents) {
      auto it = row_of.find(id);
      if (it == row_of.end()) continue;  // surfaces as a mismatch in emotion_product
      de.documents.push_back(id);
      const double* src = de_all.values.data() + it->second * de.emotions;
      de.values.insert(de.values.end(), src, src + de.emotions);
    }
  }

  TermDocumentMatrix weighted = apply_weighting(counted.matrix, options.scheme, options.nf_length);
  stats.documents_used = weighted.cols();
  stats.terms = weighted.rows();
  stats.zeroed_terms = weighted.empty_rows();
  counted.matrix = {};

  WordEmotionMatrix raw = emotion_product(weighted, de, options.workers);
  weighted = {};
  RowScaleResult scaled = row_scale(column_normalize(std::move(raw), emotions, options.col_norm));
  stats.dropped_zero_rows = scaled.dropped_zero_rows;
  if (scaled.matrix.rows() == 0) throw Error("built lexicon is empty");
  stats.entries = scaled.matrix.rows();

  EmotionLexicon lexicon(emotions, std::move(scaled.matrix.terms), std::move(scaled.matrix.values),
                         build_metadata(options));
  return {std::move(lexicon), std::move(stats)};
}

// ---------------------------------------------------------------------------

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kLexiconPrecision, value);
  return buf;
}

void write_lexicon(std::ostream& out, const EmotionLexicon& lexicon) {
  for (const auto& [key, value] : lexicon.metadata()) {
    out << "# " << key;
    if (!value.empty()) out << ": " << value;
    out << '\n';
  }
  out << "Lemma#PoS";
  for (const auto& label : lexicon.emotions().labels()) out << '\t' << label;
  out << '\n';
  std::string line;
  for (std::size_t i = 0; i < lexicon.size(); ++i) {
    line = lexicon.term(i).str();
    for (double v : lexicon.row(i)) {
      line += '\t';
      line += format_score(v);
    }
    line += '\n';
    out << line;
  }
}

void write_lexicon_file(const std::string& path, const EmotionLexicon& lexicon) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open lexicon output: " + path);
  write_lexicon(out, lexicon);
  if (!out) throw Error("failed writing lexicon: " + path);
}

namespace {

std::vector<std::string_view> split_tab(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

EmotionLexicon read_lexicon(std::istream& in, const EmotionSet* expected) {
  Metadata metadata;
  std::optional<EmotionSet> emotions;
  std::vector<LemmaPos> terms;
  std::vector<double> scores;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!emotions) {
      if (line.empty()) continue;
      if (line.front() == '#' && !line.starts_with("Lemma#PoS")) {
        std::string_view body(line);
        body.remove_prefix(body.starts_with("# ") ? 2 : 1);
        const std::size_t colon = body.find(": ");
        if (colon == std::string_view::npos) {
          metadata.emplace_back(std::string(body), "");
        } else {
          metadata.emplace_back(std::string(body.substr(0, colon)), std::string(body.substr(colon + 2)));
        }
        continue;
      }
      auto fields = split_tab(line);
      if (fields.size() < 2 || fields[0] != "Lemma#PoS")
        throw ParseError("expected header 'Lemma#PoS<TAB>EMOTION...'", lineno);
      std::vector<std::string> labels(fields.begin() + 1, fields.end());
      try {
        emotions = EmotionSet(std::move(labels));
      } catch (const Error& e) {
        throw ParseError(e.what(), lineno);
      }
      if (expected && !(*expected == *emotions))
        throw ParseError("lexicon emotions [" + emotions->joined() + "] do not match expected [" +
                             expected->joined() + "]",
                         lineno);
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (fields.size() != emotions->size() + 1)
      throw ParseError("expected " + std::to_string(emotions->size() + 1) + " fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    auto term = LemmaPos::try_parse(fields[0]);
    if (!term) throw ParseError("malformed lemma#pos '" + std::string(fields[0]) + "'", lineno);
    double sum = 0.0;
    for (std::size_t e = 1; e < fields.size(); ++e) {
      auto v = parse_double(fields[e]);
      if (!v) throw ParseError("non-numeric score '" + std::string(fields[e]) + "'", lineno);
      if (*v < 0.0 || *v > 1.0 + kFileRowTolerance) throw ParseError("score out of [0,1]", lineno);
      sum += *v;
      scores.push_back(*v);
    }
    if (std::abs(sum - 1.0) > kFileRowTolerance)
      throw ParseError("row " + term->str() + " sums to " + format_score(sum) + ", not 1", lineno);
    terms.push_back(*std::move(term));
  }
  if (in.bad()) throw Error("I/O error while reading lexicon");
  if (!emotions) throw ParseError("lexicon has no header", lineno);
  try {
    return EmotionLexicon(std::move(*emotions), std::move(terms), std::move(scores), std::move(metadata),
                          kFileRowTolerance);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
}

EmotionLexicon read_lexicon_file(const std::string& path, const EmotionSet* expected) {
  if (path.empty()) throw Error("lexicon path is empty");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon file: " + path);
  return read_lexicon(in, expected);
}

}  // namespace depechemood

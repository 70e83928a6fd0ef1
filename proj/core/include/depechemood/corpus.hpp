#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depechemood/emotion_set.hpp"
#include "depechemood/textpipe.hpp"

namespace depechemood {

/// Raw per-emotion sums may drift from 1 by at most this much before a record
/// is considered corrupt.
inline constexpr double kVoteSumTolerance = 1e-2;

/// Per-emotion vote fractions, non-negative, summing to 1.
struct VoteVector {
  std::vector<double> values;
};

/// Rescales `raw` proportionally to sum to exactly 1. Throws on negative
/// entries, an all-zero vector, or a sum further than 1e-2 from 1.
VoteVector validate_votes(std::span<const double> raw);

struct DocumentRecord {
  std::string id;
  std::vector<LemmaPos> tokens;     // pre-tagged documents
  std::optional<std::string> text;  // raw-text documents; tokens is empty then
  VoteVector votes;
  std::optional<double> vote_count;  // optional `n_votes` field
  std::size_t line = 0;
};

/// Parses one JSON object per line:
///   {"id": "...", "tokens": ["lemma#p", ...] | "text": "...", "votes": {"AFRAID": 0.75, ...}}
/// Absent emotion keys read as 0. Blank lines are skipped. All malformed lines
/// are collected and reported together in a single ParseError.
std::vector<DocumentRecord> parse_corpus(std::istream& in, const EmotionSet& emotions);
std::vector<DocumentRecord> parse_corpus_file(const std::string& path, const EmotionSet& emotions);

struct CorpusStats {
  std::size_t doc_count = 0;
  std::size_t token_count = 0;
  std::vector<double> mean_votes;
  double mean_doc_length = 0.0;
};

/// Text documents are counted by surface tokens.
CorpusStats corpus_stats(std::span<const DocumentRecord> corpus, const EmotionSet& emotions);

/// Keeps documents whose `n_votes` is at least `min_votes`; documents without
/// a vote count are dropped. `min_votes <= 0` keeps everything. Dropped ids are
/// appended to `dropped` when given.
std::vector<DocumentRecord> filter_by_vote_count(std::vector<DocumentRecord> corpus, double min_votes,
                                                 std::vector<std::string>* dropped = nullptr);

}  // namespace depechemood

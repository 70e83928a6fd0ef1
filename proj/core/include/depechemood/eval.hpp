#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depechemood/emotion_set.hpp"
#include "depechemood/lexicon.hpp"
#include "depechemood/textpipe.hpp"

namespace depechemood {

struct GoldHeadline {
  std::string id;
  std::string text;
  std::vector<LemmaPos> tokens;
  std::vector<double> gold;          // per target emotion, in [0, 1]
  std::optional<std::vector<bool>> labels;  // per target emotion
};

struct GoldSet {
  EmotionSet emotions;  // target emotions, header order
  std::vector<GoldHeadline> headlines;
  bool rescaled_from_percent = false;
};

/// `id<TAB>text<TAB>e1...<TAB>ek` with an `id<TAB>text<TAB>EMOTION...` header.
/// Values on a 0-100 scale (any value > 1) are divided by 100; a file that mixes
/// fractional values in (0, 1) with values above 1 is rejected.
GoldSet read_gold(std::istream& in);
GoldSet read_gold_file(const std::string& path);

/// `id<TAB>LABEL[,LABEL...]` lines. Every headline gets a label vector; ids
/// absent from the file have no positive label. Unknown ids or labels throw.
void read_labels(std::istream& in, GoldSet& gold);
void read_labels_file(const std::string& path, GoldSet& gold);

/// Fills `tokens` of every headline from its text.
void tokenize_headlines(GoldSet& gold, const TextPipeline& pipeline);

/// Target emotion -> lexicon (source) emotion; nullopt source marks a
/// discarded target.
class EmotionMapping {
 public:
  struct Pair {
    std::string target;
    std::optional<std::string> source;
  };

  explicit EmotionMapping(std::vector<Pair> pairs);

  /// SemEval-2007 targets onto the Rappler Mood Meter labels.
  static EmotionMapping semeval_to_rappler();
  static EmotionMapping identity(const EmotionSet& emotions);
  /// `TARGET<TAB>SOURCE` lines; `TARGET<TAB>-` discards the target.
  static EmotionMapping load(std::istream& in);
  static EmotionMapping load_file(const std::string& path);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<Pair> pairs_;
};

struct ResolvedMapping {
  struct Entry {
    std::size_t target;  // index into the gold emotion set
    std::size_t source;  // index into the lexicon emotion set
    std::string target_name;
    std::string source_name;
  };
  std::vector<Entry> entries;        // in target (gold header) order
  std::vector<std::string> discarded;  // explicitly mapped to '-'
  std::vector<std::string> unmapped;   // gold targets absent from the mapping
  std::vector<std::string> unused_sources;
};

/// Throws if two targets share a source or a source is not a lexicon emotion.
ResolvedMapping resolve_mapping(const EmotionMapping& mapping, const EmotionSet& targets,
                                const EmotionSet& sources);

struct HeadlineScore {
  std::vector<double> scores;  // per lexicon emotion
  std::size_t covered = 0;
  std::size_t total = 0;

  bool uncovered() const noexcept { return covered == 0; }
};

/// Mean lexicon row over covered tokens; all zeros when nothing is covered.
HeadlineScore score_headline(std::span<const LemmaPos> tokens, const EmotionLexicon& lexicon);

/// Sample Pearson correlation. Throws on length mismatch, fewer than two
/// points, or a constant sequence.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct MinMaxResult {
  std::vector<double> values;
  bool constant = false;  // input had max == min; values are all zero
};

MinMaxResult min_max_normalize(std::span<const double> scores);

struct BinaryMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;  // 0 when there are no positive predictions
  double recall = 0.0;     // 0 when there are no gold positives
  double f1 = 0.0;         // 0 when precision + recall is 0
};

BinaryMetrics binary_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn = 0);

enum class UncoveredPolicy { zero, skip };
enum class MinMaxMode { per_emotion, joint };

std::string_view to_string(UncoveredPolicy p) noexcept;
std::optional<UncoveredPolicy> parse_uncovered_policy(std::string_view s) noexcept;
std::string_view to_string(MinMaxMode m) noexcept;
std::optional<MinMaxMode> parse_min_max_mode(std::string_view s) noexcept;

struct EvalOptions {
  UncoveredPolicy uncovered = UncoveredPolicy::zero;
  MinMaxMode min_max = MinMaxMode::per_emotion;
  double threshold = 0.5;  // positive iff normalized score > threshold
};

struct EmotionRegression {
  std::string target;
  std::string source;
  double pearson_r = 0.0;
};

struct EmotionClassification {
  std::string target;
  std::string source;
  BinaryMetrics metrics;
  bool constant_scores = false;
};

/// Scores every headline once; shared by the two tasks.
std::vector<HeadlineScore> score_headlines(std::span<const GoldHeadline> headlines,
                                           const EmotionLexicon& lexicon);

std::vector<EmotionRegression> evaluate_regression(std::span<const GoldHeadline> headlines,
                                                   const EmotionLexicon& lexicon,
                                                   const ResolvedMapping& mapping,
                                                   const EvalOptions& options = {});

std::vector<EmotionClassification> evaluate_classification(std::span<const GoldHeadline> headlines,
                                                           const EmotionLexicon& lexicon,
                                                           const ResolvedMapping& mapping,
                                                           const EvalOptions& options = {});

struct CoverageStats {
  double mean = 0.0;                   // mean covered/total over headlines with tokens
  std::size_t headlines = 0;           // contributing headlines
  std::size_t empty_headlines = 0;     // no tokens, skipped
  std::size_t uncovered_headlines = 0;  // tokens, none covered
};

CoverageStats coverage_stats(std::span<const GoldHeadline> headlines, const EmotionLexicon& lexicon);

struct EvalReport {
  std::vector<EmotionRegression> regression;
  std::vector<EmotionClassification> classification;  // empty when no labels
  bool classification_run = false;
  CoverageStats coverage;
  std::size_t lexicon_entries = 0;
  std::vector<std::string> discarded;
  std::vector<std::string> unmapped;
  std::size_t headlines_evaluated = 0;
  EvalOptions options;
};

/// Regression, classification (when labels are present) and coverage.
EvalReport evaluate(const GoldSet& gold, const EmotionLexicon& lexicon, const ResolvedMapping& mapping,
                    const EvalOptions& options = {});

/// Aligned plain-text tables.
void write_report_table(std::ostream& out, const EvalReport& report);

/// Tab-separated: `# key: value` lines (configuration and coverage), then one
/// row per evaluated emotion with Pearson r, precision, recall and F1 (NA when
/// classification was skipped).
void write_report_tsv(std::ostream& out, const EvalReport& report, const Metadata& metadata = {});

}  // namespace depechemood

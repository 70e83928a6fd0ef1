#include "depechemood/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "depechemood/error.hpp"

namespace depechemood {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

GoldSet read_gold(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<EmotionSet> emotions;
  while (!emotions && next_line(in, line, lineno)) {
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() < 3) throw ParseError("gold header must be id<TAB>text<TAB>EMOTION...", lineno);
    try {
      emotions = EmotionSet(std::vector<std::string>(fields.begin() + 2, fields.end()));
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (!emotions) throw ParseError("gold file has no header", lineno);

  GoldSet gold{*emotions, {}, false};
  std::unordered_set<std::string> ids;
  bool above_one = false;
  bool fractional = false;
  std::size_t first_above = 0, first_fraction = 0;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != gold.emotions.size() + 2)
      throw ParseError("expected " + std::to_string(gold.emotions.size() + 2) + " fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    GoldHeadline h;
    h.id = std::string(trim(fields[0]));
    if (h.id.empty()) throw ParseError("empty headline id", lineno);
    if (!ids.insert(h.id).second) throw ParseError("duplicate headline id '" + h.id + "'", lineno);
    h.text = std::string(fields[1]);
    for (std::size_t e = 2; e < fields.size(); ++e) {
      const std::string_view f = trim(fields[e]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
        throw ParseError("non-numeric gold score '" + std::string(f) + "'", lineno);
      if (v < 0.0 || v > 100.0) throw ParseError("gold score outside [0, 100]", lineno);
      if (v > 1.0 && !above_one) {
        above_one = true;
        first_above = lineno;
      }
      if (v > 0.0 && v < 1.0 && !fractional) {
        fractional = true;
        first_fraction = lineno;
      }
      h.gold.push_back(v);
    }
    gold.headlines.push_back(std::move(h));
  }
  if (above_one && fractional)
    throw ParseError("mixed gold scales: value above 1 on line " + std::to_string(first_above) +
                         " but fractional value on line " + std::to_string(first_fraction),
                     first_fraction);
  if (above_one) {
    gold.rescaled_from_percent = true;
    for (auto& h : gold.headlines)
      for (double& v : h.gold) v /= 100.0;
  }
  return gold;
}

GoldSet read_gold_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open gold file: " + path);
  return read_gold(in);
}

void read_labels(std::istream& in, GoldSet& gold) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < gold.headlines.size(); ++i) by_id.emplace(gold.headlines[i].id, i);
  for (auto& h : gold.headlines) h.labels = std::vector<bool>(gold.emotions.size(), false);

  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() > 2) throw ParseError("expected id<TAB>LABEL[,LABEL...]", lineno);
    auto it = by_id.find(std::string(trim(fields[0])));
    if (it == by_id.end()) throw ParseError("label for unknown headline id '" + std::string(fields[0]) + "'", lineno);
    if (fields.size() == 1 || trim(fields[1]).empty()) continue;
    auto& labels = *gold.headlines[it->second].labels;
    for (std::string_view label : split(fields[1], ',')) {
      label = trim(label);
      auto idx = gold.emotions.index_of(label);
      if (!idx) throw ParseError("label '" + std::string(label) + "' is not a gold emotion", lineno);
      labels[*idx] = true;
    }
  }
}

void read_labels_file(const std::string& path, GoldSet& gold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open label file: " + path);
  read_labels(in, gold);
}

void tokenize_headlines(GoldSet& gold, const TextPipeline& pipeline) {
  for (auto& h : gold.headlines) h.tokens = pipeline.lemma_stream(h.text);
}

// ---------------------------------------------------------------------------

EmotionMapping::EmotionMapping(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::unordered_set<std::string> targets;
  for (auto& p : pairs_) {
    p.target = to_upper_ascii(p.target);
    if (p.source) p.source = to_upper_ascii(*p.source);
    if (!targets.insert(p.target).second) throw Error("mapping lists target " + p.target + " twice");
  }
}

EmotionMapping EmotionMapping::semeval_to_rappler() {
  return EmotionMapping({{"ANGER", "ANGRY"},
                         {"DISGUST", std::nullopt},
                         {"FEAR", "AFRAID"},
                         {"JOY", "HAPPY"},
                         {"SADNESS", "SAD"},
                         {"SURPRISE", "INSPIRED"}});
}

EmotionMapping EmotionMapping::identity(const EmotionSet& emotions) {
  std::vector<Pair> pairs;
  for (const auto& label : emotions.labels()) pairs.push_back({label, label});
  return EmotionMapping(std::move(pairs));
}

EmotionMapping EmotionMapping::load(std::istream& in) {
  std::vector<Pair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw ParseError("expected TARGET<TAB>SOURCE", lineno);
    const auto target = trim(fields[0]);
    const auto source = trim(fields[1]);
    if (target.empty() || source.empty()) throw ParseError("empty mapping field", lineno);
    pairs.push_back({std::string(target), source == "-" ? std::nullopt : std::optional<std::string>(source)});
  }
  try {
    return EmotionMapping(std::move(pairs));
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
}

EmotionMapping EmotionMapping::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open mapping file: " + path);
  return load(in);
}

ResolvedMapping resolve_mapping(const EmotionMapping& mapping, const EmotionSet& targets, const EmotionSet& sources) {
  ResolvedMapping out;
  std::unordered_map<std::string, const EmotionMapping::Pair*> by_target;
  for (const auto& p : mapping.pairs()) by_target.emplace(p.target, &p);
  std::vector<bool> source_used(sources.size(), false);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    auto it = by_target.find(targets[t]);
    if (it == by_target.end()) {
      out.unmapped.push_back(targets[t]);
      continue;
    }
    if (!it->second->source) {
      out.discarded.push_back(targets[t]);
      continue;
    }
    auto s = sources.index_of(*it->second->source);
    if (!s) throw Error("mapping source " + *it->second->source + " is not a lexicon emotion");
    if (source_used[*s]) throw Error("mapping is not injective: source " + sources[*s] + " used twice");
    source_used[*s] = true;
    out.entries.push_back({t, *s, targets[t], sources[*s]});
  }
  for (std::size_t s = 0; s < sources.size(); ++s)
    if (!source_used[s]) out.unused_sources.push_back(sources[s]);
  return out;
}

// ---------------------------------------------------------------------------

HeadlineScore score_headline(std::span<const LemmaPos> tokens, const EmotionLexicon& lexicon) {
  HeadlineScore out;
  out.scores.assign(lexicon.emotions().size(), 0.0);
  out.total = tokens.size();
  for (const auto& t : tokens) {
    auto idx = lexicon.find(t);
    if (!idx) continue;
    ++out.covered;
    auto row = lexicon.row(*idx);
    for (std::size_t e = 0; e < row.size(); ++e) out.scores[e] += row[e];
  }
  if (out.covered > 0)
    for (double& s : out.scores) s /= static_cast<double>(out.covered);
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("pearson: length mismatch");
  if (xs.size() < 2) throw Error("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: undefined correlation (constant sequence)");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MinMaxResult min_max_normalize(std::span<const double> scores) {
  MinMaxResult out;
  out.values.assign(scores.size(), 0.0);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo, range = *hi - *lo;
  if (range == 0.0) {
    out.constant = true;
    return out;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) out.values[i] = (scores[i] - min) / range;
  return out;
}

BinaryMetrics binary_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  BinaryMetrics m{tp, fp, fn, tn};
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

std::string_view to_string(UncoveredPolicy p) noexcept { return p == UncoveredPolicy::zero ? "zero" : "skip"; }

std::optional<UncoveredPolicy> parse_uncovered_policy(std::string_view s) noexcept {
  if (s == "zero") return UncoveredPolicy::zero;
  if (s == "skip") return UncoveredPolicy::skip;
  return std::nullopt;
}

std::string_view to_string(MinMaxMode m) noexcept { return m == MinMaxMode::per_emotion ? "per-emotion" : "joint"; }

std::optional<MinMaxMode> parse_min_max_mode(std::string_view s) noexcept {
  if (s == "per-emotion") return MinMaxMode::per_emotion;
  if (s == "joint") return MinMaxMode::joint;
  return std::nullopt;
}

std::vector<HeadlineScore> score_headlines(std::span<const GoldHeadline> headlines, const EmotionLexicon& lexicon) {
  std::vector<HeadlineScore> out;
  out.reserve(headlines.size());
  for (const auto& h : headlines) out.push_back(score_headline(h.tokens, lexicon));
  return out;
}

namespace {

// Indices of the headlines that take part in evaluation under `policy`.
std::vector<std::size_t> included(const std::vector<HeadlineScore>& scores, UncoveredPolicy policy) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (policy == UncoveredPolicy::zero || !scores[i].uncovered()) idx.push_back(i);
  return idx;
}

std::vector<EmotionRegression> regression_from_scores(std::span<const GoldHeadline> headlines,
                                                      const std::vector<HeadlineScore>& scores,
                                                      const ResolvedMapping& mapping, const EvalOptions& options) {
  const auto idx = included(scores, options.uncovered);
  std::vector<EmotionRegression> out;
  std::vector<double> predicted, gold;
  for (const auto& entry : mapping.entries) {
    predicted.clear();
    gold.clear();
    for (std::size_t i : idx) {
      predicted.push_back(scores[i].scores[entry.source]);
      gold.push_back(headlines[i].gold[entry.target]);
    }
    try {
      out.push_back({entry.target_name, entry.source_name, pearson(predicted, gold)});
    } catch (const Error& e) {
      throw Error(entry.target_name + ": " + e.what());
    }
  }
  return out;
}

std::vector<EmotionClassification> classification_from_scores(std::span<const GoldHeadline> headlines,
                                                              const std::vector<HeadlineScore>& scores,
                                                              const ResolvedMapping& mapping,
                                                              const EvalOptions& options) {
  const auto idx = included(scores, options.uncovered);
  for (std::size_t i : idx)
    if (!headlines[i].labels) throw Error("classification needs gold labels for headline " + headlines[i].id);

  // Raw predicted columns, then normalized columns.
  std::vector<std::vector<double>> columns;
  for (const auto& entry : mapping.entries) {
    std::vector<double> col;
    col.reserve(idx.size());
    for (std::size_t i : idx) col.push_back(scores[i].scores[entry.source]);
    columns.push_back(std::move(col));
  }
  std::vector<MinMaxResult> normalized;
  if (options.min_max == MinMaxMode::per_emotion) {
    for (const auto& col : columns) normalized.push_back(min_max_normalize(col));
  } else {
    std::vector<double> all;
    for (const auto& col : columns) all.insert(all.end(), col.begin(), col.end());
    MinMaxResult joint = min_max_normalize(all);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      MinMaxResult part;
      part.constant = joint.constant;
      part.values.assign(joint.values.begin() + static_cast<std::ptrdiff_t>(c * idx.size()),
                         joint.values.begin() + static_cast<std::ptrdiff_t>((c + 1) * idx.size()));
      normalized.push_back(std::move(part));
    }
  }

  std::vector<EmotionClassification> out;
  for (std::size_t c = 0; c < mapping.entries.size(); ++c) {
    const auto& entry = mapping.entries[c];
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const bool predicted = normalized[c].values[k] > options.threshold;
      const bool actual = (*headlines[idx[k]].labels)[entry.target];
      if (predicted && actual) ++tp;
      else if (predicted) ++fp;
      else if (actual) ++fn;
      else ++tn;
    }
    out.push_back({entry.target_name, entry.source_name, binary_metrics(tp, fp, fn, tn), normalized[c].constant});
  }
  return out;
}

}  // namespace

std::vector<EmotionRegression> evaluate_regression(std::span<const GoldHeadline> headlines,
                                                   const EmotionLexicon& lexicon, const ResolvedMapping& mapping,
                                                   const EvalOptions& options) {
  return regression_from_scores(headlines, score_headlines(headlines, lexicon), mapping, options);
}

std::vector<EmotionClassification> evaluate_classification(std::span<const GoldHeadline> headlines,
                                                           const EmotionLexicon& lexicon,
                                                           const ResolvedMapping& mapping,
                                                           const EvalOptions& options) {
  return classification_from_scores(headlines, score_headlines(headlines, lexicon), mapping, options);
}

CoverageStats coverage_stats(std::span<const GoldHeadline> headlines, const EmotionLexicon& lexicon) {
  CoverageStats stats;
  double sum = 0.0;
  for (const auto& h : headlines) {
    if (h.tokens.empty()) {
      ++stats.empty_headlines;
      continue;
    }
    std::size_t covered = 0;
    for (const auto& t : h.tokens) covered += lexicon.find(t).has_value();
    if (covered == 0) ++stats.uncovered_headlines;
    sum += static_cast<double>(covered) / static_cast<double>(h.tokens.size());
    ++stats.headlines;
  }
  if (stats.headlines > 0) stats.mean = sum / static_cast<double>(stats.headlines);
  return stats;
}

EvalReport evaluate(const GoldSet& gold, const EmotionLexicon& lexicon, const ResolvedMapping& mapping,
                    const EvalOptions& options) {
  EvalReport report;
  report.options = options;
  report.lexicon_entries = lexicon.size();
  report.discarded = mapping.discarded;
  report.unmapped = mapping.unmapped;
  report.coverage = coverage_stats(gold.headlines, lexicon);

  const auto scores = score_headlines(gold.headlines, lexicon);
  report.headlines_evaluated = included(scores, options.uncovered).size();
  report.regression = regression_from_scores(gold.headlines, scores, mapping, options);
  const bool have_labels = !gold.headlines.empty() &&
                           std::all_of(gold.headlines.begin(), gold.headlines.end(),
                                       [](const GoldHeadline& h) { return h.labels.has_value(); });
  if (have_labels) {
    report.classification = classification_from_scores(gold.headlines, scores, mapping, options);
    report.classification_run = true;
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out.empty() ? "-" : out;
}

}  // namespace

void write_report_table(std::ostream& out, const EvalReport& report) {
  out << "Coverage (" << report.lexicon_entries << " entries): mean per-headline " << fixed(report.coverage.mean, 2)
      << " over " << report.coverage.headlines << " headlines; " << report.coverage.uncovered_headlines
      << " with no covered word";
  if (report.coverage.empty_headlines) out << "; " << report.coverage.empty_headlines << " without tokens";
  out << "\n";
  out << "Uncovered headlines policy: " << to_string(report.options.uncovered) << " (" << report.headlines_evaluated
      << " headlines evaluated)\n\n";

  out << "Regression (Pearson r)\n";
  out << std::left << std::setw(12) << "EMOTION" << std::setw(12) << "LEXICON" << "r\n";
  for (const auto& r : report.regression)
    out << std::left << std::setw(12) << r.target << std::setw(12) << r.source << fixed(r.pearson_r, 4) << "\n";

  out << "\nClassification (threshold " << fixed(report.options.threshold, 2) << ", min-max "
      << to_string(report.options.min_max) << ")\n";
  if (!report.classification_run) {
    out << "  skipped: no gold labels\n";
  } else {
    out << std::left << std::setw(12) << "EMOTION" << std::setw(10) << "P" << std::setw(10) << "R" << "F1\n";
    for (const auto& c : report.classification) {
      out << std::left << std::setw(12) << c.target << std::setw(10) << fixed(c.metrics.precision, 4) << std::setw(10)
          << fixed(c.metrics.recall, 4) << fixed(c.metrics.f1, 4);
      if (c.constant_scores) out << "  (constant scores)";
      out << "\n";
    }
  }
  if (!report.discarded.empty()) out << "\ndiscarded: " << join(report.discarded) << "\n";
  if (!report.unmapped.empty()) out << "unmapped: " << join(report.unmapped) << "\n";
}

void write_report_tsv(std::ostream& out, const EvalReport& report, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << (value.empty() ? "" : ": " + value) << "\n";
  out << "# uncovered: " << to_string(report.options.uncovered) << "\n";
  out << "# min_max: " << to_string(report.options.min_max) << "\n";
  out << "# threshold: " << exact(report.options.threshold) << "\n";
  out << "# discarded: " << join(report.discarded) << "\n";
  out << "# unmapped: " << join(report.unmapped) << "\n";
  out << "# lexicon_entries: " << report.lexicon_entries << "\n";
  out << "# coverage_mean: " << exact(report.coverage.mean) << "\n";
  out << "# coverage_headlines: " << report.coverage.headlines << "\n";
  out << "# uncovered_headlines: " << report.coverage.uncovered_headlines << "\n";
  out << "# headlines_evaluated: " << report.headlines_evaluated << "\n";
  out << "emotion\tlexicon_emotion\tpearson_r\tprecision\trecall\tf1\n";
  for (std::size_t i = 0; i < report.regression.size(); ++i) {
    const auto& r = report.regression[i];
    out << r.target << '\t' << r.source << '\t' << exact(r.pearson_r);
    if (report.classification_run) {
      const auto& m = report.classification[i].metrics;
      out << '\t' << exact(m.precision) << '\t' << exact(m.recall) << '\t' << exact(m.f1);
    } else {
      out << "\tNA\tNA\tNA";
    }
    out << '\n';
  }
}

}  // namespace depechemood

#include "commands.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "depechemood/corpus.hpp"
#include "depechemood/error.hpp"
#include "depechemood/hash.hpp"
#include "depechemood/parallel.hpp"
#include "depechemood/textpipe.hpp"

namespace depechemood::cli {

namespace {

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what) : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Standard output unless a path is given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot open output file: " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw Error("failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_metadata(std::ostream& out, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << (value.empty() ? "" : ": " + value) << '\n';
}

EmotionSet emotion_set(const RunConfig& config) {
  return config.emotions.empty() ? EmotionSet() : EmotionSet::from_list(config.emotions);
}

void add_input(Metadata& md, const char* key, const std::string& path) {
  if (path.empty()) return;
  md.emplace_back(key, path);
  md.emplace_back(std::string(key) + "_sha256", sha256_file(path));
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<DocumentRecord> load_corpus(const RunConfig& config, const EmotionSet& emotions) {
  auto corpus = stage("corpus", [&] { return parse_corpus_file(config.corpus, emotions); });
  if (config.min_votes_sum > 0.0) {
    std::vector<std::string> dropped;
    corpus = filter_by_vote_count(std::move(corpus), config.min_votes_sum, &dropped);
    if (!dropped.empty())
      spdlog::warn("--min-votes-sum {}: dropped {} document(s) (first: {})", config.min_votes_sum, dropped.size(),
                   dropped.front());
  }
  return corpus;
}

}  // namespace

Metadata config_echo(const RunConfig& config) {
  Metadata md;
  md.emplace_back("tool", std::string("depechemood ") + DEPECHEMOOD_VERSION);
  md.emplace_back("command", config.subcommand);
  add_input(md, "corpus", config.corpus);
  add_input(md, "vocab", config.vocab);
  add_input(md, "lemmas", config.lemmas);
  add_input(md, "lexicon", config.lexicon);
  add_input(md, "gold", config.gold);
  add_input(md, "labels", config.labels);
  add_input(md, "mapping", config.mapping);
  add_input(md, "input", config.input);
  if (config.subcommand == "build" || config.subcommand == "stats")
    md.emplace_back("emotions", emotion_set(config).joined());
  if (config.subcommand == "build" || config.subcommand == "stats")
    md.emplace_back("min_votes_sum", exact(config.min_votes_sum));
  if (config.subcommand == "build") {
    BuildOptions options{config.weighting, config.col_norm, config.nf_length, config.ambiguity, config.min_df};
    for (auto& kv : build_metadata(options)) md.push_back(std::move(kv));
  } else if (config.subcommand == "eval" || config.subcommand == "score") {
    md.emplace_back("ambiguity", config.ambiguity == AmbiguityPolicy::all ? "all" : "first");
  }
  return md;
}

int cmd_build(const RunConfig& config) {
  if (config.corpus.empty() || config.vocab.empty()) throw StageError("config", "build needs --corpus and --vocab");
  const EmotionSet emotions = stage("config", [&] { return emotion_set(config); });
  const VocabularyFilter vocab = stage("vocab", [&] { return VocabularyFilter::load_file(config.vocab); });
  std::optional<LemmaTable> table;
  if (!config.lemmas.empty()) table = stage("lemmas", [&] { return LemmaTable::load_file(config.lemmas); });
  const Metadata metadata = stage("config", [&] { return config_echo(config); });
  auto corpus = load_corpus(config, emotions);
  spdlog::info("corpus: {} documents, vocabulary: {} entries", corpus.size(), vocab.size());

  const BuildOptions options{config.weighting, config.col_norm, config.nf_length, config.ambiguity, config.min_df,
                             config.workers};

  if (!config.matrix_dump.empty()) {
    stage("matrix", [&] {
      auto copy = corpus;
      const TextPipeline pipeline{table ? &*table : nullptr, &vocab, config.ambiguity};
      auto docs = prepare_documents(copy, vocab, pipeline, config.workers);
      auto counted = count_terms(docs, {config.min_df, config.workers});
      auto weighted = apply_weighting(counted.matrix, config.weighting, config.nf_length);
      Output dump(config.matrix_dump);
      write_matrix_dump(dump.stream(), weighted);
      dump.close();
    });
  }

  BuildResult result = stage("lexicon", [&] {
    return build_lexicon(std::move(corpus), emotions, vocab, table ? &*table : nullptr, options);
  });
  const BuildStats& s = result.stats;
  if (!s.dropped_documents.empty())
    spdlog::warn("{} document(s) had no tokens after vocabulary filtering and were dropped (first: {})",
                 s.dropped_documents.size(), s.dropped_documents.front());
  if (s.pruned_terms) spdlog::info("min-df {} pruned {} term(s)", config.min_df, s.pruned_terms);
  if (s.zeroed_terms) spdlog::info("weighting {} zeroed {} term(s)", to_string(config.weighting), s.zeroed_terms);
  spdlog::info("scheme {}: {} documents, {} terms, {} entries, {} zero row(s) dropped", to_string(config.weighting),
               s.documents_used, s.terms, s.entries, s.dropped_zero_rows);

  result.lexicon.set_metadata(metadata);
  stage("output", [&] {
    Output out(config.output);
    write_lexicon(out.stream(), result.lexicon);
    out.close();
  });
  return 0;
}

int cmd_eval(const RunConfig& config) {
  if (config.lexicon.empty() || config.gold.empty()) throw StageError("config", "eval needs --lexicon and --gold");
  const Metadata metadata = stage("config", [&] { return config_echo(config); });
  const EmotionLexicon lexicon = stage("lexicon", [&] { return read_lexicon_file(config.lexicon); });
  GoldSet gold = stage("gold", [&] { return read_gold_file(config.gold); });
  if (gold.rescaled_from_percent) spdlog::info("gold scores on a 0-100 scale, divided by 100");
  if (!config.labels.empty()) stage("labels", [&] { read_labels_file(config.labels, gold); });

  std::optional<VocabularyFilter> vocab;
  if (!config.vocab.empty()) vocab = stage("vocab", [&] { return VocabularyFilter::load_file(config.vocab); });
  std::optional<LemmaTable> table;
  if (!config.lemmas.empty()) table = stage("lemmas", [&] { return LemmaTable::load_file(config.lemmas); });

  const ResolvedMapping mapping = stage("mapping", [&] {
    EmotionMapping m = [&] {
      if (!config.mapping.empty()) return EmotionMapping::load_file(config.mapping);
      for (const auto& label : gold.emotions.labels())
        if (!lexicon.emotions().index_of(label)) return EmotionMapping::semeval_to_rappler();
      return EmotionMapping::identity(gold.emotions);
    }();
    return resolve_mapping(m, gold.emotions, lexicon.emotions());
  });
  for (const auto& t : mapping.discarded) spdlog::info("target {} discarded by mapping", t);
  for (const auto& t : mapping.unmapped) spdlog::warn("target {} has no mapping entry; excluded", t);

  stage("textpipe", [&] {
    const VocabularyFilter licensing = vocab ? *vocab : lexicon.as_vocabulary();
    tokenize_headlines(gold, TextPipeline{table ? &*table : nullptr, &licensing, config.ambiguity});
  });

  const EvalOptions options{config.uncovered, config.min_max, config.threshold};
  const EvalReport report = stage("eval", [&] { return evaluate(gold, lexicon, mapping, options); });
  if (report.coverage.uncovered_headlines)
    spdlog::info("{} headline(s) with no covered word scored with policy '{}'", report.coverage.uncovered_headlines,
                 to_string(config.uncovered));
  if (!report.classification_run) spdlog::info("no --labels given; classification skipped");

  stage("output", [&] {
    Output out(config.output);
    write_report_table(out.stream(), report);
    out.close();
    if (!config.report.empty()) {
      Output tsv(config.report);
      write_report_tsv(tsv.stream(), report, metadata);
      tsv.close();
    }
  });
  return 0;
}

int cmd_score(const RunConfig& config) {
  if (config.lexicon.empty() || config.input.empty()) throw StageError("config", "score needs --lexicon and --input");
  const Metadata metadata = stage("config", [&] { return config_echo(config); });
  const EmotionLexicon lexicon = stage("lexicon", [&] { return read_lexicon_file(config.lexicon); });
  std::optional<VocabularyFilter> vocab;
  if (!config.vocab.empty()) vocab = stage("vocab", [&] { return VocabularyFilter::load_file(config.vocab); });
  std::optional<LemmaTable> table;
  if (!config.lemmas.empty()) table = stage("lemmas", [&] { return LemmaTable::load_file(config.lemmas); });

  struct Line {
    std::string id;
    std::string text;
  };
  const std::vector<Line> lines = stage("input", [&] {
    std::ifstream in(config.input, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + config.input);
    std::vector<Line> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        out.push_back({std::to_string(lineno), line});
      } else {
        out.push_back({line.substr(0, tab), line.substr(tab + 1)});
      }
    }
    return out;
  });

  const VocabularyFilter licensing = vocab ? *vocab : lexicon.as_vocabulary();
  const TextPipeline pipeline{table ? &*table : nullptr, &licensing, config.ambiguity};
  std::vector<std::string> rows(lines.size());
  parallel_for(lines.size(), config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto tokens = pipeline.lemma_stream(lines[i].text);
      const HeadlineScore s = score_headline(tokens, lexicon);
      std::string row = lines[i].id;
      for (double v : s.scores) row += '\t' + format_score(v);
      row += '\t' + std::to_string(s.covered) + '\t' + std::to_string(s.total) + '\n';
      rows[i] = std::move(row);
    }
  });

  stage("output", [&] {
    Output out(config.output);
    write_metadata(out.stream(), metadata);
    out.stream() << "id";
    for (const auto& label : lexicon.emotions().labels()) out.stream() << '\t' << label;
    out.stream() << "\tcovered\ttotal\n";
    for (const auto& row : rows) out.stream() << row;
    out.close();
  });
  return 0;
}

int cmd_stats(const RunConfig& config) {
  if (config.corpus.empty()) throw StageError("config", "stats needs --corpus");
  const EmotionSet emotions = stage("config", [&] { return emotion_set(config); });
  const Metadata metadata = stage("config", [&] { return config_echo(config); });
  const auto corpus = load_corpus(config, emotions);
  const CorpusStats stats = stage("stats", [&] { return corpus_stats(corpus, emotions); });

  stage("output", [&] {
    Output out(config.output);
    write_metadata(out.stream(), metadata);
    auto& os = out.stream();
    os << "# documents: " << stats.doc_count << '\n';
    os << "# tokens: " << stats.token_count << '\n';
    os << "# mean_doc_length: " << exact(stats.mean_doc_length) << '\n';
    os << "EMOTION\tVOTES_MEAN\n";
    for (std::size_t e = 0; e < emotions.size(); ++e) os << emotions[e] << '\t' << exact(stats.mean_votes[e]) << '\n';
    out.close();
  });
  return 0;
}

void use_stderr_logging() {
  static const bool installed = [] {
    auto logger = spdlog::stderr_color_mt("depechemood");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(std::move(logger));
    return true;
  }();
  (void)installed;
}

int run(const RunConfig& config) {
  use_stderr_logging();
  try {
    if (config.subcommand == "build") return cmd_build(config);
    if (config.subcommand == "eval") return cmd_eval(config);
    if (config.subcommand == "score") return cmd_score(config);
    if (config.subcommand == "stats") return cmd_stats(config);
    spdlog::error("unknown subcommand '{}'", config.subcommand);
    return 2;
  } catch (const StageError& e) {
    spdlog::error("[{}] {}", e.stage(), e.what());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
  }
  return 1;
}

}  // namespace depechemood::cli

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <vector>
#include <string>

#include "commands.hpp"

namespace dm = depechemood;

int main(int argc, char** argv) {
  dm::cli::RunConfig config;
  CLI::App app{"Build and evaluate word-by-emotion lexicons from crowd-voted news corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(DEPECHEMOOD_VERSION));

  std::string weighting = "nf", col_norm = "sum", nf_length = "filtered", ambiguity = "all";
  std::string uncovered = "zero", min_max = "per-emotion";
  auto one_of = [](std::vector<std::string> choices) { return CLI::IsMember(std::move(choices), CLI::ignore_case); };

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--emotions", config.emotions, "Comma-separated emotion labels (default: the 8 Rappler labels)");
    sub->add_option("-o,--output", config.output, "Output file (default: standard output)");
    sub->add_option("--workers", config.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto add_textpipe = [&](CLI::App* sub, bool vocab_required) {
    auto* v = sub->add_option("--vocab", config.vocab, "Vocabulary file, one lemma#pos per line")
                  ->check(CLI::ExistingFile);
    if (vocab_required) v->required();
    sub->add_option("--lemmas", config.lemmas, "Lemma table (surface<TAB>pos<TAB>lemma, [rules] section)")
        ->check(CLI::ExistingFile);
    sub->add_option("--ambiguity", ambiguity, "Candidates per ambiguous surface form")
        ->check(one_of({"all", "first"}))
        ->capture_default_str();
  };

  auto* build = app.add_subcommand("build", "Build a lexicon from an annotated corpus");
  build->add_option("--corpus", config.corpus, "Corpus file (one JSON record per line)")
      ->required()
      ->check(CLI::ExistingFile);
  add_textpipe(build, true);
  build->add_option("--weighting", weighting, "Term-document weighting")
      ->check(one_of({"f", "nf", "tfidf"}))
      ->capture_default_str();
  build->add_option("--col-norm", col_norm, "Column normalization")
      ->check(one_of({"sum", "max"}))
      ->capture_default_str();
  build->add_option("--nf-length", nf_length, "Document length used by nf")
      ->check(one_of({"filtered", "raw"}))
      ->capture_default_str();
  build->add_option("--min-df", config.min_df, "Drop terms found in fewer documents")->default_val(1u)->check(
      CLI::PositiveNumber);
  build->add_option("--min-votes-sum", config.min_votes_sum, "Drop documents with fewer total votes (n_votes)")
      ->default_val(0.0);
  build->add_option("--matrix-dump", config.matrix_dump, "Write the weighted term-document matrix here");
  add_common(build);

  auto* eval = app.add_subcommand("eval", "Evaluate a lexicon on gold headlines");
  eval->add_option("--lexicon", config.lexicon, "Lexicon file")->required()->check(CLI::ExistingFile);
  eval->add_option("--gold", config.gold, "Gold file: id<TAB>text<TAB>scores...")->required()->check(
      CLI::ExistingFile);
  eval->add_option("--labels", config.labels, "Label file: id<TAB>LABEL[,LABEL...]")->check(CLI::ExistingFile);
  eval->add_option("--mapping", config.mapping, "Mapping file: TARGET<TAB>SOURCE")->check(CLI::ExistingFile);
  eval->add_option("--report", config.report, "Tab-separated report output");
  eval->add_option("--uncovered", uncovered, "Headlines with no covered word")
      ->check(one_of({"zero", "skip"}))
      ->capture_default_str();
  eval->add_option("--min-max", min_max, "Min-max normalization scope")
      ->check(one_of({"per-emotion", "joint"}))
      ->capture_default_str();
  eval->add_option("--threshold", config.threshold, "Decision threshold on normalized scores")->default_val(0.5);
  add_textpipe(eval, false);
  add_common(eval);

  auto* score = app.add_subcommand("score", "Score lines of text (id<TAB>text)");
  score->add_option("--lexicon", config.lexicon, "Lexicon file")->required()->check(CLI::ExistingFile);
  score->add_option("--input", config.input, "Input text file")->required()->check(CLI::ExistingFile);
  add_textpipe(score, false);
  add_common(score);

  auto* stats = app.add_subcommand("stats", "Corpus vote statistics");
  stats->add_option("--corpus", config.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  stats->add_option("--min-votes-sum", config.min_votes_sum, "Drop documents with fewer total votes")
      ->default_val(0.0);
  add_common(stats);

  CLI11_PARSE(app, argc, argv);
  config.subcommand = app.get_subcommands().front()->get_name();
  // IsMember has already validated (and case-folded) every choice.
  config.weighting = *dm::parse_weighting(weighting);
  config.col_norm = *dm::parse_column_norm(col_norm);
  config.nf_length = *dm::parse_length_mode(nf_length);
  config.ambiguity = ambiguity == "first" ? dm::AmbiguityPolicy::first : dm::AmbiguityPolicy::all;
  config.uncovered = *dm::parse_uncovered_policy(uncovered);
  config.min_max = *dm::parse_min_max_mode(min_max);
  return dm::cli::run(config);
}

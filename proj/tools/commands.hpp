#pragma once

#include <cstdint>
#include <string>

#include "depechemood/eval.hpp"
#include "depechemood/lexicon.hpp"
#include "depechemood/matrix.hpp"

namespace depechemood::cli {

/// Resolved command line. Defaults mirror the library defaults.
struct RunConfig {
  std::string subcommand;

  std::string corpus;
  std::string vocab;
  std::string lemmas;
  std::string lexicon;
  std::string gold;
  std::string labels;
  std::string mapping;
  std::string input;
  std::string emotions;  // comma list; empty = the eight Rappler labels

  std::string output;       // "-" or empty: standard output
  std::string report;       // eval: tab-separated dump
  std::string matrix_dump;  // build: optional M_WD triples

  WeightingScheme weighting = WeightingScheme::normalized;
  ColumnNorm col_norm = ColumnNorm::sum;
  std::uint32_t min_df = 1;
  double min_votes_sum = 0.0;
  UncoveredPolicy uncovered = UncoveredPolicy::zero;
  LengthMode nf_length = LengthMode::filtered;
  AmbiguityPolicy ambiguity = AmbiguityPolicy::all;
  MinMaxMode min_max = MinMaxMode::per_emotion;
  double threshold = 0.5;
  unsigned workers = 1;
};

/// `# key: value` echo of everything that determines an output's content:
/// tool version, subcommand, input paths with SHA-256 and every flag. Output
/// paths and the worker count are left out since they do not affect content.
Metadata config_echo(const RunConfig& config);

int cmd_build(const RunConfig& config);
int cmd_eval(const RunConfig& config);
int cmd_score(const RunConfig& config);
int cmd_stats(const RunConfig& config);

/// Routes the default spdlog logger to standard error (idempotent).
void use_stderr_logging();

/// Dispatches on `config.subcommand`; errors are logged and mapped to exit 1.
int run(const RunConfig& config);

}  // namespace depechemood::cli

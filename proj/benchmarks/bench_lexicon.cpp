#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "depechemood/lexicon.hpp"

namespace dm = depechemood;

namespace {

struct Synthetic {
  std::vector<dm::DocumentRecord> corpus;
  std::unordered_set<std::string> vocab;
};

Synthetic make_corpus(std::size_t docs, int doc_len, std::size_t vocab_size) {
  static const char kPos[] = {'n', 'v', 'a', 'r'};
  Synthetic s;
  std::vector<dm::LemmaPos> words;
  std::vector<double> cdf;
  double acc = 0;
  for (std::size_t w = 0; w < vocab_size; ++w) {
    words.push_back(dm::LemmaPos::parse("lem" + std::to_string(w) + "#" + kPos[w % 4]));
    s.vocab.insert(words.back().str());
    acc += 1.0 / static_cast<double>(w + 1);
    cdf.push_back(acc);
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, acc), vote(0.0, 1.0);
  for (std::size_t d = 0; d < docs; ++d) {
    dm::DocumentRecord r;
    r.id = "doc" + std::to_string(d);
    for (int t = 0; t < doc_len; ++t) {
      auto idx = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u(rng)) - cdf.begin());
      r.tokens.push_back(words[std::min(idx, vocab_size - 1)]);
    }
    std::vector<double> v(8);
    for (double& x : v) x = vote(rng);
    double sum = 0;
    for (double x : v) sum += x;
    for (double& x : v) x /= sum;
    r.votes = dm::validate_votes(v);
    s.corpus.push_back(std::move(r));
  }
  return s;
}

std::vector<dm::TokenizedDocument> tokenized(const Synthetic& s) {
  std::vector<dm::TokenizedDocument> docs;
  for (const auto& r : s.corpus) docs.push_back({r.id, r.tokens, r.tokens.size()});
  return docs;
}

void BM_CountTerms(benchmark::State& state) {
  const auto s = make_corpus(static_cast<std::size_t>(state.range(0)), 500, 20000);
  const auto docs = tokenized(s);
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dm::count_terms(docs, {1, workers}));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 500);
}
BENCHMARK(BM_CountTerms)->Args({1000, 1})->Args({1000, 4})->Unit(benchmark::kMillisecond);

void BM_EmotionProduct(benchmark::State& state) {
  const auto s = make_corpus(static_cast<std::size_t>(state.range(0)), 500, 20000);
  const auto counted = dm::count_terms(tokenized(s), {});
  const auto wd = dm::apply_weighting(counted.matrix, dm::WeightingScheme::normalized);
  const auto de = dm::make_document_emotion_matrix(s.corpus, dm::EmotionSet());
  for (auto _ : state) benchmark::DoNotOptimize(dm::emotion_product(wd, de));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(wd.nnz()));
}
BENCHMARK(BM_EmotionProduct)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BuildLexicon(benchmark::State& state) {
  const auto s = make_corpus(static_cast<std::size_t>(state.range(0)), 500, 20000);
  const dm::VocabularyFilter vocab(s.vocab);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dm::build_lexicon(s.corpus, dm::EmotionSet(), vocab, nullptr));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 500);
}
BENCHMARK(BM_BuildLexicon)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}

#pragma once

// Test-only reference implementations. Everything here is written against
// plain std containers and dense loops and must not call into the library's
// matrix or lexicon code.

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Doc {
  std::string id;
  std::vector<std::string> tokens;  // "lemma#p"
  std::vector<double> votes;        // sums to 1
};

enum class Weighting { f, nf, tfidf };

/// Dense words x emotions lexicon keyed by "lemma#p".
using Lexicon = std::map<std::string, std::vector<double>>;

/// Straight-line reimplementation of the lexicon pipeline: dense counts,
/// entrywise weights, triple-loop product, column sums, row sums.
inline Lexicon dense_lexicon(const std::vector<Doc>& docs, const std::set<std::string>& vocab, Weighting weighting,
                             std::size_t emotions, bool raw_length = false) {
  std::vector<const Doc*> kept;
  std::vector<std::vector<std::string>> filtered;
  for (const Doc& d : docs) {
    std::vector<std::string> f;
    for (const auto& t : d.tokens)
      if (vocab.count(t)) f.push_back(t);
    if (f.empty()) continue;
    kept.push_back(&d);
    filtered.push_back(f);
  }
  std::set<std::string> word_set;
  for (const auto& f : filtered) word_set.insert(f.begin(), f.end());
  const std::vector<std::string> words(word_set.begin(), word_set.end());
  const std::size_t W = words.size(), D = kept.size();

  std::vector<std::vector<double>> count(W, std::vector<double>(D, 0.0));
  for (std::size_t w = 0; w < W; ++w)
    for (std::size_t d = 0; d < D; ++d)
      for (const auto& t : filtered[d])
        if (t == words[w]) count[w][d] += 1.0;

  std::vector<std::vector<double>> weight(W, std::vector<double>(D, 0.0));
  for (std::size_t w = 0; w < W; ++w) {
    double df = 0;
    for (std::size_t d = 0; d < D; ++d) df += count[w][d] > 0 ? 1 : 0;
    for (std::size_t d = 0; d < D; ++d) {
      const double len = raw_length ? double(kept[d]->tokens.size()) : double(filtered[d].size());
      switch (weighting) {
        case Weighting::f: weight[w][d] = count[w][d]; break;
        case Weighting::nf: weight[w][d] = count[w][d] / len; break;
        case Weighting::tfidf: weight[w][d] = count[w][d] * std::log(double(D) / df); break;
      }
    }
  }

  std::vector<std::vector<double>> we(W, std::vector<double>(emotions, 0.0));
  for (std::size_t w = 0; w < W; ++w)
    for (std::size_t e = 0; e < emotions; ++e)
      for (std::size_t d = 0; d < D; ++d) we[w][e] += weight[w][d] * kept[d]->votes[e];

  for (std::size_t e = 0; e < emotions; ++e) {
    double col = 0;
    for (std::size_t w = 0; w < W; ++w) col += we[w][e];
    for (std::size_t w = 0; w < W; ++w) we[w][e] /= col;
  }
  Lexicon out;
  for (std::size_t w = 0; w < W; ++w) {
    double row = 0;
    for (double v : we[w]) row += v;
    if (row <= 0) continue;
    std::vector<double> r = we[w];
    for (double& v : r) v /= row;
    out[words[w]] = r;
  }
  return out;
}

/// Random corpus: up to `max_docs` documents over a vocabulary of up to
/// `max_words` lemmas (a few tokens fall outside the vocabulary), dense
/// positive votes so every emotion column has mass.
struct RandomCorpus {
  std::vector<Doc> docs;
  std::set<std::string> vocab;
};

inline RandomCorpus random_corpus(std::mt19937_64& rng, std::size_t max_docs, std::size_t max_words,
                                  std::size_t emotions) {
  static const char kPos[] = {'n', 'v', 'a', 'r'};
  RandomCorpus rc;
  const std::size_t n_words = std::uniform_int_distribution<std::size_t>(2, max_words)(rng);
  const std::size_t n_docs = std::uniform_int_distribution<std::size_t>(2, max_docs)(rng);
  std::vector<std::string> words;
  for (std::size_t w = 0; w < n_words; ++w) {
    std::string lemma = "w" + std::string(1, char('a' + w % 26)) + std::to_string(w);
    words.push_back(lemma + "#" + kPos[w % 4]);
    rc.vocab.insert(words.back());
  }
  std::uniform_int_distribution<std::size_t> pick(0, n_words - 1);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::bernoulli_distribution oov(0.05);
  for (std::size_t d = 0; d < n_docs; ++d) {
    Doc doc;
    doc.id = "doc_" + std::to_string(d);
    const int n = len(rng);
    for (int i = 0; i < n; ++i) doc.tokens.push_back(oov(rng) ? "zzoov" + std::to_string(i) + "#n" : words[pick(rng)]);
    double sum = 0;
    for (std::size_t e = 0; e < emotions; ++e) {
      doc.votes.push_back(u(rng));
      sum += doc.votes.back();
    }
    for (double& v : doc.votes) v /= sum;
    rc.docs.push_back(std::move(doc));
  }
  return rc;
}

}  // namespace oracle

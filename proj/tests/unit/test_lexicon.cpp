#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "depechemood/error.hpp"
#include "depechemood/lexicon.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace depechemood;

namespace {

WordEmotionMatrix matrix(std::size_t emotions, std::vector<std::vector<double>> rows) {
  WordEmotionMatrix m;
  m.emotions = emotions;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.terms.push_back(LemmaPos::parse("w" + std::to_string(r) + "#n"));
    m.values.insert(m.values.end(), rows[r].begin(), rows[r].end());
  }
  return m;
}

EmotionSet labels(std::size_t k) {
  std::vector<std::string> l;
  for (std::size_t i = 0; i < k; ++i) l.push_back("E" + std::to_string(i));
  return EmotionSet(l);
}

TermDocumentMatrix dense_to_tdm(const std::vector<std::vector<double>>& wd) {
  TermDocumentMatrix m;
  for (std::size_t d = 0; d < wd.front().size(); ++d) m.documents.push_back("d" + std::to_string(d));
  for (std::size_t w = 0; w < wd.size(); ++w) {
    m.terms.push_back(LemmaPos::parse("w" + std::to_string(w) + "#n"));
    for (std::size_t d = 0; d < wd[w].size(); ++d) {
      if (wd[w][d] == 0.0) continue;
      m.columns.push_back(static_cast<std::uint32_t>(d));
      m.weights.push_back(wd[w][d]);
    }
    m.row_offsets.push_back(m.weights.size());
  }
  return m;
}

DocumentEmotionMatrix dense_to_de(const std::vector<std::vector<double>>& de) {
  DocumentEmotionMatrix m;
  m.emotions = de.front().size();
  for (std::size_t d = 0; d < de.size(); ++d) {
    m.documents.push_back("d" + std::to_string(d));
    m.values.insert(m.values.end(), de[d].begin(), de[d].end());
  }
  return m;
}

}  // namespace

TEST_CASE("emotion_product") {
  SUBCASE("identity M_DE") {
    auto out = emotion_product(dense_to_tdm({{1, 0}, {0, 2}}), dense_to_de({{1, 0}, {0, 1}}));
    CHECK(out.values == std::vector<double>{1, 0, 0, 2});
  }
  SUBCASE("one-hot votes fill a single column") {
    auto out = emotion_product(dense_to_tdm({{1, 3, 0}, {2, 0, 5}}), dense_to_de({{0, 1, 0}, {0, 1, 0}, {0, 1, 0}}));
    for (std::size_t r = 0; r < 2; ++r) {
      CHECK(out.at(r, 0) == 0.0);
      CHECK(out.at(r, 2) == 0.0);
      CHECK(out.at(r, 1) > 0.0);
    }
  }
  SUBCASE("random instance matches a dense triple loop") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::bernoulli_distribution zero(0.3);
    std::vector<std::vector<double>> wd(5, std::vector<double>(4)), de(4, std::vector<double>(3));
    for (auto& row : wd)
      for (double& v : row) v = zero(rng) ? 0.0 : u(rng);
    for (auto& row : de)
      for (double& v : row) v = u(rng);
    auto out = emotion_product(dense_to_tdm(wd), dense_to_de(de));
    for (std::size_t w = 0; w < 5; ++w)
      for (std::size_t e = 0; e < 3; ++e) {
        double expected = 0;
        for (std::size_t d = 0; d < 4; ++d) expected += wd[w][d] * de[d][e];
        CHECK(std::abs(out.at(w, e) - expected) < 1e-12);
      }
  }
  SUBCASE("document order of M_DE does not matter") {
    auto de = dense_to_de({{1, 0}, {0, 1}});
    std::swap(de.documents[0], de.documents[1]);
    std::swap(de.values[0], de.values[2]);
    std::swap(de.values[1], de.values[3]);
    auto out = emotion_product(dense_to_tdm({{1, 0}, {0, 2}}), de);
    CHECK(out.values == std::vector<double>{1, 0, 0, 2});
  }
  SUBCASE("document set mismatch lists the symmetric difference") {
    auto de = dense_to_de({{1, 0}, {0, 1}});
    de.documents[1] = "stray";
    try {
      emotion_product(dense_to_tdm({{1, 0}, {0, 2}}), de);
      FAIL("expected an error");
    } catch (const Error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("d1") != std::string::npos);
      CHECK(msg.find("stray") != std::string::npos);
    }
  }
}

TEST_CASE("column_normalize") {
  SUBCASE("column [1, 3]") {
    auto out = column_normalize(matrix(1, {{1}, {3}}), labels(1));
    CHECK(out.values == std::vector<double>{0.25, 0.75});
  }
  SUBCASE("already normalized") {
    auto out = column_normalize(matrix(2, {{0.2, 0.5}, {0.8, 0.5}}), labels(2));
    CHECK(std::abs(out.at(0, 0) - 0.2) < 1e-12);
    CHECK(std::abs(out.at(1, 1) - 0.5) < 1e-12);
  }
  SUBCASE("random 6x8 matrix against per-column division") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<std::vector<double>> rows(6, std::vector<double>(8));
    for (auto& r : rows)
      for (double& v : r) v = u(rng);
    auto out = column_normalize(matrix(8, rows), labels(8));
    for (std::size_t e = 0; e < 8; ++e) {
      double col = 0, total = 0;
      for (const auto& r : rows) col += r[e];
      for (std::size_t w = 0; w < 6; ++w) {
        CHECK(std::abs(out.at(w, e) - rows[w][e] / col) < 1e-12);
        total += out.at(w, e);
      }
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
  SUBCASE("zero column names the emotion") {
    CHECK_THROWS_WITH_AS(column_normalize(matrix(2, {{1, 0}, {2, 0}}), EmotionSet::from_list("JOY,FEAR")),
                         doctest::Contains("FEAR"), Error);
  }
  SUBCASE("max mode") {
    auto out = column_normalize(matrix(1, {{1}, {4}}), labels(1), ColumnNorm::max);
    CHECK(out.values == std::vector<double>{0.25, 1.0});
  }
}

TEST_CASE("row_scale") {
  SUBCASE("definition") {
    auto out = row_scale(matrix(3, {{2, 2, 6}}));
    CHECK(std::abs(out.matrix.at(0, 0) - 0.2) < 1e-15);
    CHECK(std::abs(out.matrix.at(0, 2) - 0.6) < 1e-15);
  }
  SUBCASE("published-style awe#n row already sums to one") {
    const std::vector<double> awe{0.08, 0.12, 0.04, 0.11, 0.07, 0.15, 0.38, 0.05};
    auto out = row_scale(matrix(8, {awe}));
    for (std::size_t e = 0; e < 8; ++e) CHECK(std::abs(out.matrix.at(0, e) - awe[e]) < 1e-12);
  }
  SUBCASE("zero rows are dropped and counted") {
    auto out = row_scale(matrix(2, {{0, 0}, {1, 1}, {0, 0}}));
    CHECK(out.dropped_zero_rows == 2);
    CHECK(out.matrix.rows() == 1);
    CHECK(out.matrix.terms[0].str() == "w1#n");
  }
  SUBCASE("random rows against per-row division") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<std::vector<double>> rows(20, std::vector<double>(8));
    for (auto& r : rows)
      for (double& v : r) v = u(rng);
    auto out = row_scale(matrix(8, rows));
    for (std::size_t w = 0; w < rows.size(); ++w) {
      const double s = std::accumulate(rows[w].begin(), rows[w].end(), 0.0);
      for (std::size_t e = 0; e < 8; ++e) CHECK(std::abs(out.matrix.at(w, e) - rows[w][e] / s) < 1e-12);
    }
  }
}

TEST_CASE("column scaling before column_normalize is a no-op") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<std::vector<double>> rows(30, std::vector<double>(8));
  for (auto& r : rows)
    for (double& v : r) v = u(rng);
  const auto base = row_scale(column_normalize(matrix(8, rows), labels(8))).matrix;
  for (std::size_t e = 0; e < 8; ++e) {
    for (double c : {0.1, 3.0, 100.0}) {
      auto scaled = matrix(8, rows);
      for (std::size_t w = 0; w < scaled.rows(); ++w) scaled.at(w, e) *= c;
      auto out = row_scale(column_normalize(scaled, labels(8))).matrix;
      for (std::size_t i = 0; i < out.values.size(); ++i) CHECK(std::abs(out.values[i] - base.values[i]) < 1e-12);
    }
  }
}

TEST_CASE("build_lexicon") {
  const EmotionSet emotions;
  SUBCASE("planted word is one-hot on AFRAID for every scheme") {
    std::vector<oracle::Doc> docs{
        {"a", {"fear#n", "common#n", "fear#n"}, {1, 0, 0, 0, 0, 0, 0, 0}},
        {"b", {"fear#n", "other#n"}, {1, 0, 0, 0, 0, 0, 0, 0}},
        {"c", {"common#n", "joy#n"}, {0, 0.2, 0, 0, 0, 0.6, 0.2, 0}},
        {"d", {"other#n", "joy#n", "sad#a"}, {0, 0.1, 0.2, 0.1, 0.1, 0.1, 0.1, 0.3}},
        {"e", {"sad#a", "angry#a"}, {0.05, 0.1, 0.3, 0.2, 0.1, 0.05, 0.1, 0.1}},
    };
    const auto vocab = fixtures::to_vocab({"fear#n", "common#n", "other#n", "joy#n", "sad#a", "angry#a"});
    for (auto scheme : {WeightingScheme::raw, WeightingScheme::normalized, WeightingScheme::tfidf}) {
      BuildOptions options;
      options.scheme = scheme;
      auto lex = build_lexicon(fixtures::to_records(docs), emotions, vocab, nullptr, options).lexicon;
      auto idx = lex.find(LemmaPos::parse("fear#n"));
      REQUIRE(idx);
      auto row = lex.row(*idx);
      CHECK(std::abs(row[0] - 1.0) < 1e-9);
      for (std::size_t e = 1; e < 8; ++e) CHECK(row[e] == 0.0);
    }
  }
  SUBCASE("8-doc 12-word planted corpus equals the dense reference") {
    std::vector<std::string> words;
    for (int i = 0; i < 12; ++i) words.push_back("word" + std::to_string(i) + (i % 2 ? "#v" : "#n"));
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> pick(0, 11);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<oracle::Doc> docs;
    for (int d = 0; d < 8; ++d) {
      oracle::Doc doc{"doc" + std::to_string(d), {}, {}};
      for (int t = 0; t < 15; ++t) doc.tokens.push_back(words[pick(rng)]);
      doc.tokens.push_back("unknown#n");
      double s = 0;
      for (int e = 0; e < 8; ++e) s += doc.votes.emplace_back(u(rng));
      for (double& v : doc.votes) v /= s;
      docs.push_back(doc);
    }
    const std::set<std::string> vocab(words.begin(), words.end());
    for (auto [scheme, ref] : {std::pair{WeightingScheme::raw, oracle::Weighting::f},
                               std::pair{WeightingScheme::normalized, oracle::Weighting::nf},
                               std::pair{WeightingScheme::tfidf, oracle::Weighting::tfidf}}) {
      BuildOptions options;
      options.scheme = scheme;
      auto lex = build_lexicon(fixtures::to_records(docs), emotions, fixtures::to_vocab(vocab), nullptr, options).lexicon;
      auto expected = oracle::dense_lexicon(docs, vocab, ref, 8);
      REQUIRE(lex.size() == expected.size());
      for (std::size_t i = 0; i < lex.size(); ++i) {
        const auto& exp_row = expected.at(lex.term(i).str());
        for (std::size_t e = 0; e < 8; ++e) CHECK(std::abs(lex.row(i)[e] - exp_row[e]) < 1e-9);
      }
    }
  }
  SUBCASE("raw-length nf matches the dense reference") {
    std::mt19937_64 rng(31);
    auto rc = oracle::random_corpus(rng, 10, 20, 8);
    BuildOptions options;
    options.nf_length = LengthMode::raw;
    auto lex = build_lexicon(fixtures::to_records(rc.docs), emotions, fixtures::to_vocab(rc.vocab), nullptr, options)
                   .lexicon;
    auto expected = oracle::dense_lexicon(rc.docs, rc.vocab, oracle::Weighting::nf, 8, true);
    REQUIRE(lex.size() == expected.size());
    for (std::size_t i = 0; i < lex.size(); ++i)
      for (std::size_t e = 0; e < 8; ++e) CHECK(std::abs(lex.row(i)[e] - expected.at(lex.term(i).str())[e]) < 1e-9);
  }
  SUBCASE("text documents go through the lemma pipeline") {
    const EmotionSet two = EmotionSet::from_list("AFRAID,SAD");
    std::vector<DocumentRecord> corpus(2);
    corpus[0].id = "t";
    corpus[0].text = "Bombings kill; bombings WOUND.";
    corpus[0].votes = validate_votes(std::vector<double>{1, 0});
    corpus[1].id = "u";
    corpus[1].tokens = {LemmaPos::parse("wound#v")};
    corpus[1].votes = validate_votes(std::vector<double>{0, 1});
    LemmaTable table;
    table.add_entry("bombings", PartOfSpeech::noun, "bombing");
    const auto vocab = fixtures::to_vocab({"bombing#n", "kill#v", "wound#v", "wound#n"});
    auto result = build_lexicon(corpus, two, vocab, &table);
    CHECK(result.lexicon.size() == 4);
    CHECK(result.lexicon.row(*result.lexicon.find(LemmaPos::parse("bombing#n")))[0] == doctest::Approx(1.0));
    CHECK(result.lexicon.row(*result.lexicon.find(LemmaPos::parse("wound#v")))[1] > 0.0);
  }
  SUBCASE("tf-idf drops ubiquitous words as zero rows") {
    std::vector<oracle::Doc> docs{{"a", {"all#n", "x#n"}, {0.5, 0.5, 0, 0, 0, 0, 0, 0}},
                                  {"b", {"all#n", "y#n"}, {0, 0, 0.5, 0.5, 0, 0, 0, 0}},
                                  {"c", {"all#n", "z#n"}, {0, 0, 0, 0, 0.25, 0.25, 0.25, 0.25}}};
    BuildOptions options;
    options.scheme = WeightingScheme::tfidf;
    auto result = build_lexicon(fixtures::to_records(docs), emotions,
                                fixtures::to_vocab({"all#n", "x#n", "y#n", "z#n"}), nullptr, options);
    CHECK(result.stats.zeroed_terms == 1);
    CHECK(result.stats.dropped_zero_rows == 1);
    CHECK_FALSE(result.lexicon.find(LemmaPos::parse("all#n")));
    CHECK(result.lexicon.size() == 3);
  }
  SUBCASE("nothing survives filtering") {
    std::vector<oracle::Doc> docs{{"a", {"x#n"}, {1, 0, 0, 0, 0, 0, 0, 0}}};
    CHECK_THROWS_AS(build_lexicon(fixtures::to_records(docs), emotions, fixtures::to_vocab({"y#n"}), nullptr), Error);
  }
}

TEST_CASE("lexicon serialization") {
  const EmotionSet emotions;
  SUBCASE("comical#a survives write/read") {
    const std::vector<double> comical{0.02, 0.51, 0.04, 0.05, 0.12, 0.17, 0.03, 0.06};
    EmotionLexicon lex(emotions, {LemmaPos::parse("comical#a")}, comical, {}, kFileRowTolerance);
    std::stringstream buf;
    write_lexicon(buf, lex);
    CHECK(buf.str() ==
          "Lemma#PoS\tAFRAID\tAMUSED\tANGRY\tANNOYED\tDONT_CARE\tHAPPY\tINSPIRED\tSAD\n"
          "comical#a\t0.02\t0.51\t0.04\t0.05\t0.12\t0.17\t0.03\t0.06\n");
    auto back = read_lexicon(buf);
    REQUIRE(back.size() == 1);
    for (std::size_t e = 0; e < 8; ++e) CHECK(back.row(0)[e] == comical[e]);
  }
  SUBCASE("empty path") { CHECK_THROWS_AS(read_lexicon_file(""), Error); }
  SUBCASE("100 random rows round-trip within 1e-9 and are written in key order") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LemmaPos> terms;
    std::vector<double> scores;
    for (int i = 99; i >= 0; --i) {
      terms.push_back(LemmaPos::parse("term" + std::to_string(i) + "#a"));
      std::vector<double> row(8);
      double s = 0;
      for (double& v : row) s += (v = u(rng));
      for (double& v : row) scores.push_back(v / s);
    }
    EmotionLexicon lex(emotions, terms, scores, {{"weighting", "nf"}, {"note", ""}});
    std::stringstream buf;
    write_lexicon(buf, lex);
    auto back = read_lexicon(buf, &emotions);
    REQUIRE(back.size() == 100);
    CHECK(back.metadata() == lex.metadata());
    CHECK(std::is_sorted(back.terms().begin(), back.terms().end()));
    for (std::size_t i = 0; i < 100; ++i) {
      CHECK(back.term(i) == lex.term(i));
      for (std::size_t e = 0; e < 8; ++e) CHECK(std::abs(back.row(i)[e] - lex.row(i)[e]) < 1e-9);
    }
  }
  SUBCASE("read errors carry line numbers") {
    const std::string header = "Lemma#PoS\tAFRAID\tAMUSED\tANGRY\tANNOYED\tDONT_CARE\tHAPPY\tINSPIRED\tSAD\n";
    auto err = [](const std::string& text, const EmotionSet* expected = nullptr) -> std::string {
      std::istringstream in(text);
      try {
        read_lexicon(in, expected);
      } catch (const ParseError& e) {
        return e.what();
      }
      return "";
    };
    CHECK(err(header + "awe#n\t0.1\tx\t0\t0\t0\t0\t0.9\t0\n").find("line 2: non-numeric") != std::string::npos);
    CHECK(err(header + "awe#n\t0.1\t0.1\t0\t0\t0\t0\t0.9\t0\n").find("line 2") != std::string::npos);
    CHECK(err(header + "awe#n\t1\n").find("fields") != std::string::npos);
    CHECK(err("# only metadata\n").find("no header") != std::string::npos);
    const EmotionSet other = EmotionSet::from_list("JOY,FEAR");
    CHECK(err(header, &other).find("do not match") != std::string::npos);
    CHECK(err(header + "awe#n\t1\t0\t0\t0\t0\t0\t0\t0\nawe#n\t1\t0\t0\t0\t0\t0\t0\t0\n").find("duplicate") !=
          std::string::npos);
  }
  SUBCASE("construction validates rows") {
    CHECK_THROWS_AS(EmotionLexicon(emotions, {LemmaPos::parse("a#n")}, std::vector<double>(8, 0.1)), Error);
    CHECK_THROWS_AS(EmotionLexicon(emotions, {LemmaPos::parse("a#n")}, std::vector<double>(7, 0.125)), Error);
  }
}

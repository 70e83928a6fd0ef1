#include "depechemood/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "depechemood/error.hpp"

namespace depechemood {

using json = nlohmann::json;

VoteVector validate_votes(std::span<const double> raw) {
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) throw Error("vote value is not finite");
    if (v < 0.0) throw Error("negative vote fraction " + std::to_string(v));
    sum += v;
  }
  if (sum <= 0.0) throw Error("document with no votes");
  if (std::abs(sum - 1.0) > kVoteSumTolerance) {
    std::ostringstream msg;
    msg << "vote fractions sum to " << sum << ", more than " << kVoteSumTolerance << " away from 1";
    throw Error(msg.str());
  }
  VoteVector out;
  out.values.reserve(raw.size());
  for (double v : raw) out.values.push_back(v / sum);
  return out;
}

namespace {

constexpr std::size_t kMaxReportedErrors = 20;

DocumentRecord parse_record(const std::string& line, std::size_t lineno, const EmotionSet& emotions) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error("record is not a JSON object");

  DocumentRecord rec;
  rec.line = lineno;

  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string()) throw Error("missing string field 'id'");
  rec.id = id->get<std::string>();
  if (rec.id.empty()) throw Error("empty document id");

  auto tokens = obj.find("tokens");
  auto text = obj.find("text");
  if ((tokens == obj.end()) == (text == obj.end()))
    throw Error("exactly one of 'tokens' or 'text' is required");
  if (tokens != obj.end()) {
    if (!tokens->is_array()) throw Error("'tokens' must be an array");
    rec.tokens.reserve(tokens->size());
    for (const auto& t : *tokens) {
      if (!t.is_string()) throw Error("'tokens' entries must be strings");
      rec.tokens.push_back(LemmaPos::parse(t.get_ref<const std::string&>()));
    }
  } else {
    if (!text->is_string()) throw Error("'text' must be a string");
    rec.text = text->get<std::string>();
  }

  auto votes = obj.find("votes");
  if (votes == obj.end()) throw Error("missing field 'votes'");
  if (!votes->is_object()) throw Error("'votes' must be an object");
  std::vector<double> raw(emotions.size(), 0.0);
  for (const auto& [key, value] : votes->items()) {
    auto idx = emotions.index_of(key);
    if (!idx) throw Error("unknown emotion key '" + key + "'");
    if (!value.is_number()) throw Error("vote for '" + key + "' is not a number");
    raw[*idx] = value.get<double>();
  }
  rec.votes = validate_votes(raw);

  if (auto n = obj.find("n_votes"); n != obj.end()) {
    if (!n->is_number() || n->get<double>() < 0) throw Error("'n_votes' must be a non-negative number");
    rec.vote_count = n->get<double>();
  }
  return rec;
}

}  // namespace

std::vector<DocumentRecord> parse_corpus(std::istream& in, const EmotionSet& emotions) {
  std::vector<DocumentRecord> records;
  std::unordered_map<std::string, std::size_t> first_line;
  std::vector<std::string> errors;
  std::size_t failures = 0;
  auto fail = [&](std::size_t lineno, const std::string& what) {
    ++failures;
    if (errors.size() < kMaxReportedErrors) errors.push_back("line " + std::to_string(lineno) + ": " + what);
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      DocumentRecord rec = parse_record(line, lineno, emotions);
      auto [it, inserted] = first_line.emplace(rec.id, lineno);
      if (!inserted) {
        fail(lineno, "duplicate doc_id '" + rec.id + "' (first seen on line " + std::to_string(it->second) + ")");
        continue;
      }
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      fail(lineno, e.what());
    }
  }
  if (in.bad()) throw Error("I/O error while reading corpus");
  if (failures > 0) {
    std::string msg = std::to_string(failures) + " malformed corpus record(s):";
    for (const auto& e : errors) msg += "\n  " + e;
    if (failures > errors.size()) msg += "\n  ...";
    throw ParseError(msg, 0);
  }
  return records;
}

std::vector<DocumentRecord> parse_corpus_file(const std::string& path, const EmotionSet& emotions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path);
  return parse_corpus(in, emotions);
}

CorpusStats corpus_stats(std::span<const DocumentRecord> corpus, const EmotionSet& emotions) {
  if (corpus.empty()) throw Error("corpus is empty");
  CorpusStats stats;
  stats.doc_count = corpus.size();
  stats.mean_votes.assign(emotions.size(), 0.0);
  for (const auto& doc : corpus) {
    if (doc.votes.values.size() != emotions.size())
      throw Error("document '" + doc.id + "' vote vector does not match the emotion set");
    for (std::size_t e = 0; e < emotions.size(); ++e) stats.mean_votes[e] += doc.votes.values[e];
    stats.token_count += doc.text ? tokenize(*doc.text).size() : doc.tokens.size();
  }
  const double n = static_cast<double>(corpus.size());
  for (double& m : stats.mean_votes) m /= n;
  stats.mean_doc_length = static_cast<double>(stats.token_count) / n;
  return stats;
}

std::vector<DocumentRecord> filter_by_vote_count(std::vector<DocumentRecord> corpus, double min_votes,
                                                 std::vector<std::string>* dropped) {
  if (min_votes <= 0.0) return corpus;
  std::vector<DocumentRecord> kept;
  kept.reserve(corpus.size());
  for (auto& doc : corpus) {
    if (doc.vote_count && *doc.vote_count >= min_votes) {
      kept.push_back(std::move(doc));
    } else if (dropped) {
      dropped->push_back(doc.id);
    }
  }
  return kept;
}

}  // namespace depechemood

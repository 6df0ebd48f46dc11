// Copyright 2026 The segcap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "segcap/ngram_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace segcap {

namespace {

constexpr char kHistSep = '\x1f';
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

std::string NgramModel::history_key(std::span<const int> prefix) const {
  // last (order-1) events, BOS-padded on the left
  int window = order_ - 1;
  std::string key;
  int have = static_cast<int>(prefix.size());
  for (int pos = window; pos >= 1; --pos) {
    if (!key.empty()) key.push_back(kHistSep);
    if (pos > have) {
      key += ModelVocab::kBosSymbol;
    } else {
      key += vocab_.symbol(prefix[static_cast<std::size_t>(have - pos)]);
    }
  }
  return key;
}

NgramModel NgramModel::fit(const std::vector<TrainingPair>& corpus, int order, double alpha,
                           int max_len) {
  if (corpus.empty()) fail(Errc::EmptyCorpus, "fit_ngram_model: empty corpus");
  if (order < 1) fail(Errc::InvalidArgument, "fit_ngram_model: order must be >= 1");
  if (!(alpha > 0.0)) fail(Errc::InvalidArgument, "fit_ngram_model: alpha must be > 0");
  if (max_len < 1) fail(Errc::InvalidArgument, "fit_ngram_model: max_len must be >= 1");

  NgramModel model;
  model.order_ = order;
  model.alpha_ = alpha;
  model.max_len_ = max_len;

  // deterministic vocabulary: first-occurrence order over the corpus
  std::vector<std::string> symbols;
  {
    std::map<std::string, bool> seen;
    for (const auto& [context, seq] : corpus) {
      for (const Token& token : seq) {
        if (!seen.emplace(token, true).second) continue;
        symbols.push_back(token);
      }
    }
  }
  model.vocab_ = ModelVocab::from_symbols(std::move(symbols));

  for (const auto& [context, seq] : corpus) {
    std::vector<int> indices;
    indices.reserve(seq.size());
    for (const Token& token : seq) {
      indices.push_back(*model.vocab_.index_of(token));
    }
    for (std::size_t pos = 0; pos <= indices.size(); ++pos) {
      std::string key = model.history_key(std::span<const int>(indices.data(), pos));
      int next = pos < indices.size() ? indices[pos] : ModelVocab::kEos;
      model.per_context_[context][key][next]++;
      model.pooled_[key][next]++;
    }
  }
  return model;
}

std::vector<double> NgramModel::next_logprobs(const std::string& context,
                                              std::span<const int> prefix) const {
  auto ctx_it = per_context_.find(context);
  const CountTable& table = ctx_it == per_context_.end() ? pooled_ : ctx_it->second;

  std::string key = history_key(prefix);
  const std::map<int, long>* row = nullptr;
  auto row_it = table.find(key);
  if (row_it != table.end()) row = &row_it->second;

  // event space: EOS plus every content symbol
  double events = static_cast<double>(vocab_.content_size()) + 1.0;
  double total = 0.0;
  if (row) {
    for (const auto& [token, count] : *row) total += static_cast<double>(count);
  }
  double denom = total + alpha_ * events;

  std::vector<double> out(vocab_.size(), kNegInf);
  for (int token = ModelVocab::kEos; token < static_cast<int>(vocab_.size()); ++token) {
    double count = 0.0;
    if (row) {
      auto it = row->find(token);
      if (it != row->end()) count = static_cast<double>(it->second);
    }
    out[static_cast<std::size_t>(token)] = std::log((count + alpha_) / denom);
  }
  return out;
}

TokenSeq NgramModel::tokens_to_symbols(const std::vector<int>& tokens) const {
  TokenSeq out;
  out.reserve(tokens.size());
  for (int token : tokens) out.push_back(vocab_.symbol(token));
  return out;
}

std::vector<int> NgramModel::symbols_to_tokens(const TokenSeq& symbols) const {
  std::vector<int> out;
  out.reserve(symbols.size());
  for (const Token& symbol : symbols) {
    auto index = vocab_.index_of(symbol);
    if (!index || *index < 2) {
      fail(Errc::InvalidArgument, "symbol not in model vocabulary: " + symbol);
    }
    out.push_back(*index);
  }
  return out;
}

namespace {

nlohmann::json table_to_json(const std::map<std::string, std::map<int, long>>& table,
                             const ModelVocab& vocab) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, row] : table) {
    nlohmann::json row_json = nlohmann::json::object();
    for (const auto& [token, count] : row) {
      row_json[vocab.symbol(token)] = count;
    }
    out[key] = std::move(row_json);
  }
  return out;
}

void table_from_json(const nlohmann::json& in, const ModelVocab& vocab,
                     std::map<std::string, std::map<int, long>>& table) {
  for (auto it = in.begin(); it != in.end(); ++it) {
    std::map<int, long> row;
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
      const std::string& symbol = jt.key();
      auto token = vocab.index_of(symbol);
      if (!token || *token == ModelVocab::kBos) {
        fail(Errc::ParseError, "count table references unknown symbol: " + symbol);
      }
      row[*token] = jt.value().get<long>();
    }
    table[it.key()] = std::move(row);
  }
}

}  // namespace

std::string NgramModel::to_json() const {
  nlohmann::json doc;
  doc["order"] = order_;
  doc["alpha"] = alpha_;
  doc["max_len"] = max_len_;
  doc["vocabulary"] = vocab_.content_symbols();
  nlohmann::json contexts = nlohmann::json::object();
  for (const auto& [context, table] : per_context_) {
    contexts[context] = table_to_json(table, vocab_);
  }
  doc["contexts"] = std::move(contexts);
  doc["pooled"] = table_to_json(pooled_, vocab_);
  return doc.dump(2) + "\n";
}

NgramModel NgramModel::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    NgramModel model;
    model.order_ = doc.at("order").get<int>();
    model.alpha_ = doc.at("alpha").get<double>();
    model.max_len_ = doc.at("max_len").get<int>();
    model.vocab_ = ModelVocab::from_symbols(doc.at("vocabulary").get<std::vector<std::string>>());
    for (auto it = doc.at("contexts").begin(); it != doc.at("contexts").end(); ++it) {
      table_from_json(it.value(), model.vocab_, model.per_context_[it.key()]);
    }
    table_from_json(doc.at("pooled"), model.vocab_, model.pooled_);
    if (model.order_ < 1 || !(model.alpha_ > 0.0) || model.max_len_ < 1) {
      fail(Errc::ParseError, "model header values out of range");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("malformed model document: ") + e.what());
  }
}

void NgramModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot open for writing: " + path);
  out << to_json();
  if (!out) fail(Errc::IoError, "write failed: " + path);
}

NgramModel NgramModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

double mean_step_entropy(const SequenceModel& model, const std::vector<TrainingPair>& corpus) {
  if (corpus.empty()) fail(Errc::EmptyCorpus, "mean_step_entropy: empty corpus");
  double entropy_sum = 0.0;
  long positions = 0;
  for (const auto& [context, seq] : corpus) {
    std::vector<int> prefix;
    prefix.reserve(seq.size());
    for (std::size_t pos = 0; pos <= seq.size(); ++pos) {
      std::vector<double> lp =
          model.next_logprobs(context, std::span<const int>(prefix.data(), prefix.size()));
      double h = 0.0;
      for (double value : lp) {
        if (value == kNegInf) continue;
        h -= std::exp(value) * value;
      }
      entropy_sum += h;
      ++positions;
      if (pos < seq.size()) {
        auto index = model.vocab().index_of(seq[pos]);
        if (!index || *index < 2) break;  // symbol outside the model vocabulary
        prefix.push_back(*index);
      }
    }
  }
  return entropy_sum / static_cast<double>(positions);
}

}  // namespace segcap

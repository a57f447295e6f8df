// Copyright 2026 The asrqe Authors.
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

#include "asrqe/evalsuite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "asrqe/jsonl.hpp"
#include "asrqe/textmetrics.hpp"

namespace asrqe::evalsuite {

namespace {

void require_same_size(const std::vector<double>& x, const std::vector<double>& y,
                       const char* fn) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(fn) + ": input lengths differ (" +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                                ")");
  }
}

}  // namespace

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  require_same_size(x, y, "pearson");
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  require_same_size(x, y, "spearman");
  if (x.size() < 2) return std::nullopt;
  return pearson(textmetrics::rank_by_score(x, false), textmetrics::rank_by_score(y, false));
}

std::optional<double> kendall(const std::vector<double>& x, const std::vector<double>& y) {
  require_same_size(x, y, "kendall");
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
  double concordant = 0.0, discordant = 0.0, ties_x = 0.0, ties_y = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ties_x += 1.0;
      if (dy == 0.0) ties_y += 1.0;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0)) {
        concordant += 1.0;
      } else {
        discordant += 1.0;
      }
    }
  }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double den = std::sqrt((n0 - ties_x) * (n0 - ties_y));
  if (den == 0.0) return std::nullopt;
  return (concordant - discordant) / den;
}

namespace {

TripleCorr triple(const std::vector<double>& x, const std::vector<double>& y) {
  TripleCorr t;
  t.pearson = pearson(x, y);
  t.spearman = spearman(x, y);
  t.kendall = kendall(x, y);
  return t;
}

}  // namespace

CorrelationReport evaluate(const std::vector<ScoredRecord>& records) {
  for (const auto& r : records) {
    if (!r.wer.has_value()) {
      throw std::invalid_argument("evaluate: record '" + r.utt_id + "/" + r.source_id +
                                  "' lacks wer");
    }
  }

  std::map<std::string, std::vector<const ScoredRecord*>> by_utt;
  for (const auto& r : records) by_utt[r.utt_id].push_back(&r);

  CorrelationReport rep;
  rep.n_hyps = records.size();
  rep.n_utts = by_utt.size();

  std::vector<double> pooled_score_rank, pooled_wer_rank;
  std::vector<double> neg_scores, wers;
  neg_scores.reserve(records.size());
  wers.reserve(records.size());

  for (const auto& [utt, group] : by_utt) {
    (void)utt;
    if (group.size() < 2) {
      ++rep.n_single_hyp_utts;
    } else {
      std::vector<double> scores, group_wers;
      scores.reserve(group.size());
      group_wers.reserve(group.size());
      for (const auto* r : group) {
        scores.push_back(r->score);
        group_wers.push_back(*r->wer);
      }
      const auto sr = textmetrics::rank_by_score(scores, true);
      const auto wr = textmetrics::rank_by_score(group_wers, false);
      pooled_score_rank.insert(pooled_score_rank.end(), sr.begin(), sr.end());
      pooled_wer_rank.insert(pooled_wer_rank.end(), wr.begin(), wr.end());
    }
    for (const auto* r : group) {
      neg_scores.push_back(-r->score);
      wers.push_back(*r->wer);
    }
  }

  rep.vs_rank = triple(pooled_score_rank, pooled_wer_rank);
  rep.vs_score = triple(neg_scores, wers);
  return rep;
}

std::vector<ScoredRecord> score_corpus(const std::vector<pairset::Hypothesis>& hyps,
                                       const Scorer& scorer,
                                       const std::map<std::string, std::string>* refs) {
  std::vector<const pairset::Hypothesis*> ordered;
  ordered.reserve(hyps.size());
  for (const auto& h : hyps) ordered.push_back(&h);
  std::sort(ordered.begin(), ordered.end(),
            [](const pairset::Hypothesis* a, const pairset::Hypothesis* b) {
              return std::tie(a->utt_id, a->source_id) < std::tie(b->utt_id, b->source_id);
            });

  std::vector<std::string> missing;
  if (refs) {
    for (const auto* h : ordered) {
      if (!refs->contains(h->utt_id)) {
        if (missing.empty() || missing.back() != h->utt_id) missing.push_back(h->utt_id);
      }
    }
    if (!missing.empty()) {
      std::string msg = "score_corpus: no reference for utterance(s):";
      for (const auto& id : missing) msg += " " + id;
      throw std::runtime_error(msg);
    }
  }

  std::vector<ScoredRecord> out;
  out.reserve(ordered.size());
  for (const auto* h : ordered) {
    ScoredRecord r;
    r.utt_id = h->utt_id;
    r.source_id = h->source_id;
    r.score = scorer(h->text);
    if (refs) {
      const auto ref_seq = textmetrics::normalize_and_tokenize(refs->at(h->utt_id));
      const auto hyp_seq = textmetrics::normalize_and_tokenize(h->text);
      r.wer = textmetrics::wer(ref_seq, hyp_seq).wer;
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_scored_jsonl(const std::filesystem::path& path,
                        const std::vector<ScoredRecord>& records) {
  jsonl::Writer w(path);
  for (const auto& r : records) {
    nlohmann::json o{{"utt", r.utt_id}, {"source", r.source_id}, {"score", r.score}};
    if (r.wer.has_value()) o["wer"] = *r.wer;
    w.write(o);
  }
  w.close();
}

std::vector<ScoredRecord> read_scored_jsonl(const std::filesystem::path& path) {
  std::vector<ScoredRecord> out;
  jsonl::for_each_object(path, [&](const nlohmann::json& o, size_t lineno) {
    try {
      ScoredRecord r;
      r.utt_id = o.at("utt").get<std::string>();
      r.source_id = o.at("source").get<std::string>();
      r.score = o.at("score").get<double>();
      if (o.contains("wer") && !o.at("wer").is_null()) r.wer = o.at("wer").get<double>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad scored record: " + e.what());
    }
  });
  return out;
}

namespace {

nlohmann::json corr_json(const TripleCorr& t) {
  auto val = [](const std::optional<double>& v) {
    return v.has_value() ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return nlohmann::json{{"pearson", val(t.pearson)},
                        {"spearman", val(t.spearman)},
                        {"kendall", val(t.kendall)}};
}

std::string corr_cell(const std::optional<double>& v) {
  if (!v.has_value()) return "     n/a";
  std::ostringstream os;
  os << std::setw(8) << std::fixed << std::setprecision(4) << *v;
  return os.str();
}

}  // namespace

nlohmann::json report_to_json(const CorrelationReport& rep) {
  return nlohmann::json{{"vs_rank", corr_json(rep.vs_rank)},
                        {"vs_score", corr_json(rep.vs_score)},
                        {"n_utts", rep.n_utts},
                        {"n_hyps", rep.n_hyps},
                        {"n_single_hyp_utts", rep.n_single_hyp_utts}};
}

std::string report_table(const CorrelationReport& rep) {
  std::ostringstream os;
  os << "            pearson spearman  kendall\n";
  os << "vs_rank    " << corr_cell(rep.vs_rank.pearson) << " " << corr_cell(rep.vs_rank.spearman)
     << " " << corr_cell(rep.vs_rank.kendall) << "\n";
  os << "vs_score   " << corr_cell(rep.vs_score.pearson) << " "
     << corr_cell(rep.vs_score.spearman) << " " << corr_cell(rep.vs_score.kendall) << "\n";
  os << "utterances " << rep.n_utts << ", hypotheses " << rep.n_hyps
     << ", single-hypothesis utterances " << rep.n_single_hyp_utts << "\n";
  return os.str();
}

}  // namespace asrqe::evalsuite

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

#include "asrqe/commands.hpp"

#include <iostream>
#include <variant>

#include "CLI11.hpp"

#include "asrqe/baseline_lm.hpp"
#include "asrqe/jsonl.hpp"
#include "asrqe/manifest.hpp"
#include "asrqe/model_io.hpp"
#include "asrqe/synth.hpp"
#include "asrqe/textmetrics.hpp"

namespace asrqe::cli {

namespace {

nlohmann::json opt_json(const std::optional<std::filesystem::path>& p) {
  return p ? nlohmann::json(p->string()) : nlohmann::json(nullptr);
}

std::optional<std::filesystem::path> opt_path(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return std::filesystem::path(v.get<std::string>());
}

void finish_manifest(manifest::RunManifest& m, const std::filesystem::path& where) {
  m.finished_at = manifest::now_iso8601_utc();
  manifest::write(where, m);
}

// Computes missing ref_wer values from a references file; present values win.
void fill_ref_wer(std::vector<pairset::Hypothesis>& hyps,
                  const std::filesystem::path& refs_path) {
  const auto refs = pairset::read_references_jsonl(refs_path);
  std::vector<std::string> missing;
  for (auto& h : hyps) {
    if (h.ref_wer.has_value()) continue;
    const auto it = refs.find(h.utt_id);
    if (it == refs.end()) {
      if (missing.empty() || missing.back() != h.utt_id) missing.push_back(h.utt_id);
      continue;
    }
    const auto ref_seq = textmetrics::normalize_and_tokenize(it->second);
    const auto hyp_seq = textmetrics::normalize_and_tokenize(h.text);
    h.ref_wer = textmetrics::wer(ref_seq, hyp_seq).wer;
  }
  if (!missing.empty()) {
    std::string msg = "train: no reference for utterance(s):";
    for (const auto& id : missing) msg += " " + id;
    throw std::runtime_error(msg);
  }
}

// ---- manifest config round-trips -------------------------------------------

nlohmann::json config_of(const GenPairsOptions& o) {
  return {{"hyps", o.hyps.string()},
          {"out", o.out_dir.string()},
          {"valid_frac", o.valid_frac},
          {"seed", o.seed}};
}

GenPairsOptions gen_pairs_from_config(const nlohmann::json& c) {
  GenPairsOptions o;
  o.hyps = c.at("hyps").get<std::string>();
  o.out_dir = c.at("out").get<std::string>();
  o.valid_frac = c.at("valid_frac").get<double>();
  o.seed = c.at("seed").get<uint64_t>();
  return o;
}

nlohmann::json config_of(const TrainOptions& o) {
  return {{"train", o.train_pairs.string()},
          {"valid", o.valid_pairs.string()},
          {"sup", opt_json(o.sup)},
          {"sup_refs", opt_json(o.sup_refs)},
          {"mode", o.mode},
          {"alpha", o.alpha},
          {"batch", o.batch},
          {"lr", o.lr},
          {"momentum", o.momentum},
          {"epochs", o.epochs},
          {"patience", o.patience},
          {"w_bal", o.w_bal},
          {"seed", o.seed},
          {"out_model", o.out_model.string()},
          {"hash_dim", o.hash_dim},
          {"embed_dim", o.embed_dim},
          {"hidden_dim", o.hidden_dim},
          {"dropout", o.dropout},
          {"orders", o.orders},
          {"activation", o.activation}};
}

TrainOptions train_from_config(const nlohmann::json& c) {
  TrainOptions o;
  o.train_pairs = c.at("train").get<std::string>();
  o.valid_pairs = c.at("valid").get<std::string>();
  o.sup = opt_path(c.at("sup"));
  o.sup_refs = opt_path(c.at("sup_refs"));
  o.mode = c.at("mode").get<std::string>();
  o.alpha = c.at("alpha").get<double>();
  o.batch = c.at("batch").get<int>();
  o.lr = c.at("lr").get<double>();
  o.momentum = c.at("momentum").get<double>();
  o.epochs = c.at("epochs").get<int>();
  o.patience = c.at("patience").get<int>();
  o.w_bal = c.at("w_bal").get<double>();
  o.seed = c.at("seed").get<uint64_t>();
  o.out_model = c.at("out_model").get<std::string>();
  o.hash_dim = c.at("hash_dim").get<uint64_t>();
  o.embed_dim = c.at("embed_dim").get<int>();
  o.hidden_dim = c.at("hidden_dim").get<int>();
  o.dropout = c.at("dropout").get<double>();
  o.orders = c.at("orders").get<std::vector<int>>();
  o.activation = c.at("activation").get<std::string>();
  return o;
}

nlohmann::json config_of(const ScoreOptions& o) {
  return {{"model", o.model.string()},
          {"hyps", o.hyps.string()},
          {"refs", opt_json(o.refs)},
          {"out", o.out.string()}};
}

ScoreOptions score_from_config(const nlohmann::json& c) {
  ScoreOptions o;
  o.model = c.at("model").get<std::string>();
  o.hyps = c.at("hyps").get<std::string>();
  o.refs = opt_path(c.at("refs"));
  o.out = c.at("out").get<std::string>();
  return o;
}

nlohmann::json config_of(const EvalOptions& o) {
  return {{"scored", o.scored.string()}, {"report", o.report.string()}};
}

EvalOptions eval_from_config(const nlohmann::json& c) {
  EvalOptions o;
  o.scored = c.at("scored").get<std::string>();
  o.report = c.at("report").get<std::string>();
  return o;
}

nlohmann::json config_of(const SynthOptions& o) {
  return {{"out_dir", o.out_dir.string()},
          {"n_utts", o.n_utts},
          {"levels", o.levels},
          {"noise_rates", o.noise_rates},
          {"seed", o.seed}};
}

SynthOptions synth_from_config(const nlohmann::json& c) {
  SynthOptions o;
  o.out_dir = c.at("out_dir").get<std::string>();
  o.n_utts = c.at("n_utts").get<int>();
  o.levels = c.at("levels").get<int>();
  o.noise_rates = c.at("noise_rates").get<std::vector<double>>();
  o.seed = c.at("seed").get<uint64_t>();
  return o;
}

nlohmann::json config_of(const FitBaselineOptions& o) {
  return {{"refs", o.refs.string()},
          {"order", o.order},
          {"k", o.smoothing_k},
          {"out_model", o.out_model.string()}};
}

FitBaselineOptions fit_baseline_from_config(const nlohmann::json& c) {
  FitBaselineOptions o;
  o.refs = c.at("refs").get<std::string>();
  o.order = c.at("order").get<int>();
  o.smoothing_k = c.at("k").get<double>();
  o.out_model = c.at("out_model").get<std::string>();
  return o;
}

}  // namespace

GenPairsStats run_gen_pairs(const GenPairsOptions& opt) {
  manifest::RunManifest m;
  m.command = "gen-pairs";
  m.config = config_of(opt);
  m.seed = opt.seed;
  m.started_at = manifest::now_iso8601_utc();
  m.inputs = {opt.hyps.string()};

  const auto hyps = pairset::read_hypotheses_jsonl(opt.hyps);
  const auto grouped = pairset::group_by_utt(hyps);
  auto utt_pairs = pairset::build_self_pairs(grouped);
  size_t dropped = 0;
  utt_pairs = pairset::drop_inconsistent_grouped(utt_pairs, &dropped);
  const auto [train_side, valid_side] =
      pairset::split_train_valid(utt_pairs, opt.valid_frac, opt.seed);

  const auto train_path = opt.out_dir / "train_pairs.jsonl";
  const auto valid_path = opt.out_dir / "valid_pairs.jsonl";
  pairset::write_pairs_jsonl(train_path, pairset::flatten(train_side));
  pairset::write_pairs_jsonl(valid_path, pairset::flatten(valid_side));

  GenPairsStats st;
  st.n_utts = utt_pairs.size();
  st.n_train_pairs = pairset::count_pairs(train_side);
  st.n_valid_pairs = pairset::count_pairs(valid_side);
  st.n_dropped_inconsistent = dropped;

  m.outputs = {train_path.string(), valid_path.string()};
  finish_manifest(m, opt.out_dir / "gen_pairs.manifest.json");

  std::cout << "utterances with pairs: " << st.n_utts << "\n"
            << "train pairs: " << st.n_train_pairs << "\n"
            << "valid pairs: " << st.n_valid_pairs << "\n"
            << "dropped inconsistent: " << st.n_dropped_inconsistent << "\n";
  return st;
}

TrainStats run_train(const TrainOptions& opt) {
  manifest::RunManifest m;
  m.command = "train";
  m.config = config_of(opt);
  m.seed = opt.seed;
  m.started_at = manifest::now_iso8601_utc();
  m.inputs = {opt.train_pairs.string(), opt.valid_pairs.string()};
  if (opt.sup) m.inputs.push_back(opt.sup->string());
  if (opt.sup_refs) m.inputs.push_back(opt.sup_refs->string());

  if (opt.mode != "self" && opt.mode != "semi") {
    throw std::invalid_argument("train: --mode must be 'self' or 'semi'");
  }
  if (opt.mode == "semi" && !opt.sup) {
    throw std::invalid_argument("train: --mode semi requires --sup");
  }
  if (opt.activation != "tanh" && opt.activation != "relu") {
    throw std::invalid_argument("train: --activation must be 'tanh' or 'relu'");
  }

  const auto train_pairs = pairset::read_pairs_jsonl(opt.train_pairs);
  const auto valid_pairs = pairset::read_pairs_jsonl(opt.valid_pairs);
  std::vector<pairset::Hypothesis> sup;
  if (opt.sup) {
    sup = pairset::read_hypotheses_jsonl(*opt.sup);
    if (opt.sup_refs) fill_ref_wer(sup, *opt.sup_refs);
  }

  training::TrainConfig tc;
  tc.alpha = opt.alpha;
  tc.batch_size = opt.batch;
  tc.learning_rate = opt.lr;
  tc.momentum = opt.momentum;
  tc.max_epochs = opt.epochs;
  tc.patience = opt.patience;
  tc.seed = opt.seed;
  tc.mode = opt.mode == "semi" ? training::TrainMode::Semi : training::TrainMode::SelfOnly;
  tc.w_bal = opt.w_bal;

  ranker::EncoderConfig ec;
  ec.ngram_orders = opt.orders;
  ec.hash_dim = opt.hash_dim;
  ec.embed_dim = opt.embed_dim;
  ec.hidden_dim = opt.hidden_dim;
  ec.dropout = opt.dropout;
  ec.activation =
      opt.activation == "relu" ? ranker::Activation::Relu : ranker::Activation::Tanh;
  ec.seed = opt.seed;

  const auto result = training::train(train_pairs, valid_pairs, sup, tc, ec);

  model_io::save_ranker(opt.out_model, {ec, result.params});
  const std::filesystem::path log_path(opt.out_model.string() + ".log.jsonl");
  {
    jsonl::Writer w(log_path);
    for (const auto& r : result.log) {
      nlohmann::json o{{"epoch", r.epoch},
                       {"loss_self", r.loss_self},
                       {"loss_sup", r.loss_sup ? nlohmann::json(*r.loss_sup)
                                               : nlohmann::json(nullptr)},
                       {"loss_total", r.loss_total},
                       {"valid_loss", r.valid_loss},
                       {"pair_acc", r.pair_acc},
                       {"seconds", r.seconds}};
      w.write(o);
    }
    w.close();
  }

  for (const auto& r : result.log) {
    std::cout << "epoch " << r.epoch << ": train " << r.loss_total << " valid "
              << r.valid_loss << " pair_acc " << r.pair_acc << "\n";
  }
  if (result.diverged) {
    std::cout << "warning: training diverged; model holds the best checkpoint\n";
  }

  TrainStats st;
  st.epochs_run = result.log.size();
  st.best_epoch = result.best_epoch;
  st.diverged = result.diverged;
  if (result.best_epoch >= 1 &&
      static_cast<size_t>(result.best_epoch) <= result.log.size()) {
    const auto& best = result.log[result.best_epoch - 1];
    st.best_valid_loss = best.valid_loss;
    st.best_pair_acc = best.pair_acc;
  }
  std::cout << "best epoch " << st.best_epoch << " valid " << st.best_valid_loss
            << " pair_acc " << st.best_pair_acc << " -> " << opt.out_model.string() << "\n";

  m.outputs = {opt.out_model.string(), log_path.string()};
  finish_manifest(m,
                  std::filesystem::path(opt.out_model.string() + ".manifest.json"));
  return st;
}

ScoreStats run_score(const ScoreOptions& opt) {
  manifest::RunManifest m;
  m.command = "score";
  m.config = config_of(opt);
  m.started_at = manifest::now_iso8601_utc();
  m.inputs = {opt.model.string(), opt.hyps.string()};
  if (opt.refs) m.inputs.push_back(opt.refs->string());

  const auto model = model_io::load_any(opt.model);
  const auto hyps = pairset::read_hypotheses_jsonl(opt.hyps);
  std::map<std::string, std::string> refs;
  if (opt.refs) refs = pairset::read_references_jsonl(*opt.refs);

  evalsuite::Scorer scorer;
  if (std::holds_alternative<model_io::RankerModel>(model)) {
    const auto& rm = std::get<model_io::RankerModel>(model);
    scorer = [&rm](const std::string& text) {
      return ranker::score(text, rm.params, rm.config);
    };
  } else {
    const auto& lm = std::get<baseline::NgramLM>(model);
    scorer = [&lm](const std::string& text) { return baseline::score(lm, text); };
  }

  const auto records =
      evalsuite::score_corpus(hyps, scorer, opt.refs ? &refs : nullptr);
  evalsuite::write_scored_jsonl(opt.out, records);

  ScoreStats st;
  st.n_scored = records.size();
  st.with_wer = opt.refs.has_value();
  std::cout << "scored " << st.n_scored << " hypotheses -> " << opt.out.string() << "\n";

  m.outputs = {opt.out.string()};
  finish_manifest(m, std::filesystem::path(opt.out.string() + ".manifest.json"));
  return st;
}

evalsuite::CorrelationReport run_eval(const EvalOptions& opt) {
  manifest::RunManifest m;
  m.command = "eval";
  m.config = config_of(opt);
  m.started_at = manifest::now_iso8601_utc();
  m.inputs = {opt.scored.string()};

  const auto records = evalsuite::read_scored_jsonl(opt.scored);
  if (records.empty()) {
    throw std::runtime_error("eval: no scored records in '" + opt.scored.string() + "'");
  }
  const auto rep = evalsuite::evaluate(records);

  if (opt.report.has_parent_path()) {
    std::filesystem::create_directories(opt.report.parent_path());
  }
  std::ofstream out(opt.report, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + opt.report.string() + "' for writing");
  }
  out << evalsuite::report_to_json(rep).dump(2) << "\n";
  if (!out.good()) throw std::runtime_error("write failed: " + opt.report.string());
  out.close();

  std::cout << evalsuite::report_table(rep);

  m.outputs = {opt.report.string()};
  finish_manifest(m, std::filesystem::path(opt.report.string() + ".manifest.json"));
  return rep;
}

SynthStats run_synth(const SynthOptions& opt) {
  manifest::RunManifest m;
  m.command = "synth";
  m.config = config_of(opt);
  m.seed = opt.seed;
  m.started_at = manifest::now_iso8601_utc();

  if (opt.levels != static_cast<int>(opt.noise_rates.size())) {
    throw std::invalid_argument(
        "synth: --levels (" + std::to_string(opt.levels) +
        ") must equal the number of --noise-rates (" +
        std::to_string(opt.noise_rates.size()) + ")");
  }
  synth::SynthConfig sc;
  sc.n_utts = opt.n_utts;
  sc.noise_rates = opt.noise_rates;
  sc.seed = opt.seed;
  const auto corpus = synth::generate(sc);

  const auto refs_path = opt.out_dir / "references.jsonl";
  const auto hyps_path = opt.out_dir / "hypotheses.jsonl";
  pairset::write_references_jsonl(refs_path, corpus.references);
  pairset::write_hypotheses_jsonl(hyps_path, corpus.hypotheses);

  SynthStats st;
  st.n_refs = corpus.references.size();
  st.n_hyps = corpus.hypotheses.size();
  std::cout << "generated " << st.n_refs << " references, " << st.n_hyps
            << " hypotheses -> " << opt.out_dir.string() << "\n";

  m.outputs = {refs_path.string(), hyps_path.string()};
  finish_manifest(m, opt.out_dir / "synth.manifest.json");
  return st;
}

FitBaselineStats run_fit_baseline(const FitBaselineOptions& opt) {
  manifest::RunManifest m;
  m.command = "fit-baseline";
  m.config = config_of(opt);
  m.started_at = manifest::now_iso8601_utc();
  m.inputs = {opt.refs.string()};

  const auto refs = pairset::read_references_jsonl(opt.refs);
  std::vector<std::string> corpus;
  corpus.reserve(refs.size());
  for (const auto& [utt, text] : refs) {
    (void)utt;
    corpus.push_back(text);
  }
  const auto lm = baseline::fit(corpus, opt.order, opt.smoothing_k);
  model_io::save_ngram(opt.out_model, lm);

  FitBaselineStats st;
  st.n_texts = corpus.size();
  st.vocab_size = lm.vocab_size();
  st.n_contexts = lm.counts.size();
  std::cout << "fit " << opt.order << "-gram on " << st.n_texts << " texts (vocab "
            << st.vocab_size << ") -> " << opt.out_model.string() << "\n";

  m.outputs = {opt.out_model.string()};
  finish_manifest(m,
                  std::filesystem::path(opt.out_model.string() + ".manifest.json"));
  return st;
}

void run_rerun(const std::filesystem::path& manifest_path) {
  const auto m = manifest::read(manifest_path);
  if (m.command == "gen-pairs") {
    run_gen_pairs(gen_pairs_from_config(m.config));
  } else if (m.command == "train") {
    run_train(train_from_config(m.config));
  } else if (m.command == "score") {
    run_score(score_from_config(m.config));
  } else if (m.command == "eval") {
    run_eval(eval_from_config(m.config));
  } else if (m.command == "synth") {
    run_synth(synth_from_config(m.config));
  } else if (m.command == "fit-baseline") {
    run_fit_baseline(fit_baseline_from_config(m.config));
  } else {
    throw std::runtime_error("rerun: manifest names unknown command '" + m.command + "'");
  }
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"referenceless ASR hypothesis quality estimation", "asrqe"};
  app.require_subcommand(1);

  GenPairsOptions gp;
  std::string gp_hyps, gp_out;
  auto* gp_cmd = app.add_subcommand(
      "gen-pairs", "build ranked training pairs from quality-ordered hypotheses");
  gp_cmd->add_option("--hyps", gp_hyps, "hypotheses JSONL")->required();
  gp_cmd->add_option("--out", gp_out, "output directory")->required();
  gp_cmd->add_option("--valid-frac", gp.valid_frac,
                     "fraction of utterances held out for validation")
      ->capture_default_str();
  gp_cmd->add_option("--seed", gp.seed, "random seed")->capture_default_str();

  TrainOptions tr;
  std::string tr_train, tr_valid, tr_sup, tr_sup_refs, tr_out;
  auto* tr_cmd = app.add_subcommand("train", "train the pairwise ranking model");
  tr_cmd->add_option("--train", tr_train, "training pairs JSONL")->required();
  tr_cmd->add_option("--valid", tr_valid, "validation pairs JSONL")->required();
  auto* tr_sup_opt =
      tr_cmd->add_option("--sup", tr_sup, "supervised hypotheses JSONL (ref_wer)");
  auto* tr_sup_refs_opt = tr_cmd->add_option(
      "--sup-refs", tr_sup_refs, "references JSONL to fill in missing ref_wer");
  tr_cmd->add_option("--mode", tr.mode, "self | semi")
      ->check(CLI::IsMember({"self", "semi"}))
      ->capture_default_str();
  tr_cmd->add_option("--alpha", tr.alpha, "supervised weight in the combined loss")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  tr_cmd->add_option("--batch", tr.batch, "batch size")->capture_default_str();
  tr_cmd->add_option("--lr", tr.lr, "learning rate")->capture_default_str();
  tr_cmd->add_option("--momentum", tr.momentum, "SGD momentum")->capture_default_str();
  tr_cmd->add_option("--epochs", tr.epochs, "maximum epochs")->capture_default_str();
  tr_cmd->add_option("--patience", tr.patience, "early-stopping patience")
      ->capture_default_str();
  tr_cmd->add_option("--w-bal", tr.w_bal, "supervised pair weight")->capture_default_str();
  tr_cmd->add_option("--seed", tr.seed, "random seed")->capture_default_str();
  tr_cmd->add_option("--out-model", tr_out, "output model path")->required();
  tr_cmd->add_option("--hash-dim", tr.hash_dim, "hashed feature space (power of two)")
      ->capture_default_str();
  tr_cmd->add_option("--embed-dim", tr.embed_dim, "encoder embedding width")
      ->capture_default_str();
  tr_cmd->add_option("--hidden-dim", tr.hidden_dim, "head hidden width")
      ->capture_default_str();
  tr_cmd->add_option("--dropout", tr.dropout, "dropout between head layers")
      ->capture_default_str();
  tr_cmd->add_option("--orders", tr.orders, "character n-gram orders")
      ->capture_default_str();
  tr_cmd->add_option("--activation", tr.activation, "tanh | relu")
      ->check(CLI::IsMember({"tanh", "relu"}))
      ->capture_default_str();

  ScoreOptions sc;
  std::string sc_model, sc_hyps, sc_refs, sc_out;
  auto* sc_cmd = app.add_subcommand("score", "score hypotheses with a trained model");
  sc_cmd->add_option("--model", sc_model, "model file")->required();
  sc_cmd->add_option("--hyps", sc_hyps, "hypotheses JSONL")->required();
  auto* sc_refs_opt =
      sc_cmd->add_option("--refs", sc_refs, "references JSONL (adds a wer column)");
  sc_cmd->add_option("--out", sc_out, "scored output JSONL")->required();

  EvalOptions ev;
  std::string ev_scored, ev_report;
  auto* ev_cmd =
      app.add_subcommand("eval", "correlate scores against WER ranks and values");
  ev_cmd->add_option("--scored", ev_scored, "scored JSONL with wer")->required();
  ev_cmd->add_option("--report", ev_report, "report JSON output path")->required();

  SynthOptions sy;
  std::string sy_out;
  auto* sy_cmd = app.add_subcommand(
      "synth", "generate a synthetic quality-ladder benchmark corpus");
  sy_cmd->add_option("--out-dir", sy_out, "output directory")->required();
  sy_cmd->add_option("--n-utts", sy.n_utts, "number of utterances")->capture_default_str();
  sy_cmd->add_option("--levels", sy.levels, "number of quality levels")
      ->capture_default_str();
  sy_cmd->add_option("--noise-rates", sy.noise_rates,
                     "corruption rate per level, strictly increasing")
      ->capture_default_str();
  sy_cmd->add_option("--seed", sy.seed, "random seed")->capture_default_str();

  FitBaselineOptions fb;
  std::string fb_refs, fb_out;
  auto* fb_cmd = app.add_subcommand(
      "fit-baseline", "fit the character n-gram perplexity baseline");
  fb_cmd->add_option("--refs", fb_refs, "references JSONL training corpus")->required();
  fb_cmd->add_option("--order", fb.order, "n-gram order")->capture_default_str();
  fb_cmd->add_option("--k", fb.smoothing_k, "additive smoothing constant")
      ->capture_default_str();
  fb_cmd->add_option("--out-model", fb_out, "output model path")->required();

  std::string rr_manifest;
  auto* rr_cmd = app.add_subcommand("rerun", "replay a command from its manifest");
  rr_cmd->add_option("--manifest", rr_manifest, "manifest JSON of a previous run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "asrqe: error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (gp_cmd->parsed()) {
      gp.hyps = gp_hyps;
      gp.out_dir = gp_out;
      run_gen_pairs(gp);
    } else if (tr_cmd->parsed()) {
      tr.train_pairs = tr_train;
      tr.valid_pairs = tr_valid;
      if (tr_sup_opt->count()) tr.sup = std::filesystem::path(tr_sup);
      if (tr_sup_refs_opt->count()) tr.sup_refs = std::filesystem::path(tr_sup_refs);
      tr.out_model = tr_out;
      run_train(tr);
    } else if (sc_cmd->parsed()) {
      sc.model = sc_model;
      sc.hyps = sc_hyps;
      if (sc_refs_opt->count()) sc.refs = std::filesystem::path(sc_refs);
      sc.out = sc_out;
      run_score(sc);
    } else if (ev_cmd->parsed()) {
      ev.scored = ev_scored;
      ev.report = ev_report;
      run_eval(ev);
    } else if (sy_cmd->parsed()) {
      sy.out_dir = sy_out;
      run_synth(sy);
    } else if (fb_cmd->parsed()) {
      fb.refs = fb_refs;
      fb.out_model = fb_out;
      run_fit_baseline(fb);
    } else if (rr_cmd->parsed()) {
      run_rerun(std::filesystem::path(rr_manifest));
    }
  } catch (const std::exception& e) {
    std::cerr << "asrqe: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace asrqe::cli

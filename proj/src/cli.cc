// src/cli.cc

// Copyright 2026  The noresqa authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "noresqa/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "noresqa/checkpoint.h"
#include "noresqa/degrade.h"
#include "noresqa/eval.h"
#include "noresqa/score.h"
#include "noresqa/synth.h"
#include "noresqa/train.h"

namespace noresqa {

namespace {

nlohmann::json LoadJsonFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::kInvalidConfig, "bad JSON in " + path);
  return j;
}

int DoIngest(const std::string &dir, const std::string &role,
             const std::string &out) {
  ManifestEntry::Role r = RoleFromName(role);
  std::vector<std::string> paths;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string p = entry.path().string();
    if (p.size() >= 4 && p.substr(p.size() - 4) == ".wav") paths.push_back(p);
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty())
    throw Error(ErrorCode::kEmptyManifest, "no wav files under " + dir);
  std::vector<ManifestEntry> entries;
  for (const auto &p : paths) {
    Waveform w = LoadWav(p);
    entries.push_back({p, r, w.DurationSeconds()});
  }
  WriteManifest(out, entries);
  std::cout << "wrote " << entries.size() << " entries to " << out << "\n";
  return 0;
}

int DoDegrade(const std::string &config, const std::string &clean,
              const std::string &noise, const std::string &rir, int count,
              uint64_t seed, bool seed_set, const std::string &out) {
  SamplerConfig cfg =
      config.empty() ? SamplerConfig() : SamplerConfigFromJsonFile(config);
  if (seed_set) cfg.seed = seed;
  std::filesystem::create_directories(out);
  PairSampler sampler(ReadManifest(clean),
                      noise.empty() ? std::vector<ManifestEntry>{}
                                    : ReadManifest(noise),
                      rir.empty() ? std::vector<ManifestEntry>{}
                                  : ReadManifest(rir),
                      cfg);
  Rng rng(Rng::Derive(cfg.seed, 0xde64));
  std::ofstream labels(out + "/labels.jsonl", std::ios::trunc);
  if (!labels)
    throw Error(ErrorCode::kIoError, "cannot write labels under " + out);
  for (int i = 0; i < count; ++i) {
    PairSample pair = sampler.Next(&rng);
    char name_i[32], name_j[32];
    std::snprintf(name_i, sizeof(name_i), "pair%05d_i.wav", i);
    std::snprintf(name_j, sizeof(name_j), "pair%05d_j.wav", i);
    SaveWav(out + "/" + name_i, pair.x_i);
    SaveWav(out + "/" + name_j, pair.x_j);
    nlohmann::json line;
    line["pair"] = i;
    line["x_i"] = name_i;
    line["x_j"] = name_j;
    line["category"] =
        pair.category == PairCategory::kAdditive ? "additive" : "manipulation";
    line["kind"] = DegradationKindName(pair.spec_i.kind);
    if (pair.snr_i) line["snr_i"] = *pair.snr_i;
    if (pair.snr_j) line["snr_j"] = *pair.snr_j;
    line["sdr_i"] = pair.sdr_i;
    line["sdr_j"] = pair.sdr_j;
    line["sdr_i_raw"] = pair.sdr_i_raw;
    line["sdr_j_raw"] = pair.sdr_j_raw;
    line["level_i"] = pair.spec_i.level;
    line["level_j"] = pair.spec_j.level;
    if (pair.spec_i.rir_id) line["rir_i"] = *pair.spec_i.rir_id;
    if (pair.spec_j.rir_id) line["rir_j"] = *pair.spec_j.rir_id;
    line["source_i"] = pair.x_i.source_id;
    line["source_j"] = pair.x_j.source_id;
    labels << line.dump() << "\n";
  }
  std::cout << "wrote " << count << " pairs to " << out << "\n";
  return 0;
}

int DoTrain(const std::string &config, const std::string &out,
            const std::string &resume, uint64_t seed, bool seed_set) {
  nlohmann::json j = LoadJsonFile(config);
  ModelConfig model_cfg = j.contains("model")
                              ? ModelConfigFromJson(j["model"])
                              : ModelConfig::Full();
  TrainConfig train_cfg = j.contains("train")
                              ? TrainConfigFromJson(j["train"])
                              : TrainConfig();
  SamplerConfig sampler_cfg;
  if (j.contains("sampler")) {
    const auto &s = j["sampler"];
    sampler_cfg.excerpt_s = s.value("excerpt_s", sampler_cfg.excerpt_s);
    sampler_cfg.reverb_prob = s.value("reverb_prob", sampler_cfg.reverb_prob);
    sampler_cfg.seed = s.value("seed", sampler_cfg.seed);
    if (s.contains("kind_weights")) {
      sampler_cfg.kind_weights.clear();
      for (auto &[k, v] : s["kind_weights"].items())
        sampler_cfg.kind_weights[k] = v.get<double>();
    }
  }
  if (seed_set) {
    train_cfg.seed = seed;
    sampler_cfg.seed = seed;
  }
  const auto &m = j.at("manifests");
  PairSampler sampler(
      ReadManifest(m.at("clean").get<std::string>()),
      m.contains("noise") ? ReadManifest(m["noise"].get<std::string>())
                          : std::vector<ManifestEntry>{},
      m.contains("rir") ? ReadManifest(m["rir"].get<std::string>())
                        : std::vector<ManifestEntry>{},
      sampler_cfg);

  std::filesystem::create_directories(out);
  {
    // The run directory always carries the exact merged config.
    nlohmann::json merged;
    merged["model"] = ModelConfigToJson(model_cfg);
    merged["train"] = TrainConfigToJson(train_cfg);
    merged["sampler"] = {{"excerpt_s", sampler_cfg.excerpt_s},
                         {"reverb_prob", sampler_cfg.reverb_prob},
                         {"seed", sampler_cfg.seed},
                         {"kind_weights", sampler_cfg.kind_weights}};
    merged["manifests"] = j["manifests"];
    std::ofstream cfg_out(out + "/config.json", std::ios::trunc);
    cfg_out << merged.dump(2) << "\n";
  }
  StftConfig stft_cfg;
  std::string final_ckpt = Fit(sampler, model_cfg, train_cfg, stft_cfg, out,
                               resume);
  std::cout << "final checkpoint: " << final_ckpt << "\n";
  return 0;
}

int DoScore(const std::string &test, const std::vector<std::string> &refs,
            const std::string &ckpt_path) {
  Checkpoint ckpt = LoadCheckpoint(ckpt_path);
  Waveform t = LoadCanonical(test);
  std::vector<Waveform> r;
  for (const auto &p : refs) r.push_back(LoadCanonical(p));
  NmrScore score = NoresqaAvg(t, r, ckpt.config, ckpt.params);
  nlohmann::json out;
  out["test_path"] = test;
  out["ref_paths"] = refs;
  out["magnitude_db"] = score.aggregate.magnitude_db;
  out["sign"] = score.aggregate.sign == NoresqaScore::Sign::kTestBetter
                    ? "test_better"
                    : "ref_better";
  out["pref_confidence"] = score.aggregate.pref_confidence;
  nlohmann::json per = nlohmann::json::array();
  for (size_t i = 0; i < score.per_ref.size(); ++i) {
    const auto &s = score.per_ref[i];
    per.push_back({{"ref", refs[i]},
                   {"magnitude_db", s.magnitude_db},
                   {"sign", s.sign == NoresqaScore::Sign::kTestBetter
                                ? "test_better"
                                : "ref_better"},
                   {"pref_confidence", s.pref_confidence}});
  }
  out["per_ref"] = per;
  std::cout << out.dump() << "\n";
  return 0;
}

int DoEvaluate(const std::string &suite, const std::string &ckpt_path,
               const std::string &clean, const std::string &noise,
               const std::string &out_path, const std::string &workdir,
               uint64_t seed) {
  Checkpoint ckpt = LoadCheckpoint(ckpt_path);
  std::vector<ManifestEntry> clean_entries, noise_entries;
  if (!clean.empty() && !noise.empty()) {
    clean_entries = ReadManifest(clean);
    noise_entries = ReadManifest(noise);
  } else {
    SynthCorpusConfig scfg;
    scfg.seed = seed;
    SynthCorpus corpus = BuildSynthCorpus(workdir + "/synth_corpus", scfg);
    clean_entries = corpus.clean;
    noise_entries = corpus.noise;
  }

  nlohmann::json report;
  if (suite == "properties") {
    report = PropertySuite(ckpt.config, ckpt.params, clean_entries,
                           noise_entries, seed);
  } else if (suite == "retrieval") {
    // 10 discrete quality levels, nearest-neighbor retrieval on quality
    // embeddings.
    Rng rng(Rng::Derive(seed, 0x9e7));
    const int levels = 10, per_level = 20, k = 10;
    std::vector<std::vector<double>> embeddings;
    std::vector<int> tags;
    for (int l = 0; l < levels; ++l) {
      const double snr = -12.0 + 4.0 * l;
      for (int i = 0; i < per_level; ++i) {
        const auto &ce = clean_entries[rng.Integer(clean_entries.size())];
        const auto &ne = noise_entries[rng.Integer(noise_entries.size())];
        Waveform c = LoadCanonical(ce.path);
        Waveform n = LoadCanonical(ne.path);
        c.samples.resize(
            std::min(c.samples.size(), (size_t)(3 * c.sample_rate)));
        Waveform x = AddNoiseAtSnr(c, n, snr);
        embeddings.push_back(QualityEmbedding(x, ckpt.config, ckpt.params));
        tags.push_back(l);
      }
    }
    const double p = PrecisionAtK(embeddings, tags, k);
    report["precision_at_k"] = p;
    report["k"] = k;
    report["levels"] = levels;
    report["per_level"] = per_level;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown suite " + suite);
  }
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + out_path);
    f << text;
  }
  return 0;
}

int DoEmbed(const std::string &ckpt_path, const std::vector<std::string> &wavs,
            const std::string &out_path) {
  Checkpoint ckpt = LoadCheckpoint(ckpt_path);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + out_path);
  for (const auto &p : wavs) {
    Waveform w = LoadCanonical(p);
    std::vector<double> e = QualityEmbedding(w, ckpt.config, ckpt.params);
    out << p;
    char buf[32];
    for (double v : e) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out << buf;
    }
    out << "\n";
  }
  std::cout << "wrote " << wavs.size() << " embeddings to " << out_path << "\n";
  return 0;
}

}  // namespace

int RunCommand(const std::vector<std::string> &args) {
  CLI::App app{"non-matching-reference speech quality assessment"};
  app.require_subcommand(1);
  bool json_errors = false;
  uint64_t seed = 0;
  bool seed_set = false;
  app.add_flag("--json", json_errors, "machine-readable errors on stderr");
  app.add_option("--seed", seed, "seed for all randomness")
      ->each([&](const std::string &) { seed_set = true; });

  auto *ingest = app.add_subcommand("ingest", "build a manifest from wavs");
  std::string ingest_dir, ingest_role = "clean", ingest_out;
  ingest->add_option("--dir", ingest_dir, "directory of wav files")->required();
  ingest->add_option("--role", ingest_role, "clean|noise|rir");
  ingest->add_option("--out", ingest_out, "manifest path")->required();

  auto *degrade = app.add_subcommand("degrade", "synthesize labeled pairs");
  std::string deg_config, deg_clean, deg_noise, deg_rir, deg_out;
  int deg_count = 100;
  degrade->add_option("--config", deg_config, "sampler config JSON");
  degrade->add_option("--clean", deg_clean, "clean manifest")->required();
  degrade->add_option("--noise", deg_noise, "noise manifest");
  degrade->add_option("--rir", deg_rir, "rir manifest");
  degrade->add_option("--count", deg_count, "number of pairs");
  degrade->add_option("--out", deg_out, "output directory")->required();

  auto *train = app.add_subcommand("train", "train a model");
  std::string train_config, train_out, train_resume;
  train->add_option("--config", train_config, "run config JSON")->required();
  train->add_option("--out", train_out, "run directory")->required();
  train->add_option("--resume", train_resume, "checkpoint to resume from");

  auto *score = app.add_subcommand("score", "score a test file against NMRs");
  std::string score_test, score_ckpt;
  std::vector<std::string> score_refs;
  score->add_option("--test", score_test, "test wav")->required();
  score->add_option("--refs", score_refs, "reference wavs")->required();
  score->add_option("--ckpt", score_ckpt, "model checkpoint")->required();

  auto *evaluate = app.add_subcommand("evaluate", "run an evaluation suite");
  std::string eval_suite = "properties", eval_ckpt, eval_clean, eval_noise,
              eval_out, eval_workdir = "noresqa_eval_work";
  evaluate->add_option("--suite", eval_suite, "properties|retrieval");
  evaluate->add_option("--ckpt", eval_ckpt, "model checkpoint")->required();
  evaluate->add_option("--clean", eval_clean, "clean manifest (else synthetic)");
  evaluate->add_option("--noise", eval_noise, "noise manifest (else synthetic)");
  evaluate->add_option("--out", eval_out, "report JSON path");
  evaluate->add_option("--workdir", eval_workdir, "scratch directory");

  auto *embed = app.add_subcommand("embed", "dump quality embeddings as CSV");
  std::string embed_ckpt, embed_out;
  std::vector<std::string> embed_inputs;
  embed->add_option("--ckpt", embed_ckpt, "model checkpoint")->required();
  embed->add_option("--out", embed_out, "CSV path")->required();
  embed->add_option("inputs", embed_inputs, "wav files")->required();

  std::vector<std::string> argv(args);
  try {
    // CLI11 parses argv in reverse order.
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << "\n";
    if (json_errors)
      std::cerr << nlohmann::json({{"error", "UsageError"},
                                   {"message", e.what()}})
                       .dump()
                << "\n";
    return 1;
  }

  try {
    if (*ingest) return DoIngest(ingest_dir, ingest_role, ingest_out);
    if (*degrade)
      return DoDegrade(deg_config, deg_clean, deg_noise, deg_rir, deg_count,
                       seed, seed_set, deg_out);
    if (*train)
      return DoTrain(train_config, train_out, train_resume, seed, seed_set);
    if (*score) return DoScore(score_test, score_refs, score_ckpt);
    if (*evaluate)
      return DoEvaluate(eval_suite, eval_ckpt, eval_clean, eval_noise,
                        eval_out, eval_workdir, seed);
    if (*embed) return DoEmbed(embed_ckpt, embed_inputs, embed_out);
    return 1;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    if (json_errors)
      std::cerr << nlohmann::json({{"error", ErrorCodeName(e.code())},
                                   {"message", e.what()}})
                       .dump()
                << "\n";
    return IsValidationError(e.code()) ? 1 : 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    if (json_errors)
      std::cerr << nlohmann::json({{"error", "RuntimeError"},
                                   {"message", e.what()}})
                       .dump()
                << "\n";
    return 2;
  }
}

}  // namespace noresqa

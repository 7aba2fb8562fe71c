// Copyright 2026 The Sincere Authors.
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

// Command-line front end.
//
// Sample usage:
//   sincere score gold.json pred.json
//   sincere score gold.json pred.json --all-settings --format json
//   sincere stats train.json dev.json test.json --manifest data/manifests/conll04.json
//   sincere check pred.json
//   sincere compare data/claims/published_results.json
//   sincere perturb gold.json --out pred.json --p-ent-type-swap 0.1 --seed 7
//   sincere sweep gold.json grid.json
//   sincere fingerprint gold.json pred.json --value 62.8 --setting Strict
//
// Exit status: 0 success, 1 findings (violations, mismatches, discrepancies,
// non-comparable claims), 2 usage, I/O or schema errors.

#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sincere/sincere.hpp"

namespace {

using sincere::Corpus;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kHardError = 2;

enum class Format { kTable, kJson, kTsv };

struct GlobalOptions {
  Format format = Format::kTable;
  std::optional<std::uint64_t> seed;
};

void PrintJson(const json &j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string gold_path;
  std::string pred_path;
  std::string criterion = "Strict";
  std::string average = "micro";
  std::vector<std::string> exclude_entity_types;
  std::vector<std::string> exclude_relation_types;
  std::vector<std::string> symmetric_types;
  bool all_settings = false;
  bool allow_misaligned = false;
};

sincere::ScoreConfig BuildConfig(const ScoreArgs &a) {
  sincere::ScoreConfig config;
  config.criterion.kind = *sincere::ParseCriterion(a.criterion);
  config.average = *sincere::ParseAverage(a.average);
  config.excluded_entity_types = {a.exclude_entity_types.begin(),
                                  a.exclude_entity_types.end()};
  config.excluded_relation_types = {a.exclude_relation_types.begin(),
                                    a.exclude_relation_types.end()};
  config.symmetric_types = {a.symmetric_types.begin(), a.symmetric_types.end()};
  config.allow_misaligned = a.allow_misaligned;
  return config;
}

json AlignmentToJson(const sincere::AlignmentReport &r) {
  json mismatches = json::array();
  for (const sincere::Mismatch &m : r.mismatches) {
    mismatches.push_back(
        {{"doc_key", m.doc_key},
         {"sentence", m.sentence ? json(*m.sentence) : json(nullptr)},
         {"kind", sincere::MismatchKindName(m.kind)},
         {"reason", m.reason}});
  }
  return {{"matched", r.matched}, {"mismatches", mismatches}};
}

int ReportAlignment(const sincere::AlignmentReport &r, Format format) {
  if (format == Format::kJson) {
    PrintJson({{"alignment", AlignmentToJson(r)}});
  } else {
    std::cout << "alignment failed: " << r.matched << " sentences matched, "
              << r.mismatches.size() << " mismatches\n";
    for (const sincere::Mismatch &m : r.mismatches) {
      std::cout << "  " << m.ToString() << "\n";
    }
  }
  return kFindings;
}

int RunScore(const ScoreArgs &a, const GlobalOptions &g) {
  Corpus gold = sincere::ReadCanonicalFile(a.gold_path);
  Corpus pred = sincere::ReadCanonicalFile(a.pred_path);
  sincere::ScoreConfig config = BuildConfig(a);
  if (!config.allow_misaligned) {
    sincere::AlignmentReport alignment = sincere::Align(gold, pred);
    if (!alignment.ok()) return ReportAlignment(alignment, g.format);
  }
  if (a.all_settings) {
    auto reports = sincere::ScoreAllSettings(gold, pred, config);
    if (g.format == Format::kJson) {
      json j = json::object();
      for (const auto &[kind, r] : reports) j[sincere::CriterionName(kind)] = r;
      PrintJson(j);
    } else {
      bool first = true;
      for (const auto &[kind, r] : reports) {
        if (!first) std::cout << "\n";
        first = false;
        std::cout << sincere::FormatReportTable(r);
      }
    }
  } else {
    sincere::EvalReport r = sincere::Score(gold, pred, config);
    if (g.format == Format::kJson) {
      PrintJson(r);
    } else {
      std::cout << sincere::FormatReportTable(r);
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::vector<std::string> paths;
  std::string manifest_path;
};

int RunStats(const StatsArgs &a, const GlobalOptions &g) {
  std::vector<Corpus> corpora;
  for (const std::string &p : a.paths) {
    corpora.push_back(sincere::ReadCanonicalFile(p));
  }
  sincere::StatsReport report = sincere::ComputeStats(corpora);
  std::optional<sincere::ReferenceManifest> manifest;
  if (!a.manifest_path.empty()) {
    manifest = sincere::ReadManifestFile(a.manifest_path);
  }
  std::vector<sincere::Discrepancy> discrepancies;
  if (manifest) discrepancies = sincere::CheckIntegrity(report, *manifest);
  sincere::TruncationFinding truncation = sincere::DetectTruncation(
      report, manifest ? std::optional<bool>(manifest->all_relational)
                       : std::nullopt);

  switch (g.format) {
    case Format::kJson: {
      json j = {{"stats", report},
                {"mapping", sincere::AnalyzeMapping(report.cooccurrence)},
                {"truncation", truncation}};
      if (manifest) {
        j["manifest_source"] = manifest->source;
        j["discrepancies"] = discrepancies;
      }
      PrintJson(j);
      break;
    }
    case Format::kTsv:
      std::cout << sincere::FormatHistogramsTsv(report);
      break;
    case Format::kTable:
      std::cout << sincere::FormatStatsTable(report);
      if (manifest) {
        std::cout << "manifest: " << manifest->source << "\n";
        if (discrepancies.empty()) std::cout << "integrity: OK\n";
        for (const sincere::Discrepancy &d : discrepancies) {
          std::cout << "discrepancy: " << d.ToString() << "\n";
        }
      }
      if (truncation.suspicious) {
        std::cout << "truncation suspected: " << truncation.reason << "\n";
      }
      break;
  }
  // TSV output carries only histograms; findings still drive the exit code.
  for (const sincere::Discrepancy &d : discrepancies) {
    if (g.format == Format::kTsv) std::cerr << "discrepancy: " << d.ToString() << "\n";
  }
  return (discrepancies.empty() && !truncation.suspicious) ? kOk : kFindings;
}

// ---------------------------------------------------------------------------

int RunCheck(const std::vector<std::string> &paths, const GlobalOptions &g) {
  json out = json::array();
  std::size_t total = 0;
  for (const std::string &p : paths) {
    Corpus c = sincere::ParseCanonicalUnchecked(sincere::SlurpFile(p));
    std::vector<sincere::Violation> v = sincere::ValidateCorpus(c);
    total += v.size();
    if (g.format == Format::kJson) {
      json list = json::array();
      for (const sincere::Violation &x : v) {
        list.push_back({{"kind", sincere::ViolationKindName(x.kind)},
                        {"location", x.location},
                        {"detail", x.detail}});
      }
      out.push_back({{"path", p}, {"violations", list}});
    } else {
      std::cout << p << ": " << (v.empty() ? "OK" : std::to_string(v.size()) +
                                                        " violations")
                << "\n";
      for (const sincere::Violation &x : v) {
        std::cout << "  " << x.ToString() << "\n";
      }
    }
  }
  if (g.format == Format::kJson) PrintJson(out);
  return total == 0 ? kOk : kFindings;
}

// ---------------------------------------------------------------------------

bool Underspecified(const sincere::ResultClaim &c) {
  return !c.claimed_setting || !c.claimed_average;
}

int RunCompare(const std::string &path, const GlobalOptions &g) {
  std::vector<sincere::ResultClaim> claims = sincere::ReadClaimsFile(path);
  bool findings = false;
  json pairs = json::array();
  json underspecified = json::array();
  for (const sincere::ResultClaim &c : claims) {
    if (Underspecified(c)) {
      findings = true;
      underspecified.push_back(c.label);
    }
  }
  // Only claims on the same dataset and task are candidates for comparison.
  for (std::size_t i = 0; i < claims.size(); ++i) {
    for (std::size_t j = i + 1; j < claims.size(); ++j) {
      const auto &a = claims[i];
      const auto &b = claims[j];
      if (a.dataset != b.dataset || a.task != b.task) continue;
      sincere::ComparisonVerdict v = sincere::CompareClaims(a, b);
      if (!v.comparable) findings = true;
      pairs.push_back({{"a", a.label},
                       {"b", b.label},
                       {"dataset", a.dataset},
                       {"task", sincere::TaskName(a.task)},
                       {"comparable", v.comparable},
                       {"reasons", v.reasons}});
    }
  }
  if (g.format == Format::kJson) {
    PrintJson({{"pairs", pairs}, {"insufficiently_specified", underspecified}});
  } else {
    for (const auto &label : underspecified) {
      std::cout << label.get<std::string>()
                << ": insufficiently_specified\n";
    }
    char line[512];
    for (const auto &p : pairs) {
      std::string reasons;
      for (const auto &r : p["reasons"]) {
        if (!reasons.empty()) reasons += ", ";
        reasons += r.get<std::string>();
      }
      std::snprintf(line, sizeof(line), "%-8s %-4s %-28s %-28s %-14s %s\n",
                    p["dataset"].get<std::string>().c_str(),
                    p["task"].get<std::string>().c_str(),
                    p["a"].get<std::string>().c_str(),
                    p["b"].get<std::string>().c_str(),
                    p["comparable"].get<bool>() ? "comparable" : "NOT comparable",
                    reasons.c_str());
      std::cout << line;
    }
  }
  return findings ? kFindings : kOk;
}

// ---------------------------------------------------------------------------

struct PerturbArgs {
  std::string gold_path;
  std::string out_path;
  std::string profile_path;
  std::optional<double> p_ent_type_swap, p_ent_boundary_shift, p_ent_drop,
      p_ent_spurious, p_rel_type_swap, p_rel_drop, p_rel_spurious;
  std::optional<std::size_t> max_spurious_len;
  bool mapping_consistent = false;
};

sincere::PerturbationProfile BuildProfile(const PerturbArgs &a,
                                          const GlobalOptions &g) {
  sincere::PerturbationProfile p;
  if (!a.profile_path.empty()) {
    p = sincere::ParseProfile(sincere::SlurpFile(a.profile_path));
  }
  if (a.p_ent_type_swap) p.p_ent_type_swap = *a.p_ent_type_swap;
  if (a.p_ent_boundary_shift) p.p_ent_boundary_shift = *a.p_ent_boundary_shift;
  if (a.p_ent_drop) p.p_ent_drop = *a.p_ent_drop;
  if (a.p_ent_spurious) p.p_ent_spurious = *a.p_ent_spurious;
  if (a.p_rel_type_swap) p.p_rel_type_swap = *a.p_rel_type_swap;
  if (a.p_rel_drop) p.p_rel_drop = *a.p_rel_drop;
  if (a.p_rel_spurious) p.p_rel_spurious = *a.p_rel_spurious;
  if (a.max_spurious_len) p.max_spurious_len = *a.max_spurious_len;
  if (a.mapping_consistent) p.mapping_consistent_swaps = true;
  if (g.seed) p.seed = *g.seed;
  p.Validate();
  return p;
}

int RunPerturb(const PerturbArgs &a, const GlobalOptions &g) {
  Corpus gold = sincere::ReadCanonicalFile(a.gold_path);
  sincere::PerturbationProfile profile = BuildProfile(a, g);
  Corpus pred = sincere::Perturb(gold, profile);
  sincere::WriteCanonicalFile(pred, a.out_path);
  if (g.format == Format::kJson) {
    PrintJson({{"out", a.out_path}, {"profile", profile}});
  } else {
    std::cerr << "wrote " << pred.SentenceCount() << " sentences to "
              << a.out_path << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string gold_path;
  std::string grid_path;
  std::optional<std::size_t> replicates;
  ScoreArgs score;
};

std::string Fmt(double v, const char *spec = "%.4f") {
  char buf[32];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

int RunSweep(const SweepArgs &a, const GlobalOptions &g) {
  Corpus gold = sincere::ReadCanonicalFile(a.gold_path);
  sincere::SweepGrid grid = sincere::ParseSweepGrid(sincere::SlurpFile(a.grid_path));
  if (a.replicates) grid.replicates = *a.replicates;
  if (g.seed) {
    for (auto &p : grid.profiles) p.seed = *g.seed;
  }
  std::vector<sincere::SweepRow> rows = sincere::Sweep(
      gold, grid.profiles, BuildConfig(a.score), grid.replicates);
  bool failed = false;
  for (const auto &r : rows) failed |= r.error.has_value();

  if (g.format == Format::kJson) {
    json out = json::array();
    for (const auto &r : rows) {
      json row = {{"profile", r.profile}, {"replicates", r.replicates}};
      row["gap"] = r.gap ? json(*r.gap) : json(nullptr);
      row["error"] = r.error ? json(*r.error) : json(nullptr);
      out.push_back(row);
    }
    PrintJson(out);
  } else {
    char line[512];
    std::snprintf(line, sizeof(line),
                  "%-6s %8s %8s %8s %8s %8s %8s %8s %10s %10s %8s %9s\n", "seed",
                  "ent_swap", "ent_shft", "ent_drop", "ent_spur", "rel_swap",
                  "rel_drop", "rel_spur", "strict_F1", "bound_F1", "gap",
                  "relative");
    std::cout << line;
    for (const auto &r : rows) {
      const auto &p = r.profile;
      std::snprintf(line, sizeof(line),
                    "%-6llu %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f ",
                    static_cast<unsigned long long>(p.seed), p.p_ent_type_swap,
                    p.p_ent_boundary_shift, p.p_ent_drop, p.p_ent_spurious,
                    p.p_rel_type_swap, p.p_rel_drop, p.p_rel_spurious);
      std::cout << line;
      if (r.gap) {
        std::snprintf(
            line, sizeof(line), "%10s %10s %8s %9s\n",
            sincere::Percent(r.gap->strict_f1).c_str(),
            sincere::Percent(r.gap->boundaries_f1).c_str(),
            sincere::Percent(r.gap->absolute_gap).c_str(),
            r.gap->relative_overestimation
                ? Fmt(*r.gap->relative_overestimation).c_str()
                : "-");
        std::cout << line;
      } else {
        std::cout << "error: " << *r.error << "\n";
      }
    }
  }
  return failed ? kHardError : kOk;
}

// ---------------------------------------------------------------------------

struct FingerprintArgs {
  std::string gold_path;
  std::string pred_path;
  double value = 0.0;
  std::string setting = "unknown";
  std::string average = "micro";
  std::string task = "RE";
  double tolerance = sincere::kDefaultFingerprintTolerance;
  std::vector<std::string> exclude_entity_types;
};

int RunFingerprint(const FingerprintArgs &a, const GlobalOptions &g) {
  Corpus gold = sincere::ReadCanonicalFile(a.gold_path);
  Corpus pred = sincere::ReadCanonicalFile(a.pred_path);
  sincere::AlignmentReport alignment = sincere::Align(gold, pred);
  if (!alignment.ok()) return ReportAlignment(alignment, g.format);
  sincere::ResultClaim claim;
  claim.label = "claim";
  claim.task = *sincere::ParseTask(a.task);
  claim.value = a.value > 1.0 ? a.value / 100.0 : a.value;
  if (a.setting != "unknown") claim.claimed_setting = sincere::ParseCriterion(a.setting);
  if (a.average != "unknown") claim.claimed_average = sincere::ParseAverage(a.average);
  claim.excluded_entity_types = {a.exclude_entity_types.begin(),
                                 a.exclude_entity_types.end()};
  sincere::FingerprintResult r =
      sincere::FingerprintSetting(gold, pred, claim, a.tolerance);
  if (g.format == Format::kJson) {
    PrintJson(r);
  } else {
    for (const auto &[kind, f1] : r.computed) {
      std::printf("%-11s %7s %s\n", sincere::CriterionName(kind),
                  sincere::Percent(f1).c_str(),
                  r.consistent.contains(kind) ? "consistent" : "");
    }
    std::cout << "verdict: " << r.verdict << "\n";
  }
  return (r.mismatch_with_claim || r.verdict == "unmatched") ? kFindings : kOk;
}

// ---------------------------------------------------------------------------

CLI::Validator CriterionValidator() {
  return CLI::Validator(
      [](std::string &s) -> std::string {
        return sincere::ParseCriterion(s) ? "" : "unknown criterion " + s;
      },
      "CRITERION");
}

CLI::Validator AverageValidator() {
  return CLI::IsMember({"micro", "macro"}, CLI::ignore_case);
}

void AddScoreConfigOptions(CLI::App *cmd, ScoreArgs &a) {
  cmd->add_option("--criterion", a.criterion,
                  "Strict, Boundaries, Relaxed or LastToken")
      ->check(CriterionValidator());
  cmd->add_option("--average", a.average, "micro or macro")
      ->check(AverageValidator());
  cmd->add_option("--exclude-entity-type", a.exclude_entity_types,
                  "Entity type left out of scoring (repeatable)");
  cmd->add_option("--exclude-relation-type", a.exclude_relation_types,
                  "Relation type left out of scoring (repeatable)");
  cmd->add_option("--symmetric-type", a.symmetric_types,
                  "Relation type scored without direction (repeatable)");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Evaluation and audit toolkit for end-to-end relation extraction"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::string format = "table";
  app.add_option("--format", format, "Output format: table, json or tsv")
      ->check(CLI::IsMember({"table", "json", "tsv"}));
  std::uint64_t seed = 0;
  CLI::Option *seed_opt =
      app.add_option("--seed", seed, "Random seed for perturb and sweep");

  ScoreArgs score_args;
  CLI::App *score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("gold", score_args.gold_path)->required()->check(CLI::ExistingFile);
  score->add_option("pred", score_args.pred_path)->required()->check(CLI::ExistingFile);
  AddScoreConfigOptions(score, score_args);
  score->add_flag("--all-settings", score_args.all_settings,
                  "Report all four criteria");
  score->add_flag("--allow-misaligned", score_args.allow_misaligned,
                  "Score even if sentences do not align");

  StatsArgs stats_args;
  CLI::App *stats = app.add_subcommand("stats", "Dataset statistics");
  stats->add_option("corpus", stats_args.paths, "One file per split")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--manifest", stats_args.manifest_path,
                    "Reference manifest to check against")
      ->check(CLI::ExistingFile);

  std::vector<std::string> check_paths;
  CLI::App *check = app.add_subcommand("check", "Validate canonical files");
  check->add_option("corpus", check_paths)->required()->check(CLI::ExistingFile);

  std::string claims_path;
  CLI::App *compare = app.add_subcommand("compare", "Audit published claims");
  compare->add_option("claims", claims_path)->required()->check(CLI::ExistingFile);

  PerturbArgs perturb_args;
  CLI::App *perturb =
      app.add_subcommand("perturb", "Generate a synthetic prediction file");
  perturb->add_option("gold", perturb_args.gold_path)->required()->check(CLI::ExistingFile);
  perturb->add_option("--out", perturb_args.out_path)->required();
  perturb->add_option("--profile", perturb_args.profile_path)->check(CLI::ExistingFile);
  const CLI::Range unit(0.0, 1.0);
  perturb->add_option("--p-ent-type-swap", perturb_args.p_ent_type_swap)->check(unit);
  perturb->add_option("--p-ent-boundary-shift", perturb_args.p_ent_boundary_shift)->check(unit);
  perturb->add_option("--p-ent-drop", perturb_args.p_ent_drop)->check(unit);
  perturb->add_option("--p-ent-spurious", perturb_args.p_ent_spurious)->check(unit);
  perturb->add_option("--p-rel-type-swap", perturb_args.p_rel_type_swap)->check(unit);
  perturb->add_option("--p-rel-drop", perturb_args.p_rel_drop)->check(unit);
  perturb->add_option("--p-rel-spurious", perturb_args.p_rel_spurious)->check(unit);
  perturb->add_option("--max-spurious-len", perturb_args.max_spurious_len)
      ->check(CLI::PositiveNumber);
  perturb->add_flag("--mapping-consistent", perturb_args.mapping_consistent,
                    "Relabel relations whose argument types were swapped");

  SweepArgs sweep_args;
  CLI::App *sweep = app.add_subcommand("sweep", "Strict/Boundaries gap over a profile grid");
  sweep->add_option("gold", sweep_args.gold_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("grid", sweep_args.grid_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--replicates", sweep_args.replicates, "Seeds averaged per row")
      ->check(CLI::PositiveNumber);
  AddScoreConfigOptions(sweep, sweep_args.score);

  FingerprintArgs fp_args;
  CLI::App *fingerprint = app.add_subcommand(
      "fingerprint", "Find the criteria that reproduce a reported score");
  fingerprint->add_option("gold", fp_args.gold_path)->required()->check(CLI::ExistingFile);
  fingerprint->add_option("pred", fp_args.pred_path)->required()->check(CLI::ExistingFile);
  fingerprint->add_option("--value", fp_args.value, "Reported F1 (fraction or percent)")
      ->required()
      ->check(CLI::Range(0.0, 100.0));
  fingerprint->add_option("--setting", fp_args.setting, "Claimed criterion or unknown")
      ->check(CLI::Validator(
          [](std::string &s) -> std::string {
            return s == "unknown" || sincere::ParseCriterion(s)
                       ? ""
                       : "unknown criterion " + s;
          },
          "CRITERION"));
  fingerprint->add_option("--average", fp_args.average)
      ->check(CLI::IsMember({"micro", "macro", "unknown"}, CLI::ignore_case));
  fingerprint->add_option("--task", fp_args.task)
      ->check(CLI::IsMember({"NER", "RE"}, CLI::ignore_case));
  fingerprint->add_option("--tolerance", fp_args.tolerance)->check(CLI::NonNegativeNumber);
  fingerprint->add_option("--exclude-entity-type", fp_args.exclude_entity_types);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kHardError;
  }

  global.format = format == "json"  ? Format::kJson
                  : format == "tsv" ? Format::kTsv
                                    : Format::kTable;
  if (seed_opt->count() > 0) global.seed = seed;

  try {
    if (*score) return RunScore(score_args, global);
    if (*stats) return RunStats(stats_args, global);
    if (*check) return RunCheck(check_paths, global);
    if (*compare) return RunCompare(claims_path, global);
    if (*perturb) return RunPerturb(perturb_args, global);
    if (*sweep) return RunSweep(sweep_args, global);
    if (*fingerprint) return RunFingerprint(fp_args, global);
  } catch (const sincere::AlignmentError &e) {
    return ReportAlignment(e.report(), global.format);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kHardError;
  }
  return kHardError;
}

// cuest: corpus analytics for curiosity-driven question datasets.
// Subcommands: linguistic | topics | constructs | annotation.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cuest/alignment.hpp"
#include "cuest/annotation.hpp"
#include "cuest/constructs.hpp"
#include "cuest/corpus.hpp"
#include "cuest/errors.hpp"
#include "cuest/lexicons.hpp"
#include "cuest/metrics.hpp"
#include "cuest/preference.hpp"
#include "cuest/semantics.hpp"
#include "cuest/text.hpp"
#include "cuest/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRemote = 3;

struct Options {
  std::vector<std::string> corpus;
  std::string lexicons;
  std::string out;
  std::string embedder = "builtin";
  std::string judge = "heuristic";
  std::string remote_url;
  std::string on_remote_error = "fail";
  std::string normalize = "unit";
  std::string rankings;
  std::string categories;
  std::string mapping;
  std::string expectations;
  std::string regions;
  std::string annotations;
  std::string tie_policy = "positive";
  std::string hypothesis = "This question has a single short factual answer.";
  double theta = 0.05;
  int remote_timeout = 30;
  int remote_parallel = 4;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------- output --

double j6(double x) { return cuest::round6(x); }

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) cuest::raise(cuest::errc::usage, "cannot write " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row.push_back(',');
    row += cuest::csv_escape(fields[i]);
  }
  row.push_back('\n');
  return row;
}

std::string tsv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row.push_back('\t');
    row += fields[i];
  }
  row.push_back('\n');
  return row;
}

std::string f6(double x) { return cuest::format6(x); }

std::string opt6(const std::optional<double>& x) { return x ? f6(*x) : std::string(); }

// -------------------------------------------------------------- run meta --

std::string file_hash(const fs::path& path) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(cuest::fnv1a64(cuest::read_file(path.string()))));
  return buf;
}

json hashed_input(const fs::path& path) {
  return json{{"file", path.filename().string()}, {"hash", file_hash(path)}};
}

json rankings_meta(const fs::path& dir) {
  json entries = json::array();
  std::vector<fs::path> files;
  for (const auto& model_dir : fs::directory_iterator(dir)) {
    if (!model_dir.is_directory()) continue;
    for (const auto& file : fs::directory_iterator(model_dir.path())) {
      if (file.path().extension() == ".json") files.push_back(file.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    entries.push_back(json{{"model", file.parent_path().filename().string()},
                           {"file", file.filename().string()},
                           {"hash", file_hash(file)}});
  }
  return entries;
}

json lexicon_dir_meta(const fs::path& dir) {
  json entries = json::array();
  for (const char* name : {"ambiguous.txt", "transitions.txt", "stopwords.txt", "whwords.txt",
                           "metaphor_markers.txt", "pos_dict.tsv", "synonyms.tsv"}) {
    if (fs::exists(dir / name)) entries.push_back(hashed_input(dir / name));
  }
  return entries;
}

void write_run_meta(const Options& opt, const std::string& command, json config) {
  config["command"] = command;
  config["seed"] = opt.seed;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(cuest::fnv1a64(config.dump())));
  json meta{
      {"tool", "cuest"},
      {"version", cuest::kVersion},
      {"config", config},
      {"config_hash", hash},
      {"rules",
       {{"devices", cuest::kDeviceRulesVersion},
        {"judge_patterns", cuest::kJudgePatternsVersion},
        {"embedder", cuest::kEmbedderVersion},
        {"verdict", cuest::kVerdictRuleVersion}}},
  };
  write_json(fs::path(opt.out) / "run_meta.json", meta);
}

// ----------------------------------------------------------------- loads --

// Config-class resources: a problem here is a usage error, not a data error.
template <typename Fn>
auto load_config_file(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const cuest::error& e) {
    cuest::raise(cuest::errc::usage, e.what());
  }
}

void print_load_warnings(const cuest::LoadReport& report) {
  for (const auto& message : report.messages) std::cerr << "cuest: skipped record: " << message << "\n";
}

std::vector<cuest::QuestionSet> load_corpora(const std::vector<std::string>& paths,
                                             const cuest::RegionMap& regions, cuest::LoadReport* report) {
  if (paths.empty()) cuest::raise(cuest::errc::usage, "at least one --corpus file is required");
  std::vector<cuest::QuestionSet> merged;
  std::map<cuest::GroupKey, std::size_t> index;
  for (const auto& path : paths) {
    auto sets = cuest::load_corpus(path, cuest::infer_corpus_format(path), cuest::TopicCatalog::standard(),
                                   regions, report);
    for (auto& set : sets) {
      auto it = index.find(set.key);
      if (it == index.end()) {
        index.emplace(set.key, merged.size());
        merged.push_back(std::move(set));
      } else {
        auto& target = merged[it->second].questions;
        target.insert(target.end(), std::make_move_iterator(set.questions.begin()),
                      std::make_move_iterator(set.questions.end()));
      }
    }
  }
  return merged;
}

cuest::RegionMap load_regions(const Options& opt) {
  if (opt.regions.empty()) return cuest::RegionMap::standard();
  return load_config_file([&] { return cuest::RegionMap::load(opt.regions); });
}

cuest::RemoteConfig remote_config(const Options& opt) {
  cuest::RemoteConfig config;
  config.base_url = opt.remote_url;
  config.timeout_seconds = opt.remote_timeout;
  config.max_parallel = opt.remote_parallel;
  config.hypothesis = opt.hypothesis;
  if (config.base_url.empty()) {
    if (const char* env = std::getenv("CUEST_REMOTE_URL")) config.base_url = env;
  }
  if ((opt.embedder == "remote" || opt.judge == "remote") && config.base_url.empty()) {
    cuest::raise(cuest::errc::usage, "remote backend selected but neither --remote-url nor CUEST_REMOTE_URL is set");
  }
  return config;
}

json corpus_config(const Options& opt) {
  json files = json::array();
  for (const auto& path : opt.corpus) files.push_back(hashed_input(path));
  return files;
}

json regions_config(const Options& opt) {
  return opt.regions.empty() ? json("builtin") : json(hashed_input(opt.regions));
}

// ------------------------------------------------------------ linguistic --

int cmd_linguistic(const Options& opt) {
  auto regions = load_regions(opt);
  if (opt.lexicons.empty()) cuest::raise(cuest::errc::usage, "--lexicons is required");
  cuest::LexiconReport lexicon_report;
  auto bundle = cuest::load_bundle(opt.lexicons, &lexicon_report);
  for (const auto& warning : lexicon_report.warnings) std::cerr << "cuest: lexicon: " << warning << "\n";

  cuest::LoadReport load_report;
  auto sets = load_corpora(opt.corpus, regions, &load_report);
  print_load_warnings(load_report);

  auto remote = remote_config(opt);
  auto embedder = cuest::make_embedder(opt.embedder, remote);
  auto judge = cuest::make_judge(opt.judge, remote);

  cuest::ProfileOptions profile_options;
  profile_options.on_remote_error = opt.on_remote_error == "skip" ? cuest::RemoteErrorPolicy::Skip
                                                                  : cuest::RemoteErrorPolicy::Fail;

  std::map<cuest::GroupKey, cuest::ProfileResult> results;
  for (const auto& set : sets) {
    results[set.key] = cuest::profile_set(set, bundle, *embedder, *judge, profile_options);
  }

  // Per-question audit dump.
  std::string questions_csv =
      csv_row({"country", "source", "id", "L", "R", "Q", "A", "P", "M", "omega", "Lx", "Tx", "Sx", "COH"});
  for (const auto& [key, result] : results) {
    for (const auto& row : result.questions) {
      const auto& d = row.devices;
      questions_csv += csv_row({key.country, key.source, row.id,
                                row.ambiguity ? f6(*row.ambiguity) : "",
                                d.repetition ? "1" : "0", d.rhetorical_question ? "1" : "0",
                                d.alliteration ? "1" : "0", d.parallelism ? "1" : "0", d.metaphor ? "1" : "0",
                                row.open_ended ? (*row.open_ended ? "1" : "0") : "",
                                row.cohesion ? f6(row.cohesion->lexical) : "",
                                row.cohesion ? f6(row.cohesion->transition) : "",
                                row.cohesion ? f6(row.cohesion->semantic) : "",
                                row.cohesion ? f6(row.cohesion->value) : ""});
    }
  }
  write_file(fs::path(opt.out) / "questions.csv", questions_csv);

  // Per-set profiles.
  std::map<cuest::GroupKey, cuest::LinguisticProfile> profiles;
  std::string profiles_csv =
      csv_row({"country", "source", "n", "skipped", "ambiguity", "rhetorical_devices", "open_endedness", "cohesion"});
  for (const auto& [key, result] : results) {
    profiles[key] = result.profile;
    const auto& p = result.profile;
    profiles_csv += csv_row({key.country, key.source, std::to_string(p.n), std::to_string(p.skipped),
                             f6(p.ambiguity), f6(p.rhetorical_devices), f6(p.open_endedness), f6(p.cohesion)});
  }
  write_file(fs::path(opt.out) / "profiles.csv", profiles_csv);

  // Profile values per metric, raw and unit-range (heatmap-style layout).
  std::string by_metric = tsv_row({"metric", "country", "source", "value_raw", "value_unit"});
  for (const auto& [key, p] : profiles) {
    auto raw = cuest::linguistic_vector(p);
    auto unit = cuest::normalize_linguistic(raw);
    for (std::size_t i = 0; i < raw.metrics.size(); ++i) {
      by_metric += tsv_row({raw.metrics[i], key.country, key.source, f6(raw.values[i]), f6(unit.values[i])});
    }
  }
  write_file(fs::path(opt.out) / "profiles_by_metric.tsv", by_metric);

  auto report = cuest::build_alignment_report(profiles, "human", opt.normalize != "raw");

  std::string alignment_csv = csv_row({"model", "country", "mae_raw", "l2_raw", "mae_unit", "l2_unit"});
  std::string country_mae = tsv_row({"country", "model", "mae_raw", "mae_unit"});
  std::map<std::string, std::map<std::string, double>> mae_by_model;  // for region rollup
  std::map<std::string, std::map<std::string, double>> l2_by_model;
  for (const auto& cell : report.cells) {
    alignment_csv += csv_row(
        {cell.model, cell.country, f6(cell.mae_raw), f6(cell.l2_raw), f6(cell.mae_unit), f6(cell.l2_unit)});
    country_mae += tsv_row({cell.country, cell.model, f6(cell.mae_raw), f6(cell.mae_unit)});
    bool unit = opt.normalize != "raw";
    mae_by_model[cell.model][cell.country] = unit ? cell.mae_unit : cell.mae_raw;
    l2_by_model[cell.model][cell.country] = unit ? cell.l2_unit : cell.l2_raw;
  }
  write_file(fs::path(opt.out) / "alignment.csv", alignment_csv);
  write_file(fs::path(opt.out) / "country_mae.tsv", country_mae);

  std::string ranking_csv = csv_row({"rank", "model", "mean_mae_unit", "mean_mae_raw"});
  for (const auto& ranked : report.model_ranking) {
    ranking_csv += csv_row({std::to_string(ranked.rank), ranked.model,
                            f6(report.model_mean_mae_unit.at(ranked.model)),
                            f6(report.model_mean_mae_raw.at(ranked.model))});
  }
  write_file(fs::path(opt.out) / "model_ranking.csv", ranking_csv);

  auto rollup = cuest::region_rollup(mae_by_model, regions);
  std::string region_mae = tsv_row({"model", "region", "mean_mae"});
  for (const auto& [model, by_region] : rollup) {
    for (const auto& [region, value] : by_region) region_mae += tsv_row({model, region, f6(value)});
  }
  write_file(fs::path(opt.out) / "region_mae.tsv", region_mae);

  std::string distances = tsv_row({"model", "mean_l2"});
  for (const auto& [model, by_country] : l2_by_model) {
    double sum = 0.0;
    for (const auto& [country, value] : by_country) sum += value;
    distances += tsv_row({model, f6(sum / static_cast<double>(by_country.size()))});
  }
  write_file(fs::path(opt.out) / "model_distances.tsv", distances);

  json report_json{
      {"normalization", opt.normalize},
      {"countries", report.countries},
      {"load",
       {{"total_records", load_report.total_records},
        {"valid_records", load_report.valid_records},
        {"malformed", load_report.malformed},
        {"unknown_topic", load_report.unknown_topic},
        {"unknown_country", load_report.unknown_country}}},
      {"model_ranking", json::array()},
      {"dispersion",
       {{"human_sd", j6(report.human_dispersion.sd)},
        {"pooled_model_sd", j6(report.pooled_model_sd)},
        {"pooled_f_ratio", j6(report.pooled_f_ratio)}}},
  };
  for (const auto& ranked : report.model_ranking) {
    report_json["model_ranking"].push_back({{"rank", ranked.rank},
                                            {"model", ranked.model},
                                            {"mean_mae", j6(ranked.distance)}});
  }
  json per_model = json::object();
  for (const auto& [model, dispersion] : report.model_dispersion) {
    json entry{{"sd", j6(dispersion.sd)}};
    if (report.f_ratio.count(model)) entry["f_ratio"] = j6(report.f_ratio.at(model));
    per_model[model] = entry;
  }
  report_json["dispersion"]["models"] = per_model;
  write_json(fs::path(opt.out) / "report.json", report_json);

  write_run_meta(opt, "linguistic",
                 json{{"corpus", corpus_config(opt)},
                      {"regions", regions_config(opt)},
                      {"lexicons", lexicon_dir_meta(opt.lexicons)},
                      {"embedder", opt.embedder},
                      {"judge", opt.judge},
                      {"hypothesis", opt.hypothesis},
                      {"on_remote_error", opt.on_remote_error},
                      {"normalize", opt.normalize}});
  return 0;
}

// ---------------------------------------------------------------- topics --

int cmd_topics(const Options& opt) {
  auto regions = load_regions(opt);
  cuest::LoadReport load_report;
  auto sets = load_corpora(opt.corpus, regions, &load_report);
  print_load_warnings(load_report);

  // Human rankings from per-country topic frequencies.
  std::map<std::string, std::vector<cuest::QuestionSet>> human_by_country;
  for (const auto& set : sets) {
    if (set.key.source == "human") human_by_country[set.key.country].push_back(set);
  }
  if (human_by_country.empty()) cuest::raise(cuest::errc::empty_corpus, "corpus has no human-source records");

  std::map<std::string, cuest::TopicRanking> humans;
  std::map<std::string, std::map<std::string, long>> frequencies;
  for (const auto& [country, country_sets] : human_by_country) {
    auto freqs = cuest::topic_frequencies(country_sets);
    humans[country] = cuest::ranking_from_frequencies(freqs, "human");
    frequencies[country] = std::move(freqs);
  }

  // Model rankings: <rankings>/<model>/<country>.json, models alphabetical.
  if (opt.rankings.empty()) cuest::raise(cuest::errc::usage, "--rankings is required");
  if (!fs::is_directory(opt.rankings)) {
    cuest::raise(cuest::errc::missing_resource, "rankings directory not found: " + opt.rankings);
  }
  std::vector<std::pair<std::string, std::map<std::string, cuest::TopicRanking>>> models;
  std::vector<fs::path> model_dirs;
  for (const auto& entry : fs::directory_iterator(opt.rankings)) {
    if (entry.is_directory()) model_dirs.push_back(entry.path());
  }
  std::sort(model_dirs.begin(), model_dirs.end());
  for (const auto& dir : model_dirs) {
    std::map<std::string, cuest::TopicRanking> by_country;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      by_country[file.stem().string()] = cuest::parse_ranking_file(file, dir.filename().string());
    }
    models.emplace_back(dir.filename().string(), std::move(by_country));
  }
  if (models.empty()) cuest::raise(cuest::errc::missing_resource, "no model ranking directories found");

  auto table = cuest::correlation_table(humans, models);

  std::string corr_csv = csv_row({"model", "country", "spearman", "kendall"});
  std::string country_corr = tsv_row({"country", "model", "spearman", "kendall"});
  for (const auto& cell : table.cells) {
    corr_csv += csv_row({cell.model, cell.country, opt6(cell.spearman), opt6(cell.kendall)});
    country_corr += tsv_row({cell.country, cell.model, opt6(cell.spearman), opt6(cell.kendall)});
  }
  write_file(fs::path(opt.out) / "correlations.csv", corr_csv);
  write_file(fs::path(opt.out) / "country_corr.tsv", country_corr);

  json corr_json{{"country_weighting", "unweighted"}, {"cells", json::array()}, {"means", json::array()}};
  for (const auto& cell : table.cells) {
    corr_json["cells"].push_back({{"model", cell.model},
                                  {"country", cell.country},
                                  {"spearman", cell.spearman ? json(j6(*cell.spearman)) : json()},
                                  {"kendall", cell.kendall ? json(j6(*cell.kendall)) : json()}});
  }
  for (const auto& mean : table.means) {
    corr_json["means"].push_back({{"model", mean.model},
                                  {"countries", mean.countries},
                                  {"spearman", mean.spearman ? json(j6(*mean.spearman)) : json()},
                                  {"kendall", mean.kendall ? json(j6(*mean.kendall)) : json()}});
  }
  write_json(fs::path(opt.out) / "correlations.json", corr_json);

  // Mean rank per topic per source, averaged over countries.
  std::string heatmap = tsv_row({"topic", "source", "mean_rank"});
  const auto& catalog = cuest::TopicCatalog::standard();
  auto mean_rank = [&](const std::string& topic,
                       const std::map<std::string, cuest::TopicRanking>& by_country) {
    double sum = 0.0;
    for (const auto& [country, ranking] : by_country) sum += ranking.ranks.at(topic);
    return sum / static_cast<double>(by_country.size());
  };
  for (const auto& topic : catalog.topics()) {
    heatmap += tsv_row({topic, "human", f6(mean_rank(topic, humans))});
    for (const auto& [model, by_country] : models) {
      heatmap += tsv_row({topic, model, f6(mean_rank(topic, by_country))});
    }
  }
  write_file(fs::path(opt.out) / "rank_heatmap.tsv", heatmap);

  // Human frequencies, for auditing the ranking derivation.
  std::string freq_csv = csv_row({"country", "topic", "count"});
  for (const auto& [country, freqs] : frequencies) {
    for (const auto& topic : catalog.topics()) {
      freq_csv += csv_row({country, topic, std::to_string(freqs.at(topic))});
    }
  }
  write_file(fs::path(opt.out) / "frequencies.csv", freq_csv);

  write_run_meta(opt, "topics",
                 json{{"corpus", corpus_config(opt)},
                      {"regions", regions_config(opt)},
                      {"rankings", rankings_meta(opt.rankings)}});
  return 0;
}

// ------------------------------------------------------------ constructs --

int cmd_constructs(const Options& opt) {
  auto regions = load_regions(opt);
  if (opt.categories.empty()) cuest::raise(cuest::errc::usage, "--categories is required");
  if (opt.mapping.empty()) cuest::raise(cuest::errc::usage, "--mapping is required");
  if (opt.expectations.empty()) cuest::raise(cuest::errc::usage, "--expectations is required");

  auto lexicon = load_config_file([&] { return cuest::load_category_lexicon(opt.categories); });
  auto mapping = load_config_file([&] { return cuest::load_construct_mapping(opt.mapping); });
  auto expectations = load_config_file([&] { return cuest::load_expectations(opt.expectations); });

  cuest::LoadReport load_report;
  auto sets = load_corpora(opt.corpus, regions, &load_report);
  print_load_warnings(load_report);
  auto table = cuest::group_construct_table(sets, lexicon, mapping);

  std::vector<std::string> dimensions;
  for (const auto& [dimension, weights] : mapping) dimensions.push_back(dimension);

  std::vector<std::string> header{"country", "source"};
  header.insert(header.end(), dimensions.begin(), dimensions.end());
  std::string table_csv = csv_row(header);
  for (const auto& [key, scores] : table) {
    std::vector<std::string> row{key.country, key.source};
    for (const auto& dimension : dimensions) row.push_back(f6(scores.values.at(dimension)));
    table_csv += csv_row(row);
  }
  write_file(fs::path(opt.out) / "construct_table.csv", table_csv);

  // Verdict matrix: expectation rows x sources.
  std::set<std::string> sources;
  for (const auto& [key, scores] : table) sources.insert(key.source);

  json verdicts{{"theta", j6(opt.theta)}, {"rule", cuest::kVerdictRuleVersion}, {"rows", json::array()}};
  for (const auto& spec : expectations) {
    json row{{"dimension", spec.dimension}, {"label", spec.label}, {"verdicts", json::object()}};
    for (const auto& source : sources) {
      std::map<std::string, double> scores_by_country;
      for (const auto& [key, scores] : table) {
        if (key.source == source && scores.values.count(spec.dimension)) {
          scores_by_country[key.country] = scores.values.at(spec.dimension);
        }
      }
      if (scores_by_country.empty()) {
        cuest::raise(cuest::errc::unknown_category,
                     "expectation dimension '" + spec.dimension + "' is not in the mapping");
      }
      auto verdict = cuest::classify_expectation(scores_by_country, spec, regions, opt.theta);
      row["verdicts"][source] = {{"verdict", std::string(cuest::to_string(verdict.verdict))},
                                 {"higher_mean", j6(verdict.higher_mean)},
                                 {"lower_mean", j6(verdict.lower_mean)},
                                 {"dominance_fraction", j6(verdict.dominance_fraction)},
                                 {"relative_margin", j6(verdict.relative_margin)},
                                 {"higher_countries", verdict.higher_countries},
                                 {"lower_countries", verdict.lower_countries}};
    }
    verdicts["rows"].push_back(std::move(row));
  }
  write_json(fs::path(opt.out) / "verdicts.json", verdicts);

  // Region-wise construct MAE per model (min-max normalized across the run).
  std::map<cuest::GroupKey, cuest::MetricVector> vectors;
  for (const auto& [key, scores] : table) {
    cuest::MetricVector v;
    v.metrics = dimensions;
    for (const auto& dimension : dimensions) v.values.push_back(scores.values.at(dimension));
    vectors[key] = std::move(v);
  }
  auto unit_vectors = cuest::normalize_minmax(vectors);

  std::map<std::string, std::map<std::string, double>> mae_by_model;
  for (const auto& [key, vector] : unit_vectors) {
    if (key.source == "human") continue;
    cuest::GroupKey human_key{key.country, "human"};
    if (!unit_vectors.count(human_key)) continue;
    mae_by_model[key.source][key.country] = cuest::mean_abs_diff(unit_vectors.at(human_key), vector);
  }
  std::string mae_csv = csv_row({"model", "country", "mae_unit"});
  for (const auto& [model, by_country] : mae_by_model) {
    for (const auto& [country, value] : by_country) mae_csv += csv_row({model, country, f6(value)});
  }
  write_file(fs::path(opt.out) / "construct_mae.csv", mae_csv);

  if (!mae_by_model.empty()) {
    auto rollup = cuest::region_rollup(mae_by_model, regions);
    std::string region_mae = tsv_row({"model", "region", "mean_mae"});
    for (const auto& [model, by_region] : rollup) {
      for (const auto& [region, value] : by_region) region_mae += tsv_row({model, region, f6(value)});
    }
    write_file(fs::path(opt.out) / "region_construct_mae.tsv", region_mae);
  }

  write_run_meta(opt, "constructs",
                 json{{"corpus", corpus_config(opt)},
                      {"regions", regions_config(opt)},
                      {"categories", hashed_input(opt.categories)},
                      {"mapping", hashed_input(opt.mapping)},
                      {"expectations", hashed_input(opt.expectations)},
                      {"theta", j6(opt.theta)}});
  return 0;
}

// ------------------------------------------------------------ annotation --

int cmd_annotation(const Options& opt) {
  if (opt.annotations.empty()) cuest::raise(cuest::errc::usage, "--annotations is required");
  auto records = cuest::load_annotations(opt.annotations);
  if (records.empty()) cuest::raise(cuest::errc::empty_records, opt.annotations + ": no annotation rows");

  cuest::TiePolicy tie = opt.tie_policy == "negative" ? cuest::TiePolicy::Negative : cuest::TiePolicy::Positive;

  std::map<std::string, std::vector<cuest::AnnotationRecord>> by_model;
  for (const auto& r : records) by_model[r.model_id].push_back(r);

  std::string rates_csv = csv_row({"model", "responses", "curiosity_rate", "relevance_rate"});
  json models = json::object();
  for (const auto& [model, model_records] : by_model) {
    std::set<std::pair<std::string, int>> responses;
    for (const auto& r : model_records) responses.insert({r.statement_id, r.response_index});
    double curiosity = cuest::curiosity_rate(model_records, tie);
    double relevance = cuest::relevance_rate(model_records, tie);
    rates_csv += csv_row({model, std::to_string(responses.size()), f6(curiosity), f6(relevance)});
    models[model] = {{"responses", responses.size()},
                     {"curiosity_rate", j6(curiosity)},
                     {"relevance_rate", j6(relevance)}};
  }
  write_file(fs::path(opt.out) / "rates.csv", rates_csv);

  json report{{"tie_policy", opt.tie_policy},
              {"records", records.size()},
              {"models", models},
              {"percent_agreement",
               {{"has_question", j6(cuest::percent_agreement(records, cuest::AnnotationField::HasQuestion))},
                {"relevant", j6(cuest::percent_agreement(records, cuest::AnnotationField::Relevant))}}}};
  write_json(fs::path(opt.out) / "annotation_report.json", report);

  write_run_meta(opt, "annotation",
                 json{{"annotations", hashed_input(opt.annotations)}, {"tie_policy", opt.tie_policy}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuest: question-corpus curiosity analytics"};
  app.set_version_flag("--version", cuest::kVersion);
  app.require_subcommand(1);

  Options opt;
  auto add_shared = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", opt.corpus, "Corpus file (JSONL or CSV); repeatable");
    cmd->add_option("--lexicons", opt.lexicons, "Directory with word-list resources");
    cmd->add_option("--out", opt.out, "Output directory")->required();
    cmd->add_option("--embedder", opt.embedder, "builtin|remote")->check(CLI::IsMember({"builtin", "remote"}));
    cmd->add_option("--judge", opt.judge, "heuristic|remote")->check(CLI::IsMember({"heuristic", "remote"}));
    cmd->add_option("--remote-url", opt.remote_url, "Base URL of the embed/nli service");
    cmd->add_option("--on-remote-error", opt.on_remote_error, "fail|skip")
        ->check(CLI::IsMember({"fail", "skip"}));
    cmd->add_option("--normalize", opt.normalize, "raw|unit")->check(CLI::IsMember({"raw", "unit"}));
    cmd->add_option("--theta", opt.theta, "Relative margin for expectation verdicts");
    cmd->add_option("--tie-policy", opt.tie_policy, "positive|negative")
        ->check(CLI::IsMember({"positive", "negative"}));
    cmd->add_option("--seed", opt.seed, "Seed recorded in run metadata");
    cmd->add_option("--hypothesis", opt.hypothesis, "NLI hypothesis sent to the remote judge");
    cmd->add_option("--remote-timeout", opt.remote_timeout, "Per-request timeout, seconds");
    cmd->add_option("--remote-parallel", opt.remote_parallel, "Max concurrent remote requests");
    cmd->add_option("--regions", opt.regions, "Region map JSON (defaults to the built-in 18-country map)");
  };

  auto* linguistic = app.add_subcommand("linguistic", "Linguistic profiles and human-model alignment");
  add_shared(linguistic);
  auto* topics = app.add_subcommand("topics", "Topic-preference rankings and correlations");
  add_shared(topics);
  topics->add_option("--rankings", opt.rankings, "Directory of <model>/<country>.json ranking files");
  auto* constructs = app.add_subcommand("constructs", "Construct scores and expectation verdicts");
  add_shared(constructs);
  constructs->add_option("--categories", opt.categories, "Category lexicon (.dic or .json)");
  constructs->add_option("--mapping", opt.mapping, "Construct mapping JSON");
  constructs->add_option("--expectations", opt.expectations, "Expectation specs JSON");
  auto* annotation = app.add_subcommand("annotation", "Annotation rates and agreement");
  add_shared(annotation);
  annotation->add_option("--annotations", opt.annotations, "Annotation CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(linguistic)) return cmd_linguistic(opt);
    if (app.got_subcommand(topics)) return cmd_topics(opt);
    if (app.got_subcommand(constructs)) return cmd_constructs(opt);
    if (app.got_subcommand(annotation)) return cmd_annotation(opt);
  } catch (const cuest::error& e) {
    std::cerr << "cuest: " << e.what() << "\n";
    if (e.code() == cuest::errc::usage) return kExitUsage;
    if (e.code() == cuest::errc::remote_unavailable) return kExitRemote;
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "cuest: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

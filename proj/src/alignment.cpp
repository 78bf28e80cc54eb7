#include "cuest/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cuest/errors.hpp"

namespace cuest {

MetricVector linguistic_vector(const LinguisticProfile& profile) {
  MetricVector v;
  v.metrics.assign(kLinguisticMetrics.begin(), kLinguisticMetrics.end());
  v.values = {profile.ambiguity, profile.rhetorical_devices, profile.open_endedness, profile.cohesion};
  v.norm = MetricVector::Norm::Raw;
  return v;
}

MetricVector normalize_linguistic(const MetricVector& raw) {
  static const std::map<std::string, double> maxima = {
      {"ambiguity", 2.0}, {"rhetorical_devices", 5.0}, {"open_endedness", 1.0}, {"cohesion", 1.0}};
  MetricVector unit = raw;
  unit.norm = MetricVector::Norm::UnitRange;
  for (std::size_t i = 0; i < unit.metrics.size(); ++i) {
    auto it = maxima.find(unit.metrics[i]);
    if (it == maxima.end()) raise(errc::list_mismatch, "no theoretical max for metric " + unit.metrics[i]);
    unit.values[i] = unit.values[i] / it->second;
  }
  return unit;
}

template <typename Key>
std::map<Key, MetricVector> normalize_minmax(const std::map<Key, MetricVector>& raw) {
  std::map<Key, MetricVector> out = raw;
  if (raw.empty()) return out;
  const auto& metrics = raw.begin()->second.metrics;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    double lo = raw.begin()->second.values[i];
    double hi = lo;
    for (const auto& [key, v] : raw) {
      if (v.metrics != metrics) raise(errc::list_mismatch, "metric lists differ across vectors");
      lo = std::min(lo, v.values[i]);
      hi = std::max(hi, v.values[i]);
    }
    for (auto& [key, v] : out) {
      v.values[i] = hi > lo ? (v.values[i] - lo) / (hi - lo) : 0.0;
      v.norm = MetricVector::Norm::UnitRange;
    }
  }
  return out;
}

template std::map<GroupKey, MetricVector> normalize_minmax(const std::map<GroupKey, MetricVector>&);
template std::map<std::string, MetricVector> normalize_minmax(const std::map<std::string, MetricVector>&);

namespace {

void check_compatible(const MetricVector& a, const MetricVector& b) {
  if (a.metrics != b.metrics || a.values.size() != b.values.size() || a.norm != b.norm) {
    raise(errc::list_mismatch, "metric vectors are not comparable");
  }
}

}  // namespace

double mean_abs_diff(const MetricVector& a, const MetricVector& b) {
  check_compatible(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::abs(a.values[i] - b.values[i]);
  return sum / static_cast<double>(a.values.size());
}

double l2_distance(const MetricVector& a, const MetricVector& b) {
  check_compatible(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double population_sd(const std::vector<double>& values) {
  if (values.empty()) raise(errc::empty_set, "population SD of nothing");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    double d = v - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double variance_ratio(double sd_a, double sd_b) {
  if (sd_a <= 0.0 || sd_b <= 0.0) raise(errc::non_positive_sd, "variance ratio needs positive SDs");
  double ratio = sd_a / sd_b;
  return ratio * ratio;
}

std::vector<RankedModel> rank_models(const std::map<std::string, double>& distances) {
  std::vector<RankedModel> out;
  out.reserve(distances.size());
  for (const auto& [model, distance] : distances) out.push_back(RankedModel{model, distance, 0});
  std::sort(out.begin(), out.end(), [](const RankedModel& a, const RankedModel& b) {
    if (std::abs(a.distance - b.distance) > 1e-9) return a.distance < b.distance;
    return a.model < b.model;  // stable tie order
  });
  // Competition ranking: rank = 1 + number of strictly closer models.
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0 && std::abs(out[i].distance - out[i - 1].distance) <= 1e-9) {
      out[i].rank = out[i - 1].rank;
    } else {
      out[i].rank = static_cast<int>(i) + 1;
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, double>> region_rollup(
    const std::map<std::string, std::map<std::string, double>>& model_country_distance, const RegionMap& regions) {
  std::map<std::string, std::map<std::string, double>> rollup;
  for (const auto& [model, by_country] : model_country_distance) {
    std::map<std::string, double> sums;
    std::map<std::string, long> counts;
    for (const auto& [country, distance] : by_country) {
      std::string region(to_string(regions.region_of(country)));
      sums[region] += distance;
      ++counts[region];
    }
    for (const auto& [region, sum] : sums) {
      rollup[model][region] = sum / static_cast<double>(counts.at(region));
    }
  }
  return rollup;
}

AlignmentReport build_alignment_report(const std::map<GroupKey, LinguisticProfile>& profiles,
                                       const std::string& human_source, bool unit_ranking) {
  AlignmentReport report;

  std::set<std::string> human_countries;
  std::set<std::string> models;
  for (const auto& [key, profile] : profiles) {
    if (key.source == human_source) {
      human_countries.insert(key.country);
    } else {
      models.insert(key.source);
    }
  }
  if (human_countries.empty()) raise(errc::empty_set, "no sets from source '" + human_source + "'");
  if (models.empty()) raise(errc::empty_set, "no model sources to compare against");

  // Shared country list: present for humans and every model.
  for (const auto& country : human_countries) {
    bool everywhere = true;
    for (const auto& model : models) {
      if (!profiles.count(GroupKey{country, model})) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) report.countries.push_back(country);
  }
  if (report.countries.empty()) {
    raise(errc::country_mismatch, "no country is covered by both humans and every model");
  }

  auto unit_vector = [&](const GroupKey& key) {
    return normalize_linguistic(linguistic_vector(profiles.at(key)));
  };
  auto raw_vector = [&](const GroupKey& key) { return linguistic_vector(profiles.at(key)); };

  std::map<std::string, std::map<std::string, double>> mae_unit_by_model;  // model -> country -> MAE
  for (const auto& model : models) {
    double mae_unit_sum = 0.0, mae_raw_sum = 0.0;
    for (const auto& country : report.countries) {
      GroupKey human_key{country, human_source};
      GroupKey model_key{country, model};
      AlignmentCell cell;
      cell.model = model;
      cell.country = country;
      cell.mae_raw = mean_abs_diff(raw_vector(human_key), raw_vector(model_key));
      cell.l2_raw = l2_distance(raw_vector(human_key), raw_vector(model_key));
      cell.mae_unit = mean_abs_diff(unit_vector(human_key), unit_vector(model_key));
      cell.l2_unit = l2_distance(unit_vector(human_key), unit_vector(model_key));
      mae_unit_sum += cell.mae_unit;
      mae_raw_sum += cell.mae_raw;
      mae_unit_by_model[model][country] = cell.mae_unit;
      report.cells.push_back(std::move(cell));
    }
    report.model_mean_mae_unit[model] = mae_unit_sum / static_cast<double>(report.countries.size());
    report.model_mean_mae_raw[model] = mae_raw_sum / static_cast<double>(report.countries.size());
  }

  report.model_ranking = rank_models(unit_ranking ? report.model_mean_mae_unit : report.model_mean_mae_raw);

  // Variance flattening: per group, SD across countries of the mean
  // unit-range metric value.
  auto group_mean = [&](const GroupKey& key) {
    const auto v = unit_vector(key);
    double sum = 0.0;
    for (double x : v.values) sum += x;
    return sum / static_cast<double>(v.values.size());
  };

  for (const auto& country : report.countries) {
    report.human_dispersion.country_means.push_back(group_mean(GroupKey{country, human_source}));
  }
  report.human_dispersion.sd = population_sd(report.human_dispersion.country_means);

  std::vector<double> pooled;
  for (const auto& model : models) {
    GroupDispersion dispersion;
    for (const auto& country : report.countries) {
      double mean = group_mean(GroupKey{country, model});
      dispersion.country_means.push_back(mean);
      pooled.push_back(mean);
    }
    dispersion.sd = population_sd(dispersion.country_means);
    if (report.human_dispersion.sd > 0.0 && dispersion.sd > 0.0) {
      report.f_ratio[model] = variance_ratio(report.human_dispersion.sd, dispersion.sd);
    }
    report.model_dispersion[model] = std::move(dispersion);
  }
  report.pooled_model_sd = population_sd(pooled);
  if (report.human_dispersion.sd > 0.0 && report.pooled_model_sd > 0.0) {
    report.pooled_f_ratio = variance_ratio(report.human_dispersion.sd, report.pooled_model_sd);
  }
  return report;
}

}  // namespace cuest

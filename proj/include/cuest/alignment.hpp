#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cuest/corpus.hpp"
#include "cuest/metrics.hpp"

namespace cuest {

struct MetricVector {
  enum class Norm { Raw, UnitRange };

  std::vector<std::string> metrics;  // names, fixed order
  std::vector<double> values;
  Norm norm = Norm::Raw;
};

inline constexpr std::array<std::string_view, 4> kLinguisticMetrics = {
    "ambiguity", "rhetorical_devices", "open_endedness", "cohesion"};

// Theoretical maxima: 2, 5, 1, 1.
MetricVector linguistic_vector(const LinguisticProfile& profile);
MetricVector normalize_linguistic(const MetricVector& raw);

// Column-wise min-max over a keyed collection (construct scores have no
// theoretical range). Constant columns map to 0.
template <typename Key>
std::map<Key, MetricVector> normalize_minmax(const std::map<Key, MetricVector>& raw);

double mean_abs_diff(const MetricVector& a, const MetricVector& b);  // throws list_mismatch
double l2_distance(const MetricVector& a, const MetricVector& b);

// Population SD, denominator n.
double population_sd(const std::vector<double>& values);

// Squared SD ratio. Throws non_positive_sd.
double variance_ratio(double sd_a, double sd_b);

struct RankedModel {
  std::string model;
  double distance = 0.0;
  int rank = 0;  // competition ranking; distances within 1e-9 share a rank
};

// Ascending by distance, alphabetical within ties.
std::vector<RankedModel> rank_models(const std::map<std::string, double>& distances);

// model -> region name -> unweighted mean over that region's countries.
std::map<std::string, std::map<std::string, double>> region_rollup(
    const std::map<std::string, std::map<std::string, double>>& model_country_distance, const RegionMap& regions);

struct AlignmentCell {
  std::string model;
  std::string country;
  double mae_raw = 0.0;
  double l2_raw = 0.0;
  double mae_unit = 0.0;
  double l2_unit = 0.0;
};

struct GroupDispersion {
  double sd = 0.0;                      // cross-country SD of the mean normalized metric
  std::vector<double> country_means;   // one per country, alphabetical
};

struct AlignmentReport {
  std::vector<AlignmentCell> cells;                      // models then countries, both sorted
  std::map<std::string, double> model_mean_mae_unit;     // cross-country mean, unit-range
  std::map<std::string, double> model_mean_mae_raw;
  std::vector<RankedModel> model_ranking;                // by the chosen normalization's mean MAE
  GroupDispersion human_dispersion;
  std::map<std::string, GroupDispersion> model_dispersion;
  std::map<std::string, double> f_ratio;                 // human vs each model
  double pooled_model_sd = 0.0;                          // all (model, country) means pooled
  double pooled_f_ratio = 0.0;
  std::vector<std::string> countries;                    // shared country list, alphabetical
};

// Compares each model source against the human source country by country.
// `unit_ranking` picks which normalization feeds the mean-MAE ranking.
AlignmentReport build_alignment_report(const std::map<GroupKey, LinguisticProfile>& profiles,
                                       const std::string& human_source = "human", bool unit_ranking = true);

}  // namespace cuest

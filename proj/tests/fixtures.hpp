#ifndef SLICEMINE_TESTS_FIXTURES_HPP_
#define SLICEMINE_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slicemine/dataset.hpp"

namespace fixtures {

/// Uniform [0, 1) from the top 53 bits; identical on every platform.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline slicemine::Dataset load_csv(const std::string& text, slicemine::IngestConfig config = {}) {
  if (config.ground_truth.empty()) config.ground_truth = "label";
  if (config.prediction.empty()) config.prediction = "pred";
  std::istringstream in(text);
  return slicemine::load_table(in, config);
}

/// Binary-classification rows: label is random, prediction flips it when
/// the record is mis-predicted.
inline void append_targets(std::ostringstream& out, bool correct, std::mt19937_64& rng) {
  const int label = unit(rng) < 0.5 ? 0 : 1;
  out << label << ',' << (correct ? label : 1 - label) << '\n';
}

struct PlantedDataset {
  std::string csv;
  std::string categorical_feature = "segment";
  std::string categorical_value = "E";
  std::string numeric_feature = "score";
  double band_low = 0.40;
  double band_high = 0.45;
};

/// 5,000 rows, 6 features, baseline accuracy 0.95. Faults: segment = E on 150
/// rows with accuracy 0.40, and score in [0.40, 0.45] (about 150 rows) with
/// accuracy 0.40.
inline PlantedDataset planted_dataset(std::uint64_t seed = 20240601, int rows = 5000) {
  std::mt19937_64 rng(seed);
  std::vector<int> is_e(static_cast<std::size_t>(rows), 0);
  for (int i = 0; i < 150; ++i) is_e[static_cast<std::size_t>(i)] = 1;
  std::shuffle(is_e.begin(), is_e.end(), rng);

  PlantedDataset d;
  std::ostringstream out;
  out << "segment,score,age,hours,region,flag,label,pred\n";
  const char* others[] = {"A", "B", "C", "D", "F"};
  for (int i = 0; i < rows; ++i) {
    const bool e = is_e[static_cast<std::size_t>(i)] != 0;
    const std::string segment = e ? "E" : others[static_cast<int>(unit(rng) * 5)];
    char score_text[32];
    std::snprintf(score_text, sizeof score_text, "%.6f", unit(rng) * 1.6);
    const double score = std::stod(score_text);
    const int age = 18 + static_cast<int>(unit(rng) * 63);
    const double hours = 20.0 + 40.0 * unit(rng) * unit(rng);
    const int region = 1 + static_cast<int>(unit(rng) * 5);
    const int flag = unit(rng) < 0.3 ? 1 : 0;
    const bool in_band = score >= d.band_low && score <= d.band_high;
    const double accuracy = (e || in_band) ? 0.40 : 0.95;
    const bool correct = unit(rng) < accuracy;
    char hours_text[32];
    std::snprintf(hours_text, sizeof hours_text, "%.2f", hours);
    out << segment << ',' << score_text << ',' << age << ',' << hours_text << ',' << region << ',' << flag << ',';
    append_targets(out, correct, rng);
  }
  d.csv = out.str();
  return d;
}

}  // namespace fixtures

#endif  // SLICEMINE_TESTS_FIXTURES_HPP_

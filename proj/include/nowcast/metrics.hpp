#pragma once

// Competition metric and leaderboard aggregation. IoU is computed over the
// pooled (time, H, W) volume by default; per-slot averaging is available as
// an option.

#include <map>
#include <string>
#include <vector>

#include "nowcast/common.hpp"
#include "nowcast/tensor.hpp"

namespace nowcast::metrics {

struct ScoreRecord {
  std::string submission_name;
  std::string region_id;
  int year = 0;
  double iou = 0.0;
};

struct LeaderboardRow {
  std::string submission_name;
  double total_mean = 0.0;
  std::map<int, double> year_means;
};

// |P ∩ G| / |P ∪ G| over the whole volume; both-empty counts as a perfect
// match (1.0).
double iou(const TensorU8& pred, const TensorU8& gt);

// Mean over the leading (time) axis of per-slot IoU.
double iou_mean_over_slots(const TensorU8& pred, const TensorU8& gt);

// 1 where rate > threshold (strict), else 0.
TensorU8 binarize_rate(const TensorF& rates, double rate_threshold);

// Group scores by submission, average regions within each year, then average
// the year means; rows sorted by total mean descending.
std::vector<LeaderboardRow> leaderboard(const std::vector<ScoreRecord>& scores);

void write_scores_csv(const std::string& path, const std::vector<ScoreRecord>& scores);
std::vector<ScoreRecord> read_scores_csv(const std::string& path);

}  // namespace nowcast::metrics

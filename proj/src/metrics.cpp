#include "nowcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nowcast::metrics {

namespace {

void check_binary(const TensorU8& m, const char* what) {
  const std::uint8_t* d = m.data();
  for (Index i = 0; i < m.size(); ++i)
    data_check(d[i] <= 1, std::string("iou: ") + what + " contains non-binary values");
}

struct Counts {
  Index inter = 0;
  Index uni = 0;
};

Counts count_range(const TensorU8& pred, const TensorU8& gt, Index begin, Index end) {
  Counts c;
  const std::uint8_t* p = pred.data();
  const std::uint8_t* g = gt.data();
  for (Index i = begin; i < end; ++i) {
    c.inter += (p[i] & g[i]);
    c.uni += (p[i] | g[i]);
  }
  return c;
}

}  // namespace

double iou(const TensorU8& pred, const TensorU8& gt) {
  data_check(pred.same_shape(gt), "iou: shape mismatch " + shape_str(pred.shape()) + " vs " +
                                      shape_str(gt.shape()));
  check_binary(pred, "prediction");
  check_binary(gt, "ground truth");
  const Counts c = count_range(pred, gt, 0, pred.size());
  if (c.uni == 0) return 1.0;  // both masks empty: perfect agreement
  return static_cast<double>(c.inter) / static_cast<double>(c.uni);
}

double iou_mean_over_slots(const TensorU8& pred, const TensorU8& gt) {
  data_check(pred.same_shape(gt), "iou: shape mismatch");
  data_check(pred.rank() >= 1 && pred.dim(0) > 0, "iou: no slots");
  check_binary(pred, "prediction");
  check_binary(gt, "ground truth");
  const Index slots = pred.dim(0);
  const Index stride = pred.size() / slots;
  double acc = 0;
  for (Index t = 0; t < slots; ++t) {
    const Counts c = count_range(pred, gt, t * stride, (t + 1) * stride);
    acc += c.uni == 0 ? 1.0 : static_cast<double>(c.inter) / static_cast<double>(c.uni);
  }
  return acc / static_cast<double>(slots);
}

TensorU8 binarize_rate(const TensorF& rates, double rate_threshold) {
  config_check(rate_threshold >= 0.0, "binarize_rate: threshold must be non-negative");
  TensorU8 out(rates.shape());
  const float* r = rates.data();
  std::uint8_t* o = out.data();
  for (Index i = 0; i < rates.size(); ++i) {
    data_check(std::isfinite(static_cast<double>(r[i])) && r[i] >= 0.0f,
               "binarize_rate: rates must be finite and non-negative");
    o[i] = static_cast<double>(r[i]) > rate_threshold ? 1 : 0;
  }
  return out;
}

std::vector<LeaderboardRow> leaderboard(const std::vector<ScoreRecord>& scores) {
  std::set<std::tuple<std::string, std::string, int>> seen;
  for (const auto& s : scores) {
    data_check(s.iou >= 0.0 && s.iou <= 1.0, "leaderboard: iou outside [0,1]");
    const auto key = std::make_tuple(s.submission_name, s.region_id, s.year);
    data_check(seen.insert(key).second, "leaderboard: duplicate (region, year) '" + s.region_id +
                                            "', " + std::to_string(s.year) +
                                            " for submission '" + s.submission_name + "'");
  }
  // submission -> year -> region scores
  std::map<std::string, std::map<int, std::vector<double>>> by_sub;
  for (const auto& s : scores) by_sub[s.submission_name][s.year].push_back(s.iou);

  std::vector<LeaderboardRow> rows;
  for (const auto& [name, years] : by_sub) {
    LeaderboardRow row;
    row.submission_name = name;
    double total = 0;
    for (const auto& [year, vals] : years) {
      double m = 0;
      for (double v : vals) m += v;
      m /= static_cast<double>(vals.size());
      row.year_means[year] = m;
      total += m;
    }
    row.total_mean = total / static_cast<double>(years.size());
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LeaderboardRow& a, const LeaderboardRow& b) {
                     return a.total_mean > b.total_mean;
                   });
  return rows;
}

void write_scores_csv(const std::string& path, const std::vector<ScoreRecord>& scores) {
  std::ofstream out(path);
  data_check(out.good(), "cannot open for writing: " + path);
  out << "submission_name,region_id,year,iou\n";
  out.precision(17);
  for (const auto& s : scores)
    out << s.submission_name << "," << s.region_id << "," << s.year << "," << s.iou << "\n";
}

std::vector<ScoreRecord> read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  data_check(in.good(), "cannot open scores csv: " + path);
  std::string line;
  data_check(static_cast<bool>(std::getline(in, line)), "scores csv: empty file " + path);
  std::vector<ScoreRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    ScoreRecord r;
    std::string year, iou;
    data_check(static_cast<bool>(std::getline(ss, r.submission_name, ',')) &&
                   static_cast<bool>(std::getline(ss, r.region_id, ',')) &&
                   static_cast<bool>(std::getline(ss, year, ',')) &&
                   static_cast<bool>(std::getline(ss, iou, ',')),
               "scores csv: malformed line '" + line + "'");
    r.year = std::stoi(year);
    r.iou = std::stod(iou);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nowcast::metrics

#pragma once

// Competition tensor contract, synthetic event generator, dataset split
// manipulation and climatology statistics.

#include <array>
#include <string>
#include <vector>

#include "nowcast/common.hpp"
#include "nowcast/tensor.hpp"

namespace nowcast::data {

// Geometry of one (input, target) pair. The radar region at full resolution
// corresponds to the centered sat_patch_side x sat_patch_side window of the
// coarser satellite grid.
struct GridSpec {
  int in_bands = 11;
  int in_steps = 4;
  int out_steps = 32;
  int side = 252;
  int sat_patch_side = 42;
  int resolution_ratio = 6;
  int step_minutes = 15;

  void validate() const;
  bool operator==(const GridSpec&) const = default;

  static GridSpec competition() { return GridSpec{}; }
  // Fast test geometry; keeps side = sat_patch_side * resolution_ratio.
  static GridSpec desk() {
    GridSpec g;
    g.side = 64;
    g.sat_patch_side = 16;
    g.resolution_ratio = 4;
    return g;
  }
};

std::string grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const std::string& js);

struct CubeMeta {
  std::string region_id;
  int year = 0;
  std::string timestamp;  // ISO-8601
};

// 11-band, 4-step satellite radiance block: values (band, time, H, W).
struct ContextTensor {
  TensorF values;
  CubeMeta meta;
};

// 32-step binary rain mask: values (time, H, W) in {0,1}.
struct RainCube {
  TensorU8 values;
  CubeMeta meta;
};

// Probability counterpart of RainCube: values (time, H, W) in [0,1].
struct ProbCube {
  TensorF values;
  CubeMeta meta;
};

void validate_rain_cube(const RainCube& cube, const GridSpec& grid);
void validate_prob_cube(const ProbCube& cube, const GridSpec& grid);

struct ClimatologyMap {
  TensorF pixel_freq;  // (H, W), fraction of rainy (sample, time) slots
  double scalar_mean = 0.0;  // mean over samples of per-sample rain ratio
  double scalar_max = 0.0;   // max per-sample rain ratio
  std::string split;
  std::string region_id;
  int year = 0;
};

struct Sample {
  ContextTensor context;
  RainCube target;
};

struct Dataset {
  GridSpec grid;
  std::string split;  // train | val | test
  std::vector<Sample> samples;

  Index size() const { return static_cast<Index>(samples.size()); }
};

// Deterministic synthetic event: advected Gaussian rain cells thresholded
// into the target cube; context bands are blurred/noised/rescaled coarse
// views of the same field over the 4 context steps.
std::pair<ContextTensor, RainCube> generate_synthetic_event(
    std::uint64_t seed, const GridSpec& grid, std::array<double, 2> motion, int n_cells);

struct SynthParams {
  int n_samples = 8;
  int min_cells = 1;
  int max_cells = 3;
  double max_speed = 1.0;  // cell speed bound, satellite px per step
};

Dataset make_synthetic_dataset(std::uint64_t seed, const GridSpec& grid,
                               const std::string& region_id, int year,
                               const std::string& split, const SynthParams& params);

// Concatenates the two splits (train first, val second), preserving sample
// identity and order.
Dataset merge_train_val(const Dataset& train, const Dataset& val);

ClimatologyMap compute_climatology(const Dataset& dataset, const std::string& split);

// Maps a radar pixel to its satellite-grid coordinate inside the centered
// low-resolution patch.
std::pair<int, int> radar_to_sat_coords(int h, int w, const GridSpec& grid);

std::string iso_timestamp(int year, int minutes_from_jan1);

}  // namespace nowcast::data

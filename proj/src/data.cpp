#include "nowcast/data.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "nowcast/rng.hpp"

namespace nowcast::data {

void GridSpec::validate() const {
  config_check(in_bands > 0 && in_steps > 0 && out_steps > 0 && side > 0 &&
                   sat_patch_side > 0 && resolution_ratio > 0 && step_minutes > 0,
               "grid: all fields must be positive");
  config_check(side == sat_patch_side * resolution_ratio,
               "grid: side must equal sat_patch_side * resolution_ratio (got " +
                   std::to_string(side) + " != " + std::to_string(sat_patch_side) + " * " +
                   std::to_string(resolution_ratio) + ")");
}

std::string grid_to_json(const GridSpec& g) {
  nlohmann::json j{{"in_bands", g.in_bands},       {"in_steps", g.in_steps},
                   {"out_steps", g.out_steps},     {"side", g.side},
                   {"sat_patch_side", g.sat_patch_side},
                   {"resolution_ratio", g.resolution_ratio},
                   {"step_minutes", g.step_minutes}};
  return j.dump();
}

GridSpec grid_from_json(const std::string& js) {
  nlohmann::json j = nlohmann::json::parse(js);
  GridSpec g;
  g.in_bands = j.at("in_bands");
  g.in_steps = j.at("in_steps");
  g.out_steps = j.at("out_steps");
  g.side = j.at("side");
  g.sat_patch_side = j.at("sat_patch_side");
  g.resolution_ratio = j.at("resolution_ratio");
  g.step_minutes = j.at("step_minutes");
  g.validate();
  return g;
}

void validate_rain_cube(const RainCube& cube, const GridSpec& grid) {
  const Shape want{grid.out_steps, grid.side, grid.side};
  data_check(cube.values.shape() == want, "rain cube: shape " + shape_str(cube.values.shape()) +
                                              " does not match grid " + shape_str(want));
  for (Index i = 0; i < cube.values.size(); ++i)
    data_check(cube.values[i] <= 1, "rain cube: values must be 0 or 1");
}

void validate_prob_cube(const ProbCube& cube, const GridSpec& grid) {
  const Shape want{grid.out_steps, grid.side, grid.side};
  data_check(cube.values.shape() == want, "prob cube: shape mismatch");
  for (Index i = 0; i < cube.values.size(); ++i)
    data_check(cube.values[i] >= 0.0f && cube.values[i] <= 1.0f,
               "prob cube: values must lie in [0,1]");
}

namespace {

constexpr double kRainThreshold = 0.5;

struct Cell {
  double cy, cx;  // satellite coordinates
  double sigma;
  double amp;
};

// Sum of separable Gaussian bumps evaluated on a y/x coordinate lattice.
void accumulate_field(std::vector<double>& field, const std::vector<double>& ys,
                      const std::vector<double>& xs, const std::vector<Cell>& cells, double t,
                      const std::array<double, 2>& motion) {
  const size_t ny = ys.size(), nx = xs.size();
  std::vector<double> ey(ny), ex(nx);
  for (const Cell& c : cells) {
    const double cy = c.cy + motion[1] * t;
    const double cx = c.cx + motion[0] * t;
    const double inv = 1.0 / (2.0 * c.sigma * c.sigma);
    for (size_t i = 0; i < ny; ++i) {
      const double d = ys[i] - cy;
      ey[i] = std::exp(-d * d * inv);
    }
    for (size_t j = 0; j < nx; ++j) {
      const double d = xs[j] - cx;
      ex[j] = c.amp * std::exp(-d * d * inv);
    }
    for (size_t i = 0; i < ny; ++i) {
      double* row = field.data() + i * nx;
      const double e = ey[i];
      for (size_t j = 0; j < nx; ++j) row[j] += e * ex[j];
    }
  }
}

// In-place separable box-ish Gaussian blur on a side x side grid.
void blur_grid(std::vector<double>& g, int side, double sigma) {
  if (sigma <= 0) return;
  const int r = std::max(1, static_cast<int>(std::ceil(2.0 * sigma)));
  std::vector<double> k(static_cast<size_t>(2 * r + 1));
  double norm = 0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<size_t>(i + r)] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    norm += k[static_cast<size_t>(i + r)];
  }
  for (auto& v : k) v /= norm;
  std::vector<double> tmp(g.size());
  // rows
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) {
        int xx = std::clamp(x + i, 0, side - 1);
        acc += k[static_cast<size_t>(i + r)] * g[static_cast<size_t>(y * side + xx)];
      }
      tmp[static_cast<size_t>(y * side + x)] = acc;
    }
  // cols
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) {
        int yy = std::clamp(y + i, 0, side - 1);
        acc += k[static_cast<size_t>(i + r)] * tmp[static_cast<size_t>(yy * side + x)];
      }
      g[static_cast<size_t>(y * side + x)] = acc;
    }
}

}  // namespace

std::pair<ContextTensor, RainCube> generate_synthetic_event(std::uint64_t seed,
                                                            const GridSpec& grid,
                                                            std::array<double, 2> motion,
                                                            int n_cells) {
  grid.validate();
  config_check(n_cells >= 0, "generate_synthetic_event: n_cells must be >= 0");

  SeededRng rng(seed);
  const int side = grid.side;
  const int patch = grid.sat_patch_side;
  const double offset = (side - patch) / 2.0;

  std::vector<Cell> cells;
  for (int c = 0; c < n_cells; ++c) {
    Cell cell;
    cell.cy = offset + rng.uniform(0.1, 0.9) * patch;
    cell.cx = offset + rng.uniform(0.1, 0.9) * patch;
    cell.sigma = rng.uniform(0.06, 0.16) * patch;
    cell.amp = rng.uniform(0.9, 1.8);
    cells.push_back(cell);
  }

  // Radar pixel centers expressed in satellite coordinates.
  std::vector<double> radar_y(static_cast<size_t>(side)), radar_x(static_cast<size_t>(side));
  for (int i = 0; i < side; ++i)
    radar_y[static_cast<size_t>(i)] = radar_x[static_cast<size_t>(i)] =
        offset + (i + 0.5) / grid.resolution_ratio;

  RainCube rain;
  rain.values = TensorU8({grid.out_steps, side, side});
  std::vector<double> field(static_cast<size_t>(side) * side);
  for (int step = 0; step < grid.out_steps; ++step) {
    std::fill(field.begin(), field.end(), 0.0);
    accumulate_field(field, radar_y, radar_x, cells, grid.in_steps + step, motion);
    std::uint8_t* out = rain.values.data() + static_cast<Index>(step) * side * side;
    for (size_t i = 0; i < field.size(); ++i) out[i] = field[i] > kRainThreshold ? 1 : 0;
  }

  // Satellite pixel centers.
  std::vector<double> sat_c(static_cast<size_t>(side));
  for (int i = 0; i < side; ++i) sat_c[static_cast<size_t>(i)] = i + 0.5;

  ContextTensor ctx;
  ctx.values = TensorF({grid.in_bands, grid.in_steps, side, side});
  std::vector<double> base(static_cast<size_t>(side) * side);
  std::vector<double> band(base.size());
  for (int t = 0; t < grid.in_steps; ++t) {
    std::fill(base.begin(), base.end(), 0.0);
    accumulate_field(base, sat_c, sat_c, cells, t, motion);
    for (int b = 0; b < grid.in_bands; ++b) {
      band = base;
      // Band-dependent view: blur radius cycles over band groups (VIS-like
      // sharp, WV-like medium, IR-like smooth), affine rescale per band.
      const double blur_sigma = 0.6 * (b % 3);
      blur_grid(band, side, blur_sigma);
      const double scale = 0.5 + 0.08 * b;
      const double shift = 0.05 * (b % 4);
      float* out = ctx.values.data() +
                   (static_cast<Index>(b) * grid.in_steps + t) * side * side;
      for (size_t i = 0; i < band.size(); ++i)
        out[i] = static_cast<float>(scale * band[i] + shift + 0.02 * rng.normal());
    }
  }
  return {std::move(ctx), std::move(rain)};
}

Dataset make_synthetic_dataset(std::uint64_t seed, const GridSpec& grid,
                               const std::string& region_id, int year, const std::string& split,
                               const SynthParams& params) {
  grid.validate();
  config_check(params.n_samples >= 0 && params.min_cells >= 0 &&
                   params.max_cells >= params.min_cells,
               "synth: bad sample/cell counts");
  Dataset ds;
  ds.grid = grid;
  ds.split = split;
  const std::uint64_t stream = derive_seed(seed, region_id + "/" + std::to_string(year) + "/" + split);
  SeededRng rng(stream);
  for (int k = 0; k < params.n_samples; ++k) {
    const std::uint64_t sample_seed = rng.next_u64();
    const std::array<double, 2> motion{rng.uniform(-params.max_speed, params.max_speed),
                                       rng.uniform(-params.max_speed, params.max_speed)};
    const int n_cells = static_cast<int>(rng.randint(params.min_cells, params.max_cells));
    auto [ctx, rain] = generate_synthetic_event(sample_seed, grid, motion, n_cells);
    CubeMeta meta{region_id, year, iso_timestamp(year, 120 * k)};
    ctx.meta = meta;
    rain.meta = meta;
    ds.samples.push_back(Sample{std::move(ctx), std::move(rain)});
  }
  return ds;
}

Dataset merge_train_val(const Dataset& train, const Dataset& val) {
  config_check(train.grid == val.grid, "merge_train_val: datasets use different grid specs");
  Dataset out;
  out.grid = train.grid;
  out.split = "train";
  out.samples.reserve(train.samples.size() + val.samples.size());
  out.samples.insert(out.samples.end(), train.samples.begin(), train.samples.end());
  out.samples.insert(out.samples.end(), val.samples.begin(), val.samples.end());
  return out;
}

ClimatologyMap compute_climatology(const Dataset& dataset, const std::string& split) {
  data_check(!dataset.samples.empty(), "compute_climatology: empty dataset");
  const GridSpec& g = dataset.grid;
  const Index hw = static_cast<Index>(g.side) * g.side;
  const Index per_sample = static_cast<Index>(g.out_steps) * hw;

  std::vector<double> freq(static_cast<size_t>(hw), 0.0);
  double mean_acc = 0.0, max_ratio = 0.0;
  for (const Sample& s : dataset.samples) {
    data_check(s.target.values.size() == per_sample, "compute_climatology: sample shape mismatch");
    const std::uint8_t* v = s.target.values.data();
    Index ones = 0;
    for (int t = 0; t < g.out_steps; ++t)
      for (Index i = 0; i < hw; ++i) {
        const std::uint8_t b = v[static_cast<Index>(t) * hw + i];
        freq[static_cast<size_t>(i)] += b;
        ones += b;
      }
    const double ratio = static_cast<double>(ones) / static_cast<double>(per_sample);
    mean_acc += ratio;
    max_ratio = std::max(max_ratio, ratio);
  }
  const double slots = static_cast<double>(dataset.samples.size()) * g.out_steps;

  ClimatologyMap clim;
  clim.pixel_freq = TensorF({g.side, g.side});
  for (Index i = 0; i < hw; ++i)
    clim.pixel_freq[i] = static_cast<float>(freq[static_cast<size_t>(i)] / slots);
  clim.scalar_mean = mean_acc / static_cast<double>(dataset.samples.size());
  clim.scalar_max = max_ratio;
  clim.split = split;
  clim.region_id = dataset.samples.front().target.meta.region_id;
  clim.year = dataset.samples.front().target.meta.year;
  for (const Sample& s : dataset.samples)
    if (s.target.meta.region_id != clim.region_id) {
      clim.region_id = "all";
      clim.year = 0;
      break;
    }
  return clim;
}

std::pair<int, int> radar_to_sat_coords(int h, int w, const GridSpec& grid) {
  grid.validate();
  data_check(h >= 0 && h < grid.side && w >= 0 && w < grid.side,
             "radar_to_sat_coords: coordinate out of range");
  const int offset = (grid.side - grid.sat_patch_side) / 2;
  return {offset + h / grid.resolution_ratio, offset + w / grid.resolution_ratio};
}

std::string iso_timestamp(int year, int minutes_from_jan1) {
  const int day = 1 + (minutes_from_jan1 / 1440) % 28;
  const int hour = (minutes_from_jan1 / 60) % 24;
  const int minute = minutes_from_jan1 % 60;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-01-%02dT%02d:%02d:00Z", year, day, hour, minute);
  return buf;
}

}  // namespace nowcast::data

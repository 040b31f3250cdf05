#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "form/dynamics.hpp"
#include "form/relativity.hpp"

namespace form {

enum class DatasetKind { kOnedot, kHalfmoons, kSpiral };

std::string to_string(DatasetKind kind);
/// Throws DataError on an unknown name.
DatasetKind dataset_kind_from_string(const std::string& name);

/// How co-moving force components evolve in time:
/// constant -> amp; sine -> amp * sin(freq * t).
enum class ForceProfile { kConstant, kSine };

std::string to_string(ForceProfile p);
ForceProfile force_profile_from_string(const std::string& name);

/// Generator parameters. Force amplitudes are in du/s^2 (SI values divided by 3e7).
struct DatasetSpec {
  DatasetKind kind = DatasetKind::kOnedot;
  std::size_t n_points = 200;
  std::size_t n_steps = 200;
  double duration = 1.0;
  std::uint64_t seed = 42;

  double gauss_var = 0.3;    // onedot, halfmoons: per-axis variance of the source
  double disc_radius = 1.0;  // spiral: source disc radius, core is r < radius / 2

  double speed_scale = 4.0;    // onedot: v0 = speed_scale * x0  (1/s)
  double initial_speed = 4.0;  // halfmoons: |v0|
  double core_speed = 2.0;     // spiral: core speed before the angular factor
  double ring_speed = 6.0;     // spiral: ring speed before the angular factor

  ForceProfile force_profile = ForceProfile::kConstant;
  double f_par_amp = 5.0;
  double f_perp_amp = 5.0;
  double f_par_freq = 1.0;
  double f_perp_freq = 1.0;

  PhysicsConfig physics{};
  UnitSystem units{};

  /// Full-size defaults: onedot 200 points, halfmoons and spiral 1000.
  static DatasetSpec defaults(DatasetKind kind);

  /// Multiplies both force amplitudes.
  DatasetSpec& scale_forces(double factor);

  /// Throws DataError on violated invariants.
  void validate() const;
};

ForceSchedule force_schedule(const DatasetSpec& spec);

/// Independent RNG stream for item `index` of a run seeded with `seed`.
std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index);

/// One source point drawn from the dataset's source distribution.
VecD draw_source(const DatasetSpec& spec, std::mt19937_64& rng);

/// The dataset's initial-velocity rule applied to a source point.
VecD initial_velocity(const DatasetSpec& spec, const VecD& x0);

/// n source points drawn with per-index streams of `seed`.
std::vector<VecD> draw_sources(const DatasetSpec& spec, std::size_t n, std::uint64_t seed);

std::vector<TrajectoryRecord> gen_onedot(const DatasetSpec& spec);
std::vector<TrajectoryRecord> gen_halfmoons(const DatasetSpec& spec);
std::vector<TrajectoryRecord> gen_spiral(const DatasetSpec& spec);

/// Dispatches on spec.kind. Output is identical for any worker count.
std::vector<TrajectoryRecord> generate_dataset(const DatasetSpec& spec,
                                               std::optional<std::size_t> workers = {});

/// Training part of the fixed split: the first 80% of trajectories by index.
std::size_t train_split_size(std::size_t n_points);

}  // namespace form

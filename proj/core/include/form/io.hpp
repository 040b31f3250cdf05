#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "form/datasets.hpp"
#include "form/evaluation.hpp"
#include "form/sampling.hpp"
#include "form/training.hpp"

namespace form {

inline constexpr int kSchemaVersion = 1;

struct DatasetFile {
  DatasetSpec spec;
  std::vector<TrajectoryRecord> trajectories;
};

/// NDJSON: a header line, then one line per trajectory in index order.
/// Numbers in trajectory lines are written with 17 significant digits.
void write_dataset(std::ostream& out, const DatasetSpec& spec,
                   const std::vector<TrajectoryRecord>& trajectories);
/// Throws ParseError naming the offending line.
DatasetFile read_dataset(std::istream& in);

void save_dataset(const std::filesystem::path& path, const DatasetSpec& spec,
                  const std::vector<TrajectoryRecord>& trajectories);
DatasetFile load_dataset(const std::filesystem::path& path);

std::string checkpoint_to_json(const TrainedModel& model);
TrainedModel checkpoint_from_json(const std::string& text);
void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_checkpoint(const std::filesystem::path& path);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

/// One transported point.
struct SampleRecord {
  std::size_t index = 0;
  VecD x0;
  VecD v0;                      // empty for first-order methods
  VecD endpoint;
  std::optional<VecD> target;   // simulated endpoint, when sources are held-out trajectories
  std::optional<SamplePath> path;
};

struct SamplesFile {
  Method method = Method::kForm;
  DatasetKind dataset = DatasetKind::kOnedot;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  std::string source;  // "heldout" or "draw"
  double max_speed_ratio = 0.0;  // max |v| / c over all recorded ForM velocities
  std::vector<SampleRecord> records;
};

void write_samples(std::ostream& out, const SamplesFile& samples);
SamplesFile read_samples(std::istream& in);

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// 17 significant digits ("%.17g"); parses back to the identical double.
std::string format_double(double value);

}  // namespace form

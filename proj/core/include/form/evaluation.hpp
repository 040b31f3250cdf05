#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "form/datasets.hpp"
#include "form/sampling.hpp"
#include "form/training.hpp"

namespace form {

/// paired: mean_i |g_i - t_i|. chamfer: mean over g of the distance to its nearest t.
enum class LossMode { kPaired, kChamfer };

std::string to_string(LossMode m);
LossMode loss_mode_from_string(const std::string& name);

double euclidean_distance_loss(const std::vector<VecD>& generated,
                               const std::vector<VecD>& target, LossMode mode);

struct EvalCell {
  DatasetKind dataset = DatasetKind::kOnedot;
  Method method = Method::kO1;
  double loss = 0.0;  // du
  std::size_t n_samples = 0;
  std::size_t M = 0;
  std::uint64_t seed = 0;

  bool operator==(const EvalCell&) const = default;
};

/// Losses per (dataset, method), with a per-dataset ranking.
struct EvalReport {
  LossMode mode = LossMode::kPaired;
  std::string unit = "du (0.1 light-second)";
  std::vector<EvalCell> cells;  // sorted by (dataset, method)
  /// Per dataset, methods ordered from lowest to highest loss.
  std::map<std::string, std::vector<std::string>> ranking;
  std::map<std::string, std::string> metadata;

  const EvalCell* find(DatasetKind d, Method m) const;
  bool complete() const;  // all nine cells present
  bool operator==(const EvalReport&) const = default;
};

/// Builds a report from evaluated cells (later duplicates replace earlier ones).
EvalReport make_report(std::vector<EvalCell> cells, LossMode mode,
                       std::map<std::string, std::string> metadata = {});

/// Published reference losses, for side-by-side display.
std::map<std::pair<DatasetKind, Method>, double> published_reference_losses();

/// Text table: rows O1, O1+O2, ForM; columns Onedot, Halfmoons, Spiral.
/// "*" marks the best cell of a column, "+" the second best, "-" absent.
std::string render_table(const EvalReport& report, bool with_reference = false);

/// Transports the held-out source points of `data` (the last 20% by index)
/// with the model and compares against their simulated endpoints.
EvalCell evaluate_model(const TrainedModel& model, const std::vector<TrajectoryRecord>& data,
                        const SamplerConfig& sc, LossMode mode = LossMode::kPaired);

/// Endpoints of the held-out trajectories (source x0, v0 and target) as a convenience.
struct HeldOutSet {
  std::vector<VecD> x0, v0, target;
  std::vector<std::size_t> index;
};
HeldOutSet held_out(const std::vector<TrajectoryRecord>& data);

}  // namespace form

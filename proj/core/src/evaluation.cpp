#include "form/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "form/errors.hpp"

namespace form {
namespace {

constexpr DatasetKind kKinds[] = {DatasetKind::kOnedot, DatasetKind::kHalfmoons,
                                  DatasetKind::kSpiral};
constexpr Method kMethods[] = {Method::kO1, Method::kO1O2, Method::kForm};

std::string column_title(DatasetKind k) {
  switch (k) {
    case DatasetKind::kOnedot: return "Onedot";
    case DatasetKind::kHalfmoons: return "Halfmoons";
    case DatasetKind::kSpiral: return "Spiral";
  }
  return "?";
}

}  // namespace

std::string to_string(LossMode m) { return m == LossMode::kPaired ? "paired" : "chamfer"; }

LossMode loss_mode_from_string(const std::string& name) {
  if (name == "paired") return LossMode::kPaired;
  if (name == "chamfer") return LossMode::kChamfer;
  throw DataError("unknown loss mode '" + name + "'");
}

double euclidean_distance_loss(const std::vector<VecD>& generated,
                               const std::vector<VecD>& target, LossMode mode) {
  if (generated.empty() || target.empty()) throw DataError("distance loss: empty point set");
  double sum = 0.0;
  if (mode == LossMode::kPaired) {
    if (generated.size() != target.size()) {
      throw DataError("paired distance loss: " + std::to_string(generated.size()) +
                      " generated vs " + std::to_string(target.size()) + " targets");
    }
    for (std::size_t i = 0; i < generated.size(); ++i) sum += (generated[i] - target[i]).norm();
  } else {
    for (const auto& g : generated) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& t : target) best = std::min(best, (g - t).squaredNorm());
      sum += std::sqrt(best);
    }
  }
  return sum / static_cast<double>(generated.size());
}

const EvalCell* EvalReport::find(DatasetKind d, Method m) const {
  for (const auto& c : cells) {
    if (c.dataset == d && c.method == m) return &c;
  }
  return nullptr;
}

bool EvalReport::complete() const {
  for (auto d : kKinds) {
    for (auto m : kMethods) {
      if (find(d, m) == nullptr) return false;
    }
  }
  return true;
}

EvalReport make_report(std::vector<EvalCell> cells, LossMode mode,
                       std::map<std::string, std::string> metadata) {
  if (cells.empty()) throw DataError("make_report: no cells");
  EvalReport r;
  r.mode = mode;
  r.metadata = std::move(metadata);
  for (auto& c : cells) {
    if (!(c.loss >= 0.0)) throw DataError("make_report: negative or NaN loss");
    auto it = std::find_if(r.cells.begin(), r.cells.end(), [&](const EvalCell& e) {
      return e.dataset == c.dataset && e.method == c.method;
    });
    if (it != r.cells.end()) {
      *it = c;
    } else {
      r.cells.push_back(c);
    }
  }
  std::sort(r.cells.begin(), r.cells.end(), [](const EvalCell& a, const EvalCell& b) {
    return std::pair(a.dataset, a.method) < std::pair(b.dataset, b.method);
  });
  for (auto d : kKinds) {
    std::vector<const EvalCell*> column;
    for (const auto& c : r.cells) {
      if (c.dataset == d) column.push_back(&c);
    }
    if (column.empty()) continue;
    std::stable_sort(column.begin(), column.end(),
                     [](const EvalCell* a, const EvalCell* b) { return a->loss < b->loss; });
    auto& order = r.ranking[to_string(d)];
    for (const auto* c : column) order.push_back(to_string(c->method));
  }
  return r;
}

std::map<std::pair<DatasetKind, Method>, double> published_reference_losses() {
  return {
      {{DatasetKind::kOnedot, Method::kO1}, 2.146},
      {{DatasetKind::kHalfmoons, Method::kO1}, 5.853},
      {{DatasetKind::kSpiral, Method::kO1}, 1.666},
      {{DatasetKind::kOnedot, Method::kO1O2}, 2.048},
      {{DatasetKind::kHalfmoons, Method::kO1O2}, 5.793},
      {{DatasetKind::kSpiral, Method::kO1O2}, 1.578},
      {{DatasetKind::kOnedot, Method::kForm}, 0.509},
      {{DatasetKind::kHalfmoons, Method::kForm}, 0.714},
      {{DatasetKind::kSpiral, Method::kForm}, 0.124},
  };
}

std::string render_table(const EvalReport& report, bool with_reference) {
  const auto reference = published_reference_losses();
  std::ostringstream out;
  out << "Euclidean distance loss (" << to_string(report.mode) << ", unit: " << report.unit
      << ")\n";
  out << std::left << std::setw(10) << "Method";
  for (auto d : kKinds) out << std::right << std::setw(with_reference ? 22 : 12) << column_title(d);
  out << '\n';
  for (auto m : kMethods) {
    out << std::left << std::setw(10) << display_name(m);
    for (auto d : kKinds) {
      std::ostringstream cell;
      if (const EvalCell* c = report.find(d, m)) {
        cell << std::fixed << std::setprecision(3) << c->loss;
        const auto rank_it = report.ranking.find(to_string(d));
        if (rank_it != report.ranking.end()) {
          const auto& order = rank_it->second;
          if (!order.empty() && order[0] == to_string(m)) {
            cell << '*';
          } else if (order.size() > 1 && order[1] == to_string(m)) {
            cell << '+';
          } else {
            cell << ' ';
          }
        }
      } else {
        cell << "- ";
      }
      if (with_reference) {
        cell << " (ref " << std::fixed << std::setprecision(3) << reference.at({d, m}) << ")";
      }
      out << std::right << std::setw(with_reference ? 22 : 12) << cell.str();
    }
    out << '\n';
  }
  out << "* best, + second best per column\n";
  return out.str();
}

HeldOutSet held_out(const std::vector<TrajectoryRecord>& data) {
  HeldOutSet h;
  for (std::size_t i = train_split_size(data.size()); i < data.size(); ++i) {
    h.x0.push_back(data[i].steps.front().x);
    h.v0.push_back(data[i].steps.front().v);
    h.target.push_back(data[i].steps.back().x);
    h.index.push_back(data[i].index);
  }
  return h;
}

EvalCell evaluate_model(const TrainedModel& model, const std::vector<TrajectoryRecord>& data,
                        const SamplerConfig& sc, LossMode mode) {
  const HeldOutSet h = held_out(data);
  if (h.x0.empty()) throw DataError("evaluate_model: no held-out trajectories");
  std::vector<VecD> generated;
  generated.reserve(h.x0.size());
  for (const auto& x0 : h.x0) generated.push_back(sample(model, x0, sc).endpoint());
  EvalCell cell;
  cell.dataset = model.dataset.kind;
  cell.method = model.method;
  cell.loss = euclidean_distance_loss(generated, h.target, mode);
  cell.n_samples = generated.size();
  cell.M = sc.M;
  cell.seed = model.train_config.seed;
  return cell;
}

}  // namespace form

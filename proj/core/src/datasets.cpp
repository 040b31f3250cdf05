#include "form/datasets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "form/errors.hpp"
#include "form/parallel.hpp"

namespace form {

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kOnedot: return "onedot";
    case DatasetKind::kHalfmoons: return "halfmoons";
    case DatasetKind::kSpiral: return "spiral";
  }
  return "unknown";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "onedot") return DatasetKind::kOnedot;
  if (name == "halfmoons") return DatasetKind::kHalfmoons;
  if (name == "spiral") return DatasetKind::kSpiral;
  throw DataError("unknown dataset kind '" + name + "'");
}

std::string to_string(ForceProfile p) {
  return p == ForceProfile::kConstant ? "constant" : "sine";
}

ForceProfile force_profile_from_string(const std::string& name) {
  if (name == "constant") return ForceProfile::kConstant;
  if (name == "sine") return ForceProfile::kSine;
  throw DataError("unknown force profile '" + name + "'");
}

DatasetSpec DatasetSpec::defaults(DatasetKind kind) {
  const UnitSystem units{};
  DatasetSpec spec;
  spec.kind = kind;
  switch (kind) {
    case DatasetKind::kOnedot:
      spec.n_points = 200;
      spec.force_profile = ForceProfile::kConstant;
      spec.f_par_amp = units.from_si(1.5e8);
      spec.f_perp_amp = units.from_si(1.5e8);
      break;
    case DatasetKind::kHalfmoons:
      spec.n_points = 1000;
      spec.force_profile = ForceProfile::kSine;
      spec.f_par_amp = units.from_si(1e7);
      spec.f_perp_amp = units.from_si(7e8);
      spec.f_par_freq = 1.0;
      spec.f_perp_freq = 8.0;
      break;
    case DatasetKind::kSpiral:
      spec.n_points = 1000;
      spec.force_profile = ForceProfile::kSine;
      spec.f_par_amp = units.from_si(1e7);
      spec.f_perp_amp = units.from_si(7e8);
      spec.f_par_freq = 1.0;
      spec.f_perp_freq = 1.0;
      break;
  }
  return spec;
}

DatasetSpec& DatasetSpec::scale_forces(double factor) {
  f_par_amp *= factor;
  f_perp_amp *= factor;
  return *this;
}

void DatasetSpec::validate() const {
  if (n_points == 0) throw DataError("dataset: n_points must be > 0");
  if (n_steps < 2) throw DataError("dataset: n_steps must be >= 2");
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw DataError("dataset: duration must be positive");
  }
  if (!(gauss_var > 0.0)) throw DataError("dataset: gauss_var must be positive");
  if (!(disc_radius > 0.0)) throw DataError("dataset: disc_radius must be positive");
  if (!std::isfinite(f_par_amp) || !std::isfinite(f_perp_amp) || !std::isfinite(f_par_freq) ||
      !std::isfinite(f_perp_freq)) {
    throw DataError("dataset: force parameters must be finite");
  }
  physics.validate();
  units.validate();
  if (physics.c != units.c_du) throw DataError("dataset: physics.c must equal units.c_du");
}

ForceSchedule force_schedule(const DatasetSpec& spec) {
  if (spec.force_profile == ForceProfile::kConstant) {
    return ForceSchedule::constant(spec.f_par_amp, spec.f_perp_amp);
  }
  const double ap = spec.f_par_amp, fp = spec.f_par_freq;
  const double aq = spec.f_perp_amp, fq = spec.f_perp_freq;
  return {[ap, fp](double t) { return ap * std::sin(fp * t); },
          [aq, fq](double t) { return aq * std::sin(fq * t); }};
}

std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix_seed(seed, index));
}

VecD draw_source(const DatasetSpec& spec, std::mt19937_64& rng) {
  VecD x(2);
  if (spec.kind == DatasetKind::kSpiral) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = spec.disc_radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    x << r * std::cos(theta), r * std::sin(theta);
  } else {
    std::normal_distribution<double> normal(0.0, std::sqrt(spec.gauss_var));
    x[0] = normal(rng);
    x[1] = normal(rng);
  }
  return x;
}

VecD initial_velocity(const DatasetSpec& spec, const VecD& x0) {
  VecD v(2);
  switch (spec.kind) {
    case DatasetKind::kOnedot:
      v = spec.speed_scale * x0;
      break;
    case DatasetKind::kHalfmoons:
      v << (x0[1] > 0.0 ? spec.initial_speed : -spec.initial_speed), 0.0;
      break;
    case DatasetKind::kSpiral: {
      double theta = std::atan2(x0[1], x0[0]);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      const double r = x0.norm();
      const double base = r < 0.5 * spec.disc_radius ? spec.core_speed : spec.ring_speed;
      const double speed = base * theta / (2.0 * std::numbers::pi);
      v << -speed * std::sin(theta), speed * std::cos(theta);
      break;
    }
  }
  return v;
}

std::vector<VecD> draw_sources(const DatasetSpec& spec, std::size_t n, std::uint64_t seed) {
  std::vector<VecD> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = item_rng(seed, i);
    out.push_back(draw_source(spec, rng));
  }
  return out;
}

namespace {

std::vector<TrajectoryRecord> generate_checked(const DatasetSpec& spec, DatasetKind expected,
                                               std::size_t workers) {
  if (spec.kind != expected) {
    throw DataError("generator for " + to_string(expected) + " called with kind " +
                    to_string(spec.kind));
  }
  spec.validate();
  const ForceSchedule schedule = force_schedule(spec);
  std::vector<TrajectoryRecord> out(spec.n_points);
  parallel_for(
      spec.n_points,
      [&](std::size_t i) {
        try {
          auto rng = item_rng(spec.seed, i);
          const VecD x0 = draw_source(spec, rng);
          const VecD v0 = initial_velocity(spec, x0);
          out[i] = simulate_trajectory(x0, v0, schedule, spec.duration, spec.n_steps,
                                       spec.physics);
          out[i].index = i;
        } catch (const SimulationError&) {
          throw;
        } catch (const Error& e) {
          throw SimulationError(i, e.what());
        }
      },
      workers);
  return out;
}

}  // namespace

std::vector<TrajectoryRecord> gen_onedot(const DatasetSpec& spec) {
  return generate_checked(spec, DatasetKind::kOnedot, default_worker_count());
}

std::vector<TrajectoryRecord> gen_halfmoons(const DatasetSpec& spec) {
  return generate_checked(spec, DatasetKind::kHalfmoons, default_worker_count());
}

std::vector<TrajectoryRecord> gen_spiral(const DatasetSpec& spec) {
  return generate_checked(spec, DatasetKind::kSpiral, default_worker_count());
}

std::vector<TrajectoryRecord> generate_dataset(const DatasetSpec& spec,
                                               std::optional<std::size_t> workers) {
  return generate_checked(spec, spec.kind, workers.value_or(default_worker_count()));
}

std::size_t train_split_size(std::size_t n_points) { return n_points - n_points / 5; }

}  // namespace form

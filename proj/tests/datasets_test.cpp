#include "form/datasets.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "form/errors.hpp"
#include "test_helpers.hpp"

namespace form {
namespace {

using testing::vec2;

bool identical(const std::vector<TrajectoryRecord>& a, const std::vector<TrajectoryRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].index != b[i].index || a[i].steps.size() != b[i].steps.size()) return false;
    for (std::size_t k = 0; k < a[i].steps.size(); ++k) {
      const auto& s = a[i].steps[k];
      const auto& r = b[i].steps[k];
      if (s.t != r.t || s.x != r.x || s.v != r.v || s.a != r.a || s.f != r.f ||
          s.f_par != r.f_par || s.f_perp != r.f_perp) {
        return false;
      }
    }
  }
  return true;
}

double max_speed(const std::vector<TrajectoryRecord>& data) {
  double best = 0.0;
  for (const auto& r : data) {
    for (const auto& s : r.steps) best = std::max(best, s.v.norm());
  }
  return best;
}

TEST(Datasets, DefaultSizesAndForces) {
  const auto onedot = DatasetSpec::defaults(DatasetKind::kOnedot);
  const auto moons = DatasetSpec::defaults(DatasetKind::kHalfmoons);
  const auto spiral = DatasetSpec::defaults(DatasetKind::kSpiral);
  EXPECT_EQ(onedot.n_points, 200u);
  EXPECT_EQ(moons.n_points, 1000u);
  EXPECT_EQ(spiral.n_points, 1000u);
  EXPECT_EQ(onedot.f_par_amp, 5.0);
  EXPECT_EQ(onedot.f_perp_amp, 5.0);
  EXPECT_NEAR(moons.f_par_amp, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(moons.f_perp_amp, 70.0 / 3.0, 1e-13);
  EXPECT_EQ(moons.f_perp_freq, 8.0);
  EXPECT_EQ(spiral.f_perp_freq, 1.0);
  for (const auto* s : {&onedot, &moons, &spiral}) {
    EXPECT_EQ(s->duration, 1.0);
    EXPECT_EQ(s->n_steps, 200u);
  }
}

TEST(Datasets, GeneratorsProduceRequestedCounts) {
  EXPECT_EQ(gen_onedot(DatasetSpec::defaults(DatasetKind::kOnedot)).size(), 200u);
  auto moons = DatasetSpec::defaults(DatasetKind::kHalfmoons);
  moons.n_steps = 20;
  EXPECT_EQ(gen_halfmoons(moons).size(), 1000u);
  auto spiral = DatasetSpec::defaults(DatasetKind::kSpiral);
  spiral.n_steps = 20;
  EXPECT_EQ(gen_spiral(spiral).size(), 1000u);
  EXPECT_THROW(gen_spiral(moons), DataError);
}

TEST(Datasets, ForceFreeEndpoints) {
  auto spec = DatasetSpec::defaults(DatasetKind::kOnedot);
  spec.scale_forces(0.0);
  for (const auto& r : gen_onedot(spec)) {
    const auto& first = r.steps.front();
    EXPECT_LE((r.steps.back().x - (first.x + first.v * spec.duration)).norm(), 1e-12);
  }
}

TEST(Datasets, DeterministicAcrossRunsAndWorkerCounts) {
  for (auto kind : {DatasetKind::kOnedot, DatasetKind::kHalfmoons, DatasetKind::kSpiral}) {
    auto spec = DatasetSpec::defaults(kind);
    spec.n_points = 64;
    spec.seed = 42;
    const auto a = generate_dataset(spec, 1);
    const auto b = generate_dataset(spec, 1);
    const auto c = generate_dataset(spec, 4);
    EXPECT_TRUE(identical(a, b)) << to_string(kind);
    EXPECT_TRUE(identical(a, c)) << to_string(kind);
    spec.seed = 43;
    EXPECT_FALSE(identical(a, generate_dataset(spec, 1))) << to_string(kind);
  }
}

TEST(Datasets, OnedotSourceVariance) {
  auto spec = DatasetSpec::defaults(DatasetKind::kOnedot);
  const auto pts = draw_sources(spec, 20000, 1);
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  for (const auto& p : pts) {
    sx += p[0];
    sy += p[1];
    sxx += p[0] * p[0];
    syy += p[1] * p[1];
  }
  const double n = static_cast<double>(pts.size());
  EXPECT_NEAR(sxx / n - (sx / n) * (sx / n), 0.3, 0.015);
  EXPECT_NEAR(syy / n - (sy / n) * (sy / n), 0.3, 0.015);
}

TEST(Datasets, InitialVelocityRules) {
  const auto onedot = DatasetSpec::defaults(DatasetKind::kOnedot);
  EXPECT_EQ(initial_velocity(onedot, vec2(0.5, -0.25)), vec2(2.0, -1.0));

  const auto moons = DatasetSpec::defaults(DatasetKind::kHalfmoons);
  const VecD up = initial_velocity(moons, vec2(0.5, 0.2));
  const VecD down = initial_velocity(moons, vec2(0.5, -0.2));
  EXPECT_EQ(up / up.norm(), vec2(1, 0));
  EXPECT_EQ(down / down.norm(), vec2(-1, 0));
  EXPECT_EQ(up.norm(), 4.0);

  const auto spiral = DatasetSpec::defaults(DatasetKind::kSpiral);
  const double th = 2.0;
  const VecD core = initial_velocity(spiral, vec2(0.2 * std::cos(th), 0.2 * std::sin(th)));
  const VecD ring = initial_velocity(spiral, vec2(0.8 * std::cos(th), 0.8 * std::sin(th)));
  EXPECT_GT(ring.norm(), core.norm());
  EXPECT_NEAR(core.norm(), 2.0 * th / (2 * std::numbers::pi), 1e-12);
  // tangential, counter-clockwise
  EXPECT_NEAR(core.dot(vec2(std::cos(th), std::sin(th))), 0.0, 1e-12);
  EXPECT_GT(core.dot(vec2(-std::sin(th), std::cos(th))), 0.0);
  // speed grows with the angular coordinate
  const VecD later = initial_velocity(spiral, vec2(0.8 * std::cos(4.0), 0.8 * std::sin(4.0)));
  EXPECT_GT(later.norm(), ring.norm());
}

TEST(Datasets, HalfmoonsStartsMatchSignRule) {
  auto spec = DatasetSpec::defaults(DatasetKind::kHalfmoons);
  spec.n_steps = 10;
  for (const auto& r : gen_halfmoons(spec)) {
    const auto& s = r.steps.front();
    EXPECT_EQ(s.v[1], 0.0);
    EXPECT_EQ(s.v[0] > 0.0, s.x[1] > 0.0);
  }
}

TEST(Datasets, SpeedLimitAcrossGeneratedSets) {
  for (auto kind : {DatasetKind::kOnedot, DatasetKind::kHalfmoons, DatasetKind::kSpiral}) {
    for (double scale : {1.0, 100.0}) {
      auto spec = DatasetSpec::defaults(kind);
      spec.scale_forces(scale);
      EXPECT_LT(max_speed(generate_dataset(spec)), spec.physics.c)
          << to_string(kind) << " x" << scale;
    }
  }
}

TEST(Datasets, SpiralPointsMove) {
  const auto data = gen_spiral(DatasetSpec::defaults(DatasetKind::kSpiral));
  double sum = 0.0;
  for (const auto& r : data) sum += (r.steps.back().x - r.steps.front().x).norm();
  EXPECT_GT(sum / static_cast<double>(data.size()), 0.0);
}

TEST(Datasets, SplitReservesLastFifth) {
  EXPECT_EQ(train_split_size(200), 160u);
  EXPECT_EQ(train_split_size(1000), 800u);
}

TEST(Datasets, ValidationErrors) {
  auto spec = DatasetSpec::defaults(DatasetKind::kOnedot);
  spec.n_steps = 1;
  EXPECT_THROW(spec.validate(), DataError);
  spec = DatasetSpec::defaults(DatasetKind::kOnedot);
  spec.n_points = 0;
  EXPECT_THROW(spec.validate(), DataError);
  spec = DatasetSpec::defaults(DatasetKind::kOnedot);
  spec.duration = 0.0;
  EXPECT_THROW(spec.validate(), DataError);
  EXPECT_THROW(dataset_kind_from_string("moons"), DataError);
}

TEST(Datasets, SimulationFailureNamesTrajectory) {
  auto spec = DatasetSpec::defaults(DatasetKind::kOnedot);
  spec.speed_scale = 100.0;  // pushes initial speeds past c
  try {
    gen_onedot(spec);
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_NE(std::string(e.what()).find("trajectory"), std::string::npos);
  }
}

}  // namespace
}  // namespace form

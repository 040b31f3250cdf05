#include "form/sampling.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "form/datasets.hpp"
#include "form/errors.hpp"
#include "test_helpers.hpp"

namespace form {
namespace {

using testing::vec2;

const PhysicsConfig kPhys{};

VelocityPredictor const_velocity(const VecD& v) {
  return [v](const VecD&, double) { return v; };
}

ForcePredictor const_force(double par, double perp) {
  return [par, perp](const VecD&, double) { return ForceComponents{par, perp}; };
}

ForceField lab_field(const ForcePredictor& f) {
  return [f](double t, const VecD& x, const VecD& v) -> VecD {
    const ForceComponents fc = f(x, t);
    return compose_from_components(fc, v, Handedness::kCounterClockwise);
  };
}

TrainedModel random_model(Method method, std::uint64_t seed, double out_scale = 1.0) {
  TrainedModel m;
  m.method = method;
  m.dataset = DatasetSpec::defaults(DatasetKind::kHalfmoons);
  auto scaled = [out_scale](MlpParams p) {
    p.layers.back().weight *= out_scale;
    p.layers.back().bias.setConstant(out_scale * 0.1);
    return p;
  };
  switch (method) {
    case Method::kO1: m.u1 = mlp_init({3, 16, 2}, seed); break;
    case Method::kO1O2:
      m.u1 = mlp_init({3, 16, 2}, seed);
      m.u2 = mlp_init({5, 16, 2}, seed + 1);
      break;
    case Method::kForm: m.force = scaled(mlp_init({1, 16, 16, 2}, seed)); break;
  }
  return m;
}

TEST(SampleO1, ConstantFieldTelescopes) {
  const SamplePath p = sample_o1(const_velocity(vec2(2, 0)), vec2(0, 0), 4, 1.0);
  ASSERT_EQ(p.x.size(), 5u);
  EXPECT_LE((p.endpoint() - vec2(2, 0)).norm(), 1e-15);
  EXPECT_EQ(p.t.back(), 1.0);
  EXPECT_TRUE(p.v.empty());
  for (std::size_t M : {1u, 7u, 100u}) {
    EXPECT_EQ(sample_o1(const_velocity(vec2(0, 0)), vec2(0.3, -1), M, 1.0).endpoint(),
              vec2(0.3, -1));
  }
}

TEST(SampleO1O2, HandComputedUpdates) {
  const AccelerationPredictor u2 = [](const VecD&, const VecD&, double) { return vec2(0, 2); };
  const SamplePath p = sample_o1o2(const_velocity(vec2(1, 0)), u2, vec2(0, 0), 2, 1.0);
  EXPECT_LE((p.x[1] - vec2(0.5, 0.25)).norm(), 1e-15);
  EXPECT_LE((p.endpoint() - vec2(1.0, 0.5)).norm(), 1e-15);
}

TEST(SampleO1O2, ZeroSecondOrderReducesToO1) {
  const VelocityPredictor u1 = [](const VecD& x, double t) { return vec2(-x[1], x[0] + t); };
  const AccelerationPredictor zero = [](const VecD&, const VecD&, double) { return vec2(0, 0); };
  const SamplePath a = sample_o1o2(u1, zero, vec2(1, 0.5), 37, 1.0);
  const SamplePath b = sample_o1(u1, vec2(1, 0.5), 37, 1.0);
  EXPECT_EQ(a.x, b.x);
}

TEST(SampleO1O2, ExactOnQuadraticPathWhereO1IsFirstOrder) {
  // x(t) = (t^2, 0): u1 = (2t, 0), u2 = (2, 0).
  const VelocityPredictor u1 = [](const VecD&, double t) { return vec2(2 * t, 0); };
  const AccelerationPredictor u2 = [](const VecD&, const VecD&, double) { return vec2(2, 0); };
  for (std::size_t M : {4u, 8u, 16u}) {
    const double e1 = (sample_o1(u1, vec2(0, 0), M, 1.0).endpoint() - vec2(1, 0)).norm();
    const double e2 = (sample_o1o2(u1, u2, vec2(0, 0), M, 1.0).endpoint() - vec2(1, 0)).norm();
    EXPECT_NEAR(e1, 1.0 / double(M), 1e-14);
    EXPECT_LE(e2, 1e-14);
  }
}

TEST(SampleForm, ForceFreeUniformMotion) {
  const SamplePath p = sample_form(const_force(0, 0), vec2(1, 1), vec2(3, 0), 10, 1.0, kPhys);
  EXPECT_LE((p.endpoint() - vec2(4, 1)).norm(), 1e-12);
  for (const auto& v : p.v) EXPECT_EQ(v, vec2(3, 0));
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    EXPECT_LE((p.x[i] - vec2(1 + 3 * p.t[i], 1)).norm(), 1e-12);
  }
}

TEST(SampleForm, PerpendicularForceKeepsSpeed) {
  const SamplePath p = sample_form(const_force(0, 5), vec2(0, 0), vec2(5, 0), 1000, 1.0, kPhys);
  ASSERT_EQ(p.v.size(), 1001u);
  for (const auto& v : p.v) EXPECT_NEAR(v.norm(), 5.0, 1e-6);
  EXPECT_GT(p.v.back()[1], 0.0);  // counter-clockwise turn
}

TEST(SampleForm, StressedForcesStayBelowC) {
  for (DatasetKind kind : {DatasetKind::kOnedot, DatasetKind::kHalfmoons, DatasetKind::kSpiral}) {
    DatasetSpec spec = DatasetSpec::defaults(kind);
    spec.scale_forces(100.0);
    const ForceSchedule fs = force_schedule(spec);
    const ForcePredictor f = [&fs](const VecD&, double t) {
      return ForceComponents{fs.f_par(t), fs.f_perp(t)};
    };
    for (std::size_t M : {10u, 100u, 1000u}) {
      for (const VecD& x0 : draw_sources(spec, 20, 3)) {
        const SamplePath p = sample_form(f, x0, initial_velocity(spec, x0), M, 1.0, kPhys);
        EXPECT_LT(p.max_speed(), kPhys.c);
      }
    }
  }
}

TEST(SampleForm, RandomInitModelsStayBelowC) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TrainedModel m = random_model(Method::kForm, seed, 100.0);
    for (std::size_t M : {10u, 100u, 1000u}) {
      SamplerConfig sc;
      sc.M = M;
      const SamplePath p = sample_form(m, vec2(0.5, 0.2), sc);
      EXPECT_LT(p.max_speed(), kPhys.c);
    }
  }
}

TEST(SampleForm, LiteralEulerCanBreakTheSpeedLimit) {
  const ForcePredictor push = const_force(500, 0);
  EXPECT_LT(sample_form(push, vec2(0, 0), vec2(9, 0), 10, 1.0, kPhys).max_speed(), kPhys.c);
  bool violated = false;
  try {
    const SamplePath p =
        sample_form(push, vec2(0, 0), vec2(9, 0), 10, 1.0, kPhys, VelocityUpdate::kEuler);
    violated = p.max_speed() >= kPhys.c;
  } catch (const DomainError&) {
    violated = true;
  }
  EXPECT_TRUE(violated);
}

TEST(SampleForm, DegenerateVelocity) {
  EXPECT_THROW(sample_form(const_force(1, 0), vec2(0, 0), vec2(0, 0), 10, 1.0, kPhys),
               DegenerateVelocityError);
  const SamplePath p =
      sample_form(const_force(1, 0), vec2(0, 0), vec2(0, 0), 10, 1.0, kPhys,
                  VelocityUpdate::kCoMoving, true);
  EXPECT_GT(p.endpoint()[0], 0.0);
  EXPECT_NO_THROW(sample_form(const_force(0, 0), vec2(0, 0), vec2(0, 0), 10, 1.0, kPhys));
}

TEST(IntegratorOrder, ForMSamplerIsFirstOrder) {
  const testing::TurningPath path;
  const ForcePredictor f = [&](const VecD&, double t) {
    return ForceComponents{0.0, path.amp * std::sin(t)};
  };
  const VecD exact = path.endpoint(1.0);
  double prev = 0;
  for (std::size_t M : {100u, 200u, 400u}) {
    const double e =
        (sample_form(f, vec2(0, 0), vec2(path.speed, 0), M, 1.0, kPhys).endpoint() - exact)
            .norm();
    if (prev > 0) EXPECT_NEAR(prev / e, 2.0, 0.2) << "M=" << M;
    prev = e;
  }
}

TEST(IntegratorOrder, EulerSamplerIsFirstOrder) {
  // u(x, t) = (cos t, x_0): exact x(1) = (sin 1, 1 - cos 1) from the origin.
  const VelocityPredictor u = [](const VecD& x, double t) { return vec2(std::cos(t), x[0]); };
  const VecD exact = vec2(std::sin(1.0), 1.0 - std::cos(1.0));
  double prev = 0;
  for (std::size_t M : {100u, 200u, 400u}) {
    const double e = (sample_o1(u, vec2(0, 0), M, 1.0).endpoint() - exact).norm();
    if (prev > 0) EXPECT_NEAR(prev / e, 2.0, 0.2) << "M=" << M;
    prev = e;
  }
}

TEST(IntegratorOrder, OdeSolveIsFourthOrder) {
  const testing::TurningPath path;
  const ForcePredictor f = [&](const VecD&, double t) {
    return ForceComponents{0.0, path.amp * std::sin(t)};
  };
  const VecD exact = path.endpoint(1.0);
  double prev = 0;
  for (std::size_t M : {10u, 20u, 40u}) {
    const double e =
        (ode_solve(lab_field(f), vec2(0, 0), vec2(path.speed, 0), M, 1.0, kPhys).endpoint() -
         exact)
            .norm();
    if (prev > 0) EXPECT_NEAR(prev / e, 16.0, 2.0) << "M=" << M;
    prev = e;
  }
}

TEST(OdeSolve, ZeroFieldAndConsistency) {
  const ForceField zero = [](double, const VecD&, const VecD& v) { return VecD::Zero(v.size()); };
  const SamplePath p = ode_solve(zero, vec2(1, 2), vec2(3, -4), 7, 2.0, kPhys);
  EXPECT_LE((p.endpoint() - vec2(7, -6)).norm(), 1e-12);

  const TrainedModel m = random_model(Method::kForm, 4, 5.0);
  double prev = 1e300;
  for (std::size_t M : {50u, 100u, 200u, 400u}) {
    SamplerConfig sc;
    sc.M = M;
    const double gap =
        (sample_form(m, vec2(0.4, 0.1), sc).endpoint() - ode_solve(m, vec2(0.4, 0.1), sc).endpoint())
            .norm();
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

TEST(ModelSamplers, DispatchAndValidation) {
  const VecD x0 = vec2(0.3, 0.2);
  SamplerConfig sc;
  sc.M = 20;
  const TrainedModel o1 = random_model(Method::kO1, 1);
  const TrainedModel o1o2 = random_model(Method::kO1O2, 2);
  const TrainedModel form_model = random_model(Method::kForm, 3);
  EXPECT_EQ(sample(o1, x0, sc).x, sample_o1(o1, x0, sc).x);
  EXPECT_EQ(sample(o1o2, x0, sc).x, sample_o1o2(o1o2, x0, sc).x);
  EXPECT_EQ(sample(form_model, x0, sc).x, sample_form(form_model, x0, sc).x);
  sc.form_integrator = FormIntegrator::kRk4;
  EXPECT_EQ(sample(form_model, x0, sc).x, ode_solve(form_model, x0, sc).x);
  EXPECT_THROW(sample_o1(form_model, x0, sc), DataError);
  EXPECT_THROW(sample_form(o1, x0, sc), DataError);
  sc.M = 0;
  EXPECT_THROW(sample(o1, x0, sc), DataError);

  SamplerConfig half;
  half.M = 10;
  half.horizon = 0.5;
  EXPECT_DOUBLE_EQ(sample(o1, x0, half).t.back(), 0.5);
}

TEST(ModelSamplers, StartingVelocityRules) {
  TrainedModel m = random_model(Method::kForm, 0);
  m.dataset = DatasetSpec::defaults(DatasetKind::kOnedot);
  const VecD x0 = vec2(0.5, -0.25);
  SamplerConfig sc;
  EXPECT_EQ(starting_velocity(m, x0, sc), initial_velocity(m.dataset, x0));
  sc.init_velocity = InitVelocityRule::kZero;
  EXPECT_EQ(starting_velocity(m, x0, sc), vec2(0, 0));
  sc.init_velocity = InitVelocityRule::kExplicit;
  EXPECT_THROW(sc.validate(), DataError);
  sc.explicit_velocity = vec2(1, 2);
  EXPECT_EQ(starting_velocity(m, x0, sc), vec2(1, 2));
  EXPECT_EQ(sample_form(m, x0, sc).v.front(), vec2(1, 2));
}

TEST(ModelSamplers, Deterministic) {
  const TrainedModel m = random_model(Method::kForm, 9, 10.0);
  SamplerConfig sc;
  const SamplePath a = sample_form(m, vec2(0.1, 0.1), sc);
  const SamplePath b = sample_form(m, vec2(0.1, 0.1), sc);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.v, b.v);
}

TEST(ModelSamplers, EulerSamplerFirstOrderOnTrainedField) {
  // A fixed random smooth field stands in for a trained one.
  const TrainedModel m = random_model(Method::kO1, 12);
  auto endpoint = [&](std::size_t M) {
    SamplerConfig sc;
    sc.M = M;
    return sample_o1(m, vec2(0.2, 0.7), sc).endpoint();
  };
  const double d1 = (endpoint(500) - endpoint(1000)).norm();
  const double d2 = (endpoint(1000) - endpoint(2000)).norm();
  EXPECT_NEAR(d1 / d2, 2.0, 0.2);
}

TEST(SamplerConfig, FormIntegratorNames) {
  EXPECT_EQ(form_integrator_from_string("rk4"), FormIntegrator::kRk4);
  EXPECT_EQ(to_string(FormIntegrator::kTrapezoid), "trapezoid");
  EXPECT_THROW(form_integrator_from_string("euler"), DataError);
}

}  // namespace
}  // namespace form

#include "form/io.hpp"

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "form/errors.hpp"
#include "test_helpers.hpp"

namespace form {
namespace {

using testing::vec2;

std::vector<TrajectoryRecord> small_dataset(DatasetSpec& spec) {
  spec = DatasetSpec::defaults(DatasetKind::kHalfmoons);
  spec.n_points = 6;
  spec.n_steps = 8;
  return generate_dataset(spec);
}

std::string dataset_text(const DatasetSpec& spec, const std::vector<TrajectoryRecord>& data) {
  std::ostringstream out;
  write_dataset(out, spec, data);
  return out.str();
}

void expect_same_steps(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  ASSERT_EQ(a.steps.size(), b.steps.size());
  EXPECT_EQ(a.index, b.index);
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const StepRecord &s = a.steps[i], &t = b.steps[i];
    EXPECT_EQ(s.t, t.t);
    EXPECT_EQ(s.x, t.x);
    EXPECT_EQ(s.v, t.v);
    EXPECT_EQ(s.a, t.a);
    EXPECT_EQ(s.f, t.f);
    EXPECT_EQ(s.f_par, t.f_par);
    EXPECT_EQ(s.f_perp, t.f_perp);
  }
}

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(mant(rng), expo(rng));
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(DatasetIo, BitExactRoundTrip) {
  DatasetSpec spec;
  const auto data = small_dataset(spec);
  const std::string text = dataset_text(spec, data);
  std::istringstream in(text);
  const DatasetFile file = read_dataset(in);
  ASSERT_EQ(file.trajectories.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) expect_same_steps(file.trajectories[i], data[i]);
  EXPECT_EQ(file.spec.kind, spec.kind);
  EXPECT_EQ(file.spec.seed, spec.seed);
  EXPECT_EQ(file.spec.f_perp_amp, spec.f_perp_amp);
  EXPECT_EQ(dataset_text(file.spec, file.trajectories), text);
  // One header line plus one line per trajectory.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST(DatasetIo, ParseErrorsNameTheLine) {
  DatasetSpec spec;
  const auto data = small_dataset(spec);
  std::string text = dataset_text(spec, data);
  // Corrupt the third line (second trajectory).
  std::size_t start = text.find('\n', text.find('\n') + 1) + 1;
  text.replace(start + 5, 3, "@@@");
  std::istringstream in(text);
  try {
    read_dataset(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }

  std::istringstream empty("");
  EXPECT_THROW(read_dataset(empty), ParseError);
  std::istringstream truncated(dataset_text(spec, data).substr(0, 300));
  EXPECT_THROW(read_dataset(truncated), ParseError);
  EXPECT_THROW(load_dataset("/nonexistent/file.ndjson"), DataError);
}

TEST(DatasetIo, FileRoundTrip) {
  DatasetSpec spec;
  const auto data = small_dataset(spec);
  const auto dir = std::filesystem::temp_directory_path() / "form_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "moons.ndjson";
  save_dataset(path, spec, data);
  const DatasetFile file = load_dataset(path);
  for (std::size_t i = 0; i < data.size(); ++i) expect_same_steps(file.trajectories[i], data[i]);
  const std::string first = read_text_file(path);
  save_dataset(path, file.spec, file.trajectories);
  EXPECT_EQ(read_text_file(path), first);
  std::filesystem::remove_all(dir);
}

TEST(CheckpointIo, BitExactRoundTrip) {
  DatasetSpec spec;
  const auto data = small_dataset(spec);
  for (Method method : {Method::kO1, Method::kO1O2, Method::kForm}) {
    TrainConfig cfg{.method = method, .steps = 30, .seed = 3, .hidden = {5}, .loss_window = 7};
    const TrainedModel m = train(data, cfg, spec);
    const std::string text = checkpoint_to_json(m);
    const TrainedModel back = checkpoint_from_json(text);
    EXPECT_EQ(back.method, m.method);
    EXPECT_EQ(back.u1.has_value(), m.u1.has_value());
    if (m.u1) EXPECT_TRUE(*back.u1 == *m.u1);
    if (m.u2) EXPECT_TRUE(*back.u2 == *m.u2);
    if (m.force) EXPECT_TRUE(*back.force == *m.force);
    EXPECT_EQ(back.loss_curve, m.loss_curve);
    EXPECT_EQ(back.final_loss, m.final_loss);
    EXPECT_EQ(back.train_config.steps, 30u);
    EXPECT_EQ(back.train_config.hidden, cfg.hidden);
    EXPECT_EQ(back.dataset.kind, DatasetKind::kHalfmoons);
    EXPECT_EQ(checkpoint_to_json(back), text);
  }
  EXPECT_THROW(checkpoint_from_json("{"), DataError);
  EXPECT_THROW(checkpoint_from_json("{\"schema_version\": 99}"), DataError);
}

TEST(ReportIo, RoundTrip) {
  const EvalReport r = make_report({{DatasetKind::kOnedot, Method::kO1, 0.1 + 0.2, 40, 100, 1},
                                    {DatasetKind::kSpiral, Method::kForm, 1e-300, 200, 100, 1}},
                                   LossMode::kChamfer, {{"config_hash", "abc"}});
  const std::string text = report_to_json(r);
  EXPECT_TRUE(report_from_json(text) == r);
  EXPECT_EQ(report_to_json(report_from_json(text)), text);
}

TEST(SamplesIo, RoundTrip) {
  SamplesFile s;
  s.method = Method::kForm;
  s.dataset = DatasetKind::kSpiral;
  s.M = 3;
  s.seed = 11;
  s.source = "heldout";
  s.max_speed_ratio = 0.3;
  SampleRecord r;
  r.index = 4;
  r.x0 = vec2(0.1, -0.2);
  r.v0 = vec2(1.0 / 3.0, 2.0);
  r.endpoint = vec2(5.5, 1e-17);
  r.target = vec2(5.4, 0.0);
  SamplePath p;
  p.t = {0.0, 0.5, 1.0};
  p.x = {r.x0, vec2(1, 1), r.endpoint};
  p.v = {r.v0, vec2(2, 2), vec2(3, 3)};
  r.path = p;
  s.records.push_back(r);
  SampleRecord bare;
  bare.index = 5;
  bare.x0 = vec2(0, 0);
  bare.endpoint = vec2(1, 1);
  s.records.push_back(bare);

  std::ostringstream out;
  write_samples(out, s);
  std::istringstream in(out.str());
  const SamplesFile back = read_samples(in);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.method, s.method);
  EXPECT_EQ(back.dataset, s.dataset);
  EXPECT_EQ(back.source, "heldout");
  EXPECT_EQ(back.records[0].v0, r.v0);
  EXPECT_EQ(back.records[0].endpoint, r.endpoint);
  EXPECT_EQ(*back.records[0].target, *r.target);
  EXPECT_EQ(back.records[0].path->x, p.x);
  EXPECT_EQ(back.records[0].path->v, p.v);
  EXPECT_FALSE(back.records[1].target.has_value());
  EXPECT_FALSE(back.records[1].path.has_value());
  std::ostringstream again;
  write_samples(again, back);
  EXPECT_EQ(again.str(), out.str());

  std::istringstream bad("{\"schema_version\":1}\n");
  EXPECT_THROW(read_samples(bad), ParseError);
}

TEST(TextFiles, AtomicWrite) {
  const auto path = std::filesystem::temp_directory_path() / "form_io_text.txt";
  write_text_file(path, "hello\n");
  write_text_file(path, "world\n");
  EXPECT_EQ(read_text_file(path), "world\n");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text_file(path), DataError);
}

}  // namespace
}  // namespace form

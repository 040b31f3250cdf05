#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "form/datasets.hpp"
#include "form/errors.hpp"
#include "form/evaluation.hpp"
#include "form/io.hpp"
#include "form/parallel.hpp"
#include "form/sampling.hpp"
#include "form/svg.hpp"
#include "form/training.hpp"
#include "json.hpp"

#ifndef FORM_GIT_COMMIT
#define FORM_GIT_COMMIT "unknown"
#endif

namespace form::cli {
namespace {

using Json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// FNV-1a over a byte string.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

VecD parse_vec2(const std::string& text) {
  double a = 0, b = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> a >> comma >> b) || comma != ',' || !in.eof()) {
    throw UsageError("expected a vector 'x,y', got '" + text + "'");
  }
  VecD v(2);
  v << a, b;
  return v;
}

std::string config_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Expands a JSON config object into flags placed before the user's own flags.
// Keys already given on the command line are skipped: flags > config > defaults.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  Json cfg;
  try {
    cfg = Json::parse(read_text_file(*path));
  } catch (const Json::exception& e) {
    throw UsageError("config " + *path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config " + *path + ": expected a JSON object");
  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (has_flag(rest, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& item : value) {
        injected.push_back(flag);
        injected.push_back(config_value(item));
      }
    } else {
      injected.push_back(flag);
      injected.push_back(config_value(value));
    }
  }
  if (rest.empty()) return injected;
  // Keep the subcommand name first.
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

// ---------------------------------------------------------------- gen-data

struct GenDataOptions {
  std::string dataset, out;
  std::size_t n = 0, steps = 0, threads = 0;
  double duration = 0, gauss_var = 0, disc_radius = 0, speed_scale = 0, initial_speed = 0;
  double core_speed = 0, ring_speed = 0, f_par_amp = 0, f_perp_amp = 0, f_par_freq = 0;
  double f_perp_freq = 0, force_scale = 1.0;
  std::uint64_t seed = 42;
  std::string force_profile, perp = "ccw";
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }
};

void add_gen_data(CLI::App& app, GenDataOptions& o) {
  auto* sub = app.add_subcommand("gen-data", "Simulate a trajectory dataset to NDJSON");
  sub->add_option("--dataset", o.dataset, "onedot | halfmoons | spiral")
      ->required()
      ->check(CLI::IsMember({"onedot", "halfmoons", "spiral"}));
  sub->add_option("--out", o.out, "Output NDJSON path")->required();
  o.opts["n"] = sub->add_option("--n", o.n, "Number of trajectories");
  o.opts["steps"] = sub->add_option("--steps", o.steps, "Integration steps per trajectory");
  o.opts["duration"] = sub->add_option("--duration", o.duration, "Lab time span (s)");
  sub->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  o.opts["gauss-var"] = sub->add_option("--gauss-var", o.gauss_var, "Source variance per axis");
  o.opts["disc-radius"] = sub->add_option("--disc-radius", o.disc_radius, "Spiral source radius");
  o.opts["speed-scale"] = sub->add_option("--speed-scale", o.speed_scale, "Onedot v0 = k x0");
  o.opts["initial-speed"] = sub->add_option("--initial-speed", o.initial_speed, "Halfmoons |v0|");
  o.opts["core-speed"] = sub->add_option("--core-speed", o.core_speed, "Spiral core speed");
  o.opts["ring-speed"] = sub->add_option("--ring-speed", o.ring_speed, "Spiral ring speed");
  o.opts["force-profile"] = sub->add_option("--force-profile", o.force_profile, "constant | sine")
                                ->check(CLI::IsMember({"constant", "sine"}));
  o.opts["f-par-amp"] = sub->add_option("--f-par-amp", o.f_par_amp, "Parallel amplitude (du/s^2)");
  o.opts["f-perp-amp"] =
      sub->add_option("--f-perp-amp", o.f_perp_amp, "Perpendicular amplitude (du/s^2)");
  o.opts["f-par-freq"] = sub->add_option("--f-par-freq", o.f_par_freq, "Parallel frequency");
  o.opts["f-perp-freq"] = sub->add_option("--f-perp-freq", o.f_perp_freq, "Perpendicular frequency");
  sub->add_option("--force-scale", o.force_scale, "Multiply both amplitudes")->capture_default_str();
  sub->add_option("--perp-handedness", o.perp, "ccw | cw")
      ->check(CLI::IsMember({"ccw", "cw"}))
      ->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads (default FORM_LAB_THREADS or all)");
}

DatasetSpec build_spec(const GenDataOptions& o) {
  DatasetSpec s = DatasetSpec::defaults(dataset_kind_from_string(o.dataset));
  s.seed = o.seed;
  if (o.given("n")) s.n_points = o.n;
  if (o.given("steps")) s.n_steps = o.steps;
  if (o.given("duration")) s.duration = o.duration;
  if (o.given("gauss-var")) s.gauss_var = o.gauss_var;
  if (o.given("disc-radius")) s.disc_radius = o.disc_radius;
  if (o.given("speed-scale")) s.speed_scale = o.speed_scale;
  if (o.given("initial-speed")) s.initial_speed = o.initial_speed;
  if (o.given("core-speed")) s.core_speed = o.core_speed;
  if (o.given("ring-speed")) s.ring_speed = o.ring_speed;
  if (o.given("force-profile")) s.force_profile = force_profile_from_string(o.force_profile);
  if (o.given("f-par-amp")) s.f_par_amp = o.f_par_amp;
  if (o.given("f-perp-amp")) s.f_perp_amp = o.f_perp_amp;
  if (o.given("f-par-freq")) s.f_par_freq = o.f_par_freq;
  if (o.given("f-perp-freq")) s.f_perp_freq = o.f_perp_freq;
  s.scale_forces(o.force_scale);
  s.physics.perp = o.perp == "cw" ? Handedness::kClockwise : Handedness::kCounterClockwise;
  s.validate();
  return s;
}

int cmd_gen_data(const GenDataOptions& o, std::ostream& out) {
  const DatasetSpec spec = build_spec(o);
  const auto data = generate_dataset(spec, o.threads > 0 ? std::optional(o.threads) : std::nullopt);
  double vmax = 0.0;
  for (const auto& r : data) {
    for (const auto& s : r.steps) vmax = std::max(vmax, s.v.norm());
  }
  if (!(vmax < spec.physics.c)) throw NumericalFailure("recorded speed reached c");
  save_dataset(o.out, spec, data);
  out << "dataset " << to_string(spec.kind) << ": " << data.size() << " trajectories, "
      << spec.n_steps << " steps over " << format_double(spec.duration) << " s, seed " << spec.seed
      << '\n';
  out << "max speed / c = " << format_double(vmax / spec.physics.c) << '\n';
  out << "wrote " << o.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  std::string method, data, out, split = "train", form_input = "time-only";
  TrainConfig cfg;
};

void add_train(CLI::App& app, TrainOptions& o) {
  auto* sub = app.add_subcommand("train", "Train O1, O1O2 or ForM on a dataset file");
  sub->add_option("--method", o.method, "o1 | o1o2 | form")
      ->required()
      ->check(CLI::IsMember({"o1", "o1o2", "form"}, CLI::ignore_case));
  sub->add_option("--data", o.data, "Dataset NDJSON")->required();
  sub->add_option("--out", o.out, "Checkpoint JSON path")->required();
  sub->add_option("--steps,--epochs", o.cfg.steps, "Adam steps")->capture_default_str();
  sub->add_option("--batch-size", o.cfg.batch_size, "Batch size")->capture_default_str();
  sub->add_option("--lr", o.cfg.lr, "Adam learning rate")->capture_default_str();
  sub->add_option("--seed", o.cfg.seed, "Initialization and batch seed")->capture_default_str();
  sub->add_option("--hidden", o.cfg.hidden, "Hidden widths, e.g. 64,64")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--form-input", o.form_input, "time-only | time-and-position")
      ->check(CLI::IsMember({"time-only", "time-and-position"}))
      ->capture_default_str();
  sub->add_option("--loss-window", o.cfg.loss_window, "Steps per loss-curve point")
      ->capture_default_str();
  sub->add_flag("--o1o2-backprop-through-u1", o.cfg.o1o2_backprop_through_u1,
                "Let the acceleration loss update u1 through u2's input");
  sub->add_option("--split", o.split, "train (first 80%) | all")
      ->check(CLI::IsMember({"train", "all"}))
      ->capture_default_str();
}

int cmd_train(TrainOptions o, std::ostream& out) {
  const DatasetFile file = load_dataset(o.data);
  o.cfg.method = method_from_string(o.method);
  o.cfg.form_input_mode = form_input_mode_from_string(o.form_input);
  std::vector<TrajectoryRecord> data = file.trajectories;
  if (o.split == "train") data.resize(train_split_size(data.size()));
  const TrainedModel model = train(data, o.cfg, file.spec);
  save_checkpoint(o.out, model);
  out << display_name(model.method) << " on " << to_string(file.spec.kind) << " ("
      << data.size() << " trajectories, " << o.cfg.steps << " steps)\n";
  out << "final loss = " << format_double(model.final_loss) << '\n';
  out << "wrote " << o.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sampling options

struct SamplerOptions {
  std::size_t M = 100;
  std::string init_velocity = "dataset", v0, velocity_update = "comoving";
  std::string integrator = "trapezoid";
  bool fallback = false;
  double horizon = 0.0;
  CLI::Option* horizon_opt = nullptr;
};

void add_sampler_options(CLI::App* sub, SamplerOptions& o) {
  sub->add_option("--M", o.M, "Sampler steps")->capture_default_str();
  sub->add_option("--init-velocity", o.init_velocity, "dataset | zero | explicit")
      ->check(CLI::IsMember({"dataset", "zero", "explicit"}))
      ->capture_default_str();
  sub->add_option("--v0", o.v0, "Explicit initial velocity 'x,y'");
  sub->add_option("--velocity-update", o.velocity_update, "comoving | euler (ForM)")
      ->check(CLI::IsMember({"comoving", "euler"}))
      ->capture_default_str();
  sub->add_option("--integrator", o.integrator, "trapezoid | rk4 (ForM)")
      ->check(CLI::IsMember({"trapezoid", "rk4"}))
      ->capture_default_str();
  sub->add_flag("--lab-frame-fallback", o.fallback,
                "At v = 0 apply (f_par, f_perp) along the lab axes");
  o.horizon_opt = sub->add_option("--horizon", o.horizon, "Lab time to integrate (default: training duration)");
}

SamplerConfig build_sampler(const SamplerOptions& o, std::uint64_t seed) {
  SamplerConfig sc;
  sc.M = o.M;
  sc.seed = seed;
  if (o.init_velocity == "zero") sc.init_velocity = InitVelocityRule::kZero;
  if (o.init_velocity == "explicit") {
    if (o.v0.empty()) throw UsageError("--init-velocity explicit needs --v0");
    sc.init_velocity = InitVelocityRule::kExplicit;
    sc.explicit_velocity = parse_vec2(o.v0);
  }
  sc.velocity_update = o.velocity_update == "euler" ? VelocityUpdate::kEuler : VelocityUpdate::kCoMoving;
  sc.form_integrator = form_integrator_from_string(o.integrator);
  sc.lab_frame_fallback = o.fallback;
  if (o.horizon_opt->count() > 0) sc.horizon = o.horizon;
  sc.validate();
  return sc;
}

// ---------------------------------------------------------------- sample

struct SampleOptions {
  std::string model, data, out, source;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool paths = false;
  SamplerOptions sampler;
};

void add_sample(CLI::App& app, SampleOptions& o) {
  auto* sub = app.add_subcommand("sample", "Transport source points with a trained model");
  sub->add_option("--model", o.model, "Checkpoint JSON")->required();
  sub->add_option("--data", o.data, "Dataset NDJSON (held-out sources and targets)");
  sub->add_option("--out", o.out, "Samples NDJSON path")->required();
  sub->add_option("--source", o.source, "heldout | draw (default: heldout with --data)")
      ->check(CLI::IsMember({"heldout", "draw"}));
  sub->add_option("--n", o.n, "Number of points (default: all held-out, or 100 drawn)");
  sub->add_option("--seed", o.seed, "Seed for drawn sources")->capture_default_str();
  sub->add_flag("--paths", o.paths, "Store every sampler iterate");
  add_sampler_options(sub, o.sampler);
}

int cmd_sample(const SampleOptions& o, std::ostream& out) {
  const TrainedModel model = load_checkpoint(o.model);
  const SamplerConfig sc = build_sampler(o.sampler, o.seed);
  const std::string source = o.source.empty() ? (o.data.empty() ? "draw" : "heldout") : o.source;

  SamplesFile file;
  file.method = model.method;
  file.dataset = model.dataset.kind;
  file.M = sc.M;
  file.seed = o.seed;
  file.source = source;

  std::vector<VecD> x0s;
  std::vector<std::optional<VecD>> targets;
  std::vector<std::size_t> indices;
  if (source == "heldout") {
    if (o.data.empty()) throw UsageError("--source heldout needs --data");
    const DatasetFile data = load_dataset(o.data);
    if (data.spec.kind != model.dataset.kind) {
      throw UsageError("model was trained on " + to_string(model.dataset.kind) + " but --data is " +
                       to_string(data.spec.kind));
    }
    const HeldOutSet h = held_out(data.trajectories);
    const std::size_t n = o.n > 0 ? std::min(o.n, h.x0.size()) : h.x0.size();
    for (std::size_t i = 0; i < n; ++i) {
      x0s.push_back(h.x0[i]);
      targets.emplace_back(h.target[i]);
      indices.push_back(h.index[i]);
    }
  } else {
    const DatasetSpec spec = o.data.empty() ? model.dataset : load_dataset(o.data).spec;
    x0s = draw_sources(spec, o.n > 0 ? o.n : 100, o.seed);
    for (std::size_t i = 0; i < x0s.size(); ++i) {
      targets.emplace_back(std::nullopt);
      indices.push_back(i);
    }
  }

  std::vector<SamplePath> paths(x0s.size());
  parallel_for(x0s.size(), [&](std::size_t i) { paths[i] = sample(model, x0s[i], sc); });

  double vmax = 0.0, err_sum = 0.0;
  std::size_t with_target = 0;
  for (std::size_t i = 0; i < x0s.size(); ++i) {
    SampleRecord r;
    r.index = indices[i];
    r.x0 = x0s[i];
    if (!paths[i].v.empty()) r.v0 = paths[i].v.front();
    r.endpoint = paths[i].endpoint();
    r.target = targets[i];
    if (r.target) {
      err_sum += (r.endpoint - *r.target).norm();
      ++with_target;
    }
    if (o.paths) r.path = paths[i];
    vmax = std::max(vmax, paths[i].max_speed());
    file.records.push_back(std::move(r));
  }
  file.max_speed_ratio = vmax / model.physics.c;
  if (model.method == Method::kForm && !(file.max_speed_ratio < 1.0)) {
    throw NumericalFailure("ForM sampler reached the speed of light (max |v|/c = " +
                           format_double(file.max_speed_ratio) + ")");
  }
  std::ostringstream text;
  write_samples(text, file);
  write_text_file(o.out, text.str());
  out << "sampled " << file.records.size() << " points with " << display_name(model.method)
      << " (M=" << sc.M << ", source " << source << ")\n";
  if (model.method == Method::kForm) {
    out << "max speed / c = " << format_double(file.max_speed_ratio) << '\n';
  }
  if (with_target > 0) {
    out << "paired loss = " << format_double(err_sum / double(with_target)) << '\n';
  }
  out << "wrote " << o.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::vector<std::string> models, data;
  std::string mode = "paired", report;
  bool strict = false, reference = false;
  SamplerOptions sampler;
};

void add_eval(CLI::App& app, EvalOptions& o) {
  auto* sub = app.add_subcommand("eval", "Evaluate models on held-out trajectories");
  sub->add_option("--model", o.models, "Checkpoint JSON (repeatable)")->required();
  sub->add_option("--data", o.data, "Dataset NDJSON (repeatable, one per kind)")->required();
  sub->add_option("--mode", o.mode, "paired | chamfer")
      ->check(CLI::IsMember({"paired", "chamfer"}))
      ->capture_default_str();
  sub->add_option("--report", o.report, "Report JSON path");
  sub->add_flag("--strict", o.strict, "Fail unless all nine cells are present");
  sub->add_flag("--reference", o.reference, "Show published reference losses alongside");
  add_sampler_options(sub, o.sampler);
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const SamplerConfig sc = build_sampler(o.sampler, 0);
  const LossMode mode = loss_mode_from_string(o.mode);
  std::map<DatasetKind, DatasetFile> datasets;
  std::uint64_t h = fnv1a(o.mode + '|' + std::to_string(sc.M) + '|' + o.sampler.init_velocity +
                          '|' + o.sampler.v0 + '|' + o.sampler.velocity_update + '|' +
                          o.sampler.integrator + '|' + (o.sampler.fallback ? "1" : "0"));
  for (const auto& path : o.data) {
    const std::string text = read_text_file(path);
    h = fnv1a(text, h);
    std::istringstream in(text);
    DatasetFile file = read_dataset(in);
    const DatasetKind kind = file.spec.kind;
    if (!datasets.emplace(kind, std::move(file)).second) {
      throw UsageError("two --data files of kind " + to_string(kind));
    }
  }
  std::vector<EvalCell> cells;
  for (const auto& path : o.models) {
    const std::string text = read_text_file(path);
    h = fnv1a(text, h);
    const TrainedModel model = checkpoint_from_json(text);
    const auto it = datasets.find(model.dataset.kind);
    if (it == datasets.end()) {
      throw UsageError(path + ": no --data file of kind " + to_string(model.dataset.kind));
    }
    cells.push_back(evaluate_model(model, it->second.trajectories, sc, mode));
  }
  const EvalReport report =
      make_report(cells, mode,
                  {{"commit", FORM_GIT_COMMIT},
                   {"config_hash", hex(h)},
                   {"M", std::to_string(sc.M)},
                   {"integrator", o.sampler.integrator},
                   {"velocity_update", o.sampler.velocity_update}});
  out << render_table(report, o.reference);
  if (!o.report.empty()) {
    write_text_file(o.report, report_to_json(report));
    out << "wrote " << o.report << '\n';
  }
  if (o.strict && !report.complete()) {
    err << "error: report is missing cells (" << report.cells.size() << " of 9)\n";
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- plot

struct PlotOptions {
  std::string in, out, title;
  bool trajectories = false;
  int width = 640, height = 640;
};

void add_plot(CLI::App& app, PlotOptions& o) {
  auto* sub = app.add_subcommand("plot", "Render a dataset or samples file as SVG");
  sub->add_option("--in", o.in, "Dataset or samples NDJSON")->required();
  sub->add_option("--out", o.out, "SVG path")->required();
  sub->add_flag("--trajectories", o.trajectories, "Draw one polyline per trajectory");
  sub->add_option("--title", o.title, "Figure title");
  sub->add_option("--width", o.width, "Width in px")->capture_default_str();
  sub->add_option("--height", o.height, "Height in px")->capture_default_str();
}

int cmd_plot(const PlotOptions& o, std::ostream& out) {
  const std::string text = read_text_file(o.in);
  const std::string first = text.substr(0, text.find('\n'));
  bool is_samples = false;
  try {
    const Json header = Json::parse(first);
    is_samples = header.is_object() && header.value("kind", "") == "samples";
  } catch (const Json::exception& e) {
    throw ParseError(1, std::string("invalid JSON: ") + e.what());
  }
  ScatterFigure fig;
  std::istringstream in(text);
  if (is_samples) {
    const SamplesFile s = read_samples(in);
    fig.title = display_name(s.method) + " samples on " + to_string(s.dataset);
    fig.target_label = "generated";
    for (const auto& r : s.records) {
      fig.sources.push_back(r.x0);
      fig.targets.push_back(r.endpoint);
      if (o.trajectories) {
        if (!r.path) throw UsageError("samples file has no paths; rerun sample with --paths");
        fig.trajectories.push_back(r.path->x);
      }
    }
  } else {
    const DatasetFile d = read_dataset(in);
    fig.title = to_string(d.spec.kind) + " dataset";
    for (const auto& r : d.trajectories) {
      fig.sources.push_back(r.steps.front().x);
      fig.targets.push_back(r.steps.back().x);
      if (o.trajectories) {
        std::vector<VecD> line;
        for (const auto& s : r.steps) line.push_back(s.x);
        fig.trajectories.push_back(std::move(line));
      }
    }
  }
  if (!o.title.empty()) fig.title = o.title;
  write_text_file(o.out, render_svg(fig, o.width, o.height));
  out << "plotted " << fig.sources.size() << " sources, " << fig.targets.size() << " targets";
  if (o.trajectories) out << ", " << fig.trajectories.size() << " trajectories";
  out << "\nwrote " << o.out << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"form_lab: relativistic force matching and flow-matching baselines", "form_lab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.footer("Every subcommand also accepts --config FILE.json; flags override config values.");
  GenDataOptions gen;
  TrainOptions tr;
  SampleOptions sm;
  EvalOptions ev;
  PlotOptions pl;
  add_gen_data(app, gen);
  add_train(app, tr);
  add_sample(app, sm);
  add_eval(app, ev);
  add_plot(app, pl);

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::reverse(expanded.begin(), expanded.end());
    try {
      app.parse(expanded);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (app.got_subcommand("gen-data")) return cmd_gen_data(gen, out);
    if (app.got_subcommand("train")) return cmd_train(tr, out);
    if (app.got_subcommand("sample")) return cmd_sample(sm, out);
    if (app.got_subcommand("eval")) return cmd_eval(ev, out, err);
    if (app.got_subcommand("plot")) return cmd_plot(pl, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    // NonFiniteError, SimulationError, DomainError, DegenerateVelocityError and
    // anything unexpected from the numerics.
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace form::cli

#include "form/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "form/errors.hpp"
#include "json.hpp"

namespace form {
namespace {

using Json = nlohmann::ordered_json;

Json vec_to_json(const VecD& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

VecD vec_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("expected a numeric array");
  VecD v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

std::string handedness_name(Handedness h) {
  return h == Handedness::kCounterClockwise ? "ccw" : "cw";
}

Handedness handedness_from(const std::string& s) {
  if (s == "ccw") return Handedness::kCounterClockwise;
  if (s == "cw") return Handedness::kClockwise;
  throw DataError("unknown perpendicular handedness '" + s + "'");
}

Json physics_to_json(const PhysicsConfig& p) {
  return Json{{"c", p.c}, {"m", p.m}, {"perp_handedness", handedness_name(p.perp)}};
}

PhysicsConfig physics_from_json(const Json& j) {
  PhysicsConfig p;
  p.c = j.at("c").get<double>();
  p.m = j.at("m").get<double>();
  p.perp = handedness_from(j.value("perp_handedness", std::string("ccw")));
  return p;
}

Json units_to_json(const UnitSystem& u) {
  return Json{{"meters_per_du", u.meters_per_du},
              {"c_du", u.c_du},
              {"length_label", u.length_label},
              {"time_label", u.time_label}};
}

UnitSystem units_from_json(const Json& j) {
  UnitSystem u;
  u.meters_per_du = j.at("meters_per_du").get<double>();
  u.c_du = j.at("c_du").get<double>();
  u.length_label = j.value("length_label", u.length_label);
  u.time_label = j.value("time_label", u.time_label);
  return u;
}

Json generator_to_json(const DatasetSpec& s) {
  return Json{{"gauss_var", s.gauss_var},         {"disc_radius", s.disc_radius},
              {"speed_scale", s.speed_scale},     {"initial_speed", s.initial_speed},
              {"core_speed", s.core_speed},       {"ring_speed", s.ring_speed},
              {"force_profile", to_string(s.force_profile)},
              {"f_par_amp", s.f_par_amp},         {"f_perp_amp", s.f_perp_amp},
              {"f_par_freq", s.f_par_freq},       {"f_perp_freq", s.f_perp_freq}};
}

void generator_from_json(const Json& j, DatasetSpec& s) {
  s.gauss_var = j.at("gauss_var").get<double>();
  s.disc_radius = j.at("disc_radius").get<double>();
  s.speed_scale = j.at("speed_scale").get<double>();
  s.initial_speed = j.at("initial_speed").get<double>();
  s.core_speed = j.at("core_speed").get<double>();
  s.ring_speed = j.at("ring_speed").get<double>();
  s.force_profile = force_profile_from_string(j.at("force_profile").get<std::string>());
  s.f_par_amp = j.at("f_par_amp").get<double>();
  s.f_perp_amp = j.at("f_perp_amp").get<double>();
  s.f_par_freq = j.at("f_par_freq").get<double>();
  s.f_perp_freq = j.at("f_perp_freq").get<double>();
}

Json spec_to_json(const DatasetSpec& s) {
  return Json{{"kind", to_string(s.kind)},
              {"n_points", s.n_points},
              {"n_steps", s.n_steps},
              {"duration", s.duration},
              {"seed", s.seed},
              {"unit_system", units_to_json(s.units)},
              {"physics", physics_to_json(s.physics)},
              {"generator", generator_to_json(s)}};
}

DatasetSpec spec_from_json(const Json& j) {
  DatasetSpec s = DatasetSpec::defaults(dataset_kind_from_string(j.at("kind").get<std::string>()));
  s.n_points = j.at("n_points").get<std::size_t>();
  s.n_steps = j.at("n_steps").get<std::size_t>();
  s.duration = j.at("duration").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.units = units_from_json(j.at("unit_system"));
  s.physics = physics_from_json(j.at("physics"));
  generator_from_json(j.at("generator"), s);
  return s;
}

void append_number(std::string& out, double v) { out += format_double(v); }

void append_vec(std::string& out, const VecD& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    append_number(out, v[i]);
  }
  out += ']';
}

std::string trajectory_line(const TrajectoryRecord& r) {
  std::string out = "{\"index\":" + std::to_string(r.index) + ",\"steps\":[";
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const auto& s = r.steps[k];
    if (k > 0) out += ',';
    out += "{\"t\":";
    append_number(out, s.t);
    out += ",\"x\":";
    append_vec(out, s.x);
    out += ",\"v\":";
    append_vec(out, s.v);
    out += ",\"a\":";
    append_vec(out, s.a);
    out += ",\"f\":";
    append_vec(out, s.f);
    out += ",\"f_par\":";
    append_number(out, s.f_par);
    out += ",\"f_perp\":";
    append_number(out, s.f_perp);
    out += '}';
  }
  out += "]}";
  return out;
}

Json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return Json::parse(line);
  } catch (const Json::exception& e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
}

Json mlp_to_json(const MlpParams& p) {
  Json weights = Json::array();
  Json biases = Json::array();
  for (const auto& l : p.layers) {
    Json w = Json::array();
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    weights.push_back(std::move(w));
    biases.push_back(vec_to_json(l.bias));
  }
  return Json{{"layer_dims", p.layer_dims},
              {"activation", to_string(p.hidden)},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)}};
}

MlpParams mlp_from_json(const Json& j) {
  MlpParams p;
  p.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
  p.hidden = activation_from_string(j.at("activation").get<std::string>());
  const Json& weights = j.at("weights");
  const Json& biases = j.at("biases");
  if (p.layer_dims.size() < 2 || weights.size() != p.layer_dims.size() - 1 ||
      biases.size() != weights.size()) {
    throw DataError("checkpoint head: layer count does not match layer_dims");
  }
  for (std::size_t i = 0; i + 1 < p.layer_dims.size(); ++i) {
    const auto rows = static_cast<Eigen::Index>(p.layer_dims[i + 1]);
    const auto cols = static_cast<Eigen::Index>(p.layer_dims[i]);
    if (weights[i].size() != static_cast<std::size_t>(rows * cols)) {
      throw DataError("checkpoint head: weight array " + std::to_string(i) + " has " +
                      std::to_string(weights[i].size()) + " entries, expected " +
                      std::to_string(rows * cols));
    }
    DenseLayer l{Eigen::MatrixXd(rows, cols), vec_from_json(biases[i])};
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) l.weight(r, c) = weights[i][k++].get<double>();
    }
    p.layers.push_back(std::move(l));
  }
  p.validate();
  return p;
}

Json train_config_to_json(const TrainConfig& c) {
  return Json{{"method", to_string(c.method)},
              {"steps", c.steps},
              {"batch_size", c.batch_size},
              {"lr", c.lr},
              {"seed", c.seed},
              {"form_input_mode", to_string(c.form_input_mode)},
              {"hidden", c.hidden},
              {"loss_window", c.loss_window},
              {"o1o2_backprop_through_u1", c.o1o2_backprop_through_u1}};
}

TrainConfig train_config_from_json(const Json& j) {
  TrainConfig c;
  c.method = method_from_string(j.at("method").get<std::string>());
  c.steps = j.at("steps").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.lr = j.at("lr").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.form_input_mode = form_input_mode_from_string(j.at("form_input_mode").get<std::string>());
  c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  c.loss_window = j.at("loss_window").get<std::size_t>();
  c.o1o2_backprop_through_u1 = j.value("o1o2_backprop_through_u1", false);
  return c;
}

template <class F>
auto rethrow_as_data_error(const char* what, F&& fn) {
  try {
    return fn();
  } catch (const Error&) {
    throw;
  } catch (const Json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_dataset(std::ostream& out, const DatasetSpec& spec,
                   const std::vector<TrajectoryRecord>& trajectories) {
  Json header{{"schema_version", kSchemaVersion}};
  header.update(spec_to_json(spec));
  out << header.dump() << '\n';
  for (const auto& r : trajectories) out << trajectory_line(r) << '\n';
}

DatasetFile read_dataset(std::istream& in) {
  DatasetFile file;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_no;
  const Json header = parse_line(line, line_no);
  try {
    if (header.at("schema_version").get<int>() != kSchemaVersion) {
      throw ParseError(line_no, "unsupported schema_version");
    }
    file.spec = spec_from_json(header);
    file.spec.validate();
  } catch (const Json::exception& e) {
    throw ParseError(line_no, std::string("bad header: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line_no, std::string("bad header: ") + e.what());
  }
  const std::size_t dim = 2;
  file.trajectories.reserve(file.spec.n_points);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const Json j = parse_line(line, line_no);
    try {
      TrajectoryRecord r;
      r.index = j.at("index").get<std::size_t>();
      if (r.index != file.trajectories.size()) {
        throw ParseError(line_no, "trajectory index " + std::to_string(r.index) +
                                      " out of order, expected " +
                                      std::to_string(file.trajectories.size()));
      }
      const Json& steps = j.at("steps");
      if (steps.size() != file.spec.n_steps + 1) {
        throw ParseError(line_no, "trajectory has " + std::to_string(steps.size()) +
                                      " steps, header says " +
                                      std::to_string(file.spec.n_steps + 1));
      }
      r.steps.reserve(steps.size());
      for (const auto& s : steps) {
        StepRecord step;
        step.t = s.at("t").get<double>();
        step.x = vec_from_json(s.at("x"));
        step.v = vec_from_json(s.at("v"));
        step.a = vec_from_json(s.at("a"));
        step.f = vec_from_json(s.at("f"));
        step.f_par = s.at("f_par").get<double>();
        step.f_perp = s.at("f_perp").get<double>();
        if (static_cast<std::size_t>(step.x.size()) != dim ||
            static_cast<std::size_t>(step.v.size()) != dim ||
            static_cast<std::size_t>(step.a.size()) != dim ||
            static_cast<std::size_t>(step.f.size()) != dim) {
          throw ParseError(line_no, "step vectors must be 2-D");
        }
        r.steps.push_back(std::move(step));
      }
      file.trajectories.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw ParseError(line_no, std::string("bad trajectory: ") + e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, std::string("bad trajectory: ") + e.what());
    }
  }
  if (file.trajectories.size() != file.spec.n_points) {
    throw ParseError(line_no, "file has " + std::to_string(file.trajectories.size()) +
                                  " trajectories, header says " +
                                  std::to_string(file.spec.n_points));
  }
  return file;
}

void save_dataset(const std::filesystem::path& path, const DatasetSpec& spec,
                  const std::vector<TrajectoryRecord>& trajectories) {
  std::ostringstream out;
  write_dataset(out, spec, trajectories);
  write_text_file(path, out.str());
}

DatasetFile load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  return read_dataset(in);
}

std::string checkpoint_to_json(const TrainedModel& model) {
  model.validate();
  Json heads = Json::object();
  if (model.u1) heads["u1"] = mlp_to_json(*model.u1);
  if (model.u2) heads["u2"] = mlp_to_json(*model.u2);
  if (model.force) heads["force"] = mlp_to_json(*model.force);
  Json j{{"schema_version", kSchemaVersion},
         {"method", to_string(model.method)},
         {"form_input_mode", to_string(model.form_input_mode)},
         {"duration", model.duration},
         {"heads", std::move(heads)},
         {"physics", physics_to_json(model.physics)},
         {"unit_system", units_to_json(model.units)},
         {"dataset", spec_to_json(model.dataset)},
         {"train_config", train_config_to_json(model.train_config)},
         {"final_loss", model.final_loss},
         {"seed", model.train_config.seed},
         {"loss_curve", model.loss_curve}};
  return j.dump(1) + '\n';
}

TrainedModel checkpoint_from_json(const std::string& text) {
  return rethrow_as_data_error("checkpoint", [&] {
    const Json j = Json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw DataError("checkpoint: unsupported schema_version");
    }
    TrainedModel m;
    m.method = method_from_string(j.at("method").get<std::string>());
    m.form_input_mode = form_input_mode_from_string(j.at("form_input_mode").get<std::string>());
    m.duration = j.at("duration").get<double>();
    const Json& heads = j.at("heads");
    if (heads.contains("u1")) m.u1 = mlp_from_json(heads.at("u1"));
    if (heads.contains("u2")) m.u2 = mlp_from_json(heads.at("u2"));
    if (heads.contains("force")) m.force = mlp_from_json(heads.at("force"));
    m.physics = physics_from_json(j.at("physics"));
    m.units = units_from_json(j.at("unit_system"));
    m.dataset = spec_from_json(j.at("dataset"));
    m.train_config = train_config_from_json(j.at("train_config"));
    m.final_loss = j.at("final_loss").get<double>();
    m.loss_curve = j.at("loss_curve").get<std::vector<double>>();
    m.validate();
    return m;
  });
}

void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model) {
  write_text_file(path, checkpoint_to_json(model));
}

TrainedModel load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_text_file(path));
}

std::string report_to_json(const EvalReport& report) {
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    cells.push_back(Json{{"dataset", to_string(c.dataset)},
                         {"method", to_string(c.method)},
                         {"loss", c.loss},
                         {"n_samples", c.n_samples},
                         {"M", c.M},
                         {"seed", c.seed}});
  }
  Json j{{"schema_version", kSchemaVersion},
         {"mode", to_string(report.mode)},
         {"unit", report.unit},
         {"cells", std::move(cells)},
         {"ranking", report.ranking},
         {"metadata", report.metadata}};
  return j.dump(1) + '\n';
}

EvalReport report_from_json(const std::string& text) {
  return rethrow_as_data_error("report", [&] {
    const Json j = Json::parse(text);
    EvalReport r;
    r.mode = loss_mode_from_string(j.at("mode").get<std::string>());
    r.unit = j.at("unit").get<std::string>();
    for (const auto& c : j.at("cells")) {
      EvalCell cell;
      cell.dataset = dataset_kind_from_string(c.at("dataset").get<std::string>());
      cell.method = method_from_string(c.at("method").get<std::string>());
      cell.loss = c.at("loss").get<double>();
      cell.n_samples = c.at("n_samples").get<std::size_t>();
      cell.M = c.at("M").get<std::size_t>();
      cell.seed = c.at("seed").get<std::uint64_t>();
      r.cells.push_back(cell);
    }
    r.ranking = j.at("ranking").get<std::map<std::string, std::vector<std::string>>>();
    r.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    return r;
  });
}

void write_samples(std::ostream& out, const SamplesFile& samples) {
  Json header{{"schema_version", kSchemaVersion},
              {"kind", "samples"},
              {"method", to_string(samples.method)},
              {"dataset", to_string(samples.dataset)},
              {"M", samples.M},
              {"seed", samples.seed},
              {"source", samples.source},
              {"n", samples.records.size()},
              {"max_speed_ratio", samples.max_speed_ratio}};
  out << header.dump() << '\n';
  for (const auto& r : samples.records) {
    Json j{{"index", r.index}, {"x0", vec_to_json(r.x0)}};
    if (r.v0.size() > 0) j["v0"] = vec_to_json(r.v0);
    j["endpoint"] = vec_to_json(r.endpoint);
    if (r.target) j["target"] = vec_to_json(*r.target);
    if (r.path) {
      Json xs = Json::array(), vs = Json::array();
      for (const auto& x : r.path->x) xs.push_back(vec_to_json(x));
      for (const auto& v : r.path->v) vs.push_back(vec_to_json(v));
      j["path"] = Json{{"t", r.path->t}, {"x", std::move(xs)}, {"v", std::move(vs)}};
    }
    out << j.dump() << '\n';
  }
}

SamplesFile read_samples(std::istream& in) {
  SamplesFile s;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const Json header = parse_line(line, line_no);
  std::size_t expected = 0;
  try {
    if (header.at("kind").get<std::string>() != "samples") {
      throw ParseError(line_no, "not a samples file");
    }
    s.method = method_from_string(header.at("method").get<std::string>());
    s.dataset = dataset_kind_from_string(header.at("dataset").get<std::string>());
    s.M = header.at("M").get<std::size_t>();
    s.seed = header.at("seed").get<std::uint64_t>();
    s.source = header.at("source").get<std::string>();
    s.max_speed_ratio = header.at("max_speed_ratio").get<double>();
    expected = header.at("n").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw ParseError(line_no, std::string("bad header: ") + e.what());
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const Json j = parse_line(line, line_no);
    try {
      SampleRecord r;
      r.index = j.at("index").get<std::size_t>();
      r.x0 = vec_from_json(j.at("x0"));
      if (j.contains("v0")) r.v0 = vec_from_json(j.at("v0"));
      r.endpoint = vec_from_json(j.at("endpoint"));
      if (j.contains("target")) r.target = vec_from_json(j.at("target"));
      if (j.contains("path")) {
        SamplePath p;
        p.t = j.at("path").at("t").get<std::vector<double>>();
        for (const auto& x : j.at("path").at("x")) p.x.push_back(vec_from_json(x));
        for (const auto& v : j.at("path").at("v")) p.v.push_back(vec_from_json(v));
        r.path = std::move(p);
      }
      s.records.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw ParseError(line_no, std::string("bad sample: ") + e.what());
    }
  }
  if (s.records.size() != expected) {
    throw ParseError(line_no, "samples file has " + std::to_string(s.records.size()) +
                                  " records, header says " + std::to_string(expected));
  }
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace form

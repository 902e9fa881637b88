// JSON scenario parsing.  Strict schema: every key is checked by name, every
// value by type and domain, and error messages carry the dotted key path.
#include "raystone/config.hpp"

#include "raystone/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

namespace raystone {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Tracks which keys of one JSON object were consumed; finish() rejects the rest.
class ObjectView {
 public:
  ObjectView(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  const json* find(const std::string& key) {
    seen_.push_back(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string sub(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        fail(join(path_, it.key()), "unknown key");
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string> seen_;
};

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<std::int64_t>();
}

int as_count(const json& v, const std::string& key, std::int64_t lo, std::int64_t hi) {
  std::int64_t n = as_integer(v, key);
  if (n < lo || n > hi) {
    fail(key, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(n);
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

Vec2<double> as_vec2(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) fail(key, "expected an array of two numbers");
  return {as_number(v[0], key + "[0]"), as_number(v[1], key + "[1]")};
}

double as_positive(const json& v, const std::string& key) {
  double x = as_number(v, key);
  if (!(x > 0.0)) fail(key, "expected a strictly positive number");
  return x;
}

void require_inside(const WorkingBox<double>& box, const Vec2<double>& x, const std::string& key) {
  if (!box.contains(x)) fail(key, "point lies outside the working box");
}

void require_nonzero(const Vec2<double>& v, const std::string& key) {
  if (v.norm() == 0.0) fail(key, "expected a nonzero vector");
}

WorkingBox<double> parse_box(const json& j, const std::string& key) {
  ObjectView v(j, key);
  WorkingBox<double> box;
  if (const json* lo = v.find("lo")) box.lo = as_vec2(*lo, v.sub("lo"));
  if (const json* hi = v.find("hi")) box.hi = as_vec2(*hi, v.sub("hi"));
  v.finish();
  if (!(box.lo[0] < box.hi[0]) || !(box.lo[1] < box.hi[1])) {
    fail(key, "'lo' must be componentwise below 'hi'");
  }
  return box;
}

GaussBump<double> parse_material_bump(const json& j, const std::string& key) {
  ObjectView v(j, key);
  GaussBump<double> bump;
  const json* param = v.find("param");
  if (param == nullptr) fail(v.sub("param"), "missing required key");
  const std::string name = as_string(*param, v.sub("param"));
  if (name == "rho") {
    bump.param = MaterialParam::kRho;
  } else if (name == "lambda") {
    bump.param = MaterialParam::kLam;
  } else if (name == "mu") {
    bump.param = MaterialParam::kMu;
  } else {
    fail(v.sub("param"), "expected one of 'rho', 'lambda', 'mu'");
  }
  if (const json* a = v.find("amplitude")) bump.amplitude = as_number(*a, v.sub("amplitude"));
  if (const json* c = v.find("center")) bump.center = as_vec2(*c, v.sub("center"));
  if (const json* w = v.find("width")) bump.width = as_positive(*w, v.sub("width"));
  v.finish();
  return bump;
}

MaterialField<double> parse_material(const json& j, const std::string& key,
                                     const WorkingBox<double>& box) {
  ObjectView v(j, key);
  MaterialPoint<double> base;
  if (const json* r = v.find("rho")) base.rho = as_positive(*r, v.sub("rho"));
  if (const json* l = v.find("lambda")) base.lam = as_positive(*l, v.sub("lambda"));
  if (const json* m = v.find("mu")) base.mu = as_positive(*m, v.sub("mu"));
  std::vector<GaussBump<double>> bumps;
  if (const json* b = v.find("bumps")) {
    if (!b->is_array()) fail(v.sub("bumps"), "expected an array");
    for (std::size_t i = 0; i < b->size(); ++i) {
      bumps.push_back(parse_material_bump((*b)[i], v.sub("bumps[" + std::to_string(i) + "]")));
    }
  }
  v.finish();
  try {
    return MaterialField<double>(base, std::move(bumps), box);
  } catch (const InvalidInput& e) {
    fail(key, e.what());
  }
}

MetricBump<double> parse_metric_bump(const json& j, const std::string& key) {
  ObjectView v(j, key);
  MetricBump<double> bump;
  const json* entry = v.find("entry");
  if (entry == nullptr) fail(v.sub("entry"), "missing required key");
  const std::string name = as_string(*entry, v.sub("entry"));
  if (name == "g11") {
    bump.entry = MetricEntry::kG11;
  } else if (name == "g12") {
    bump.entry = MetricEntry::kG12;
  } else if (name == "g22") {
    bump.entry = MetricEntry::kG22;
  } else {
    fail(v.sub("entry"), "expected one of 'g11', 'g12', 'g22'");
  }
  if (const json* a = v.find("amplitude")) bump.amplitude = as_number(*a, v.sub("amplitude"));
  if (const json* c = v.find("center")) bump.center = as_vec2(*c, v.sub("center"));
  if (const json* w = v.find("width")) bump.width = as_positive(*w, v.sub("width"));
  v.finish();
  return bump;
}

BoundaryMetric<double> parse_metric(const json& j, const std::string& key,
                                    const WorkingBox<double>& box) {
  ObjectView v(j, key);
  Mat2<double> base = Mat2<double>::Identity();
  if (const json* g = v.find("g11")) base(0, 0) = as_number(*g, v.sub("g11"));
  if (const json* g = v.find("g12")) base(0, 1) = base(1, 0) = as_number(*g, v.sub("g12"));
  if (const json* g = v.find("g22")) base(1, 1) = as_number(*g, v.sub("g22"));
  std::vector<MetricBump<double>> bumps;
  if (const json* b = v.find("bumps")) {
    if (!b->is_array()) fail(v.sub("bumps"), "expected an array");
    for (std::size_t i = 0; i < b->size(); ++i) {
      bumps.push_back(parse_metric_bump((*b)[i], v.sub("bumps[" + std::to_string(i) + "]")));
    }
  }
  v.finish();
  try {
    return BoundaryMetric<double>(base, std::move(bumps), box);
  } catch (const InvalidInput& e) {
    fail(key, e.what());
  }
}

XYGrid<double> parse_grid(const json& j, const std::string& key, const WorkingBox<double>& box) {
  ObjectView v(j, key);
  Vec2<double> lo(-3.5, -2.0);
  Vec2<double> hi(0.5, 2.0);
  int n1 = 41;
  int n2 = 21;
  if (const json* p = v.find("lo")) lo = as_vec2(*p, v.sub("lo"));
  if (const json* p = v.find("hi")) hi = as_vec2(*p, v.sub("hi"));
  if (const json* p = v.find("n")) {
    if (!p->is_array() || p->size() != 2) fail(v.sub("n"), "expected an array of two integers");
    n1 = as_count((*p)[0], v.sub("n[0]"), 1, 4096);
    n2 = as_count((*p)[1], v.sub("n[1]"), 1, 4096);
  }
  v.finish();
  for (int axis = 0; axis < 2; ++axis) {
    const int n = axis == 0 ? n1 : n2;
    if (n > 1 && !(lo[axis] < hi[axis])) {
      fail(key, "'lo' must be below 'hi' along any axis with more than one sample");
    }
  }
  require_inside(box, lo, join(key, "lo"));
  require_inside(box, hi, join(key, "hi"));
  return uniform_xy(lo, hi, n1, n2);
}

ScenarioConfig parse_config_json(const json& root, const std::string& origin) {
  if (!root.is_object()) {
    throw ConfigError("config " + origin + ": top level must be a JSON object");
  }
  ScenarioConfig cfg = default_config();
  ObjectView v(root, "");

  if (const json* j = v.find("seed")) {
    if (j->is_number_unsigned()) {
      cfg.seed = j->get<std::uint64_t>();
    } else if (j->is_number_integer() && j->get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(j->get<std::int64_t>());
    } else {
      fail("seed", "expected a non-negative integer");
    }
  }

  if (const json* j = v.find("mode")) {
    const std::string mode = as_string(*j, "mode");
    if (mode == "rayleigh") {
      cfg.mode = WaveKind::kRayleigh;
    } else if (mode == "stoneley") {
      cfg.mode = WaveKind::kStoneley;
    } else {
      fail("mode", "expected 'rayleigh' or 'stoneley'");
    }
  }

  WorkingBox<double> box;
  if (const json* j = v.find("box")) box = parse_box(*j, "box");

  if (const json* j = v.find("material")) {
    cfg.material = parse_material(*j, "material", box);
  } else {
    cfg.material = MaterialField<double>(MaterialPoint<double>{}, {}, box);
  }

  if (const json* j = v.find("pair")) {
    ObjectView p(*j, "pair");
    const json* plus = p.find("plus");
    const json* minus = p.find("minus");
    if (plus == nullptr) fail("pair.plus", "missing required key");
    if (minus == nullptr) fail("pair.minus", "missing required key");
    cfg.pair.plus = parse_material(*plus, "pair.plus", box);
    cfg.pair.minus = parse_material(*minus, "pair.minus", box);
    p.finish();
  } else {
    cfg.pair.plus = MaterialField<double>(MaterialPoint<double>{3.0, 3.0, 3.0}, {}, box);
    cfg.pair.minus = MaterialField<double>(MaterialPoint<double>{}, {}, box);
  }

  if (const json* j = v.find("metric")) {
    cfg.metric = parse_metric(*j, "metric", box);
  } else {
    cfg.metric = BoundaryMetric<double>(Mat2<double>::Identity(), {}, box);
  }

  if (const json* j = v.find("eval_point")) cfg.eval_point = as_vec2(*j, "eval_point");
  require_inside(box, cfg.eval_point, "eval_point");

  if (const json* j = v.find("scan")) {
    ObjectView s(*j, "scan");
    if (const json* n = s.find("samples")) {
      cfg.scan_samples = as_count(*n, s.sub("samples"), 16, 10000000);
    }
    s.finish();
  }

  if (const json* j = v.find("symbol_point")) {
    ObjectView s(*j, "symbol_point");
    if (const json* x = s.find("x")) cfg.symbol_point.x = as_vec2(*x, s.sub("x"));
    if (const json* tau = s.find("tau")) {
      cfg.symbol_point.tau = as_positive(*tau, s.sub("tau"));
    }
    if (const json* xi = s.find("xi")) cfg.symbol_point.xi = as_vec2(*xi, s.sub("xi"));
    s.finish();
    require_nonzero(cfg.symbol_point.xi, "symbol_point.xi");
    require_inside(box, cfg.symbol_point.x, "symbol_point.x");
  }

  if (const json* j = v.find("ray")) {
    ObjectView r(*j, "ray");
    if (const json* x0 = r.find("x0")) cfg.ray_x0 = as_vec2(*x0, r.sub("x0"));
    if (const json* xi0 = r.find("xi0")) cfg.ray_xi0 = as_vec2(*xi0, r.sub("xi0"));
    if (const json* t = r.find("time")) cfg.ray_time = as_positive(*t, r.sub("time"));
    if (const json* dt = r.find("dt")) cfg.ray_dt = as_positive(*dt, r.sub("dt"));
    if (const json* tr = r.find("transport")) cfg.ray_transport = as_bool(*tr, r.sub("transport"));
    r.finish();
    require_nonzero(cfg.ray_xi0, "ray.xi0");
    require_inside(box, cfg.ray_x0, "ray.x0");
    if (cfg.ray_dt > cfg.ray_time / 100.0) {
      fail("ray.dt", "expected at most ray.time / 100");
    }
  }

  if (const json* j = v.find("packet")) {
    ObjectView p(*j, "packet");
    if (const json* c = p.find("center")) cfg.packet_center = as_vec2(*c, p.sub("center"));
    if (const json* w = p.find("width")) cfg.packet_width = as_positive(*w, p.sub("width"));
    if (const json* n = p.find("n")) {
      if (!n->is_array() || n->size() != 2) fail(p.sub("n"), "expected an array of two integers");
      cfg.packet_n1 = as_count((*n)[0], p.sub("n[0]"), 1, 4096);
      cfg.packet_n2 = as_count((*n)[1], p.sub("n[1]"), 1, 4096);
    }
    p.finish();
    require_nonzero(cfg.packet_center, "packet.center");
  }

  if (const json* j = v.find("synth")) {
    ObjectView s(*j, "synth");
    if (const json* d = s.find("driver")) {
      const std::string driver = as_string(*d, s.sub("driver"));
      if (driver != "cauchy" && driver != "source") {
        fail(s.sub("driver"), "expected 'cauchy' or 'source'");
      }
      cfg.synth_driver = driver;
    }
    if (const json* times = s.find("times")) {
      if (!times->is_array() || times->empty()) {
        fail(s.sub("times"), "expected a non-empty array of numbers");
      }
      cfg.synth_times.clear();
      for (std::size_t i = 0; i < times->size(); ++i) {
        cfg.synth_times.push_back(
            as_positive((*times)[i], s.sub("times[" + std::to_string(i) + "]")));
      }
      for (std::size_t i = 1; i < cfg.synth_times.size(); ++i) {
        if (!(cfg.synth_times[i] > cfg.synth_times[i - 1])) {
          fail(s.sub("times"), "expected strictly increasing times");
        }
      }
    }
    if (const json* g = s.find("grid")) {
      cfg.synth_grid = parse_grid(*g, s.sub("grid"), box);
    }
    if (const json* p = s.find("path")) {
      const std::string path = as_string(*p, s.sub("path"));
      if (path == "auto") {
        cfg.synth_path = SynthesisPath::kAuto;
      } else if (path == "flat") {
        cfg.synth_path = SynthesisPath::kFlat;
      } else if (path == "chart") {
        cfg.synth_path = SynthesisPath::kChart;
      } else {
        fail(s.sub("path"), "expected 'auto', 'flat', or 'chart'");
      }
    }
    if (const json* src = s.find("source")) {
      ObjectView q(*src, s.sub("source"));
      if (const json* f = q.find("frequency")) {
        cfg.source_frequency = as_positive(*f, q.sub("frequency"));
      }
      if (const json* a = q.find("amplitude")) {
        cfg.source_amplitude = as_number(*a, q.sub("amplitude"));
      }
      if (const json* d = q.find("duration")) {
        cfg.source_duration = as_positive(*d, q.sub("duration"));
      }
      if (const json* n = q.find("samples")) {
        cfg.source_samples = as_count(*n, q.sub("samples"), 3, 100001);
        if (cfg.source_samples % 2 == 0) {
          fail(q.sub("samples"), "expected an odd sample count");
        }
      }
      q.finish();
    }
    s.finish();
    if (cfg.synth_driver == "source" && cfg.synth_times.front() < cfg.source_duration) {
      fail("synth.times", "with the source driver every time must be at least synth.source.duration");
    }
  }

  if (const json* j = v.find("ellipse")) {
    ObjectView e(*j, "ellipse");
    if (const json* x = e.find("x")) cfg.ellipse_x = as_vec2(*x, e.sub("x"));
    if (const json* xi = e.find("xi")) cfg.ellipse_xi = as_vec2(*xi, e.sub("xi"));
    if (const json* a = e.find("amplitude")) {
      cfg.ellipse_amplitude = as_number(*a, e.sub("amplitude"));
      if (cfg.ellipse_amplitude == 0.0) fail(e.sub("amplitude"), "expected a nonzero number");
    }
    if (const json* n = e.find("samples")) {
      cfg.ellipse_samples = as_count(*n, e.sub("samples"), 16, 100000);
    }
    e.finish();
    require_nonzero(cfg.ellipse_xi, "ellipse.xi");
    require_inside(box, cfg.ellipse_x, "ellipse.x");
  }

  v.finish();
  return cfg;
}

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.pair.plus = MaterialField<double>(MaterialPoint<double>{3.0, 3.0, 3.0}, {});
  cfg.synth_grid = uniform_xy(Vec2<double>(-3.5, -2.0), Vec2<double>(0.5, 2.0), 41, 21);
  return cfg;
}

std::string default_config_text() {
  return R"({
  "seed": 1729,
  "mode": "rayleigh",
  "box": {"lo": [-10, -10], "hi": [10, 10]},
  "material": {"rho": 1, "lambda": 1, "mu": 1, "bumps": []},
  "pair": {
    "plus": {"rho": 3, "lambda": 3, "mu": 3},
    "minus": {"rho": 1, "lambda": 1, "mu": 1}
  },
  "metric": {"g11": 1, "g12": 0, "g22": 1, "bumps": []},
  "eval_point": [0, 0],
  "scan": {"samples": 512},
  "symbol_point": {"x": [0, 0], "tau": 0.5, "xi": [1, 0]},
  "ray": {"x0": [0.3, -0.2], "xi0": [0.8, 0.6], "time": 1.0, "dt": 0.001, "transport": true},
  "packet": {"center": [4, 0], "width": 0.5, "n": [64, 64]},
  "synth": {
    "driver": "cauchy",
    "times": [0.8, 1.6, 2.4],
    "grid": {"lo": [-3.5, -2], "hi": [0.5, 2], "n": [41, 21]},
    "path": "auto",
    "source": {"frequency": 6, "amplitude": 1, "duration": 0.6, "samples": 241}
  },
  "ellipse": {"x": [0, 0], "xi": [1, 0], "amplitude": 1, "samples": 64}
}
)";
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + origin + ": " + e.what());
  }
  return parse_config_json(root, origin);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file '" + path + "' could not be opened");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), "'" + path + "'");
}

}  // namespace raystone

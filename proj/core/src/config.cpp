#include "zeno/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "zeno/errors.hpp"

namespace zeno {

using detail::Json;

PostSuccessModel parse_post_success(std::string_view name) {
  if (name == "ground_state") return PostSuccessModel::ground_state;
  if (name == "projected") return PostSuccessModel::projected;
  throw ValidationError("expected \"ground_state\" or \"projected\"", "mode.post_success");
}

std::string_view to_string(PostSuccessModel model) {
  return model == PostSuccessModel::ground_state ? "ground_state" : "projected";
}

UnitSystem ProtocolConfig::units() const {
  const double ell = length_scale > 0.0 ? length_scale : schedule.lengths.at(0);
  return UnitSystem(ell, charges.m1);
}

EvolutionParams ProtocolConfig::evolution(std::size_t step) const {
  EvolutionParams p = EvolutionParams::from_frequency(schedule.f_qze.at(step), n_sub, cn_tolerance);
  p.max_iterations = cn_max_iterations;
  return p;
}

void ProtocolConfig::validate() const {
  if (!(plate_separation > 0.0) || !std::isfinite(plate_separation)) {
    throw ValidationError("must be positive", "geometry.plate_separation");
  }
  if (points_per_axis < Grid2D::min_points) {
    throw ValidationError("must be at least " + std::to_string(Grid2D::min_points), "geometry.points_per_axis");
  }
  if (points_per_axis > (1 << 20)) throw ValidationError("must not exceed 1048576", "geometry.points_per_axis");
  if (!(epsilon > 0.0)) throw ValidationError("must be positive", "geometry.epsilon");
  if (!(length_scale >= 0.0) || !std::isfinite(length_scale)) {
    throw ValidationError("must be non-negative", "geometry.length_scale");
  }
  if (!(coulomb_k > 0.0)) throw ValidationError("must be positive", "ions.coulomb_k");
  try {
    charges.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), "ions");
  }
  schedule.validate();
  for (std::size_t i = 0; i < schedule.lengths.size(); ++i) {
    if (!(schedule.lengths[i] < plate_separation)) {
      throw ValidationError("must be below the plate separation", "schedule.lengths[" + std::to_string(i) + "]");
    }
  }
  solver.validate();
  localization.validate();
  if (n_sub < 1) throw ValidationError("must be at least 1", "evolution.n_sub");
  if (!(cn_tolerance > 0.0 && cn_tolerance < 1e-3)) throw ValidationError("must lie in (0, 1e-3)", "evolution.tolerance");
  if (cn_max_iterations < 1) throw ValidationError("must be at least 1", "evolution.max_iterations");
  if (monte_carlo_trials < 0) throw ValidationError("must be non-negative", "mode.monte_carlo_trials");
  if (threads < 0) throw ValidationError("must be non-negative", "mode.threads");
}

namespace {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError("must be an object", path_.empty() ? "config" : path_);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) throw ValidationError("must be a number", field(key));
      out = v->get<double>();
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) throw ValidationError("must be an integer", field(key));
      if constexpr (std::is_unsigned_v<Int>) {
        if (!v->is_number_unsigned()) throw ValidationError("must be non-negative", field(key));
        out = v->get<Int>();
      } else {
        const auto x = v->get<std::int64_t>();
        if (x < std::numeric_limits<Int>::min() || x > std::numeric_limits<Int>::max()) {
          throw ValidationError("out of range", field(key));
        }
        out = static_cast<Int>(x);
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) throw ValidationError("must be true or false", field(key));
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) throw ValidationError("must be a string", field(key));
      out = v->get<std::string>();
    }
  }

  /// A number broadcast to `count` entries, or an array of numbers.
  void numbers(const std::string& key, std::vector<double>& out, std::optional<std::size_t> count) {
    const Json* v = find(key);
    if (!v) {
      if (count && out.size() != *count) out.assign(*count, out.empty() ? 0.0 : out.front());
      return;
    }
    if (v->is_number()) {
      out.assign(count.value_or(1), v->get<double>());
      return;
    }
    if (!v->is_array()) throw ValidationError("must be a number or an array of numbers", field(key));
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) throw ValidationError("must be a number", field(key) + "[" + std::to_string(i) + "]");
      out.push_back((*v)[i].get<double>());
    }
  }

  Reader section(const std::string& key) {
    const Json* v = find(key);
    static const Json empty = Json::object();
    return Reader(v ? *v : empty, field(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ValidationError("unknown key", field(it.key()));
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

ProtocolConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInputError(std::string("config is not valid JSON: ") + e.what());
  }
  ProtocolConfig c;
  Reader root(j, "");

  Reader g = root.section("geometry");
  g.number("plate_separation", c.plate_separation);
  g.integer("points_per_axis", c.points_per_axis);
  g.number("epsilon", c.epsilon);
  g.number("length_scale", c.length_scale);
  g.finish();

  Reader ions = root.section("ions");
  ions.number("q1", c.charges.q1);
  ions.number("q2", c.charges.q2);
  ions.number("m1", c.charges.m1);
  ions.number("m2", c.charges.m2);
  ions.number("coulomb_k", c.coulomb_k);
  ions.boolean("interacting", c.interacting);
  ions.finish();

  Reader s = root.section("schedule");
  s.numbers("lengths", c.schedule.lengths, std::nullopt);
  const std::size_t steps = c.schedule.steps();
  s.numbers("f_qze", c.schedule.f_qze, steps);
  s.numbers("f_confine", c.schedule.f_confine, steps);
  s.number("f_photon", c.schedule.f_photon);
  s.finish();

  Reader sol = root.section("solver");
  sol.number("tolerance", c.solver.tolerance);
  sol.integer("max_iterations", c.solver.max_iterations);
  sol.integer("seed", c.solver.seed);
  sol.integer("imaginary_time_steps", c.solver.imaginary_time_steps);
  sol.number("imaginary_time_step", c.solver.imaginary_time_step);
  sol.boolean("localize", c.localization.enabled);
  sol.number("window_fraction", c.localization.window_fraction);
  sol.number("margin_factor", c.localization.margin_factor);
  sol.integer("max_rounds", c.localization.max_rounds);
  sol.finish();

  Reader ev = root.section("evolution");
  ev.integer("n_sub", c.n_sub);
  ev.number("tolerance", c.cn_tolerance);
  ev.integer("max_iterations", c.cn_max_iterations);
  ev.boolean("compute_leakage", c.compute_leakage);
  ev.finish();

  Reader mode = root.section("mode");
  std::string post = std::string(to_string(c.post_success));
  mode.string("post_success", post);
  c.post_success = parse_post_success(post);
  mode.integer("monte_carlo_trials", c.monte_carlo_trials);
  mode.integer("seed", c.seed);
  mode.integer("threads", c.threads);
  mode.finish();

  Reader out = root.section("output");
  out.string("report_json", c.report_json);
  out.string("report_csv", c.report_csv);
  out.string("checkpoint", c.checkpoint);
  out.finish();

  root.finish();
  return c;
}

ProtocolConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace detail {

Json config_json(const ProtocolConfig& c) {
  Json j;
  j["geometry"] = {{"plate_separation", c.plate_separation},
                   {"points_per_axis", c.points_per_axis},
                   {"epsilon", c.epsilon},
                   {"length_scale", c.length_scale}};
  j["ions"] = {{"q1", c.charges.q1}, {"q2", c.charges.q2}, {"m1", c.charges.m1},
               {"m2", c.charges.m2}, {"coulomb_k", c.coulomb_k}, {"interacting", c.interacting}};
  j["schedule"] = {{"lengths", c.schedule.lengths},
                   {"f_qze", c.schedule.f_qze},
                   {"f_confine", c.schedule.f_confine},
                   {"f_photon", c.schedule.f_photon}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"seed", c.solver.seed},
                 {"imaginary_time_steps", c.solver.imaginary_time_steps},
                 {"imaginary_time_step", c.solver.imaginary_time_step},
                 {"localize", c.localization.enabled},
                 {"window_fraction", c.localization.window_fraction},
                 {"margin_factor", c.localization.margin_factor},
                 {"max_rounds", c.localization.max_rounds}};
  j["evolution"] = {{"n_sub", c.n_sub},
                    {"tolerance", c.cn_tolerance},
                    {"max_iterations", c.cn_max_iterations},
                    {"compute_leakage", c.compute_leakage}};
  j["mode"] = {{"post_success", std::string(to_string(c.post_success))},
               {"monte_carlo_trials", c.monte_carlo_trials},
               {"seed", c.seed},
               {"threads", c.threads}};
  j["output"] = {{"report_json", c.report_json}, {"report_csv", c.report_csv}, {"checkpoint", c.checkpoint}};
  return j;
}

Json constants_json(const PhysicalConstants& c) {
  return {{"hbar", c.hbar},
          {"h", c.h},
          {"coulomb_k", c.coulomb_k},
          {"proton_mass", c.proton_mass},
          {"elementary_charge", c.elementary_charge}};
}

}  // namespace detail

std::string config_to_json(const ProtocolConfig& config, int indent) {
  return detail::config_json(config).dump(indent);
}

}  // namespace zeno

#include "zeno/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "json_util.hpp"
#include "zeno/errors.hpp"

#ifndef ZENO_VERSION
#define ZENO_VERSION "unknown"
#endif

namespace zeno {

using detail::Json;

std::string_view code_version() noexcept { return ZENO_VERSION; }

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

Json provenance_json(const Provenance& p) {
  return {{"code_version", p.code_version.empty() ? std::string(code_version()) : p.code_version},
          {"command", p.command},
          {"seed", p.seed}};
}

Json ground_state_json(const GroundStateRecord& g) {
  const ConfinedGroundState& s = g.state;
  return {{"d_m", g.d},
          {"E0_J", s.result.energy},
          {"E0_internal", s.result.energy_internal},
          {"residual", s.result.residual_norm},
          {"iterations", s.result.iterations},
          {"mask_nodes", s.mask.inside_count()},
          {"support_nodes", s.support ? s.support->size() : 0},
          {"localized", s.localized},
          {"window_energy_J", s.window_energy},
          {"rounds", s.rounds}};
}

Json estimate_json(const SampleEstimate& e) { return {{"mean", e.mean}, {"standard_error", e.standard_error}}; }

}  // namespace

std::string report_json(const ProtocolRun& run, const Provenance& provenance) {
  const EnergyLedger& L = run.ledger;
  const UnitSystem units = run.config.units();
  Json j;
  j["format"] = "zeno-report";
  j["format_version"] = 1;
  j["provenance"] = provenance_json(provenance);
  j["constants"] = detail::constants_json(units.constants());
  j["units"] = {{"length_scale_m", units.length_scale()},
                {"mass_scale_kg", units.mass_scale()},
                {"energy_scale_J", units.energy_scale()},
                {"time_scale_s", units.time_scale()}};
  j["config"] = detail::config_json(run.config);

  Json steps = Json::array();
  for (std::size_t i = 0; i < L.steps.size(); ++i) {
    const StepRecord& r = L.steps[i];
    steps.push_back({{"step", i},
                     {"d_m", r.in.d},
                     {"d_next_m", r.in.d_next},
                     {"E0_J", r.in.e0},
                     {"E0_next_J", r.in.e0_next},
                     {"confinement_probability", r.in.probability},
                     {"leakage", r.in.leakage},
                     {"f_qze_Hz", r.in.f_qze},
                     {"f_confine_Hz", r.in.f_confine},
                     {"f_photon_Hz", r.in.f_photon},
                     {"expected_time_s", r.expected_time},
                     {"qze_power_W", r.qze_power},
                     {"expected_energy_J", r.expected_energy},
                     {"expected_measurements", r.expected_measurements},
                     {"survival_probability", r.survival_probability}});
  }
  j["steps"] = steps;

  Json cum = {{"expected_energy_J", L.expected_energy},
              {"survival_probability", L.survival_probability},
              {"adjusted_expected_energy_J", L.adjusted_expected_energy},
              {"delta_e_quantum_lower_bound_J", L.delta_e_quantum},
              {"delta_e_classical_J", L.delta_e_classical},
              {"advantage_power_W", L.advantage_power}};
  if (L.t_advantage) {
    cum["t_advantage_s"] = *L.t_advantage;
    cum["has_advantage"] = *L.t_advantage > 0.0;
  } else {
    cum["t_advantage_s"] = nullptr;
    cum["has_advantage"] = false;
  }
  j["cumulative"] = cum;

  Json gs = Json::array();
  for (const GroundStateRecord& g : run.ground_states) gs.push_back(ground_state_json(g));
  j["ground_states"] = gs;

  if (run.monte_carlo) {
    const MonteCarloSummary& m = *run.monte_carlo;
    Json attempts = Json::array();
    for (std::size_t i = 0; i < m.attempts.size(); ++i) {
      attempts.push_back({{"step", i},
                          {"attempts", estimate_json(m.attempts[i])},
                          {"checks", m.checks[i]},
                          {"successes", m.successes[i]},
                          {"histogram", m.attempt_histogram[i]}});
    }
    j["monte_carlo"] = {{"trials", m.trials},
                        {"seed", m.seed},
                        {"total_time_s", estimate_json(m.total_time)},
                        {"total_energy_J", estimate_json(m.total_energy)},
                        {"restarts", estimate_json(m.restarts)},
                        {"steps", attempts}};
  }
  j["notes"] = run.notes;
  return j.dump(2) + "\n";
}

std::string report_csv(const EnergyLedger& ledger) {
  std::string out(csv_columns);
  out += '\n';
  for (std::size_t i = 0; i < ledger.steps.size(); ++i) {
    const StepRecord& r = ledger.steps[i];
    const double row[] = {r.in.d,           r.in.d_next,      r.in.e0,           r.in.e0_next,
                          r.in.probability, r.expected_time,  r.qze_power,       r.expected_energy,
                          r.expected_measurements, r.in.leakage, r.survival_probability};
    out += std::to_string(i);
    for (double v : row) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string ground_state_report_json(const ProtocolConfig& config, const GroundStateRecord& record,
                                     const Provenance& provenance) {
  Json j;
  j["format"] = "zeno-ground-state";
  j["format_version"] = 1;
  j["provenance"] = provenance_json(provenance);
  j["constants"] = detail::constants_json(config.units().constants());
  j["config"] = detail::config_json(config);
  j["ground_state"] = ground_state_json(record);
  return j.dump(2) + "\n";
}

std::string canonical_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end()).dump(2) + "\n";
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInputError(std::string("not valid JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

void write_report(const ProtocolRun& run, const Provenance& provenance, ReportFormat format,
                  const std::string& path) {
  write_text(path, format == ReportFormat::structured ? report_json(run, provenance) : report_csv(run.ledger));
}

}  // namespace zeno

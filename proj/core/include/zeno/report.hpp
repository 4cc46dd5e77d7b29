#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "zeno/experiment.hpp"

namespace zeno {

enum class ReportFormat { structured, tabular };

struct Provenance {
  std::string code_version;
  std::string command;
  std::uint64_t seed = 0;
};

/// Library version string.
std::string_view code_version() noexcept;

/// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

/// Fixed column order of the tabular report.
inline constexpr std::string_view csv_columns =
    "step,d_m,d_next_m,E0_J,E0_next_J,confinement_probability,expected_time_s,qze_power_W,"
    "expected_energy_J,expected_measurements,leakage,survival_probability";

/// Self-describing JSON document with sorted keys: provenance, constants,
/// config echo, per-step records, cumulative values, ground states, Monte
/// Carlo section when present, and notes.
std::string report_json(const ProtocolRun& run, const Provenance& provenance);

/// Header line plus one row per step.
std::string report_csv(const EnergyLedger& ledger);

/// JSON report of a single ground-state solve.
std::string ground_state_report_json(const ProtocolConfig& config, const GroundStateRecord& record,
                                     const Provenance& provenance);

/// Parses and re-emits a JSON document in canonical form.
std::string canonical_json(std::string_view text);

void write_report(const ProtocolRun& run, const Provenance& provenance, ReportFormat format,
                  const std::string& path);

/// Writes text to a file, throwing IoError on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace zeno

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "zeno/checkpoint.hpp"
#include "zeno/config.hpp"
#include "zeno/errors.hpp"
#include "zeno/report.hpp"
#include "zeno/spectra.hpp"

using namespace zeno;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = ZENO_TEST_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("zeno-io-" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
}

ProtocolConfig small_config() {
  ProtocolConfig c;
  c.plate_separation = 2e-6;
  c.points_per_axis = 127;
  c.monte_carlo_trials = 100;
  c.threads = 1;
  return c;
}

CheckpointMetadata meta_for(const ProtocolConfig& c, double d) {
  return {c.points_per_axis, c.plate_separation, d, c.epsilon, c.units().length_scale(),
          c.units().mass_scale(), c.charges};
}

}  // namespace

TEST_CASE("reference checkpoint loads with the recorded contents") {
  const auto side = nlohmann::json::parse(slurp(data_dir + "/reference_n16.json"));
  const auto [psi, meta] = load_checkpoint(data_dir + "/reference_n16.zcwf", 16);
  CHECK(meta.points_per_axis == 16);
  CHECK(meta.plate_separation == side["plate_separation"].get<double>());
  CHECK(meta.d == side["d"].get<double>());
  CHECK(meta.epsilon == side["epsilon"].get<double>());
  CHECK(meta.charges.q1 == PhysicalConstants::codata2018().elementary_charge);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi.amplitude(3, 11) == Complex(side["amplitude_3_11"][0].get<double>(), side["amplitude_3_11"][1].get<double>()));
  CHECK(psi.amplitude(0, 0) == Complex(side["amplitude_0_0"][0].get<double>(), side["amplitude_0_0"][1].get<double>()));
  int zeros = 0;
  for (const Complex& z : psi.amplitudes()) zeros += z == Complex(0.0, 0.0);
  CHECK(zeros == side["zero_count"].get<int>());

  const std::string bytes = slurp(data_dir + "/reference_n16.zcwf");
  CHECK(fnv1a64(reinterpret_cast<const unsigned char*>(bytes.data()) + 96, bytes.size() - 96) ==
        side["checksum"].get<std::uint64_t>());
}

TEST_CASE("checkpoint round trip is bit exact") {
  TempDir tmp;
  const ProtocolConfig c = small_config();
  const ConfinedGroundState s = solve_confined(c, 1e-6);
  const std::string path = tmp.file("gs.zcwf");
  save_checkpoint(s.result.psi0, meta_for(c, 1e-6), path);
  CHECK(fs::file_size(path) == 96 + 16ULL * 127 * 127);
  const auto [back, meta] = load_checkpoint(path);
  CHECK(meta.d == 1e-6);
  CHECK(meta.mass_scale == c.units().mass_scale());
  bool equal = true;
  s.result.psi0.support().for_each([&](int i, int j, std::int64_t k) {
    equal = equal && back.amplitude(i, j) == s.result.psi0.amplitudes()[static_cast<std::size_t>(k)];
  });
  CHECK(equal);
  save_checkpoint(back, meta, tmp.file("again.zcwf"));
  CHECK(slurp(path) == slurp(tmp.file("again.zcwf")));
}

TEST_CASE("damaged checkpoints are rejected with specific errors") {
  TempDir tmp;
  const std::string good = slurp(data_dir + "/reference_n16.zcwf");
  const std::string p = tmp.file("bad.zcwf");

  spit(p, "");
  CHECK_THROWS_AS(load_checkpoint(p), MalformedInputError);
  spit(p, good.substr(0, 50));
  CHECK_THROWS_AS(load_checkpoint(p), MalformedInputError);
  spit(p, good.substr(0, good.size() - 8));
  CHECK_THROWS_AS(load_checkpoint(p), MalformedInputError);
  spit(p, good + "x");
  CHECK_THROWS_AS(load_checkpoint(p), MalformedInputError);

  std::string flipped = good;
  flipped[200] ^= 0x01;
  spit(p, flipped);
  CHECK_THROWS_AS(load_checkpoint(p), IntegrityError);

  std::string magic = good;
  magic[0] = 'X';
  spit(p, magic);
  CHECK_THROWS_AS(load_checkpoint(p), IntegrityError);

  std::string version = good;
  version[4] = 2;
  spit(p, version);
  CHECK_THROWS_AS(load_checkpoint(p), UnsupportedVersionError);

  CHECK_THROWS_AS(load_checkpoint(data_dir + "/reference_n16.zcwf", 32), ShapeError);
  CHECK_THROWS_AS(load_checkpoint(tmp.file("missing.zcwf")), IoError);
}

TEST_CASE("checkpoint save guards") {
  const auto [psi, meta] = load_checkpoint(data_dir + "/reference_n16.zcwf");
  CheckpointMetadata wrong = meta;
  wrong.points_per_axis = 17;
  CHECK_THROWS_AS(save_checkpoint(psi, wrong, "/tmp/never.zcwf"), ShapeError);
  CHECK_THROWS_AS(save_checkpoint(psi, meta, "/nonexistent-dir/x.zcwf"), IoError);
}

TEST_CASE("shortest round-trip number formatting") {
  for (double x : {1.0, 0.1, 1e-300, 2.6728672e-24, 1.0 / 3.0, -5e-7}) {
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("reports are reproducible and self-describing") {
  TempDir tmp;
  const ProtocolConfig c = small_config();
  const ProtocolRun a = run_protocol(c);
  const ProtocolRun b = run_protocol(c);
  const Provenance prov{"", "test", c.seed};
  const std::string ja = report_json(a, prov);
  CHECK(ja == report_json(b, prov));
  CHECK(report_csv(a.ledger) == report_csv(b.ledger));
  CHECK(canonical_json(ja) == ja);

  const auto j = nlohmann::json::parse(ja);
  CHECK(j["format"] == "zeno-report");
  CHECK(j["provenance"]["code_version"] == std::string(code_version()));
  CHECK(j["steps"].size() == 1);
  CHECK(j["steps"][0]["confinement_probability"].get<double>() == a.ledger.steps[0].in.probability);
  CHECK(j["cumulative"]["delta_e_quantum_lower_bound_J"].get<double>() == a.ledger.delta_e_quantum);
  CHECK(j["monte_carlo"]["trials"] == 100);
  CHECK(j["ground_states"].size() == 2);
  CHECK(parse_config(j["config"].dump()).points_per_axis == 127);

  const std::string csv = report_csv(a.ledger);
  CHECK(csv.rfind(std::string(csv_columns) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  write_report(a, prov, ReportFormat::structured, tmp.file("r.json"));
  write_report(a, prov, ReportFormat::tabular, tmp.file("r.csv"));
  CHECK(slurp(tmp.file("r.json")) == ja);
  CHECK(slurp(tmp.file("r.csv")) == csv);
  CHECK_THROWS_AS(write_text("/nonexistent-dir/r.json", ja), IoError);
  CHECK_THROWS_AS(canonical_json("{oops"), MalformedInputError);
}

TEST_CASE("config defaults and round trip") {
  const ProtocolConfig d = parse_config("{}");
  CHECK(d.plate_separation == 1e-5);
  CHECK(d.points_per_axis == 40959);
  CHECK(d.schedule.lengths == std::vector<double>{1e-6, 9.92e-7});
  CHECK(d.post_success == PostSuccessModel::ground_state);
  CHECK_NOTHROW(d.validate());
  CHECK(d.units().length_scale() == 1e-6);

  ProtocolConfig c = small_config();
  c.schedule = {{1e-6, 9.9e-7, 9.8e-7}, {1e12, 2e12}, {1e11, 1e11}, 2e7};
  c.post_success = PostSuccessModel::projected;
  c.solver.tolerance = 1e-9;
  c.localization.enabled = false;
  c.report_csv = "out.csv";
  const std::string text = config_to_json(c);
  CHECK(config_to_json(parse_config(text)) == text);

  const ProtocolConfig broadcast =
      parse_config(R"({"schedule": {"lengths": [1e-6, 9.9e-7, 9.8e-7], "f_qze": 1e12, "f_confine": 1e11}})");
  CHECK(broadcast.schedule.f_qze == std::vector<double>{1e12, 1e12});
  CHECK(broadcast.schedule.f_confine == std::vector<double>{1e11, 1e11});
}

TEST_CASE("config errors name the field") {
  auto field_of = [](const std::string& text) {
    try {
      parse_config(text).validate();
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"({"geometry": {"points_per_axis": 3}})") == "geometry.points_per_axis");
  CHECK(field_of(R"({"geometry": {"points_per_axis": 1.5}})") == "geometry.points_per_axis");
  CHECK(field_of(R"({"geometry": {"plate_separation": "wide"}})") == "geometry.plate_separation");
  CHECK(field_of(R"({"geometry": {"colour": 1}})") == "geometry.colour");
  CHECK(field_of(R"({"extra": {}})") == "extra");
  CHECK(field_of(R"({"ions": {"q1": 1e-19, "q2": 2e-19}})").rfind("ions", 0) == 0);
  CHECK(field_of(R"({"schedule": {"lengths": [1e-6, 2e-6]}})").rfind("schedule.lengths", 0) == 0);
  CHECK(field_of(R"({"schedule": {"lengths": [2e-5, 1e-6]}})") == "schedule.lengths[0]");
  CHECK(field_of(R"({"schedule": {"f_qze": [1e12, 1e12]}})") == "schedule.f_qze");
  CHECK(field_of(R"({"schedule": {"f_qze": 2.5e11}})").rfind("schedule.f_qze", 0) == 0);
  CHECK(field_of(R"({"mode": {"post_success": "sometimes"}})") == "mode.post_success");
  CHECK(field_of(R"({"mode": {"monte_carlo_trials": -1}})") == "mode.monte_carlo_trials");
  CHECK(field_of(R"({"evolution": {"n_sub": 0}})") == "evolution.n_sub");
  CHECK(field_of(R"({"solver": {"localize": 1}})") == "solver.localize");
  CHECK(field_of(R"([1, 2])") == "config");
  CHECK_THROWS_AS(parse_config("{not json"), MalformedInputError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("empty ledger gives a header-only table") {
  CHECK(report_csv(EnergyLedger{}) == std::string(csv_columns) + "\n");
}

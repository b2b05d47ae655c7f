#include <doctest.h>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dectlink/capture_io.hpp"
#include "dectlink/cli.hpp"
#include "dectlink/kv_text.hpp"
#include "test_support.hpp"

using namespace dectlink;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dectlink");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write(const std::filesystem::path& p, std::string_view text) { std::ofstream(p, std::ios::binary) << text; }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// Three locations with known success rates, written as capture files.
std::vector<std::string> write_campaign(const testing::TempDir& dir) {
  testing::Rng rng(0x5eed0601);
  std::vector<std::string> files;
  const struct {
    const char* id;
    double distance;
    double rssi;
    double p_fail;
  } sites[] = {{"corridor", 40.0, -70.0, 0.0}, {"corridor", 120.0, -88.0, 0.02}, {"corridor", 200.0, -96.0, 0.5},
               {"hall", 15.0, -60.0, 0.0}};
  int n = 0;
  for (const auto& s : sites) {
    auto c = testing::synthetic_capture(rng, 300, s.rssi, 2.0, s.p_fail, 0.0);
    c.location_id = s.id;
    c.distance = Distance::meters(s.distance);
    c.tx_power = Dbm{0.0};
    const auto path = dir / ("site" + std::to_string(n++) + ".csv");
    capture_io::write_capture(path, c);
    files.push_back(path.string());
  }
  return files;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"model"}).code == 2);
  CHECK(run({"model", "eval"}).code == 2);
  CHECK(run({"model", "eval", "--d", "abc"}).code == 2);
  CHECK(run({"plan", "--bogus", "1"}).code == 2);
}

TEST_CASE("model eval") {
  const auto r = run({"model", "eval", "--model", "fspl", "--d", "2294"});
  CHECK(r.code == 0);
  CHECK(r.out == "fspl: 105.23 dB at 2294.00 m, 1899.000 MHz; flags: none\n");

  const auto tr = run({"model", "eval", "--model", "two-ray", "--distance-m", "650", "--ht", "10", "--hr", "1.5"});
  CHECK(tr.code == 0);
  CHECK(tr.out.find("two-ray: 88.99 dB") != std::string::npos);
  CHECK(tr.out.find("near-field") != std::string::npos);
  CHECK(tr.out.find("crossover distance: 1194.00 m") != std::string::npos);

  const auto hata = run({"model", "eval", "--model", "okumura-hata,cost231-hata", "--d", "2470", "--ht", "10",
                         "--hr", "1.5"});
  CHECK(hata.code == 0);
  CHECK(hata.out.find("okumura-hata: 156.51 dB") != std::string::npos);
  CHECK(hata.out.find("cost231-hata: 161.64 dB") != std::string::npos);
  CHECK(hata.out.find("frequency-out-of-range") != std::string::npos);
  CHECK(hata.out.find("metropolitan correction: 3 dB") != std::string::npos);
}

TEST_CASE("model eval domain errors exit 2") {
  const auto missing = run({"model", "eval", "--model", "two-ray", "--d", "650"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("requires antenna geometry") != std::string::npos);
  CHECK(run({"model", "eval", "--d", "-5"}).code == 2);
  CHECK(run({"model", "eval", "--d", "5", "--f", "0"}).code == 2);
  CHECK(run({"model", "eval", "--d", "5", "--model", "hata"}).code == 2);
}

TEST_CASE("model sweep CSV") {
  const auto r = run({"model", "sweep", "--model", "all", "--ht", "10", "--hr", "1.5", "--from", "100", "--to", "1000",
                      "--points", "4"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 5);
  CHECK(r.out.substr(0, r.out.find('\n')) ==
        "distance_m,pl_fspl_db,pl_inh_los_db,pl_inf_los_db,pl_two_ray_db,pl_okumura_hata_db,pl_cost231_hata_db");
  CHECK(r.out.find("\n1000.00,98.02,") != std::string::npos);

  const auto lin = run({"model", "sweep", "--from", "650", "--to", "2470", "--points", "2", "--spacing", "linear"});
  CHECK(lin.out == "distance_m,pl_fspl_db\n650.00,94.28\n2470.00,105.87\n");
  CHECK(run({"model", "sweep", "--spacing", "cubic"}).code == 2);
  CHECK(run({"model", "sweep", "--from", "10", "--to", "1"}).code == 2);
}

TEST_CASE("output file option") {
  testing::TempDir dir("cli-out");
  const auto path = (dir / "sweep.csv").string();
  const auto r = run({"model", "sweep", "--points", "3", "-o", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(read_text_file(path).rfind("distance_m,pl_fspl_db\n1.00,", 0) == 0);
}

TEST_CASE("plan") {
  const auto r = run({"plan", "--p-tx", "19", "--environment", "outdoor"});
  CHECK(r.code == 0);
  CHECK(r.out.find("fspl,outdoor,19.00,-95.00,13.50,-101.62,7926.58,3591.81,3591.81,snr,ok,none") != std::string::npos);

  // unreachable floors are a valid planning answer
  const auto weak = run({"plan", "--p-tx", "-100"});
  CHECK(weak.code == 0);
  CHECK(weak.out.find(",,,,rssi+snr,threshold-unreachable,none") != std::string::npos);

  const auto hata = run({"plan", "--model", "cost231-hata", "--ht", "30", "--hr", "1.5", "--p-tx", "19"});
  CHECK(hata.code == 0);
  CHECK(hata.out.find("cost231-hata,indoor,") != std::string::npos);
}

TEST_CASE("config file and environment variable") {
  testing::TempDir dir("cli-config");
  const auto cfg = (dir / "run.conf").string();
  write(cfg, "# planning defaults\ntx_power_dbm = 19\nenvironment = outdoor\nrssi_floor_outdoor_dbm = -100\n");

  const auto from_file = run({"plan", "--config", cfg});
  CHECK(from_file.code == 0);
  CHECK(from_file.out.find("fspl,outdoor,19.00,-100.00,") != std::string::npos);

  const auto flag_wins = run({"plan", "--config", cfg, "--tx-power-dbm", "10"});
  CHECK(flag_wins.out.find("fspl,outdoor,10.00,-100.00,") != std::string::npos);

  setenv("DECTLINK_CONFIG", cfg.c_str(), 1);
  const auto from_env = run({"plan"});
  unsetenv("DECTLINK_CONFIG");
  CHECK(from_env.out == from_file.out);

  write(cfg, "tx_power_dbm = 19\nunknown_key = 1\n");
  const auto bad_key = run({"plan", "--config", cfg});
  CHECK(bad_key.code == 2);
  CHECK(bad_key.err.find("unknown_key") != std::string::npos);

  write(cfg, "tx_power_dbm 19\n");
  const auto bad_line = run({"plan", "--config", cfg});
  CHECK(bad_line.code == 2);
  CHECK(bad_line.err.find(cfg + ":1:") != std::string::npos);

  CHECK(run({"plan", "--config", (dir / "missing.conf").string()}).code == 2);
}

TEST_CASE("analyze") {
  testing::TempDir dir("cli-analyze");
  const auto files = write_campaign(dir);
  const auto csv = (dir / "summary.csv").string();

  std::vector<std::string> args{"analyze"};
  args.insert(args.end(), files.rbegin(), files.rend());
  args.push_back("--out");
  args.push_back(csv);
  const auto r = run(args);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("max reliable distance (SR > 90.00% on PCC and PDC):") != std::string::npos);
  CHECK(r.out.find("  corridor: 120.00 m\n") != std::string::npos);
  CHECK(r.out.find("  hall: 15.00 m\n") != std::string::npos);

  const std::string text = read_text_file(csv);
  CHECK(count_lines(text) == 5);
  // rows are ordered by location and distance regardless of argument order
  const auto corridor40 = text.find("\ncorridor,indoor-los,40.00,");
  const auto corridor200 = text.find("\ncorridor,indoor-los,200.00,");
  const auto hall = text.find("\nhall,");
  CHECK(corridor40 < corridor200);
  CHECK(corridor200 < hall);
  CHECK(text.find(",300,300,300,") != std::string::npos);

  // argument order does not change the output
  std::vector<std::string> fwd{"analyze"};
  fwd.insert(fwd.end(), files.begin(), files.end());
  CHECK(run(fwd).out == r.out);
}

TEST_CASE("analyze input errors name file and line") {
  testing::TempDir dir("cli-analyze-bad");
  const auto csv = (dir / "bad.csv").string();
  write(csv, "seq,pcc_rssi_dbm,pdc_rssi_dbm,snr_db,pcc_crc_ok,pdc_crc_ok\n0,-80,-80,20,1,1\n1,-80,-80,20,yes,1\n");
  write(dir / "bad.meta", "location_id=x\ndistance_m=5\nenvironment=indoor-los\np_tx_dbm=0\n");
  const auto r = run({"analyze", csv});
  CHECK(r.code == 2);
  CHECK(r.err.find(csv + ":3: pcc_crc_ok must be 0 or 1") != std::string::npos);

  CHECK(run({"analyze", (dir / "nothing.csv").string()}).code == 2);
  CHECK(run({"analyze"}).code == 2);
}

TEST_CASE("fit") {
  testing::TempDir dir("cli-fit");
  const auto csv = (dir / "points.csv").string();
  std::string text = "distance_m,pl_db\n";
  for (double d : {1.0, 10.0, 100.0, 1000.0}) text += fmt::format("{},{}\n", d, 38.0 + 27.0 * std::log10(d));
  write(csv, text);

  for (const char* method : {"nls", "closed-form"}) {
    const auto r = run({"fit", "--in", csv, "--method", method});
    CHECK(r.code == 0);
    CHECK(r.out.find("pl0_db: 38.00\nexponent: 2.7000\nrmse_db: 0.00\n") != std::string::npos);
    CHECK(r.out.find("converged: yes") != std::string::npos);
  }
  CHECK(run({"fit", "--in", csv, "--method", "magic"}).code == 2);
  CHECK(run({"fit", "--in", csv, "--column", "pl_pdc_db"}).code == 2);

  write(csv, "distance_m,pl_db\n10,60\n10,70\n");
  CHECK(run({"fit", "--in", csv, "--method", "closed-form"}).code == 2);

  // reference fixture: empirical PCC path loss against distance
  const auto fixture = std::string(DECTLINK_TEST_FIXTURE_DIR) + "/outdoor_path_loss.csv";
  const auto r = run({"fit", "--in", fixture, "--column", "empirical_pl_pcc_db"});
  CHECK(r.code == 0);
  CHECK(r.out.find("points: 3") != std::string::npos);
}

TEST_CASE("report") {
  const auto r = run({"report"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("fixture integrity: measurement_parameters.csv=ok indoor_max_distance.csv=ok "
                    "outdoor_max_distance.csv=ok outdoor_path_loss.csv=ok\n",
                    0) == 0);
  CHECK(r.out.find("FLAG") != std::string::npos);

  testing::TempDir dir("cli-report");
  for (const auto& e : std::filesystem::directory_iterator(DECTLINK_TEST_FIXTURE_DIR)) {
    std::filesystem::copy_file(e.path(), dir / e.path().filename().string());
  }
  std::ofstream(dir / "indoor_max_distance.csv", std::ios::app) << "Extra,LOS,x,1,0\n";
  const auto tampered = run({"report", "--fixtures", dir.path().string()});
  CHECK(tampered.code == 2);
  CHECK(tampered.out.find("indoor_max_distance.csv=MISMATCH") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  testing::TempDir dir("cli-determinism");
  const auto files = write_campaign(dir);
  const std::vector<std::vector<std::string>> commands{
      {"model", "sweep", "--model", "all", "--ht", "10", "--hr", "1.5", "--points", "200"},
      {"report"},
      {"plan", "--model", "all", "--ht", "30", "--hr", "1.5", "--p-tx", "19"},
  };
  for (const auto& cmd : commands) {
    const auto first = run(cmd);
    for (int i = 0; i < 5; ++i) CHECK(run(cmd).out == first.out);
  }
  std::vector<std::string> analyze{"analyze"};
  analyze.insert(analyze.end(), files.begin(), files.end());
  analyze.push_back("-o");
  analyze.push_back((dir / "a.csv").string());
  const auto first = run(analyze);
  const auto first_csv = read_text_file(dir / "a.csv");
  for (int i = 0; i < 5; ++i) {
    CHECK(run(analyze).out == first.out);
    CHECK(read_text_file(dir / "a.csv") == first_csv);
  }
}

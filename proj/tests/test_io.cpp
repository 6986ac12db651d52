#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mmoc/config.hpp"
#include "mmoc/control.hpp"
#include "mmoc/csv_io.hpp"
#include "mmoc/errors.hpp"
#include "mmoc/pmp.hpp"
#include "mmoc/report.hpp"
#include "mmoc/solver.hpp"
#include "mmoc/svg.hpp"
#include "mmoc/time_grid.hpp"
#include "schema_validator.hpp"

using namespace mmoc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / ("mmoc_io_test_" + std::to_string(++counter));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

nlohmann::json load_schema(const std::string& name) {
  const fs::path p = fs::path(MMOC_SOURCE_DIR) / "schemas" / name;
  return nlohmann::json::parse(slurp(p));
}

}  // namespace

TEST_CASE("doubles survive the text round trip bit for bit") {
  std::vector<double> values = {0.0,
                                -0.0,
                                1.0,
                                -1.0,
                                0.1,
                                -0.3333333333333333,
                                M_PI,
                                1e-308,
                                -1e-308,
                                5e-324,  // smallest denormal
                                1.7976931348623157e308,
                                6.02214076e23,
                                -2.2250738585072014e-308};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) values.push_back(unif(rng));

  for (double v : values) {
    const double back = parse_double(format_double(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("malformed numeric fields are rejected") {
  CHECK_THROWS_AS(parse_double("1.5x"), ConfigError);
  CHECK_THROWS_AS(parse_double(""), ConfigError);
  CHECK_THROWS_AS(parse_double("one"), ConfigError);
  CHECK(parse_double("-3.25e2") == -325.0);
}

TEST_CASE("atomic writes leave no temp file behind") {
  const fs::path dir = temp_dir();
  const fs::path target = dir / "data.txt";
  atomic_write_file(target.string(), "hello\n");
  CHECK(slurp(target) == "hello\n");
  atomic_write_file(target.string(), "replaced\n");
  CHECK(slurp(target) == "replaced\n");

  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "data.txt");
  }
  CHECK(entries == 1);
}

TEST_CASE("control files round trip bitwise and reject mismatched grids") {
  const fs::path dir = temp_dir();
  const TimeGrid grid = TimeGrid::from_step(2.0, 0.03125);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Eigen::MatrixXd vals(grid.cells(), 1);
  for (int m = 0; m < grid.cells(); ++m) vals(m, 0) = unif(rng);
  const Control u(grid, vals);

  const fs::path path = dir / "control.csv";
  write_control_csv(path.string(), u);

  std::vector<std::string> header;
  read_csv(path.string(), &header);
  REQUIRE(header.size() == 2);
  CHECK(header[0] == "t");
  CHECK(header[1] == "u");

  const Control back = read_control_csv(path.string(), grid);
  CHECK((back.values() - u.values()).lpNorm<Eigen::Infinity>() == 0.0);

  SUBCASE("a different grid is rejected") {
    CHECK_THROWS_AS(read_control_csv(path.string(), TimeGrid::from_step(2.0, 0.0625)),
                    ConfigError);
    CHECK_THROWS_AS(read_control_csv(path.string(), TimeGrid::from_step(4.0, 0.03125)),
                    ConfigError);
  }

  SUBCASE("ragged and truncated files are rejected") {
    std::string text = slurp(path);
    const auto last_newline = text.find_last_of('\n', text.size() - 2);
    atomic_write_file(path.string(), text.substr(0, last_newline + 1));
    CHECK_THROWS_AS(read_control_csv(path.string(), grid), ConfigError);

    atomic_write_file(path.string(), "t,u\n0.0\n");
    CHECK_THROWS_AS(read_control_csv(path.string(), grid), ConfigError);
  }

  SUBCASE("a missing file is rejected") {
    CHECK_THROWS_AS(read_control_csv((dir / "nope.csv").string(), grid), ConfigError);
  }

  SUBCASE("multi-channel headers are numbered") {
    Eigen::MatrixXd two(grid.cells(), 2);
    two.col(0) = vals.col(0);
    two.col(1) = -vals.col(0);
    const Control u2(grid, two);
    const fs::path p2 = dir / "control2.csv";
    write_control_csv(p2.string(), u2);
    std::vector<std::string> h2;
    read_csv(p2.string(), &h2);
    REQUIRE(h2.size() == 3);
    CHECK(h2[1] == "u0");
    CHECK(h2[2] == "u1");
    const Control back2 = read_control_csv(p2.string(), grid);
    CHECK((back2.values() - u2.values()).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("shipped study configurations load, validate, and echo faithfully") {
  const nlohmann::json config_schema = load_schema("config.schema.json");
  for (const std::string name : {"paper_t20.json", "paper_t50.json"}) {
    const fs::path p = fs::path(MMOC_SOURCE_DIR) / "configs" / name;
    const RunConfig cfg = load_config(p.string());
    validate_config(cfg);
    CHECK(cfg.problem == "qubit");
    CHECK(cfg.net_size == 101);
    CHECK(cfg.test_net_size == 1001);
    CHECK(cfg.alpha_lo == -0.5);
    CHECK(cfg.alpha_hi == 0.5);

    // The raw file and the echoed form both satisfy the schema.
    const nlohmann::json raw = nlohmann::json::parse(slurp(p));
    CHECK(schema::validate(raw, config_schema).empty());
    const nlohmann::json echo = nlohmann::json::parse(config_to_json(cfg));
    CHECK(schema::validate(echo, config_schema).empty());
  }
}

TEST_CASE("configuration errors carry a reason") {
  const fs::path dir = temp_dir();
  const fs::path p = dir / "cfg.json";

  SUBCASE("unknown keys are rejected") {
    atomic_write_file(p.string(),
                      R"({"alpha_lo":-0.5,"alpha_hi":0.5,"gamma":0.125,"T":1.0,"dt":0.25,
                          "net_size":3,"test_net_size":5,"tau0":8.0,"max_iter":1,
                          "warmstart_iter":0,"warmstart_tau":4.0,"turbo":true})");
    CHECK_THROWS_WITH_AS(load_config(p.string()), doctest::Contains("turbo"), ConfigError);
  }
  SUBCASE("missing required keys are rejected") {
    atomic_write_file(p.string(), R"({"alpha_lo":-0.5})");
    CHECK_THROWS_AS(load_config(p.string()), ConfigError);
  }
  SUBCASE("invalid JSON is rejected") {
    atomic_write_file(p.string(), "{not json");
    CHECK_THROWS_AS(load_config(p.string()), ConfigError);
  }
  SUBCASE("a missing file is rejected") {
    CHECK_THROWS_AS(load_config((dir / "absent.json").string()), ConfigError);
  }
  SUBCASE("semantic violations are rejected") {
    atomic_write_file(p.string(),
                      R"({"alpha_lo":0.5,"alpha_hi":-0.5,"gamma":0.125,"T":1.0,"dt":0.25,
                          "net_size":3,"test_net_size":5,"tau0":8.0,"max_iter":1,
                          "warmstart_iter":0,"warmstart_tau":4.0})");
    CHECK_THROWS_AS(validate_config(load_config(p.string())), ConfigError);
    RunConfig inverted;
    inverted.alpha_lo = 0.5;
    inverted.alpha_hi = -0.5;
    CHECK_THROWS_AS(validate_config(inverted), ConfigError);
  }
}

TEST_CASE("emitted reports satisfy the shipped schemas") {
  const TimeGrid grid = TimeGrid::from_cells(1.0, 8);
  RunConfig cfg;
  cfg.horizon = 1.0;
  cfg.dt = 0.125;
  cfg.net_size = 3;
  cfg.test_net_size = 5;
  validate_config(cfg);
  const std::string echo = config_to_json(cfg);

  SolveReport report{Control::constant(grid, 0.25),
                     2,
                     {},
                     Eigen::Vector3d(0.3, 0.1, 0.2),
                     WorstCase{0, 0.3, ParamPoint::Constant(1, -0.5)},
                     0.05,
                     0.35};
  IterationRecord rec;
  rec.iteration = 1;
  rec.worst_index = 0;
  rec.worst_theta = ParamPoint::Constant(1, -0.5);
  rec.worst_cost = 0.31;
  rec.l2_sq = 0.0625;
  rec.objective = 0.36;
  rec.tau = 8.0;
  report.trace = {rec};

  SUBCASE("solve report") {
    TestNetSummary tn;
    tn.size = 5;
    tn.max_infidelity = 0.2;
    tn.min_infidelity = 0.1;
    tn.max_cost_sq = 0.36;
    tn.worst_alpha = -0.5;
    const std::string text = solve_report_json(echo, report, {-0.5, 0.0, 0.5}, tn);
    const auto errors = schema::validate(nlohmann::json::parse(text),
                                         load_schema("report.schema.json"));
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());
  }

  SUBCASE("solve report without a test net block") {
    const std::string text = solve_report_json(echo, report, {-0.5, 0.0, 0.5}, std::nullopt);
    CHECK(schema::validate(nlohmann::json::parse(text), load_schema("report.schema.json"))
              .empty());
  }

  SUBCASE("sweep report") {
    SweepReport sweep;
    sweep.test_net = {-0.5, -0.25, 0.0, 0.25, 0.5};
    const SweepLevel lvl{3,    0.5,  0.4,   0.2, 0.1,
                         0.06, 0.01, 0.002, Control::zero(grid, 1)};
    sweep.levels = {lvl, lvl};
    const std::string text = sweep_report_json(echo, sweep);
    const auto errors = schema::validate(nlohmann::json::parse(text),
                                         load_schema("sweep.schema.json"));
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());
  }

  SUBCASE("stationarity summary") {
    PMPReport pmp;
    pmp.multiplier.weights = Eigen::Vector3d(0.25, 0.75, 0.0);
    pmp.multiplier.active_indices = {0, 1};
    pmp.multiplier.residual = 0.01;
    pmp.residual_tol = 0.1;
    pmp.support_slack = 0.002;
    pmp.pass = true;
    const std::string text = pmp_summary_json(pmp, {-0.5, 0.0, 0.5});
    const auto errors = schema::validate(nlohmann::json::parse(text),
                                         load_schema("pmp_summary.schema.json"));
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());
    const auto j = nlohmann::json::parse(text);
    CHECK(j["weight_sum"].get<double>() == doctest::Approx(1.0));
    CHECK(j["support"].size() == 2);
  }

  SUBCASE("the validator itself flags violations") {
    nlohmann::json bad = nlohmann::json::parse(solve_report_json(echo, report, {0.0}, std::nullopt));
    bad.erase("objective");
    bad["surprise"] = 1;
    const auto errors = schema::validate(bad, load_schema("report.schema.json"));
    CHECK(errors.size() == 2);
  }
}

TEST_CASE("csv emitters write the documented headers") {
  const fs::path dir = temp_dir();

  IterationRecord rec;
  rec.iteration = 3;
  rec.worst_theta = ParamPoint::Constant(1, 0.25);
  rec.worst_cost = 0.5;
  rec.l2_sq = 1.5;
  rec.objective = 0.59375;
  rec.tau = 10.0;
  write_trace_csv((dir / "trace.csv").string(), {rec});
  std::vector<std::string> header;
  auto rows = read_csv((dir / "trace.csv").string(), &header);
  CHECK(header == std::vector<std::string>{"iter", "worst_alpha", "worst_cost_sq",
                                           "worst_infidelity", "l2_sq", "J", "tau"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "3");
  CHECK(parse_double(rows[0][2]) == 0.5);
  // infidelity = 1 - sqrt(1 - cost)
  CHECK(parse_double(rows[0][3]) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));

  Eigen::MatrixXd profile(2, 4);
  profile << -0.5, 0.9, 0.1, 0.19, 0.5, 0.8, 0.2, 0.36;
  write_profile_csv((dir / "profile.csv").string(), profile);
  rows = read_csv((dir / "profile.csv").string(), &header);
  CHECK(header == std::vector<std::string>{"alpha", "overlap", "infidelity", "cost_sq"});
  REQUIRE(rows.size() == 2);
  CHECK(parse_double(rows[1][3]) == 0.36);

  SweepReport sweep;
  sweep.test_net = {-0.5, 0.0, 0.5};
  const SweepLevel lvl{26,  0.02, 0.0, 0.05, 0.02,
                       1.7, 0.0,  0.0, Control::zero(TimeGrid::from_cells(1.0, 8), 1)};
  sweep.levels = {lvl};
  write_sweep_csv((dir / "sweep.csv").string(), sweep);
  rows = read_csv((dir / "sweep.csv").string(), &header);
  CHECK(header == std::vector<std::string>{"N", "max_infidelity", "min_infidelity",
                                           "control_l2_sq"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "26");

  write_multiplier_csv((dir / "multiplier.csv").string(), {-0.5, 0.5},
                       Eigen::Vector2d(0.4, 0.6));
  rows = read_csv((dir / "multiplier.csv").string(), &header);
  CHECK(header == std::vector<std::string>{"alpha", "weight"});
  REQUIRE(rows.size() == 2);
  CHECK(parse_double(rows[1][1]) == 0.6);
}

TEST_CASE("line plots emit self-contained svg") {
  const fs::path dir = temp_dir();
  const fs::path p = dir / "plot.svg";
  std::vector<double> t = {0.0, 0.5, 1.0, 1.5};
  SvgSeries series;
  series.label = "u";
  series.y = {0.0, 1.0, -1.0, 0.5};
  svg_line_plot(p.string(), "control", t, {series});
  const std::string text = slurp(p);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("polyline") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
}

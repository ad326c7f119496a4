#include <doctest.h>

#include <sstream>

#include "ncs/config.hpp"

using namespace ncs;

namespace {

const char* kScalarConfig = R"({
  "schema_version": 1,
  "plant": {"a_hat": [1.0], "A": [[-1.0]], "B": [[0.5]],
            "C": [[0.45]], "D": [[0.0]]},
  "reset": {"K": [[0.5]], "sigma_diag": [1.0]},
  "intervals": {"kind": "exponential", "rate": 1.0}
})";

std::string patch(const std::string& from, const std::string& to) {
  std::string text = kScalarConfig;
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("model parses and matches the builder") {
  const auto model = parse_model(kScalarConfig);
  const auto reference = scalar_model(1.0, -1.0, 0.5, 0.45, 0.5, 1.0,
                                      RenewalDistribution::exponential(1.0));
  CHECK((model.plant.A - reference.plant.A).norm() == 0.0);
  CHECK((model.reset.K - reference.reset.K).norm() == 0.0);
  CHECK((model.reset.Sigma - reference.reset.Sigma).norm() == 0.0);
  CHECK(model.intervals.kind() == RenewalDistribution::Kind::Exponential);
}

TEST_CASE("unknown keys are rejected everywhere") {
  CHECK_THROWS_AS(parse_model(patch("\"reset\"", "\"rset\"")), ParseError);
  CHECK_THROWS_AS(
      parse_model(patch("\"rate\": 1.0", "\"rate\": 1.0, \"scale\": 2")),
      ParseError);
  CHECK_THROWS_AS(
      parse_model(patch("\"K\": [[0.5]]", "\"K\": [[0.5]], \"gain\": 1")),
      ParseError);
}

TEST_CASE("schema version is enforced") {
  CHECK_THROWS_AS(parse_model(patch("\"schema_version\": 1",
                                    "\"schema_version\": 2")),
                  ParseError);
  std::string no_version = patch("\"schema_version\": 1,", "");
  CHECK_THROWS_AS(parse_model(no_version), ParseError);
}

TEST_CASE("malformed JSON and bad shapes raise ParseError") {
  CHECK_THROWS_AS(parse_model("{"), ParseError);
  CHECK_THROWS_AS(parse_model(patch("[[-1.0]]", "[[-1.0, 2.0]]")), ParseError);
  CHECK_THROWS_AS(parse_model(patch("\"rate\": 1.0", "\"rate\": \"one\"")),
                  ParseError);
}

TEST_CASE("all interval kinds parse") {
  CHECK(parse_model(patch("{\"kind\": \"exponential\", \"rate\": 1.0}",
                          "{\"kind\": \"gamma\", \"shape\": 2.0, \"scale\": 0.5}"))
            .intervals.kind() == RenewalDistribution::Kind::Gamma);
  CHECK(parse_model(patch("{\"kind\": \"exponential\", \"rate\": 1.0}",
                          "{\"kind\": \"gamma\", \"mean\": 1.0, \"cv2\": 0.5}"))
            .intervals.cv2() == doctest::Approx(0.5));
  CHECK(parse_model(patch("{\"kind\": \"exponential\", \"rate\": 1.0}",
                          "{\"kind\": \"lognormal\", \"mean\": 1.0, \"cv2\": 0.2}"))
            .intervals.kind() == RenewalDistribution::Kind::LogNormal);
  CHECK(parse_model(patch("{\"kind\": \"exponential\", \"rate\": 1.0}",
                          "{\"kind\": \"deterministic\", \"period\": 0.75}"))
            .intervals.mean() == doctest::Approx(0.75));
  CHECK(parse_model(patch("{\"kind\": \"exponential\", \"rate\": 1.0}",
                          "{\"kind\": \"uniform\", \"lo\": 0.5, \"hi\": 1.5}"))
            .intervals.kind() == RenewalDistribution::Kind::Uniform);
}

TEST_CASE("full Sigma matrix is accepted as an alternative to sigma_diag") {
  const auto model = parse_model(
      patch("\"sigma_diag\": [1.0]", "\"Sigma\": [[2.25]]"));
  CHECK(model.reset.Sigma(0, 0) == 2.25);
}

TEST_CASE("sim config defaults and overrides") {
  const auto model = parse_model(kScalarConfig);
  const auto defaults = parse_sim_config(kScalarConfig, model);
  CHECK(defaults.trajectories == 1000);
  CHECK(defaults.horizon == doctest::Approx(200.0));
  const std::string with_sim = patch(
      "\"intervals\"",
      "\"simulation\": {\"dt\": 0.01, \"trajectories\": 5, \"seed\": 42,"
      " \"horizon\": 10.0, \"burn_in\": 2.0},\n  \"intervals\"");
  const auto cfg = parse_sim_config(with_sim, model);
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.trajectories == 5);
  CHECK(cfg.seed == 42);
  CHECK_THROWS_AS(
      parse_sim_config(patch("\"intervals\"",
                             "\"simulation\": {\"dtt\": 1},\n  \"intervals\""),
                      model),
      ParseError);
}

TEST_CASE("report JSON round-trips the headline numbers") {
  const auto model = parse_model(kScalarConfig);
  const auto rep = analyze(model);
  const std::string text = report_to_json(rep);
  CHECK(text.find("\"moments_valid\": true") != std::string::npos);
  CHECK(text.find("mean_x") != std::string::npos);
  CHECK(text.find("variance_channel") != std::string::npos);
}

TEST_CASE("sweep: grid construction, CSV shape, monotone columns") {
  const auto model = parse_model(kScalarConfig);
  const std::string cfg_text = patch(
      "\"intervals\"",
      "\"sweep\": {\"parameter\": \"mean_interval\", \"from\": 0.2,"
      " \"to\": 1.0, \"count\": 5},\n  \"intervals\"");
  const auto sweep = parse_sweep_config(cfg_text, model);
  CHECK(sweep.values.size() == 5);
  const std::string csv = run_sweep(model, sweep);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "sweep_value,mean_x_1,var_total_11,var_channel_11,var_disturbance_11,"
        "spectral_radius_1,spectral_radius_2");
  int rows = 0;
  double prev_channel = -1.0;
  for (std::string line; std::getline(lines, line);) {
    ++rows;
    // var_channel_11 is the 4th column.
    std::istringstream fields(line);
    std::string field;
    for (int i = 0; i < 4; ++i) std::getline(fields, field, ',');
    const double channel = std::stod(field);
    CHECK(channel > prev_channel);
    prev_channel = channel;
  }
  CHECK(rows == 5);
}

TEST_CASE("sweep rejects an empty grid") {
  const auto model = parse_model(kScalarConfig);
  CHECK_THROWS_AS(
      parse_sweep_config(
          patch("\"intervals\"",
                "\"sweep\": {\"parameter\": \"cv2\", \"values\": []},\n"
                "  \"intervals\""),
          model),
      ParseError);
}

TEST_CASE("design problem parsing") {
  const std::string cfg_text = patch(
      "\"intervals\"",
      "\"design\": {\"target_mean\": [4.0], \"objective\": \"none\"},\n"
      "  \"intervals\"");
  const auto pb = parse_design_problem(cfg_text);
  CHECK(pb.target_mean(0) == 4.0);
  CHECK(pb.objective == DesignObjective::None);
  CHECK(pb.free_mask(0, 0));
}

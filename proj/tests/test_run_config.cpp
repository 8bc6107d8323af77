#include <doctest.h>

#include <filesystem>
#include <stdexcept>

#include "specgnn/run_config.hpp"

using namespace specgnn;

TEST_CASE("minimal document materializes every default") {
  RunConfig cfg = run_config_from_json("{\"schema_version\": 1}");
  CHECK(cfg.schema_version == 1);
  CHECK(cfg.task.kind == "source_localization");
  CHECK(cfg.task.n == 50);
  CHECK(cfg.task.communities == 5);
  CHECK(cfg.task.p_in == 0.8);
  CHECK(cfg.model.feature_dims == std::vector<std::size_t>{1, 24, 24});
  CHECK(cfg.model.taps == 5);
  CHECK(cfg.train.method == "unconstrained");
  CHECK(cfg.train.batch_size == 32);
  CHECK(cfg.constraint.mode == "none");
  CHECK(cfg.constraint.m_override == 0);
  CHECK(cfg.sweep.perturbation == "awgn");
  CHECK(cfg.sweep.magnitudes == std::vector<double>{0.0});
  CHECK(cfg.data_dir.empty());
  CHECK(cfg.out_dir.empty());
}

TEST_CASE("serialized config round-trips and is fully materialized") {
  RunConfig cfg;
  cfg.task.kind = "dynamic_source_localization";
  cfg.task.n = 17;
  cfg.task.radius = 0.45;
  cfg.model.feature_dims = {1, 8};
  cfg.model.nonlinearity = "tanh";
  cfg.train.method = "lipschitz";
  cfg.train.step_size = 0.125;
  cfg.train.per_layer_bounds = {0.9};
  cfg.constraint.mode = "scenario";
  cfg.constraint.bound_c = 0.7;
  cfg.constraint.epsilon = 0.05;
  cfg.sweep.magnitudes = {0.0, 0.25, 1.0};
  cfg.sweep.metric = "mse";
  cfg.data_dir = "data/run1";
  cfg.out_dir = "out/run1";

  const std::string text = run_config_to_json(cfg);
  RunConfig back = run_config_from_json(text);
  CHECK(back.task.kind == cfg.task.kind);
  CHECK(back.task.n == cfg.task.n);
  CHECK(back.task.radius == cfg.task.radius);
  CHECK(back.model.feature_dims == cfg.model.feature_dims);
  CHECK(back.model.nonlinearity == cfg.model.nonlinearity);
  CHECK(back.train.method == cfg.train.method);
  CHECK(back.train.step_size == cfg.train.step_size);
  CHECK(back.train.per_layer_bounds == cfg.train.per_layer_bounds);
  CHECK(back.constraint.mode == cfg.constraint.mode);
  CHECK(back.constraint.bound_c == cfg.constraint.bound_c);
  CHECK(back.constraint.epsilon == cfg.constraint.epsilon);
  CHECK(back.sweep.magnitudes == cfg.sweep.magnitudes);
  CHECK(back.sweep.metric == cfg.sweep.metric);
  CHECK(back.data_dir == cfg.data_dir);
  CHECK(back.out_dir == cfg.out_dir);

  // Re-serializing the parsed copy reproduces the document byte for byte.
  CHECK(run_config_to_json(back) == text);
}

TEST_CASE("file save/load round-trip") {
  RunConfig cfg;
  cfg.task.seed = 99;
  cfg.train.epochs = 3;
  const std::string path =
      (std::filesystem::temp_directory_path() / "specgnn_test_config.json").string();
  save_run_config(path, cfg);
  RunConfig back = load_run_config(path);
  CHECK(back.task.seed == 99);
  CHECK(back.train.epochs == 3);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_run_config(path), std::runtime_error);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_WITH_AS(run_config_from_json("{\"schema_version\": 1, \"tsak\": {}}"),
                       doctest::Contains("unknown key 'tsak'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"task\": {\"nn\": 4}}"),
      doctest::Contains("unknown key 'nn'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"model\": {\"tap\": 4}}"),
      doctest::Contains("unknown key 'tap'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"train\": {\"stepsize\": 0.1}}"),
      doctest::Contains("unknown key 'stepsize'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"constraint\": {\"c\": 1.0}}"),
      doctest::Contains("unknown key 'c'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"sweep\": {\"magnitude\": []}}"),
      doctest::Contains("unknown key 'magnitude'"), std::invalid_argument);
}

TEST_CASE("schema versioning is enforced") {
  CHECK_THROWS_WITH_AS(run_config_from_json("{}"),
                       doctest::Contains("missing required 'schema_version'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(run_config_from_json("{\"schema_version\": 2}"),
                       doctest::Contains("unsupported schema_version 2"), std::invalid_argument);
}

TEST_CASE("malformed documents fail with clear errors") {
  CHECK_THROWS_WITH_AS(run_config_from_json("not json"), doctest::Contains("invalid JSON"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(run_config_from_json("[1, 2]"),
                       doctest::Contains("must be a JSON object"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(run_config_from_json("{\"schema_version\": 1, \"task\": 3}"),
                       doctest::Contains("'task' must be an object"), std::invalid_argument);
}

TEST_CASE("cross-field validation") {
  CHECK_THROWS_WITH_AS(
      run_config_from_json(
          "{\"schema_version\": 1, \"task\": {\"kind\": \"community_detection\"}}"),
      doctest::Contains("task.kind"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json(
          "{\"schema_version\": 1, \"constraint\": {\"mode\": \"projected\"}}"),
      doctest::Contains("constraint.mode"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json(
          "{\"schema_version\": 1, \"train\": {\"method\": \"lipschitz\"}}"),
      doctest::Contains("requires constraint.mode"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"task\": {\"p_in\": 1.5}}"),
      doctest::Contains("p_in"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      run_config_from_json("{\"schema_version\": 1, \"task\": {\"p_out\": -0.1}}"),
      doctest::Contains("p_out"), std::invalid_argument);
  // lipschitz with a constraint configured parses fine.
  RunConfig ok = run_config_from_json(
      "{\"schema_version\": 1, \"train\": {\"method\": \"lipschitz\"},"
      " \"constraint\": {\"mode\": \"static\"}}");
  CHECK(ok.constraint.mode == "static");
}

#include "specgnn/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace specgnn {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const char* section,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + section);
    }
  }
}

const json* section(const json& j, const char* name) {
  if (!j.contains(name)) return nullptr;
  const json& s = j.at(name);
  if (!s.is_object()) {
    throw std::invalid_argument(std::string("config: '") + name + "' must be an object");
  }
  return &s;
}

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: document must be a JSON object");
  reject_unknown_keys(j, "the top level",
                      {"schema_version", "task", "model", "train", "constraint", "sweep",
                       "data_dir", "out_dir"});
  if (!j.contains("schema_version")) {
    throw std::invalid_argument("config: missing required 'schema_version'");
  }

  RunConfig cfg;
  cfg.schema_version = j.at("schema_version").get<int>();
  if (cfg.schema_version != 1) {
    throw std::invalid_argument("config: unsupported schema_version " +
                                std::to_string(cfg.schema_version) + " (expected 1)");
  }

  if (const json* t = section(j, "task")) {
    reject_unknown_keys(*t, "task",
                        {"kind", "n", "communities", "p_in", "p_out", "num_samples", "horizon",
                         "channels", "seed", "radius", "sequence_length", "step_scale"});
    read(*t, "kind", cfg.task.kind);
    read(*t, "n", cfg.task.n);
    read(*t, "communities", cfg.task.communities);
    read(*t, "p_in", cfg.task.p_in);
    read(*t, "p_out", cfg.task.p_out);
    read(*t, "num_samples", cfg.task.num_samples);
    read(*t, "horizon", cfg.task.horizon);
    read(*t, "channels", cfg.task.channels);
    read(*t, "seed", cfg.task.seed);
    read(*t, "radius", cfg.task.radius);
    read(*t, "sequence_length", cfg.task.sequence_length);
    read(*t, "step_scale", cfg.task.step_scale);
  }
  if (cfg.task.kind != "source_localization" && cfg.task.kind != "dynamic_source_localization") {
    throw std::invalid_argument("config: task.kind must be source_localization or "
                                "dynamic_source_localization, got '" +
                                cfg.task.kind + "'");
  }
  if (!(cfg.task.p_in >= 0.0 && cfg.task.p_in <= 1.0) ||
      !(cfg.task.p_out >= 0.0 && cfg.task.p_out <= 1.0)) {
    throw std::invalid_argument("config: task.p_in and task.p_out must lie in [0, 1]");
  }

  if (const json* m = section(j, "model")) {
    reject_unknown_keys(
        *m, "model", {"feature_dims", "taps", "nonlinearity", "readout_mode", "output_dim"});
    read(*m, "feature_dims", cfg.model.feature_dims);
    read(*m, "taps", cfg.model.taps);
    read(*m, "nonlinearity", cfg.model.nonlinearity);
    read(*m, "readout_mode", cfg.model.readout_mode);
    read(*m, "output_dim", cfg.model.output_dim);
  }

  if (const json* t = section(j, "train")) {
    reject_unknown_keys(*t, "train",
                        {"method", "step_size", "schedule", "batch_size", "epochs", "loss",
                         "seed", "noise_sigma", "pgd_epsilon", "pgd_steps", "pgd_step_size",
                         "per_layer_bounds"});
    read(*t, "method", cfg.train.method);
    read(*t, "step_size", cfg.train.step_size);
    read(*t, "schedule", cfg.train.schedule);
    read(*t, "batch_size", cfg.train.batch_size);
    read(*t, "epochs", cfg.train.epochs);
    read(*t, "loss", cfg.train.loss);
    read(*t, "seed", cfg.train.seed);
    read(*t, "noise_sigma", cfg.train.noise_sigma);
    read(*t, "pgd_epsilon", cfg.train.pgd_epsilon);
    read(*t, "pgd_steps", cfg.train.pgd_steps);
    read(*t, "pgd_step_size", cfg.train.pgd_step_size);
    read(*t, "per_layer_bounds", cfg.train.per_layer_bounds);
  }

  if (const json* c = section(j, "constraint")) {
    reject_unknown_keys(*c, "constraint",
                        {"mode", "bound_c", "interval_a", "interval_b", "harvest", "epsilon",
                         "delta", "m_override", "seed"});
    read(*c, "mode", cfg.constraint.mode);
    read(*c, "bound_c", cfg.constraint.bound_c);
    read(*c, "interval_a", cfg.constraint.interval_a);
    read(*c, "interval_b", cfg.constraint.interval_b);
    read(*c, "harvest", cfg.constraint.harvest);
    read(*c, "epsilon", cfg.constraint.epsilon);
    read(*c, "delta", cfg.constraint.delta);
    read(*c, "m_override", cfg.constraint.m_override);
    read(*c, "seed", cfg.constraint.seed);
  }
  if (cfg.constraint.mode != "none" && cfg.constraint.mode != "static" &&
      cfg.constraint.mode != "scenario") {
    throw std::invalid_argument("config: constraint.mode must be none, static, or scenario");
  }

  if (const json* s = section(j, "sweep")) {
    reject_unknown_keys(
        *s, "sweep", {"perturbation", "magnitudes", "trials", "seed", "metric", "pgd_steps"});
    read(*s, "perturbation", cfg.sweep.perturbation);
    read(*s, "magnitudes", cfg.sweep.magnitudes);
    read(*s, "trials", cfg.sweep.trials);
    read(*s, "seed", cfg.sweep.seed);
    read(*s, "metric", cfg.sweep.metric);
    read(*s, "pgd_steps", cfg.sweep.pgd_steps);
  }

  read(j, "data_dir", cfg.data_dir);
  read(j, "out_dir", cfg.out_dir);

  if (cfg.train.method == "lipschitz" && cfg.constraint.mode == "none") {
    throw std::invalid_argument(
        "config: train.method=lipschitz requires constraint.mode static or scenario");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json(buffer.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["task"] = {{"kind", cfg.task.kind},
               {"n", cfg.task.n},
               {"communities", cfg.task.communities},
               {"p_in", cfg.task.p_in},
               {"p_out", cfg.task.p_out},
               {"num_samples", cfg.task.num_samples},
               {"horizon", cfg.task.horizon},
               {"channels", cfg.task.channels},
               {"seed", cfg.task.seed},
               {"radius", cfg.task.radius},
               {"sequence_length", cfg.task.sequence_length},
               {"step_scale", cfg.task.step_scale}};
  j["model"] = {{"feature_dims", cfg.model.feature_dims},
                {"taps", cfg.model.taps},
                {"nonlinearity", cfg.model.nonlinearity},
                {"readout_mode", cfg.model.readout_mode},
                {"output_dim", cfg.model.output_dim}};
  j["train"] = {{"method", cfg.train.method},
                {"step_size", cfg.train.step_size},
                {"schedule", cfg.train.schedule},
                {"batch_size", cfg.train.batch_size},
                {"epochs", cfg.train.epochs},
                {"loss", cfg.train.loss},
                {"seed", cfg.train.seed},
                {"noise_sigma", cfg.train.noise_sigma},
                {"pgd_epsilon", cfg.train.pgd_epsilon},
                {"pgd_steps", cfg.train.pgd_steps},
                {"pgd_step_size", cfg.train.pgd_step_size},
                {"per_layer_bounds", cfg.train.per_layer_bounds}};
  j["constraint"] = {{"mode", cfg.constraint.mode},
                     {"bound_c", cfg.constraint.bound_c},
                     {"interval_a", cfg.constraint.interval_a},
                     {"interval_b", cfg.constraint.interval_b},
                     {"harvest", cfg.constraint.harvest},
                     {"epsilon", cfg.constraint.epsilon},
                     {"delta", cfg.constraint.delta},
                     {"m_override", cfg.constraint.m_override},
                     {"seed", cfg.constraint.seed}};
  j["sweep"] = {{"perturbation", cfg.sweep.perturbation},
                {"magnitudes", cfg.sweep.magnitudes},
                {"trials", cfg.sweep.trials},
                {"seed", cfg.sweep.seed},
                {"metric", cfg.sweep.metric},
                {"pgd_steps", cfg.sweep.pgd_steps}};
  j["data_dir"] = cfg.data_dir;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2);
}

void save_run_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot open " + path + " for writing");
  out << run_config_to_json(cfg) << "\n";
}

}  // namespace specgnn

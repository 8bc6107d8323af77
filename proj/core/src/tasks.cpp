#include "specgnn/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "specgnn/rng.hpp"

namespace specgnn {

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kDatasetTag = "specgnn-dataset";
constexpr int kDatasetVersion = 1;

void assign_splits(std::size_t count, std::vector<std::size_t>& train,
                   std::vector<std::size_t>& val, std::vector<std::size_t>& test) {
  // Samples are i.i.d. by construction, so contiguous 60/20/20 is unbiased.
  const std::size_t n_train = (count * 6) / 10;
  const std::size_t n_val = (count * 2) / 10;
  train.clear();
  val.clear();
  test.clear();
  for (std::size_t i = 0; i < count; ++i) {
    if (i < n_train) {
      train.push_back(i);
    } else if (i < n_train + n_val) {
      val.push_back(i);
    } else {
      test.push_back(i);
    }
  }
}

// Multi-channel diffusion signal: column j holds S^max(t-(channels-1)+j, 0) e_s.
GraphSignal diffuse(const GraphShiftOperator& shift, std::size_t source, std::size_t t,
                    std::size_t channels) {
  const std::size_t n = shift.node_count();
  GraphSignal state(n, 1);
  state(source, 0) = 1.0;

  GraphSignal out(n, channels);
  const std::size_t first_step =
      t >= channels - 1 ? t - (channels - 1) : 0;  // clamp early channels to step 0
  std::size_t written = 0;
  for (std::size_t step = 0; step <= t; ++step) {
    if (step >= first_step) {
      const std::size_t column = channels - (t - step) - 1;
      for (std::size_t i = 0; i < n; ++i) out(i, column) = state(i, 0);
      ++written;
    }
    if (step == t) break;
    state = matmul(shift.matrix(), state);
  }
  // When t < channels-1 the leading columns repeat the step-0 impulse.
  for (std::size_t column = 0; column + written < channels; ++column) {
    out(source, column) = 1.0;
  }
  return out;
}

DenseMatrix one_hot_row(std::size_t index, std::size_t width) {
  DenseMatrix row(1, width);
  row(0, index) = 1.0;
  return row;
}

void write_labels_csv(const std::string& path, const std::vector<std::size_t>& labels,
                      const std::vector<std::size_t>& sources,
                      const std::vector<std::size_t>& steps,
                      const std::vector<std::size_t>* graph_indices) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
  out << (graph_indices ? "label,source,step,graph\n" : "label,source,step\n");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << "," << sources[i] << "," << steps[i];
    if (graph_indices) out << "," << (*graph_indices)[i];
    out << "\n";
  }
}

struct LabelRows {
  std::vector<std::size_t> labels, sources, steps, graphs;
  bool has_graph = false;
};

LabelRows read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_dataset: empty labels file " + path);
  LabelRows rows;
  rows.has_graph = line == "label,source,step,graph";
  if (!rows.has_graph && line != "label,source,step") {
    throw std::runtime_error("load_dataset: unexpected labels header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t label = 0, source = 0, step = 0, graph = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    ss >> label >> c1 >> source >> c2 >> step;
    if (rows.has_graph) ss >> c3 >> graph;
    if (!ss || c1 != ',' || c2 != ',' || (rows.has_graph && c3 != ',')) {
      throw std::runtime_error("load_dataset: malformed labels row '" + line + "'");
    }
    rows.labels.push_back(label);
    rows.sources.push_back(source);
    rows.steps.push_back(step);
    if (rows.has_graph) rows.graphs.push_back(graph);
  }
  return rows;
}

// Signals are stored one sample per row (sample count x n*channels).
DenseMatrix signals_to_matrix(const std::vector<GraphSignal>& signals) {
  if (signals.empty()) throw std::invalid_argument("save_dataset: no signals");
  const std::size_t n = signals.front().rows();
  const std::size_t channels = signals.front().cols();
  DenseMatrix m(signals.size(), n * channels);
  for (std::size_t s = 0; s < signals.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < channels; ++j) m(s, i * channels + j) = signals[s](i, j);
    }
  }
  return m;
}

std::vector<GraphSignal> matrix_to_signals(const DenseMatrix& m, std::size_t n,
                                           std::size_t channels) {
  if (m.cols() != n * channels) {
    throw std::runtime_error("load_dataset: signals have " + std::to_string(m.cols()) +
                             " columns, expected " + std::to_string(n * channels));
  }
  std::vector<GraphSignal> signals;
  signals.reserve(m.rows());
  for (std::size_t s = 0; s < m.rows(); ++s) {
    GraphSignal x(n, channels);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < channels; ++j) x(i, j) = m(s, i * channels + j);
    }
    signals.push_back(std::move(x));
  }
  return signals;
}

nlohmann::json splits_to_json(const std::vector<std::size_t>& train,
                              const std::vector<std::size_t>& val,
                              const std::vector<std::size_t>& test) {
  return nlohmann::json{{"train", train}, {"val", val}, {"test", test}};
}

void splits_from_json(const nlohmann::json& j, std::vector<std::size_t>& train,
                      std::vector<std::size_t>& val, std::vector<std::size_t>& test) {
  train = j.at("train").get<std::vector<std::size_t>>();
  val = j.at("val").get<std::vector<std::size_t>>();
  test = j.at("test").get<std::vector<std::size_t>>();
}

nlohmann::json load_manifest(const std::string& dir) {
  const std::string path = dir + "/" + kManifestName;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != kDatasetTag) {
    throw std::runtime_error("load_dataset: " + path + " is not a dataset manifest");
  }
  if (j.at("version").get<int>() != kDatasetVersion) {
    throw std::runtime_error("load_dataset: unsupported dataset version");
  }
  return j;
}

void write_manifest(const std::string& dir, const nlohmann::json& j) {
  const std::string path = dir + "/" + kManifestName;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

SourceLocDataset gen_source_localization(const SourceLocParams& params) {
  if (params.num_samples == 0) {
    throw std::invalid_argument("gen_source_localization: num_samples must be positive");
  }
  if (params.horizon == 0) {
    throw std::invalid_argument("gen_source_localization: horizon must be >= 1");
  }
  if (params.channels == 0) {
    throw std::invalid_argument("gen_source_localization: channels must be >= 1");
  }

  SourceLocDataset ds;
  ds.params = params;
  ds.adjacency = generate_sbm(params.n, params.communities, params.p_in, params.p_out,
                              derive_seed(params.seed, 0));
  ds.shift = normalize_by_spectral_norm(ds.adjacency);

  Rng rng(derive_seed(params.seed, 1));
  ds.signals.reserve(params.num_samples);
  for (std::size_t i = 0; i < params.num_samples; ++i) {
    const std::size_t source = rng.index(params.n);
    const std::size_t t = 1 + rng.index(params.horizon);
    ds.signals.push_back(diffuse(ds.shift, source, t, params.channels));
    ds.labels.push_back(sbm_community_of(source, params.n, params.communities));
    ds.sources.push_back(source);
    ds.steps.push_back(t);
  }
  assign_splits(params.num_samples, ds.train_idx, ds.val_idx, ds.test_idx);
  return ds;
}

DynamicGraphSequence normalize_sequence(const DynamicGraphSequence& seq, double* scale) {
  if (seq.operators.empty()) {
    throw std::invalid_argument("normalize_sequence: sequence has no operators");
  }
  double max_norm = 0.0;
  for (const GraphShiftOperator& op : seq.operators) {
    max_norm = std::max(max_norm, op.spectral_norm());
  }
  if (max_norm <= 0.0) {
    throw std::invalid_argument("normalize_sequence: every operator is zero");
  }
  DynamicGraphSequence out;
  out.operators.reserve(seq.operators.size());
  for (const GraphShiftOperator& op : seq.operators) {
    out.operators.emplace_back((1.0 / max_norm) * op.matrix(), GsoKind::normalized_adjacency);
  }
  if (scale != nullptr) *scale = max_norm;
  return out;
}

DynamicEvalSet gen_dynamic_task(const DynamicGraphSequence& sequence, std::size_t num_samples,
                                std::size_t horizon, std::uint64_t seed) {
  if (sequence.operators.empty()) {
    throw std::invalid_argument("gen_dynamic_task: sequence has no operators");
  }
  if (num_samples == 0) throw std::invalid_argument("gen_dynamic_task: num_samples must be positive");
  if (horizon == 0) throw std::invalid_argument("gen_dynamic_task: horizon must be >= 1");

  DynamicEvalSet ds;
  ds.raw = sequence;
  ds.shifts = normalize_sequence(sequence, &ds.scale);
  ds.horizon = horizon;
  ds.seed = seed;

  const std::size_t n = sequence.node_count();
  Rng rng(derive_seed(seed, 1));
  ds.signals.reserve(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const std::size_t step = rng.index(sequence.size());
    const std::size_t source = rng.index(n);
    const std::size_t t = 1 + rng.index(horizon);
    ds.step_index.push_back(step);
    ds.signals.push_back(diffuse(ds.shifts.operators[step], source, t, 1));
    ds.labels.push_back(source);
    ds.steps.push_back(t);
  }
  assign_splits(num_samples, ds.train_idx, ds.val_idx, ds.test_idx);
  return ds;
}

TrainSet to_train_set(const SourceLocDataset& ds, const std::vector<std::size_t>& indices) {
  TrainSet set;
  set.graphs.push_back(ds.shift);
  set.samples.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= ds.size()) throw std::invalid_argument("to_train_set: sample index out of range");
    TrainSample sample;
    sample.graph_index = 0;
    sample.x = ds.signals[i];
    sample.target = one_hot_row(ds.labels[i], ds.params.communities);
    set.samples.push_back(std::move(sample));
  }
  return set;
}

TrainSet to_train_set(const DynamicEvalSet& ds, const std::vector<std::size_t>& indices) {
  TrainSet set;
  set.graphs = ds.shifts.operators;
  const std::size_t n = ds.shifts.node_count();
  set.samples.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= ds.size()) throw std::invalid_argument("to_train_set: sample index out of range");
    TrainSample sample;
    sample.graph_index = ds.step_index[i];
    sample.x = ds.signals[i];
    sample.target = one_hot_row(ds.labels[i], n);
    set.samples.push_back(std::move(sample));
  }
  return set;
}

void save_dataset(const std::string& dir, const SourceLocDataset& ds) {
  std::filesystem::create_directories(dir);
  write_edge_list(dir + "/graph.edges", ds.adjacency.matrix());
  write_signal_csv(dir + "/signals.csv", signals_to_matrix(ds.signals));
  write_labels_csv(dir + "/labels.csv", ds.labels, ds.sources, ds.steps, nullptr);

  nlohmann::json j;
  j["format"] = kDatasetTag;
  j["version"] = kDatasetVersion;
  j["kind"] = "source_localization";
  j["params"] = {{"n", ds.params.n},
                 {"communities", ds.params.communities},
                 {"p_in", ds.params.p_in},
                 {"p_out", ds.params.p_out},
                 {"num_samples", ds.params.num_samples},
                 {"horizon", ds.params.horizon},
                 {"channels", ds.params.channels},
                 {"seed", ds.params.seed}};
  j["splits"] = splits_to_json(ds.train_idx, ds.val_idx, ds.test_idx);
  write_manifest(dir, j);
}

void save_dataset(const std::string& dir, const DynamicEvalSet& ds) {
  std::filesystem::create_directories(dir);
  char name[64];
  for (std::size_t r = 0; r < ds.raw.size(); ++r) {
    std::snprintf(name, sizeof(name), "graph_%03zu.edges", r);
    write_edge_list(dir + "/" + name, ds.raw.operators[r].matrix());
  }
  write_signal_csv(dir + "/signals.csv", signals_to_matrix(ds.signals));
  write_labels_csv(dir + "/labels.csv", ds.labels, ds.labels, ds.steps, &ds.step_index);

  nlohmann::json j;
  j["format"] = kDatasetTag;
  j["version"] = kDatasetVersion;
  j["kind"] = "dynamic_source_localization";
  j["params"] = {{"n", ds.raw.node_count()},
                 {"sequence_length", ds.raw.size()},
                 {"num_samples", ds.size()},
                 {"horizon", ds.horizon},
                 {"seed", ds.seed}};
  j["splits"] = splits_to_json(ds.train_idx, ds.val_idx, ds.test_idx);
  write_manifest(dir, j);
}

std::string dataset_kind(const std::string& dir) {
  return load_manifest(dir).at("kind").get<std::string>();
}

SourceLocDataset load_source_localization(const std::string& dir) {
  const nlohmann::json j = load_manifest(dir);
  if (j.at("kind").get<std::string>() != "source_localization") {
    throw std::runtime_error("load_source_localization: " + dir + " holds a " +
                             j.at("kind").get<std::string>() + " dataset");
  }
  const nlohmann::json& p = j.at("params");
  SourceLocDataset ds;
  ds.params.n = p.at("n").get<std::size_t>();
  ds.params.communities = p.at("communities").get<std::size_t>();
  ds.params.p_in = p.at("p_in").get<double>();
  ds.params.p_out = p.at("p_out").get<double>();
  ds.params.num_samples = p.at("num_samples").get<std::size_t>();
  ds.params.horizon = p.at("horizon").get<std::size_t>();
  ds.params.channels = p.value("channels", std::size_t{1});
  ds.params.seed = p.at("seed").get<std::uint64_t>();

  ds.adjacency = GraphShiftOperator(read_edge_list(dir + "/graph.edges"));
  ds.shift = normalize_by_spectral_norm(ds.adjacency);
  ds.signals = matrix_to_signals(read_signal_csv(dir + "/signals.csv"), ds.params.n,
                                 ds.params.channels);
  LabelRows rows = read_labels_csv(dir + "/labels.csv");
  ds.labels = std::move(rows.labels);
  ds.sources = std::move(rows.sources);
  ds.steps = std::move(rows.steps);
  if (ds.labels.size() != ds.signals.size()) {
    throw std::runtime_error("load_dataset: label/signal count mismatch");
  }
  splits_from_json(j.at("splits"), ds.train_idx, ds.val_idx, ds.test_idx);
  return ds;
}

DynamicEvalSet load_dynamic_task(const std::string& dir) {
  const nlohmann::json j = load_manifest(dir);
  if (j.at("kind").get<std::string>() != "dynamic_source_localization") {
    throw std::runtime_error("load_dynamic_task: " + dir + " holds a " +
                             j.at("kind").get<std::string>() + " dataset");
  }
  const nlohmann::json& p = j.at("params");
  const std::size_t n = p.at("n").get<std::size_t>();
  const std::size_t length = p.at("sequence_length").get<std::size_t>();

  DynamicEvalSet ds;
  char name[64];
  for (std::size_t r = 0; r < length; ++r) {
    std::snprintf(name, sizeof(name), "graph_%03zu.edges", r);
    ds.raw.operators.emplace_back(read_edge_list(dir + "/" + name));
  }
  ds.shifts = normalize_sequence(ds.raw, &ds.scale);
  ds.horizon = p.at("horizon").get<std::size_t>();
  ds.seed = p.at("seed").get<std::uint64_t>();
  ds.signals = matrix_to_signals(read_signal_csv(dir + "/signals.csv"), n, 1);
  LabelRows rows = read_labels_csv(dir + "/labels.csv");
  if (!rows.has_graph || rows.labels.size() != ds.signals.size()) {
    throw std::runtime_error("load_dataset: malformed dynamic labels file");
  }
  ds.labels = std::move(rows.labels);
  ds.steps = std::move(rows.steps);
  ds.step_index = std::move(rows.graphs);
  splits_from_json(j.at("splits"), ds.train_idx, ds.val_idx, ds.test_idx);
  return ds;
}

}  // namespace specgnn

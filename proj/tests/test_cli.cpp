// End-to-end tests that drive the installed CLI binary as a subprocess.
// SPECGNN_CLI_PATH is injected by the build. Everything runs on a tiny
// 16-node task so the whole file finishes in seconds.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& work_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "specgnn_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "cannot open " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

CmdResult run_cli(const std::string& args) {
  static int invocation = 0;
  const fs::path out = work_root() / ("stdout." + std::to_string(invocation));
  const fs::path err = work_root() / ("stderr." + std::to_string(invocation));
  ++invocation;
  const std::string cmd = std::string(SPECGNN_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CmdResult r;
  if (status != -1 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) fields.push_back(f);
  return fields;
}

json tiny_config() {
  json j;
  j["schema_version"] = 1;
  j["task"] = {{"kind", "source_localization"}, {"n", 16},       {"communities", 4},
               {"p_in", 0.8},                   {"p_out", 0.1},  {"num_samples", 48},
               {"horizon", 4},                  {"channels", 1}, {"seed", 5}};
  j["model"] = {{"feature_dims", json::array({1, 4})},
                {"taps", 3},
                {"nonlinearity", "relu"},
                {"readout_mode", "mean_pool"},
                {"output_dim", 4}};
  j["train"] = {{"method", "unconstrained"}, {"step_size", 0.5}, {"batch_size", 12},
                {"epochs", 4},               {"seed", 9}};
  j["sweep"] = {{"perturbation", "awgn"},
                {"magnitudes", json::array({0.0})},
                {"trials", 1},
                {"seed", 11}};
  return j;
}

fs::path write_config(const json& j, const std::string& name) {
  const fs::path p = work_root() / name;
  std::ofstream out(p);
  out << j.dump(2) << "\n";
  return p;
}

// Dataset shared by every training/eval case, generated once.
const fs::path& shared_data() {
  static fs::path dir = [] {
    fs::path d = work_root() / "data";
    const fs::path cfg = write_config(tiny_config(), "gen.json");
    CmdResult r = run_cli("gen-data --config " + cfg.string() + " --out " + d.string());
    REQUIRE_MESSAGE(r.code == 0, "gen-data failed: " << r.err);
    return d;
  }();
  return dir;
}

// One trained checkpoint per method, shared by the eval/profile cases.
struct TrainedRuns {
  fs::path unc, lip, awgn, pgd;
};

const TrainedRuns& shared_runs() {
  static TrainedRuns runs = [] {
    TrainedRuns t;
    auto train_one = [&](const std::string& method, json extra) {
      json j = tiny_config();
      j["train"]["method"] = method;
      for (auto& [k, v] : extra.items()) {
        if (k == "constraint") {
          j["constraint"] = v;
        } else {
          j["train"][k] = v;
        }
      }
      const fs::path dir = work_root() / ("run_" + method);
      const fs::path cfg = write_config(j, "train_" + method + ".json");
      CmdResult r = run_cli("train --config " + cfg.string() + " --data " +
                            shared_data().string() + " --out " + dir.string());
      REQUIRE_MESSAGE(r.code == 0, "train " << method << " failed: " << r.err);
      return dir;
    };
    t.unc = train_one("unconstrained", json::object());
    t.lip = train_one("lipschitz", {{"constraint", {{"mode", "static"}, {"bound_c", 2.0}}}});
    t.awgn = train_one("awgn_augment", {{"noise_sigma", 0.05}});
    t.pgd = train_one("pgd_adversarial", {{"pgd_epsilon", 0.02}, {"pgd_steps", 3}});
    return t;
  }();
  return runs;
}

// All regular files under two run directories match byte for byte, except the
// timestamped sidecar log. The materialized config records its own output
// directory (it doubles as the replay input), so that one field is normalized
// before comparing.
void check_dirs_equal_except_log(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> rel;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), a));
  }
  CHECK(!rel.empty());
  std::size_t compared = 0;
  for (const fs::path& r : rel) {
    CHECK_MESSAGE(fs::exists(b / r), (b / r).string() << " missing");
    if (r.filename() == "run.log") continue;
    if (r.filename() == "config.json") {
      json ca = json::parse(slurp(a / r));
      json cb = json::parse(slurp(b / r));
      ca.erase("out_dir");
      cb.erase("out_dir");
      CHECK_MESSAGE(ca == cb, "config.json differs between reruns beyond out_dir");
    } else {
      CHECK_MESSAGE(slurp(a / r) == slurp(b / r), r.string() << " differs between reruns");
    }
    ++compared;
  }
  CHECK(compared >= 1);
}

}  // namespace

TEST_CASE("scenario-sample-size prints the golden sample counts") {
  CmdResult r = run_cli("scenario-sample-size --epsilon 0.1 --delta 0.1 --taps 5");
  CHECK(r.code == 0);
  CHECK(trimmed(r.out) == "1078");

  r = run_cli("scenario-sample-size --epsilon 0.5 --delta 0.5 --taps 1");
  CHECK(r.code == 0);
  CHECK(trimmed(r.out) == "37");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").code == 2);                 // no subcommand
  CHECK(run_cli("no-such-command").code == 2);  // unknown subcommand
  // out-of-range epsilon is a config error, not a crash
  CmdResult r = run_cli("scenario-sample-size --epsilon 1.5 --delta 0.1 --taps 5");
  CHECK(r.code == 2);
  CHECK(r.err.find("epsilon") != std::string::npos);
  // missing required option
  CHECK(run_cli("scenario-sample-size --epsilon 0.1 --delta 0.1").code == 2);
}

TEST_CASE("gen-data writes a manifest and regenerates byte-identically") {
  const fs::path cfg = write_config(tiny_config(), "gen_twice.json");
  const fs::path d1 = work_root() / "gen1";
  const fs::path d2 = work_root() / "gen2";
  CmdResult r1 = run_cli("gen-data --config " + cfg.string() + " --out " + d1.string());
  CmdResult r2 = run_cli("gen-data --config " + cfg.string() + " --out " + d2.string());
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  CHECK(r1.err.find("generated") != std::string::npos);
  CHECK(fs::exists(d1 / "manifest.json"));
  check_dirs_equal_except_log(d1, d2);

  // refuses to clobber without --force, allows it with
  CmdResult again = run_cli("gen-data --config " + cfg.string() + " --out " + d1.string());
  CHECK(again.code == 2);
  CHECK(again.err.find("--force") != std::string::npos);
  again = run_cli("gen-data --config " + cfg.string() + " --out " + d1.string() + " --force");
  CHECK(again.code == 0);
}

TEST_CASE("gen-data rejects an out-of-range edge probability") {
  json j = tiny_config();
  j["task"]["p_in"] = 1.5;
  const fs::path cfg = write_config(j, "gen_bad_pin.json");
  CmdResult r = run_cli("gen-data --config " + cfg.string() + " --out " +
                        (work_root() / "gen_bad").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("p_in") != std::string::npos);
}

TEST_CASE("config parsing rejects unknown keys with exit code 2") {
  json j = tiny_config();
  j["train"]["learning_rate"] = 0.1;  // typo for step_size
  const fs::path cfg = write_config(j, "gen_unknown_key.json");
  CmdResult r = run_cli("gen-data --config " + cfg.string() + " --out " +
                        (work_root() / "gen_unknown").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("learning_rate") != std::string::npos);
}

TEST_CASE("unconstrained training reports violation as n/a and writes artifacts") {
  const TrainedRuns& runs = shared_runs();
  CHECK(fs::exists(runs.unc / "checkpoint.json"));
  CHECK(fs::exists(runs.unc / "trace.csv"));
  CHECK(fs::exists(runs.unc / "config.json"));
  CHECK(fs::exists(runs.unc / "run.log"));
  CHECK(!fs::exists(runs.unc / "feasibility.json"));

  const std::vector<std::string> trace = lines_of(slurp(runs.unc / "trace.csv"));
  REQUIRE(trace.size() == 5);  // header + 4 epochs
  CHECK(trace[0] == "epoch,loss,violation");
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const std::vector<std::string> fields = split_csv(trace[i]);
    REQUIRE(fields.size() == 3);
    CHECK(fields[2] == "n/a");
  }

  // the materialized config echoes resolved defaults and the chosen method
  const json cfg = json::parse(slurp(runs.unc / "config.json"));
  CHECK(cfg.at("train").at("method") == "unconstrained");
  CHECK(cfg.at("train").at("schedule") == "constant");
}

TEST_CASE("constrained training ends feasible and records a feasibility report") {
  const TrainedRuns& runs = shared_runs();
  const json rep = json::parse(slurp(runs.lip / "feasibility.json"));
  CHECK(rep.at("max_violation").get<double>() <= 1e-9);
  CHECK(rep.at("rotated_violation").get<double>() <= 1e-9);
  CHECK(rep.at("grid_violation_fraction").get<double>() >= 0.0);
  CHECK(rep.at("grid_points").get<std::size_t>() == 100001);

  const std::vector<std::string> trace = lines_of(slurp(runs.lip / "trace.csv"));
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const std::vector<std::string> fields = split_csv(trace[i]);
    REQUIRE(fields.size() == 3);
    CHECK(fields[2] != "n/a");
    CHECK(std::stod(fields[2]) <= 1e-9);
  }
}

TEST_CASE("interrupted training resumed from a checkpoint matches the one-shot run") {
  json j = tiny_config();
  j["train"]["method"] = "lipschitz";
  j["constraint"] = {{"mode", "static"}, {"bound_c", 2.0}};
  j["train"]["epochs"] = 6;
  const fs::path full_cfg = write_config(j, "resume_full.json");
  j["train"]["epochs"] = 3;
  const fs::path half_cfg = write_config(j, "resume_half.json");

  const fs::path full_dir = work_root() / "resume_full";
  const fs::path half_dir = work_root() / "resume_half";
  const fs::path cont_dir = work_root() / "resume_cont";
  const std::string data = " --data " + shared_data().string();
  CHECK(run_cli("train --config " + full_cfg.string() + data + " --out " + full_dir.string())
            .code == 0);
  CHECK(run_cli("train --config " + half_cfg.string() + data + " --out " + half_dir.string())
            .code == 0);
  CmdResult cont = run_cli("train --config " + full_cfg.string() + data + " --out " +
                           cont_dir.string() + " --resume " +
                           (half_dir / "checkpoint.json").string());
  CHECK(cont.code == 0);
  CHECK(cont.err.find("resuming at epoch 3/6") != std::string::npos);

  CHECK(slurp(full_dir / "checkpoint.json") == slurp(cont_dir / "checkpoint.json"));

  // the continuation's trace is exactly the tail of the uninterrupted trace
  const std::vector<std::string> full_trace = lines_of(slurp(full_dir / "trace.csv"));
  const std::vector<std::string> cont_trace = lines_of(slurp(cont_dir / "trace.csv"));
  REQUIRE(full_trace.size() == 7);
  REQUIRE(cont_trace.size() == 4);
  CHECK(cont_trace[0] == full_trace[0]);
  for (std::size_t i = 0; i < 3; ++i) CHECK(cont_trace[1 + i] == full_trace[4 + i]);

  // a checkpoint from a different architecture is refused
  json other = tiny_config();
  other["model"]["feature_dims"] = json::array({1, 6});
  const fs::path other_cfg = write_config(other, "resume_other.json");
  CmdResult bad = run_cli("train --config " + other_cfg.string() + data + " --out " +
                          (work_root() / "resume_bad").string() + " --resume " +
                          (half_dir / "checkpoint.json").string());
  CHECK(bad.code == 2);
  CHECK(bad.err.find("refusing to resume") != std::string::npos);
}

TEST_CASE("training reruns are byte-exact apart from the timestamped log") {
  json j = tiny_config();
  j["train"]["method"] = "lipschitz";
  j["constraint"] = {{"mode", "static"}, {"bound_c", 2.0}};
  const fs::path cfg = write_config(j, "rerun.json");
  const fs::path a = work_root() / "rerun_a";
  const fs::path b = work_root() / "rerun_b";
  const std::string data = " --data " + shared_data().string();
  CHECK(run_cli("train --config " + cfg.string() + data + " --out " + a.string()).code == 0);
  CHECK(run_cli("train --config " + cfg.string() + data + " --out " + b.string()).code == 0);
  check_dirs_equal_except_log(a, b);
}

TEST_CASE("zero-magnitude eval degenerates to the clean metrics table") {
  const TrainedRuns& runs = shared_runs();
  json j = tiny_config();
  const fs::path cfg = write_config(j, "eval_clean.json");
  const fs::path out = work_root() / "eval_clean";
  CmdResult r = run_cli("eval --config " + cfg.string() + " --data " + shared_data().string() +
                        " --out " + out.string() + " unc=" +
                        (runs.unc / "checkpoint.json").string() + " lip=" +
                        (runs.lip / "checkpoint.json").string());
  CHECK(r.code == 0);

  const std::vector<std::string> clean = lines_of(slurp(out / "clean.csv"));
  REQUIRE(clean.size() == 3);
  CHECK(clean[0] == "method,clean_metric,checksum");
  const std::vector<std::string> report = lines_of(slurp(out / "report.csv"));
  REQUIRE(report.size() == 3);  // two models x one magnitude
  CHECK(report[0] == "method,perturbation,magnitude,trial_count,metric_mean,metric_stderr");
  for (std::size_t i = 1; i < 3; ++i) {
    const std::vector<std::string> row = split_csv(report[i]);
    REQUIRE(row.size() == 6);
    CHECK(row[2] == "0");
    // at magnitude zero the sweep metric equals the clean metric
    for (std::size_t k = 1; k < 3; ++k) {
      const std::vector<std::string> c = split_csv(clean[k]);
      if (c[0] == row[0]) CHECK(std::stod(row[4]) == doctest::Approx(std::stod(c[1])).epsilon(1e-12));
    }
  }
}

TEST_CASE("four-method eval writes one row per method per magnitude plus charts") {
  const TrainedRuns& runs = shared_runs();
  json j = tiny_config();
  j["sweep"]["magnitudes"] = json::array({0.0, 0.05});
  j["sweep"]["trials"] = 2;
  const fs::path cfg = write_config(j, "eval_four.json");
  const fs::path out = work_root() / "eval_four";
  const std::string ckpts = " unc=" + (runs.unc / "checkpoint.json").string() + " lip=" +
                            (runs.lip / "checkpoint.json").string() + " awgn=" +
                            (runs.awgn / "checkpoint.json").string() + " pgd=" +
                            (runs.pgd / "checkpoint.json").string();
  const std::string cmd = "eval --config " + cfg.string() + " --data " + shared_data().string() +
                          " --out " + out.string() + ckpts;
  CmdResult r = run_cli(cmd);
  CHECK(r.code == 0);
  for (const char* name : {"unc", "lip", "awgn", "pgd"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }

  const std::vector<std::string> report = lines_of(slurp(out / "report.csv"));
  REQUIRE(report.size() == 9);  // header + 4 methods x 2 magnitudes
  std::size_t per_method[4] = {0, 0, 0, 0};
  const std::string names[4] = {"unc", "lip", "awgn", "pgd"};
  for (std::size_t i = 1; i < report.size(); ++i) {
    const std::vector<std::string> row = split_csv(report[i]);
    REQUIRE(row.size() == 6);
    CHECK(row[1] == "awgn");
    for (int k = 0; k < 4; ++k) {
      if (row[0] == names[k]) ++per_method[k];
    }
  }
  for (int k = 0; k < 4; ++k) CHECK(per_method[k] == 2);
  CHECK(fs::exists(out / "report.svg"));

  // reruns reproduce every artifact byte for byte
  const fs::path out2 = work_root() / "eval_four_b";
  CHECK(run_cli("eval --config " + cfg.string() + " --data " + shared_data().string() +
                " --out " + out2.string() + ckpts)
            .code == 0);
  check_dirs_equal_except_log(out, out2);
}

TEST_CASE("eval under a PGD sweep exercises the attack path") {
  const TrainedRuns& runs = shared_runs();
  json j = tiny_config();
  j["sweep"]["perturbation"] = "pgd";
  j["sweep"]["magnitudes"] = json::array({0.0, 0.01});
  j["sweep"]["pgd_steps"] = 3;
  const fs::path cfg = write_config(j, "eval_pgd.json");
  const fs::path out = work_root() / "eval_pgd";
  CmdResult r = run_cli("eval --config " + cfg.string() + " --data " + shared_data().string() +
                        " --out " + out.string() + " lip=" +
                        (runs.lip / "checkpoint.json").string());
  CHECK(r.code == 0);
  const std::vector<std::string> report = lines_of(slurp(out / "report.csv"));
  REQUIRE(report.size() == 3);
  CHECK(split_csv(report[1])[1] == "pgd");
}

TEST_CASE("eval with a missing checkpoint fails with exit code 2") {
  json j = tiny_config();
  const fs::path cfg = write_config(j, "eval_missing.json");
  CmdResult r = run_cli("eval --config " + cfg.string() + " --data " + shared_data().string() +
                        " --out " + (work_root() / "eval_missing").string() +
                        " nope=/does/not/exist.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("checkpoint not found") != std::string::npos);
}

TEST_CASE("freq-response profiles checkpoints and reports the constrained bound") {
  const TrainedRuns& runs = shared_runs();
  const fs::path out = work_root() / "freq";
  CmdResult r = run_cli("freq-response lip=" + (runs.lip / "checkpoint.json").string() +
                        " unc=" + (runs.unc / "checkpoint.json").string() +
                        " --a -1 --b 1 --grid 64 --out " + out.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("max H*") != std::string::npos);

  const std::vector<std::string> profile = lines_of(slurp(out / "profile.csv"));
  REQUIRE(profile.size() == 1 + 2 * 64);
  CHECK(profile[0] == "model,lambda,h_star");

  const json rec = json::parse(slurp(out / "freq_response.json"));
  CHECK(rec.at("grid_points").get<std::size_t>() == 64);
  REQUIRE(rec.at("models").size() == 2);
  const json& lip = rec.at("models").at(0);
  CHECK(lip.at("name") == "lip");
  CHECK(lip.at("bound_c").get<double>() == doctest::Approx(2.0));
  const double frac = lip.at("grid_violation_fraction").get<double>();
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);
  CHECK(lip.at("max_h_star").get<double>() > 0.0);
  const json& unc = rec.at("models").at(1);
  CHECK(!unc.contains("bound_c"));
  CHECK(fs::exists(out / "profile.svg"));

  // degenerate interval is a usage error
  CmdResult bad = run_cli("freq-response " + (runs.lip / "checkpoint.json").string() +
                          " --a 1 --b -1 --out " + (work_root() / "freq_bad").string());
  CHECK(bad.code == 2);
}

TEST_CASE("duplicate eval model names are rejected") {
  const TrainedRuns& runs = shared_runs();
  json j = tiny_config();
  const fs::path cfg = write_config(j, "eval_dup.json");
  CmdResult r = run_cli("eval --config " + cfg.string() + " --data " + shared_data().string() +
                        " --out " + (work_root() / "eval_dup").string() + " m=" +
                        (runs.unc / "checkpoint.json").string() + " m=" +
                        (runs.lip / "checkpoint.json").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("duplicate") != std::string::npos);
}

// robench: command-line front end for dataset generation, reformulation,
// solving, rendering, evaluation and memory adaptation.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "robench/adapt.hpp"
#include "robench/errors.hpp"
#include "robench/eval.hpp"
#include "robench/generator.hpp"
#include "robench/model_json.hpp"
#include "robench/rc_json.hpp"
#include "robench/reformulate.hpp"
#include "robench/render.hpp"

namespace {

using nlohmann::json;
using namespace robench;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAgent = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return json::parse(in);
}

// Section `name` of the --config file, or an empty object.
json config_section(const std::string& path, const std::string& name) {
  if (path.empty()) return json::object();
  json j = load_json_file(path);
  return j.contains(name) ? j[name] : json::object();
}

// Flags beat config values, which beat defaults: only copy a config value
// when the flag was not given.
template <typename T>
void merge(T& target, const json& section, const char* key, const CLI::Option* flag) {
  if (flag->count() == 0 && section.contains(key)) target = section[key].get<T>();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::vector<RobustInstance> read_instances(const std::string& path) {
  if (path.empty() || path == "-") return read_jsonl(std::cin);
  return load_dataset(path);
}

std::string read_all(const std::string& path) {
  std::stringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

// RC-JSON input: one object, or one object per line.
std::vector<lp::DeterministicLP> read_rc(const std::string& path) {
  const std::string text = read_all(path);
  std::vector<lp::DeterministicLP> out;
  try {
    out.push_back(lp::parse_rc_json(text));
    return out;
  } catch (const json::exception&) {
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(lp::parse_rc_json(line));
  }
  return out;
}

std::vector<TemplateId> parse_templates(const std::vector<std::string>& codes) {
  std::vector<TemplateId> out;
  for (const auto& c : codes) {
    if (c == "all") return TemplateId::all();
    out.push_back(TemplateId::parse(c));
  }
  return out;
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
  std::vector<std::size_t> n{2, 3, 4, 5};
  std::size_t count = 64;
  std::uint64_t seed = 0;
  bool hard = false;
  std::vector<std::string> templates{"all"};
  std::vector<std::string> types{"box", "budget", "polyhedral"};
  bool serial = false;
  bool no_render = false;
  std::string out;
  std::string config;
};

void add_gen(CLI::App& app, GenArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("gen", "Generate a robust LP dataset (JSONL)");
  auto* n = cmd->add_option("--n", a.n, "Decision dimensions to draw from")->delimiter(',');
  auto* count = cmd->add_option("--count", a.count, "Number of accepted instances");
  auto* seed = cmd->add_option("--seed", a.seed, "Master seed");
  auto* hard = cmd->add_flag("--hard", a.hard, "Hard mode: polyhedral rows, maximization");
  auto* templates =
      cmd->add_option("--templates", a.templates, "Template codes such as 011, or all")
          ->delimiter(',');
  auto* types = cmd->add_option("--types", a.types, "Uncertainty kinds to assign")->delimiter(',');
  cmd->add_flag("--serial", a.serial, "Use the serial reference generator");
  cmd->add_flag("--no-render", a.no_render, "Skip LaTeX and extension text");
  cmd->add_option("-o,--out", a.out, "Output file (default stdout)");
  cmd->add_option("--config", a.config, "JSON config file; section \"gen\"");
  run = [&a, n, count, seed, hard, templates, types] {
    const json c = config_section(a.config, "gen");
    merge(a.n, c, "n", n);
    merge(a.count, c, "count", count);
    merge(a.seed, c, "seed", seed);
    merge(a.hard, c, "hard", hard);
    merge(a.templates, c, "templates", templates);
    merge(a.types, c, "types", types);
    GenConfig cfg;
    cfg.n_values = a.n;
    cfg.count = a.count;
    cfg.seed = a.seed;
    cfg.hard_mode = a.hard;
    cfg.templates = parse_templates(a.templates);
    cfg.types.clear();
    for (const auto& t : a.types) cfg.types.push_back(uncertainty_kind_from_string(t));
    cfg.render = !a.no_render;
    GenStats stats;
    const auto data =
        a.serial ? generate_dataset_serial(cfg, &stats) : generate_dataset(cfg, &stats);
    std::ostringstream out;
    write_jsonl(out, data);
    write_text(a.out, out.str());
    std::cerr << "generated " << data.size() << " instances from " << stats.candidates
              << " candidates\n";
  };
}

// ---- reformulate / solve / oracle / render ---------------------------------

struct IoArgs {
  std::string in;
  std::string out;
  std::size_t max_iters = 200;
  bool with_x = false;
  std::string what = "latex";
  std::string template_code;
};

void add_reformulate(CLI::App& app, IoArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("reformulate", "Instance JSONL -> robust counterpart RC-JSON");
  cmd->add_option("-i,--in", a.in, "Instance JSONL (default stdin)");
  cmd->add_option("-o,--out", a.out, "RC-JSON output, one object per line");
  run = [&a] {
    std::string text;
    for (const auto& inst : read_instances(a.in))
      text += lp::dump_rc_json(reformulate(inst)) + "\n";
    write_text(a.out, text);
  };
}

void add_solve(CLI::App& app, IoArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("solve", "Solve RC-JSON and print the optimal value");
  cmd->add_option("-i,--in", a.in, "RC-JSON object or JSONL (default stdin)");
  cmd->add_flag("--x", a.with_x, "Also print the solution vector");
  run = [&a] {
    for (const auto& lp : read_rc(a.in)) {
      const auto sol = lp::solve_lp(lp);
      if (!sol.optimal()) {
        std::cout << lp::to_string(sol.status) << "\n";
        continue;
      }
      std::cout << format_number(*sol.objective_value);
      if (a.with_x) {
        for (double v : sol.x) std::cout << " " << format_number(v);
      }
      std::cout << "\n";
    }
  };
}

void add_oracle(CLI::App& app, IoArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("oracle", "Cutting-plane robust value of each instance");
  cmd->add_option("-i,--in", a.in, "Instance JSONL (default stdin)");
  cmd->add_option("--max-iters", a.max_iters, "Cut rounds before giving up");
  run = [&a] {
    for (const auto& inst : read_instances(a.in)) {
      std::cout << format_number(robust_value_oracle(inst, a.max_iters)) << "\n";
    }
  };
}

void add_render(CLI::App& app, IoArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("render", "Instance -> LaTeX and robust extension text");
  cmd->add_option("-i,--in", a.in, "Instance JSONL (default stdin)");
  cmd->add_option("-o,--out", a.out, "Output file (default stdout)");
  cmd->add_option("--what", a.what, "latex, extension or both")
      ->check(CLI::IsMember({"latex", "extension", "both"}));
  cmd->add_option("--template", a.template_code, "Override the template, e.g. 011");
  run = [&a] {
    std::string text;
    for (const auto& inst : read_instances(a.in)) {
      TemplateId t = inst.template_id.value_or(TemplateId{});
      if (!a.template_code.empty()) t = TemplateId::parse(a.template_code);
      if (a.what != "extension") text += render_latex(inst, t) + "\n";
      if (a.what == "both") text += "\n";
      if (a.what != "latex") text += render_robust_extension(inst) + "\n";
    }
    write_text(a.out, text);
  };
}

// ---- agents -----------------------------------------------------------------

// Agent config file: {"agent": {...}, "reformulator": {...}, "coder": {...},
// "reflector": {...}}. Role sections override the shared "agent" section.
std::unique_ptr<AgentClient> http_agent_for(const json& file, const char* role, int inflight) {
  if (!file.is_object()) throw SchemaError("agent config file must be an object");
  for (const auto& [key, value] : file.items()) {
    if (key != "agent" && key != "reformulator" && key != "coder" && key != "reflector") {
      throw SchemaError("agent config: unknown section \"" + key + "\"");
    }
  }
  json merged = file.value("agent", json::object());
  if (file.contains(role)) merged.update(file[role]);
  HttpAgentConfig cfg = http_agent_config_from_json(merged);
  if (inflight > 0) cfg.max_inflight = inflight;
  return std::make_unique<HttpAgent>(cfg);
}

struct EvalArgs {
  std::string dataset;
  std::string agent_config;
  std::string mock;
  std::string replay_dir;
  std::string memory;
  double tol_abs = 1e-4;
  double tol_rel = 1e-3;
  int max_inflight = 4;
  int repeats = 1;
  std::string out = "results.jsonl";
  std::string transcripts = "transcripts";
  std::string summary;
  std::string config;
};

void add_eval(CLI::App& app, EvalArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("eval", "Run the reformulator/coder pipeline over a dataset");
  cmd->add_option("--dataset", a.dataset, "Instance JSONL")->required();
  cmd->add_option("--agent-config", a.agent_config, "Agent endpoint config (JSON)");
  cmd->add_option("--mock", a.mock, "Offline agents instead of an endpoint")
      ->check(CLI::IsMember({"oracle", "nominal"}));
  cmd->add_option("--replay", a.replay_dir, "Answer from transcripts in this directory");
  cmd->add_option("--memory", a.memory, "Experience memory file to inline");
  auto* tol_abs = cmd->add_option("--tol-abs", a.tol_abs, "Absolute value tolerance");
  auto* tol_rel = cmd->add_option("--tol-rel", a.tol_rel, "Relative value tolerance");
  auto* inflight = cmd->add_option("--max-inflight", a.max_inflight, "Concurrent instances");
  auto* repeats = cmd->add_option("--repeats", a.repeats, "Independent runs");
  cmd->add_option("-o,--out", a.out, "EvalRecord JSONL (run k > 1 gets a .k suffix)");
  cmd->add_option("--transcripts", a.transcripts, "Transcript directory");
  cmd->add_option("--summary", a.summary, "Summary JSON file (also printed)");
  cmd->add_option("--config", a.config, "JSON config file; section \"eval\"");
  run = [&a, tol_abs, tol_rel, inflight, repeats] {
    const json c = config_section(a.config, "eval");
    merge(a.tol_abs, c, "tol_abs", tol_abs);
    merge(a.tol_rel, c, "tol_rel", tol_rel);
    merge(a.max_inflight, c, "max_inflight", inflight);
    merge(a.repeats, c, "repeats", repeats);
    if (a.repeats < 1) throw UsageError("--repeats must be >= 1");
    const int sources = !a.mock.empty() + !a.replay_dir.empty() + !a.agent_config.empty();
    if (sources != 1) throw UsageError("give exactly one of --mock, --replay, --agent-config");

    const auto dataset = load_dataset(a.dataset);
    std::optional<ExperienceMemory> memory;
    if (!a.memory.empty()) memory = load_memory(a.memory);

    std::unique_ptr<AgentClient> reformulator;
    std::unique_ptr<AgentClient> coder;
    if (a.mock == "oracle") {
      reformulator = std::make_unique<OracleReformulator>();
      coder = std::make_unique<PassThroughCoder>();
    } else if (a.mock == "nominal") {
      reformulator = std::make_unique<NominalReformulator>();
      coder = std::make_unique<PassThroughCoder>();
    } else if (!a.replay_dir.empty()) {
      auto transcripts = load_transcripts(a.replay_dir);
      reformulator = std::make_unique<ReplayAgent>(transcripts);
      coder = std::make_unique<ReplayAgent>(transcripts);
    } else {
      const json file = load_json_file(a.agent_config);
      reformulator = http_agent_for(file, "reformulator", a.max_inflight);
      coder = http_agent_for(file, "coder", a.max_inflight);
    }

    PipelineOptions opts;
    opts.tol = {a.tol_abs, a.tol_rel};
    opts.max_inflight = a.max_inflight;
    json runs = json::array();
    std::vector<double> acc;
    for (int r = 1; r <= a.repeats; ++r) {
      const auto result =
          run_pipeline(dataset, *reformulator, *coder, memory ? &*memory : nullptr, opts);
      const std::string suffix = a.repeats > 1 ? "." + std::to_string(r) : "";
      std::string lines;
      for (const auto& rec : result.records) lines += to_json(rec).dump() + "\n";
      write_text(a.out + suffix, lines);
      save_transcripts(a.transcripts + suffix, result.transcripts);
      runs.push_back(to_json(result.summary));
      acc.push_back(result.summary.accuracy);
    }
    json summary = runs.size() == 1 ? runs[0] : json{{"runs", runs}};
    if (runs.size() > 1) {
      double mean = 0.0;
      for (double v : acc) mean += v / acc.size();
      double var = 0.0;
      for (double v : acc) var += (v - mean) * (v - mean) / (acc.size() - 1);
      summary["accuracy_mean"] = mean;
      summary["accuracy_std"] = std::sqrt(var);
    }
    if (!a.summary.empty()) write_text(a.summary, summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
  };
}

// ---- adapt ------------------------------------------------------------------

struct AdaptArgs {
  bool scripted = false;
  std::string validation;
  std::string agent_config;
  std::string initial_memory;
  std::size_t epochs = 10;
  std::size_t steps = 8;
  std::size_t dc_batch = 4;
  std::size_t inner_iters = 3;
  std::uint64_t seed = 1;
  double tol_abs = 1e-4;
  double tol_rel = 1e-3;
  int max_inflight = 4;
  std::string memory_out = "memory.json";
  std::string trace_out = "trace.jsonl";
  std::string snapshots;
  std::string config;
};

void add_adapt(CLI::App& app, AdaptArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("adapt", "Offline adaptation of the experience memory");
  cmd->add_flag("--scripted", a.scripted, "Run the built-in offline scripted world");
  cmd->add_option("--validation", a.validation, "Validation instance JSONL");
  cmd->add_option("--agent-config", a.agent_config, "Agent endpoint config (JSON)");
  cmd->add_option("--initial-memory", a.initial_memory, "Starting memory (default empty)");
  auto* epochs = cmd->add_option("--epochs", a.epochs, "Epochs E");
  auto* steps = cmd->add_option("--steps", a.steps, "Steps per epoch S");
  auto* dc = cmd->add_option("--dc-batch", a.dc_batch, "Dual-check batch size B");
  auto* inner = cmd->add_option("--inner-iters", a.inner_iters, "Reflection iterations K");
  auto* seed = cmd->add_option("--seed", a.seed, "Training stream seed");
  auto* tol_abs = cmd->add_option("--tol-abs", a.tol_abs, "Absolute value tolerance");
  auto* tol_rel = cmd->add_option("--tol-rel", a.tol_rel, "Relative value tolerance");
  auto* inflight = cmd->add_option("--max-inflight", a.max_inflight, "Concurrent evaluations");
  cmd->add_option("--memory-out", a.memory_out, "Best memory file");
  cmd->add_option("--trace-out", a.trace_out, "Trace JSONL");
  cmd->add_option("--snapshots", a.snapshots, "Directory for per-epoch memory snapshots");
  cmd->add_option("--config", a.config, "JSON config file; section \"adapt\"");
  run = [&a, epochs, steps, dc, inner, seed, tol_abs, tol_rel, inflight] {
    const json c = config_section(a.config, "adapt");
    merge(a.epochs, c, "epochs", epochs);
    merge(a.steps, c, "steps", steps);
    merge(a.dc_batch, c, "dc_batch", dc);
    merge(a.inner_iters, c, "inner_iters", inner);
    merge(a.seed, c, "seed", seed);
    merge(a.tol_abs, c, "tol_abs", tol_abs);
    merge(a.tol_rel, c, "tol_rel", tol_rel);
    merge(a.max_inflight, c, "max_inflight", inflight);

    AdaptConfig cfg;
    cfg.epochs = a.epochs;
    cfg.steps_per_epoch = a.steps;
    cfg.dc_batch = a.dc_batch;
    cfg.inner_iters = a.inner_iters;
    cfg.train_seed = a.seed;
    cfg.tol = {a.tol_abs, a.tol_rel};
    cfg.max_inflight = a.max_inflight;
    ExperienceMemory initial;
    if (!a.initial_memory.empty()) initial = load_memory(a.initial_memory);

    std::ofstream trace_file(a.trace_out);
    if (!trace_file) throw UsageError("cannot write " + a.trace_out);
    if (!a.snapshots.empty()) std::filesystem::create_directories(a.snapshots);
    TraceSink sink = [&](const json& ev) {
      trace_file << ev.dump() << "\n";
      trace_file.flush();
      if (!a.snapshots.empty() && ev.at("event") == "epoch_end") {
        const auto path = std::filesystem::path(a.snapshots) /
                          ("epoch_" + std::to_string(ev.at("epoch").get<int>()) + ".json");
        save_memory(path.string(), memory_from_json(ev.at("memory")));
      }
    };

    AdaptResult result;
    if (a.scripted) {
      ScriptedWorld world;
      result = run_offline_adaptation(cfg, world.validation(), world.training_stream(),
                                      world.reformulator(), world.reflector(), world.coder(),
                                      initial, sink);
    } else {
      if (a.validation.empty() || a.agent_config.empty()) {
        throw UsageError("adapt needs --scripted, or --validation with --agent-config");
      }
      const auto validation = load_dataset(a.validation);
      const json file = load_json_file(a.agent_config);
      auto reformulator = http_agent_for(file, "reformulator", a.max_inflight);
      auto coder = http_agent_for(file, "coder", a.max_inflight);
      auto reflector = http_agent_for(file, "reflector", a.max_inflight);
      GenConfig gen;
      gen.seed = a.seed;
      auto stream = std::make_shared<InstanceStream>(gen);
      TrainingStream next = [stream] {
        RobustInstance inst = stream->next();
        inst.id = "train_" + inst.id;
        return inst;
      };
      result = run_offline_adaptation(cfg, validation, next, *reformulator, *reflector, *coder,
                                      initial, sink);
    }
    save_memory(a.memory_out, result.best_memory, &result.best_map);
    json epochs_json = json::array();
    for (auto n : result.epoch_correct) epochs_json.push_back(result.accuracy(n));
    std::cout << json{{"initial_accuracy", result.accuracy(result.initial_correct)},
                      {"best_accuracy", result.accuracy(result.best_correct)},
                      {"epoch_accuracy", epochs_json},
                      {"rollback_epochs", result.rollback_epochs},
                      {"invocations", result.invocations.size()},
                      {"memory_entries", result.best_memory.entries.size()}}
                     .dump(2)
              << "\n";
  };
}

// ---- verify-paper -----------------------------------------------------------

int verify_reference() {
  const RobustInstance inst = reference_instance_5_16_T011();
  const auto sol = lp::solve_lp(reformulate(inst));
  if (!sol.optimal()) {
    std::cout << "status " << lp::to_string(sol.status) << "\nFAIL\n";
    return kExitData;
  }
  const auto& gt = *inst.ground_truth;
  bool ok = std::abs(*sol.objective_value - gt.f_star) <= 1e-3;
  for (std::size_t j = 0; j < inst.n; ++j) ok = ok && std::abs(sol.x[j] - gt.x_star[j]) <= 1e-3;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", *sol.objective_value);
  std::cout << "instance " << inst.id << "\nf_hat " << buf << "\nx";
  for (std::size_t j = 0; j < inst.n; ++j) {
    std::snprintf(buf, sizeof buf, " %.4f", sol.x[j]);
    std::cout << buf;
  }
  std::cout << "\n" << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust LP benchmark toolkit"};
  app.require_subcommand(1);
  std::function<void()> run_gen, run_reformulate, run_solve, run_oracle, run_render, run_eval,
      run_adapt;
  GenArgs gen;
  IoArgs reform, solve, oracle, render;
  EvalArgs eval;
  AdaptArgs adapt;
  add_gen(app, gen, run_gen);
  add_reformulate(app, reform, run_reformulate);
  add_solve(app, solve, run_solve);
  add_oracle(app, oracle, run_oracle);
  add_render(app, render, run_render);
  add_eval(app, eval, run_eval);
  add_adapt(app, adapt, run_adapt);
  auto* verify =
      app.add_subcommand("verify-paper", "Check the pinned 5_16_T011 reference instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::pair<const char*, std::function<void()>*> table[] = {
      {"gen", &run_gen},       {"reformulate", &run_reformulate}, {"solve", &run_solve},
      {"oracle", &run_oracle}, {"render", &run_render},           {"eval", &run_eval},
      {"adapt", &run_adapt}};
  try {
    if (verify->parsed()) return verify_reference();
    for (const auto& [name, fn] : table) {
      if (app.got_subcommand(name)) (*fn)();
    }
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAgent;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAgent;
  } catch (const InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

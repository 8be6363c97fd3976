// Command-line driver: recovers storage layouts, value types, and
// reentrancy guards from EVM runtime bytecode. Inputs are hex bytecode
// files, previously exported .facts directories, or 0x-prefixed contract
// addresses fetched over JSON-RPC. Contracts are analyzed independently
// under a per-contract time budget on a bounded worker pool; one failure
// never aborts the batch.

#include "CLI11.hpp"

#include "storlift/analyzer.hpp"
#include "storlift/batch.hpp"
#include "storlift/rpc.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace storlift;

namespace {

enum class Mode { Analyze, Compare, Guards, FactsExport };

struct Options {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::string rpc_url;
  double timeout_secs = 300.0;
  unsigned jobs = 1;
  bool dedup = false;
  std::string ground_truth;
  bool exclude_unused = false;
};

struct InputSpec {
  enum Kind { HexFile, FactsDir, Address } kind;
  std::string raw;  // as given on the command line
  std::string id;   // output basename
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Classifies and validates every input up front so a bad argument is
// reported before any analysis or network traffic happens.
std::vector<InputSpec> classify_inputs(const Options& o, Mode mode) {
  std::vector<std::string> problems;
  std::vector<InputSpec> specs;
  std::set<std::string> used_ids;

  auto unique_id = [&](std::string base) {
    std::string id = base;
    for (unsigned n = 2; used_ids.count(id); ++n)
      id = base + "_" + std::to_string(n);
    used_ids.insert(id);
    return id;
  };

  bool any_address = false;
  for (const std::string& in : o.inputs) {
    if (valid_address(in)) {
      any_address = true;
      specs.push_back({InputSpec::Address, in, unique_id(in)});
      continue;
    }
    fs::path p(in);
    if (fs::is_directory(p)) {
      if (p.extension() != ".facts") {
        problems.push_back(in + ": directory inputs must end in .facts");
      } else if (mode == Mode::Guards) {
        problems.push_back(in +
                           ": guard detection needs bytecode with a control "
                           "flow graph; relation files carry none");
      } else {
        specs.push_back({InputSpec::FactsDir, in, unique_id(p.stem().string())});
      }
      continue;
    }
    if (fs::is_regular_file(p)) {
      specs.push_back({InputSpec::HexFile, in, unique_id(p.stem().string())});
      continue;
    }
    if (in.rfind("0x", 0) == 0 || in.rfind("0X", 0) == 0)
      problems.push_back(in + ": malformed address (want 0x + 40 hex digits)");
    else
      problems.push_back(in + ": no such file or directory");
  }

  if (any_address && o.rpc_url.empty())
    problems.push_back(
        "address inputs require --rpc-url (or the ETH_RPC_URL environment "
        "variable)");

  if (!problems.empty()) {
    for (const auto& m : problems) std::cerr << "storlift: " << m << "\n";
    std::exit(2);
  }
  return specs;
}

std::string status_line(const JobOutcome& out) {
  char buf[64];
  switch (out.status) {
    case JobStatus::Done:
      std::snprintf(buf, sizeof(buf), "done in %.2fs", out.seconds);
      return buf;
    case JobStatus::Timeout:
      return "timeout";
    case JobStatus::Error:
      return "error: " + out.message;
    case JobStatus::NoCode:
      return "no code at address";
    case JobStatus::Duplicate:
      return "duplicate of " + out.duplicate_of;
  }
  return "unknown";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

// Ground truth for one input: --ground-truth names either a layout JSON
// file applied to every input or a directory holding <id>.layout.json.
std::optional<Layout> load_truth(const Options& o, const std::string& id,
                                 std::string& problem) {
  fs::path gt(o.ground_truth);
  if (fs::is_directory(gt)) gt /= id + ".layout.json";
  if (!fs::is_regular_file(gt)) {
    problem = "no ground truth at " + gt.string();
    return std::nullopt;
  }
  try {
    return parse_layout(nlohmann::json::parse(read_file(gt)));
  } catch (const std::exception& e) {
    problem = gt.string() + ": " + e.what();
    return std::nullopt;
  }
}

int run(Mode mode, const Options& o) {
  std::vector<InputSpec> specs = classify_inputs(o, mode);

  // Acquire bytecode / relation files; acquisition failures become
  // per-contract outcomes, not batch aborts.
  std::vector<std::optional<JobOutcome>> resolved(specs.size());
  std::vector<BatchJob> jobs;
  std::vector<std::size_t> job_input;  // job index -> input index
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    try {
      BatchJob job;
      job.id = spec.id;
      switch (spec.kind) {
        case InputSpec::HexFile: {
          auto bytes = parse_hex_bytes(read_file(spec.raw));
          if (!bytes)
            throw std::runtime_error(spec.raw + " is not a hex byte string");
          job.input = extract_runtime(*bytes);
          break;
        }
        case InputSpec::Address:
          job.input = extract_runtime(fetch_code(spec.raw, o.rpc_url));
          break;
        case InputSpec::FactsDir: {
          std::map<std::string, std::string> files;
          for (const auto& entry : fs::directory_iterator(spec.raw))
            if (entry.is_regular_file())
              files[entry.path().filename().string()] = read_file(entry.path());
          job.input = std::move(files);
          break;
        }
      }
      job_input.push_back(i);
      jobs.push_back(std::move(job));
    } catch (const NoCode&) {
      JobOutcome out;
      out.id = spec.id;
      out.status = JobStatus::NoCode;
      resolved[i] = std::move(out);
    } catch (const std::exception& e) {
      JobOutcome out;
      out.id = spec.id;
      out.status = JobStatus::Error;
      out.message = e.what();
      resolved[i] = std::move(out);
    }
  }

  BatchOptions bo;
  bo.parallelism = o.jobs;
  bo.per_job = std::chrono::milliseconds(
      static_cast<long long>(o.timeout_secs * 1000.0));
  bo.dedup = o.dedup;
  std::vector<JobOutcome> ran = run_batch(jobs, bo);
  for (std::size_t j = 0; j < ran.size(); ++j)
    resolved[job_input[j]] = std::move(ran[j]);

  fs::create_directories(o.out_dir);
  bool all_ok = true;
  std::vector<JobOutcome> outcomes;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    JobOutcome& out = *resolved[i];
    std::string line = out.id + ": " + status_line(out);

    if (out.status == JobStatus::Done) {
      const AnalysisResult& r = *out.result;
      try {
        switch (mode) {
          case Mode::Analyze:
            write_text(fs::path(o.out_dir) / (out.id + ".layout.json"),
                       layout_to_json(r.layout).dump(2) + "\n");
            break;
          case Mode::Guards:
            write_text(fs::path(o.out_dir) / (out.id + ".guards.json"),
                       guards_to_json(r.guards, r.constructs).dump(2) + "\n");
            line += ", " + std::to_string(r.guards.size()) + " guard(s)";
            break;
          case Mode::FactsExport: {
            fs::path dir = fs::path(o.out_dir) / (out.id + ".facts");
            fs::create_directories(dir);
            for (const auto& [name, body] :
                 export_facts(r.program, r.hashes))
              write_text(dir / name, body);
            break;
          }
          case Mode::Compare: {
            std::string problem;
            auto truth = load_truth(o, out.id, problem);
            if (!truth) {
              line += ", error: " + problem;
              all_ok = false;
              break;
            }
            ComparisonReport rep =
                compare_layouts(r.layout, *truth, o.exclude_unused);
            write_text(fs::path(o.out_dir) / (out.id + ".compare.json"),
                       report_to_json(rep).dump(2) + "\n");
            char score[96];
            std::snprintf(score, sizeof(score),
                          "precision=%.3f recall=%.3f (%zu/%zu matched)",
                          rep.precision, rep.recall,
                          static_cast<std::size_t>(rep.success_count),
                          static_cast<std::size_t>(rep.ground_truth_count));
            line += rep.exact() ? ", exact " : ", mismatch ";
            line += score;
            if (!rep.exact()) all_ok = false;
            break;
          }
        }
      } catch (const std::exception& e) {
        line += ", error: " + std::string(e.what());
        all_ok = false;
      }
    } else if (out.status != JobStatus::Duplicate) {
      all_ok = false;
    }

    std::cout << line << "\n";
    outcomes.push_back(std::move(out));
  }

  std::cout << summary_to_json(summarize(outcomes)).dump(2) << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "storlift: storage layout recovery from EVM runtime bytecode"};
  app.require_subcommand(1);

  Options o;
  if (const char* env = std::getenv("ETH_RPC_URL")) o.rpc_url = env;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("inputs", o.inputs,
                    "Hex bytecode files, .facts directories, or 0x addresses")
        ->required();
    sub->add_option("--out", o.out_dir, "Directory for result files")
        ->capture_default_str();
    sub->add_option("--rpc-url", o.rpc_url,
                    "Ethereum JSON-RPC endpoint for address inputs "
                    "(default: env ETH_RPC_URL)");
    sub->add_option("--timeout", o.timeout_secs,
                    "Per-contract analysis budget in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--jobs", o.jobs, "Parallel analysis workers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--dedup", o.dedup,
                  "Skip contracts whose bytecode matches an earlier input "
                  "modulo push constants");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Recover storage layouts to <id>.layout.json");
  add_common(analyze);

  CLI::App* compare = app.add_subcommand(
      "compare", "Analyze and score against ground-truth layouts");
  add_common(compare);
  compare
      ->add_option("--ground-truth", o.ground_truth,
                   "Layout JSON file, or directory of <id>.layout.json files")
      ->required();
  compare->add_flag(
      "--exclude-unused", o.exclude_unused,
      "Score only slots the bytecode actually accesses");

  CLI::App* guards = app.add_subcommand(
      "guards", "Detect reentrancy guards to <id>.guards.json");
  add_common(guards);

  CLI::App* facts = app.add_subcommand(
      "facts-export", "Export analysis relations to <id>.facts/");
  add_common(facts);

  CLI11_PARSE(app, argc, argv);

  Mode mode = Mode::Analyze;
  if (compare->parsed()) mode = Mode::Compare;
  else if (guards->parsed()) mode = Mode::Guards;
  else if (facts->parsed()) mode = Mode::FactsExport;
  (void)analyze;

  try {
    return run(mode, o);
  } catch (const std::exception& e) {
    std::cerr << "storlift: " << e.what() << "\n";
    return 1;
  }
}

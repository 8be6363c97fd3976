#pragma once

// Batch scheduling: isolated per-contract analyses on a bounded worker
// pool. Workers pull jobs from a shared cursor and write completed,
// immutable outcome records into the slot matching the job's input
// position, so results never depend on the parallelism degree. A job
// exceeding its budget yields a Timeout outcome and no result; failures
// never abort the batch.

#include "storlift/analyzer.hpp"
#include "storlift/errors.hpp"
#include "storlift/keccak.hpp"
#include "storlift/opcode.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace storlift {

enum class JobStatus { Done, Timeout, Error, NoCode, Duplicate };

inline const char* job_status_name(JobStatus s) {
  switch (s) {
    case JobStatus::Done: return "done";
    case JobStatus::Timeout: return "timeout";
    case JobStatus::Error: return "error";
    case JobStatus::NoCode: return "nocode";
    case JobStatus::Duplicate: return "duplicate";
  }
  return "?";
}

struct BatchJob {
  std::string id;
  std::variant<std::vector<std::uint8_t>,          // runtime bytecode
               std::map<std::string, std::string>>  // relation files
      input;
  std::optional<std::chrono::milliseconds> budget;  // overrides the batch's
};

struct JobOutcome {
  std::string id;
  JobStatus status = JobStatus::Error;
  std::string message;
  std::string duplicate_of;
  double seconds = 0.0;
  std::optional<AnalysisResult> result;  // Done only
};

struct BatchOptions {
  unsigned parallelism = 1;
  std::chrono::milliseconds per_job{300'000};  // the paper's 300 s cutoff
  bool dedup = false;
};

struct BatchSummary {
  std::size_t terminated = 0;
  std::size_t timeouts = 0;
  std::size_t errors = 0;
  std::size_t nocode = 0;
  std::size_t duplicates = 0;
};

// Bytecode identity modulo PUSH immediates: the instruction stream with
// every immediate byte zeroed, hashed.
inline Word dedup_key(const std::vector<std::uint8_t>& code) {
  std::vector<std::uint8_t> norm;
  norm.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    std::uint8_t b = code[i];
    norm.push_back(b);
    if (is_push(b)) {
      unsigned width = b - OP_PUSH1 + 1;
      for (unsigned k = 0; k < width && i + 1 < code.size(); ++k) {
        ++i;
        norm.push_back(0);
      }
    }
  }
  return keccak256_word(norm);
}

namespace detail {

inline JobOutcome run_job(const BatchJob& job, const BatchOptions& opt) {
  JobOutcome o;
  o.id = job.id;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Deadline deadline(job.budget.value_or(opt.per_job));
    if (const auto* code =
            std::get_if<std::vector<std::uint8_t>>(&job.input)) {
      o.result = analyze_bytecode(*code, deadline);
    } else {
      o.result = analyze_facts(
          std::get<std::map<std::string, std::string>>(job.input), deadline);
    }
    o.status = JobStatus::Done;
  } catch (const TimeoutError& e) {
    o.status = JobStatus::Timeout;
    o.message = e.what();
    o.result.reset();
  } catch (const std::exception& e) {
    o.status = JobStatus::Error;
    o.message = e.what();
    o.result.reset();
  }
  o.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return o;
}

}  // namespace detail

inline std::vector<JobOutcome> run_batch(const std::vector<BatchJob>& jobs,
                                         const BatchOptions& opt) {
  std::vector<JobOutcome> out(jobs.size());
  std::vector<bool> skip(jobs.size(), false);

  if (opt.dedup) {
    std::map<Word, std::size_t> seen;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto* code = std::get_if<std::vector<std::uint8_t>>(&jobs[i].input);
      if (!code) continue;
      auto [it, fresh] = seen.emplace(dedup_key(*code), i);
      if (fresh) continue;
      out[i].id = jobs[i].id;
      out[i].status = JobStatus::Duplicate;
      out[i].duplicate_of = jobs[it->second].id;
      skip[i] = true;
    }
  }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < jobs.size();) {
      if (skip[i]) continue;
      out[i] = detail::run_job(jobs[i], opt);
    }
  };

  unsigned threads = opt.parallelism == 0 ? 1 : opt.parallelism;
  if (jobs.size() < threads) threads = static_cast<unsigned>(jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

inline BatchSummary summarize(const std::vector<JobOutcome>& outcomes) {
  BatchSummary s;
  for (const auto& o : outcomes) {
    switch (o.status) {
      case JobStatus::Done: ++s.terminated; break;
      case JobStatus::Timeout: ++s.timeouts; break;
      case JobStatus::Error: ++s.errors; break;
      case JobStatus::NoCode: ++s.nocode; break;
      case JobStatus::Duplicate: ++s.duplicates; break;
    }
  }
  return s;
}

inline nlohmann::ordered_json summary_to_json(const BatchSummary& s) {
  nlohmann::ordered_json doc;
  doc["terminated"] = s.terminated;
  doc["timeouts"] = s.timeouts;
  doc["errors"] = s.errors;
  doc["nocode"] = s.nocode;
  doc["duplicates"] = s.duplicates;
  return doc;
}

}  // namespace storlift

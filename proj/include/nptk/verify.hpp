#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nptk {

struct VerifyOptions {
  int samples = 1000;
  std::uint64_t seed = 1;
  double tol_algebraic = 1e-12;
  double tol_inequality = 1e-10;
  double boundary_band = 1e-6;
};

struct Failure {
  std::string input;     // JSON text of the offending input
  std::string relation;  // the relation that should have held
  std::string observed;
};

struct SampleOutcome {
  std::vector<Failure> failures;
  double violation = 0.0;  // largest lhs - rhs over this sample's checks, clamped at 0
};

struct VerificationReport {
  std::string suite;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<Failure> failures;  // first few, in sample order
  int failure_count = 0;
  double max_violation = 0.0;
  double elapsed = 0.0;  // seconds; the only nondeterministic field
  std::vector<VerificationReport> parts;  // per suite when suite == "all"
  std::vector<SampleOutcome> outcomes;    // per sample, for CSV dumps

  bool passed() const { return failure_count == 0; }
};

const std::vector<std::string>& suite_names();
/// Throws InputError for an unknown suite name.
VerificationReport run_suite(const std::string& suite, const VerifyOptions& opt);

nlohmann::json to_json(const VerificationReport& r);
/// index,violation,failures per sample.
void write_csv(const VerificationReport& r, std::ostream& out);

/// Worker count: hardware concurrency, capped by NP_TOOLKIT_THREADS.
unsigned worker_count();
/// Runs body(i) for i in [0, n) on worker_count() threads.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace nptk

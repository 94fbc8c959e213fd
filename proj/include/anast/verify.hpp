#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace anast {

// Randomized check that the incremental recursion reproduces joint training
// on the same data, to within a relative Frobenius tolerance, across many
// generated class-incremental scenarios.
struct VerifySpec {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t max_dim = 64;      // cap on the expanded dimension
  double tolerance = 1e-8;       // relative Frobenius distance, W and R
  bool corrupt_update = false;   // swap in the shape-inconsistent update
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;        // per-scenario seed, printable for replay
  std::size_t tasks = 0;
  std::size_t classes = 0;
  std::size_t rows = 0;          // total training rows across tasks
  std::size_t d_exp = 0;
  double gamma = 0.0;
  double w_distance = 0.0;
  double r_distance = 0.0;
  bool passed = false;
  std::string error;             // nonempty when the trial threw
};

struct VerifyOutcome {
  std::vector<TrialRecord> trials;
  std::size_t failures = 0;
  double worst_w = 0.0;
  double worst_r = 0.0;

  bool passed() const { return failures == 0 && !trials.empty(); }
};

VerifyOutcome verify_equivalence(const VerifySpec& spec);

}  // namespace anast

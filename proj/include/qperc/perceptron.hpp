#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qperc/dataset.hpp"
#include "qperc/grover.hpp"

namespace qperc {

// Unit of account: one data-touching primitive, i.e. one classical point
// test or one Grover iteration (a version-space Grover iteration costs N
// because its oracle evaluates every training point). wall_steps totals all
// charged primitives, so it dominates every individual counter.
// Convergence checks the algorithms themselves do not prescribe (early
// exit, the final `separates` determination) are simulator bookkeeping and
// are not charged.
struct CostLedger {
  std::int64_t oracle_queries = 0;
  std::int64_t classical_verifications = 0;
  std::int64_t updates = 0;
  std::int64_t wall_steps = 0;
};

enum class Algorithm { classical_online, online_quantum, version_space_quantum, hybrid_quantum };
std::string algorithm_name(Algorithm a);

struct RunResult {
  Hyperplane hyperplane;
  bool separates = false;  // classically verified on the full training set
  CostLedger ledger;
  Algorithm algorithm = Algorithm::classical_online;
  std::uint64_t seed = 0;
};

// Strict separation check: y_i <w, x_i> > 0 for every point. Charges |ds|
// oracle queries (and wall steps) to the supplied ledger when given.
bool verify_separator(const Hyperplane& w, const LabeledDataset& ds,
                      CostLedger* ledger = nullptr);

enum class ClassicalProtocol {
  stream_until_clean,    // update on every mistake during a pass
  one_update_per_pass    // full scan per pass, only the first mistake updates
};

// Rosenblatt updates from w = 0; each point examination charges one
// wall step and one oracle query. A Novikoff cap of ceil(1/gamma^2)+1
// updates applies when gamma is supplied; otherwise a hard examination cap
// guards non-terminating input.
RunResult classical_online(const LabeledDataset& ds, ClassicalProtocol protocol,
                           std::optional<double> gamma = std::nullopt,
                           std::int64_t examination_cap = 10'000'000);

// ceil(1/gamma^2) rounds of ceil(log_{3/4}(gamma^2 eps)) QSearch attempts
// for a misclassified point; every measured candidate is classically
// verified before the update w += y x.
RunResult online_quantum(const LabeledDataset& ds, double gamma, double epsilon,
                         GroverBackend backend, const NoiseModel& noise,
                         std::uint64_t seed);

// ceil(log_{3/4}(eps)) QSearch attempts over the candidate hyperplanes,
// each Grover iteration charging N (the in-version-space oracle reads the
// whole sample); measured candidates verified with N more point tests.
// Falls back to the first hyperplane when every attempt fails.
RunResult version_space_quantum(const LabeledDataset& ds,
                                const std::vector<Hyperplane>& hyperplanes, double epsilon,
                                GroverBackend backend, const NoiseModel& noise,
                                std::uint64_t seed);

// Scans the hyperplanes in order; each gets up to amplification_rounds(K, eps)
// QSearch attempts for a misclassified witness and is accepted if none is
// verified. The attempt loop stops at the first verified witness: the
// remaining attempts cannot change the accept/reject outcome.
RunResult hybrid_quantum(const LabeledDataset& ds,
                         const std::vector<Hyperplane>& hyperplanes, double epsilon,
                         GroverBackend backend, const NoiseModel& noise,
                         std::uint64_t seed);

struct RunContext {
  std::string dataset;
  std::int64_t n = 0;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::optional<GroverBackend> backend;  // empty for classical runs
  NoiseModel noise = NoiseModel::none();
};

std::string run_result_csv_header();
std::string run_result_csv_row(const RunResult& result, const RunContext& ctx);

}  // namespace qperc

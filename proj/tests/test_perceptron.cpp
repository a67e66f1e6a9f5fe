#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qperc/bounds.hpp"
#include "qperc/perceptron.hpp"

using namespace qperc;

namespace {

Hyperplane all_minus_ones(std::size_t d) {
  Hyperplane h;
  h.w.assign(d, -1.0);
  return h;
}

LabeledDataset single_e1() {
  LabeledDataset ds;
  ds.dim = 2;
  ds.points = {{{1.0, 0.0}, 1}};
  return ds;
}

}  // namespace

TEST_CASE("verify_separator") {
  const LabeledDataset hard = make_hard_dataset(10);
  CostLedger ledger;
  CHECK(verify_separator(all_minus_ones(10), hard, &ledger));
  CHECK(ledger.oracle_queries == 10);
  CHECK(ledger.wall_steps == 10);

  Hyperplane zero;
  zero.w.assign(10, 0.0);
  CHECK_FALSE(verify_separator(zero, hard));  // 0 <= 0 counts as misclassified

  const LabeledDataset e1 = single_e1();
  Hyperplane w;
  w.w = {1.0, 0.0};
  CHECK(verify_separator(w, e1));

  Hyperplane wrong_dim;
  wrong_dim.w = {1.0};
  CHECK_THROWS_AS(verify_separator(wrong_dim, hard), std::invalid_argument);
}

TEST_CASE("classical perceptron on a single point") {
  const RunResult res = classical_online(single_e1(), ClassicalProtocol::stream_until_clean);
  CHECK(res.ledger.updates == 1);  // w = 0 misclassifies, then clean
  CHECK(res.hyperplane.w == std::vector<double>{1.0, 0.0});
  CHECK(res.separates);
  CHECK(res.ledger.wall_steps == 2);  // one mistake pass + one clean pass
}

TEST_CASE("classical protocols differ on the Hard dataset") {
  const LabeledDataset hard = make_hard_dataset(6);
  const RunResult stream = classical_online(hard, ClassicalProtocol::stream_until_clean);
  CHECK(stream.ledger.updates == 6);
  CHECK(stream.ledger.wall_steps == 12);  // one updating pass, one clean pass
  const RunResult oupp = classical_online(hard, ClassicalProtocol::one_update_per_pass);
  CHECK(oupp.ledger.updates == 6);
  CHECK(oupp.ledger.wall_steps == 42);  // 7 passes x 6 examinations
}

TEST_CASE("classical examination cap") {
  LabeledDataset conflict;  // unseparable: same point, both labels
  conflict.dim = 1;
  conflict.points = {{{1.0}, 1}, {{1.0}, -1}};
  CHECK_THROWS_WITH_AS(
      classical_online(conflict, ClassicalProtocol::stream_until_clean, std::nullopt, 1000),
      doctest::Contains("examination cap"), std::runtime_error);
}

TEST_CASE("Novikoff: updates never exceed floor(1/gamma^2) on planted data") {
  Rng rng(40);
  for (int t = 0; t < 100; ++t) {
    const std::int64_t n = 20 + rng.uniform_below(181);
    const double gamma = 0.05 + 0.25 * rng.uniform();
    const LabeledDataset ds =
        make_planted_margin_dataset(n, 2 + rng.uniform_below(10), gamma, rng.next_u64());
    const RunResult res = classical_online(ds, ClassicalProtocol::stream_until_clean, gamma);
    CHECK(res.ledger.updates <=
          static_cast<std::int64_t>(std::floor(1.0 / (gamma * gamma))));
    CHECK(res.separates);
  }
}

TEST_CASE("online quantum separates planted data with high probability") {
  // Monte Carlo over 200 seeded trials; the guarantee is >= 1 - epsilon.
  const double gamma = 0.2, epsilon = 0.1;
  int successes = 0;
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const LabeledDataset ds = make_planted_margin_dataset(64, 6, gamma, rng.next_u64());
    const RunResult res = online_quantum(ds, gamma, epsilon, GroverBackend::analytic,
                                         NoiseModel::none(), rng.next_u64());
    if (res.separates) {
      CHECK(verify_separator(res.hyperplane, ds));
      ++successes;
    }
  }
  CHECK(successes >= 180);
}

TEST_CASE("online quantum wall steps never exceed the bound calculator") {
  Rng rng(42);
  for (int t = 0; t < 30; ++t) {
    const double gamma = 0.15 + 0.2 * rng.uniform();
    const double epsilon = 0.05 + 0.3 * rng.uniform();
    const std::int64_t n = 16 + rng.uniform_below(100);
    const LabeledDataset ds = make_planted_margin_dataset(n, 4, gamma, rng.next_u64());
    const RunResult res = online_quantum(ds, gamma, epsilon, GroverBackend::analytic,
                                         NoiseModel::none(), rng.next_u64());
    CHECK(res.ledger.wall_steps <= bounds::online_q_bound(n, gamma, epsilon));
    CHECK(res.ledger.wall_steps >= res.ledger.oracle_queries);
    CHECK(res.ledger.wall_steps >= res.ledger.classical_verifications);
    CHECK(res.ledger.wall_steps >= res.ledger.updates);
  }
}

TEST_CASE("online quantum hyperplane lies in the update lattice") {
  // Brute-force enumeration of update-count vectors on a 3-point instance.
  const LabeledDataset ds = make_planted_margin_dataset(3, 2, 0.3, 12);
  const RunResult res = online_quantum(ds, 0.3, 0.2, GroverBackend::analytic,
                                       NoiseModel::none(), 99);
  const std::int64_t cap = res.ledger.updates;
  bool found = false;
  for (std::int64_t c0 = 0; c0 <= cap && !found; ++c0) {
    for (std::int64_t c1 = 0; c1 + c0 <= cap && !found; ++c1) {
      for (std::int64_t c2 = 0; c2 + c1 + c0 <= cap && !found; ++c2) {
        const std::int64_t c[3] = {c0, c1, c2};
        double wx = 0.0, wy = 0.0;
        for (int i = 0; i < 3; ++i) {
          wx += static_cast<double>(c[i]) * ds.points[i].y * ds.points[i].x[0];
          wy += static_cast<double>(c[i]) * ds.points[i].y * ds.points[i].x[1];
        }
        if (std::abs(wx - res.hyperplane.w[0]) < 1e-9 &&
            std::abs(wy - res.hyperplane.w[1]) < 1e-9) {
          found = true;
        }
      }
    }
  }
  CHECK(found);
}

TEST_CASE("version space quantum finds the planted separator") {
  const LabeledDataset hard = make_hard_dataset(12);
  std::vector<Hyperplane> hps = sample_hyperplanes(7, 12, 3);  // none of these separate
  hps.push_back(all_minus_ones(12));
  int hits = 0;
  Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    const RunResult res = version_space_quantum(hard, hps, 0.1, GroverBackend::analytic,
                                                NoiseModel::none(), rng.next_u64());
    if (res.separates) {
      CHECK(res.hyperplane.w == hps.back().w);  // bit-identical input
      ++hits;
    }
  }
  CHECK(hits >= 90);  // guarantee is >= 1 - epsilon = 0.9
}

TEST_CASE("version space quantum falls back to the first hyperplane") {
  const LabeledDataset hard = make_hard_dataset(8);
  const std::vector<Hyperplane> hps = sample_hyperplanes(5, 8, 2);
  const RunResult res = version_space_quantum(hard, hps, 0.2, GroverBackend::analytic,
                                              NoiseModel::none(), 17);
  CHECK_FALSE(res.separates);
  CHECK(res.hyperplane.w == hps.front().w);
  CHECK(res.ledger.updates == 0);
  CHECK(res.ledger.wall_steps <=
        bounds::version_space_bound(8, margin(hard).gamma, 0.2) + 0);
}

TEST_CASE("version space with a single separating hyperplane") {
  const LabeledDataset hard = make_hard_dataset(4);
  const std::vector<Hyperplane> hps = {all_minus_ones(4)};
  const RunResult res = version_space_quantum(hard, hps, 0.3, GroverBackend::analytic,
                                              NoiseModel::none(), 1);
  CHECK(res.separates);
  CHECK(res.hyperplane.w == hps[0].w);
}

TEST_CASE("hybrid accepts an immediately separating hyperplane") {
  const LabeledDataset hard = make_hard_dataset(16);
  const std::vector<Hyperplane> hps = {all_minus_ones(16)};
  const RunResult res =
      hybrid_quantum(hard, hps, 0.1, GroverBackend::analytic, NoiseModel::none(), 5);
  CHECK(res.separates);
  CHECK(res.ledger.updates == 0);
  CHECK(res.hyperplane.w == hps[0].w);
}

TEST_CASE("hybrid rejects an all-misclassifying hyperplane") {
  const LabeledDataset hard = make_hard_dataset(16);
  Hyperplane bad;
  bad.w.assign(16, 1.0);  // +(1,...,1) misclassifies every point
  int rejected = 0;
  Rng rng(46);
  for (int t = 0; t < 100; ++t) {
    const RunResult res =
        hybrid_quantum(hard, {bad}, 0.1, GroverBackend::analytic, NoiseModel::none(),
                       rng.next_u64());
    if (!res.separates && res.ledger.updates == 1) ++rejected;
    CHECK(res.hyperplane.w == bad.w);  // fallback is w1 = the only input
  }
  CHECK(rejected >= 95);  // miss probability is at most (3/4)^K2
}

TEST_CASE("hybrid wall steps never exceed the bound calculator") {
  Rng rng(47);
  for (int t = 0; t < 20; ++t) {
    const double gamma = 0.1 + 0.2 * rng.uniform();
    const double epsilon = 0.05 + 0.2 * rng.uniform();
    const std::int64_t n = 16 + rng.uniform_below(100);
    const LabeledDataset ds = make_planted_margin_dataset(n, 6, gamma, rng.next_u64());
    const std::int64_t k = bounds::num_hyperplanes(gamma, epsilon);
    const auto hps = sample_hyperplanes(k, 6, rng.next_u64());
    const RunResult res = hybrid_quantum(ds, hps, epsilon, GroverBackend::analytic,
                                         NoiseModel::none(), rng.next_u64());
    CHECK(res.ledger.wall_steps <= bounds::hybrid_bound(n, gamma, epsilon));
    CHECK(res.ledger.wall_steps >= res.ledger.oracle_queries);
    CHECK(res.ledger.wall_steps >= res.ledger.classical_verifications);
    CHECK(res.ledger.wall_steps >= res.ledger.updates);
    if (res.separates) CHECK(verify_separator(res.hyperplane, ds));
  }
}

TEST_CASE("version space wall steps never exceed the bound calculator") {
  Rng rng(48);
  for (int t = 0; t < 20; ++t) {
    const double gamma = 0.1 + 0.2 * rng.uniform();
    const double epsilon = 0.05 + 0.2 * rng.uniform();
    const std::int64_t n = 16 + rng.uniform_below(60);
    const LabeledDataset ds = make_planted_margin_dataset(n, 6, gamma, rng.next_u64());
    const std::int64_t k = bounds::num_hyperplanes(gamma, epsilon);
    const auto hps = sample_hyperplanes(k, 6, rng.next_u64());
    const RunResult res = version_space_quantum(ds, hps, epsilon, GroverBackend::analytic,
                                                NoiseModel::none(), rng.next_u64());
    CHECK(res.ledger.wall_steps <= bounds::version_space_bound(n, gamma, epsilon));
  }
}

TEST_CASE("noise-free analytic runs are reproducible per seed") {
  const LabeledDataset ds = make_planted_margin_dataset(40, 5, 0.15, 77);
  const auto hps = sample_hyperplanes(12, 5, 78);
  for (int rep = 0; rep < 2; ++rep) {
    const RunResult a = online_quantum(ds, 0.15, 0.1, GroverBackend::analytic,
                                       NoiseModel::none(), 1234);
    const RunResult b = online_quantum(ds, 0.15, 0.1, GroverBackend::analytic,
                                       NoiseModel::none(), 1234);
    CHECK(a.hyperplane.w == b.hyperplane.w);
    CHECK(a.ledger.wall_steps == b.ledger.wall_steps);
    const RunResult c = hybrid_quantum(ds, hps, 0.1, GroverBackend::analytic,
                                       NoiseModel::none(), 99);
    const RunResult d = hybrid_quantum(ds, hps, 0.1, GroverBackend::analytic,
                                       NoiseModel::none(), 99);
    CHECK(c.hyperplane.w == d.hyperplane.w);
    CHECK(c.ledger.wall_steps == d.ledger.wall_steps);
  }
}

TEST_CASE("statevector backend drives the quantum perceptrons") {
  // Non-power-of-two N exercises the padding path.
  const LabeledDataset ds = make_planted_margin_dataset(12, 4, 0.25, 50);
  const RunResult online = online_quantum(ds, 0.25, 0.2, GroverBackend::statevector,
                                          NoiseModel::none(), 7);
  CHECK(online.separates);
  const std::int64_t k = bounds::num_hyperplanes(0.25, 0.2);
  const auto hps = sample_hyperplanes(k, 4, 51);
  const RunResult hybrid = hybrid_quantum(ds, hps, 0.2, GroverBackend::statevector,
                                          NoiseModel::none(), 8);
  if (hybrid.separates) CHECK(verify_separator(hybrid.hyperplane, ds));
  const RunResult version = version_space_quantum(ds, hps, 0.2, GroverBackend::statevector,
                                                  NoiseModel::none(), 9);
  if (version.separates) CHECK(verify_separator(version.hyperplane, ds));
}

TEST_CASE("bit-flip noise on the analytic backend is rejected") {
  const LabeledDataset ds = make_planted_margin_dataset(8, 3, 0.3, 60);
  CHECK_THROWS_AS(online_quantum(ds, 0.3, 0.1, GroverBackend::analytic,
                                 NoiseModel::bit_flip(0.05), 1),
                  std::invalid_argument);
}

TEST_CASE("depolarizing noise degrades but does not break the flow") {
  const LabeledDataset ds = make_planted_margin_dataset(32, 4, 0.2, 61);
  const RunResult res = online_quantum(ds, 0.2, 0.1, GroverBackend::analytic,
                                       NoiseModel::depolarizing(0.1), 2);
  CHECK(res.ledger.wall_steps <= bounds::online_q_bound(32, 0.2, 0.1));
  if (res.separates) CHECK(verify_separator(res.hyperplane, ds));
}

TEST_CASE("epsilon validation") {
  const LabeledDataset ds = make_planted_margin_dataset(8, 3, 0.3, 62);
  CHECK_THROWS_WITH_AS(online_quantum(ds, 0.3, 1.5, GroverBackend::analytic,
                                      NoiseModel::none(), 1),
                       "epsilon must be in (0,1)", std::invalid_argument);
  CHECK_THROWS_AS(hybrid_quantum(ds, sample_hyperplanes(3, 3, 1), 0.0,
                                 GroverBackend::analytic, NoiseModel::none(), 1),
                  std::invalid_argument);
}

TEST_CASE("run result CSV row") {
  const LabeledDataset ds = make_hard_dataset(4);
  const RunResult res = classical_online(ds, ClassicalProtocol::one_update_per_pass);
  RunContext ctx;
  ctx.dataset = ds.name;
  ctx.n = 4;
  ctx.gamma = 0.5;
  ctx.epsilon = 0.05;
  ctx.noise = NoiseModel::none();
  const std::string row = run_result_csv_row(res, ctx);
  CHECK(row.rfind("classical_online,hard4,4,0.5,0.05,none,none,0,", 0) == 0);
  CHECK(run_result_csv_header() ==
        "algorithm,dataset,n,gamma,epsilon,backend,noise_kind,noise_p,seed,separates,"
        "updates,oracle_queries,classical_verifications,wall_steps");
}

#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace iwf;

TEST_CASE("make_schedule jacobi updates everyone every step") {
  const auto s = make_schedule(ScheduleKind::jacobi, 4, 10, 0, 7, 9);
  CHECK(s.delay_bound == 0);
  CHECK(s.update_bound == 1);
  for (std::size_t n = 0; n < 10; ++n) {
    for (std::size_t q = 0; q < 4; ++q) {
      CHECK(s.updates_at(n, q));
      for (std::size_t r = 0; r < 4; ++r) CHECK(s.read_time(n, q, r) == n);
    }
  }
}

TEST_CASE("make_schedule gauss_seidel round-robins") {
  const auto s = make_schedule(ScheduleKind::gauss_seidel, 2, 6);
  CHECK(s.update_bound == 2);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(s.updates_at(n, n % 2));
    CHECK_FALSE(s.updates_at(n, (n + 1) % 2));
    CHECK(s.read_time(n, n % 2, (n + 1) % 2) == n);
  }
}

TEST_CASE("make_schedule random_async respects its bounds") {
  for (std::size_t D : {0u, 2u, 5u}) {
    for (std::size_t B : {1u, 3u, 5u}) {
      const auto s = make_schedule(ScheduleKind::random_async, 4, 200, 99 + D * 10 + B, D, B);
      std::vector<std::size_t> last(4, 0);
      std::vector<bool> seen(4, false);
      for (std::size_t n = 0; n < 200; ++n) {
        for (std::size_t q = 0; q < 4; ++q) {
          if (s.updates_at(n, q)) {
            const std::size_t gap = seen[q] ? n - last[q] : n + 1;
            CHECK(gap <= B);
            last[q] = n;
            seen[q] = true;
            for (std::size_t r = 0; r < 4; ++r) {
              const std::size_t t = s.read_time(n, q, r);
              CHECK(t <= n);
              CHECK(n - t <= D);
              if (r == q) CHECK(t == n);
            }
          }
        }
      }
      // The final stretch also respects B.
      for (std::size_t q = 0; q < 4; ++q) CHECK(200 - last[q] <= B);
    }
  }
}

TEST_CASE("make_schedule random_async with D=0 and B=1 is Jacobi") {
  const auto s = make_schedule(ScheduleKind::random_async, 3, 20, 5, 0, 1);
  const auto net = iwf::testing::ensemble_network(7, 3);
  const auto a = run_game(net, s, uniform_profile(net.config));
  const auto b = run_game(net, make_schedule(ScheduleKind::jacobi, 3, 20), uniform_profile(net.config));
  REQUIRE(a.profiles.size() == b.profiles.size());
  for (std::size_t n = 0; n < a.profiles.size(); ++n) CHECK(a.profiles[n].distance(b.profiles[n]) == 0.0);
}

TEST_CASE("make_schedule errors") {
  CHECK_THROWS_AS(make_schedule(ScheduleKind::jacobi, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(ScheduleKind::jacobi, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(ScheduleKind::random_async, 2, 10, 0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(parse_schedule_kind("simultaneous"), std::invalid_argument);
  CHECK(parse_schedule_kind("gauss-seidel") == ScheduleKind::gauss_seidel);
  CHECK(parse_schedule_kind("async") == ScheduleKind::random_async);
}

TEST_CASE("run_game with one user converges after one update") {
  const auto cfg = uniform_config(1, 3, 2, 5.0, 1.0, 1.0, 1.0, 0.0);
  const auto net = build_effective_network(sample_channels(cfg, 3), cfg);
  const auto trace = run_game(net, make_schedule(ScheduleKind::jacobi, 1, 100), uniform_profile(cfg));
  CHECK(trace.converged);
  CHECK(trace.iterations_used == 1);
  const auto expected = water_level(net.noise_floor[0], 5.0).power;
  CHECK((trace.final_profile().power[0].head(2) - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(trace.final_profile().power[0](2) == 0.0);
  CHECK(trace.nash_gap == 0.0);
}

TEST_CASE("run_game with single-antenna users lands on full power") {
  const auto net = iwf::testing::scalar_network(3.0, 2.0, 1.0, 2.5);
  PowerProfile p0{{Eigen::VectorXd::Constant(1, 0.1), Eigen::VectorXd::Constant(1, 1.0)}};
  const auto trace = run_game(net, make_schedule(ScheduleKind::jacobi, 2, 100), p0);
  CHECK(trace.converged);
  CHECK(trace.iterations_used <= 1);
  CHECK(trace.final_profile().power[0](0) == 2.5);
  CHECK(trace.final_profile().power[1](0) == 2.5);
}

TEST_CASE("run_game reports non-convergence without throwing") {
  const auto net = iwf::testing::ensemble_network(5);
  const auto trace = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 1), uniform_profile(net.config));
  CHECK_FALSE(trace.converged);
  CHECK(trace.steps_executed == 1);
  CHECK(trace.iterations_used == 1);
}

TEST_CASE("run_game input validation") {
  const auto net = iwf::testing::ensemble_network(5);
  const auto s = make_schedule(ScheduleKind::jacobi, 4, 10);
  auto bad = uniform_profile(net.config);
  bad.power[0](0) += 1.0;
  CHECK_THROWS_AS(run_game(net, s, bad), std::invalid_argument);
  CHECK_THROWS_AS(run_game(net, s, uniform_profile(net.config), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(run_game(net, make_schedule(ScheduleKind::jacobi, 3, 10), uniform_profile(net.config)),
                  std::invalid_argument);
}

namespace {

// First ensemble members whose spectral certificate holds.
std::vector<EffectiveNetwork> certified_networks(std::size_t count, std::uint64_t first_seed = 500) {
  std::vector<EffectiveNetwork> out;
  for (std::uint64_t seed = first_seed; out.size() < count; ++seed) {
    auto net = iwf::testing::ensemble_network(seed);
    if (certify(net).spectral_unique) out.push_back(std::move(net));
  }
  return out;
}

}  // namespace

TEST_CASE("schedules reach the same equilibrium on certified networks") {
  for (const auto& net : certified_networks(15)) {
    const auto p0 = uniform_profile(net.config);
    const auto j = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 500), p0);
    const auto g = run_game(net, make_schedule(ScheduleKind::gauss_seidel, 4, 2000), p0);
    const auto a = run_game(net, make_schedule(ScheduleKind::random_async, 4, 2000, 17, 3, 5), p0);
    REQUIRE(j.converged);
    REQUIRE(g.converged);
    REQUIRE(a.converged);
    CHECK(j.final_profile().distance(g.final_profile()) < 1e-5);
    CHECK(j.final_profile().distance(a.final_profile()) < 1e-5);
    CHECK(j.nash_gap < 1e-5);
    CHECK(g.nash_gap < 1e-5);
    CHECK(a.nash_gap < 1e-5);
  }
}

TEST_CASE("converged traces are fixed points and stay feasible") {
  Rng rng(77);
  for (const auto& net : certified_networks(10, 900)) {
    const auto trace = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 100), random_profile(net.config, rng));
    REQUIRE(trace.converged);
    for (const auto& p : trace.profiles) CHECK(is_feasible(p, net.config));
    for (std::size_t n = 1; n < trace.profiles.size(); ++n) {
      for (std::size_t q = 0; q < 4; ++q) CHECK(std::abs(trace.profiles[n].power[q].sum() - 10.0) < 1e-9);
    }
    // One more synchronous round barely moves the profile.
    const auto one_more = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 1), trace.final_profile());
    CHECK(one_more.step_change[0] < 1e-6);
  }
}

TEST_CASE("random starts agree on certified networks") {
  Rng rng(88);
  for (const auto& net : certified_networks(10, 1300)) {
    const auto ref = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 100), uniform_profile(net.config));
    REQUIRE(ref.converged);
    for (int k = 0; k < 10; ++k) {
      const auto t = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 100), random_profile(net.config, rng));
      REQUIRE(t.converged);
      CHECK(t.final_profile().distance(ref.final_profile()) < 1e-5);
    }
  }
}

TEST_CASE("check_nash") {
  const auto cfg = uniform_config(1, 2, 2, 5.0, 1.0, 1.0, 1.0, 0.0);
  const auto single = build_effective_network(sample_channels(cfg, 3), cfg);
  PowerProfile wf{{water_level(single.noise_floor[0], 5.0).power}};
  CHECK(check_nash(single, wf) == doctest::Approx(0.0).epsilon(1e-15));

  const auto net = certified_networks(1, 2000).front();
  const auto trace = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 100), uniform_profile(net.config));
  REQUIRE(trace.converged);
  CHECK(check_nash(net, trace.final_profile()) < 1e-5);
  CHECK(is_nash(net, trace.final_profile(), 1e-5));

  auto perturbed = trace.final_profile();
  // Move a tenth of the budget between user 2's antennas.
  Eigen::VectorXd& p2 = perturbed.power[2];
  const Eigen::Index from = p2(0) >= p2(1) ? 0 : 1;
  p2(from) -= 1.0;
  p2(1 - from) += 1.0;
  CHECK(check_nash(net, perturbed) > 1e-3);
}

TEST_CASE("starting profiles are feasible") {
  const auto cfg = uniform_config(3, 3, 2, 4.0, 1.0, 1.0, 2.0, 1.0);
  Rng rng(1);
  CHECK(is_feasible(uniform_profile(cfg), cfg));
  CHECK(is_feasible(strongest_mode_profile(cfg), cfg));
  CHECK(strongest_mode_profile(cfg).power[1](0) == 4.0);
  for (int k = 0; k < 100; ++k) CHECK(is_feasible(random_profile(cfg, rng), cfg));
}

TEST_CASE("write_trace_csv") {
  const auto net = iwf::testing::scalar_network(0.1, 0.2);
  const auto trace = run_game(net, make_schedule(ScheduleKind::jacobi, 2, 10), uniform_profile(net.config));
  const auto path = std::filesystem::temp_directory_path() / "iwf_trace_test.csv";
  write_trace_csv(trace, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "iteration,user,antenna,power,residual");
  std::getline(in, line);
  CHECK(line == "0,0,0,1,");
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2 * trace.profiles.size());
  std::filesystem::remove(path);
}

namespace {

// 20 dB direct SNR with cross links 2-5 times farther than direct ones.
EffectiveNetwork high_snr_network(std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x51));
  NetworkConfig cfg = uniform_config(4, 2, 2, 100.0, 1.0, 1.0, 1.0, 2.5);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t q = 0; q < 4; ++q) {
      if (r != q) cfg.cross_distance[r][q] = 2.0 + 3.0 * rng.uniform();
    }
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    try {
      return build_effective_network(sample_channels(cfg, mix_seed(seed, attempt)), cfg);
    } catch (const DegenerateChannelError&) {
    }
  }
}

}  // namespace

TEST_CASE("interior equilibria: schedules and starts agree at high SNR") {
  Rng rng(99);
  std::size_t certified = 0, interior = 0, multi_step = 0;
  for (std::uint64_t seed = 1; certified < 20; ++seed) {
    const auto net = high_snr_network(seed);
    if (!certify(net).spectral_unique) continue;
    ++certified;
    const auto p0 = uniform_profile(net.config);
    const auto j = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 500), p0);
    const auto g = run_game(net, make_schedule(ScheduleKind::gauss_seidel, 4, 2000), p0);
    const auto a = run_game(net, make_schedule(ScheduleKind::random_async, 4, 3000, seed, 3, 5), p0);
    const auto r = run_game(net, make_schedule(ScheduleKind::jacobi, 4, 500), random_profile(net.config, rng));
    REQUIRE(j.converged);
    REQUIRE(g.converged);
    REQUIRE(a.converged);
    REQUIRE(r.converged);
    CHECK(j.final_profile().distance(g.final_profile()) < 1e-5);
    CHECK(j.final_profile().distance(a.final_profile()) < 1e-5);
    CHECK(j.final_profile().distance(r.final_profile()) < 1e-5);
    CHECK(j.nash_gap < 1e-5);
    for (const auto& p : j.final_profile().power) {
      if ((p.array() > 1e-6).all()) ++interior;
    }
    if (j.iterations_used > 2) ++multi_step;
  }
  // Most users fill both eigen-modes and the games take real iterations.
  CHECK(interior >= 40);
  CHECK(multi_step >= 10);
}

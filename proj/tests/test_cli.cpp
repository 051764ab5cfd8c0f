// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "aircomp/channel_io.hpp"
#include "aircomp/config.hpp"
#include "aircomp/optimizer.hpp"
#include "cli_support.hpp"

using namespace aircomp;

namespace {

struct StateCsv {
  Eigen::VectorXcd m, v;
};

StateCsv parse_state(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "vector,index,real,imag");
  std::vector<std::complex<double>> m, v;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string which, idx, re, im;
    std::getline(row, which, ',');
    std::getline(row, idx, ',');
    std::getline(row, re, ',');
    std::getline(row, im, ',');
    (which == "m" ? m : v).emplace_back(std::stod(re), std::stod(im));
  }
  StateCsv s;
  s.m = Eigen::Map<Eigen::VectorXcd>(m.data(), static_cast<Eigen::Index>(m.size()));
  s.v = Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return s;
}

bool single_prefixed_line(const std::string& err) {
  return err.rfind("error: ", 0) == 0 && err.find('\n') == err.size() - 1;
}

}  // namespace

TEST_CASE("generate") {
  testing::Scratch dir("gen");
  const auto r = dir.cli("generate --preset desk --T 12 --seed 5 --out set.jsonl");
  REQUIRE(r.status == 0);
  CHECK(r.out == "K=5 N=4 M=8 T=12 seed=5\n");
  const ChannelSet set = read_channel_set(dir.path("set.jsonl"));
  CHECK(set.size() == 12);
  CHECK(set.scenario.seed == 5);
  CHECK(set.scenario.max_power == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(set.scenario.noise_power == doctest::Approx(1e-13).epsilon(1e-14));

  RunConfig c = preset("desk");
  c.seed = 5;
  const ChannelSet ref = generate_channel_set(c.scenario_config(), 12);
  CHECK(ref.samples[11].ris_to_ap == set.samples[11].ris_to_ap);

  REQUIRE(dir.cli("generate --preset desk --T 12 --seed 5 --out again.jsonl").status == 0);
  CHECK(dir.read("set.jsonl") == dir.read("again.jsonl"));

  REQUIRE(dir.cli("generate --preset desk --T 12 --seed 5 --format binary --out set.bin").status == 0);
  const ChannelSet bin = read_channel_set(dir.path("set.bin"));
  CHECK(bin.samples[3].direct[2] == set.samples[3].direct[2]);

  SUBCASE("T = 0 names the field") {
    const auto bad = dir.cli("generate --T 0 --out x.jsonl");
    CHECK(bad.status != 0);
    CHECK(single_prefixed_line(bad.err));
    CHECK(bad.err.find("validation: T") != std::string::npos);
  }
  SUBCASE("unwritable output") {
    const auto bad = dir.cli("generate --T 2 --out /nonexistent/dir/x.jsonl");
    CHECK(bad.status != 0);
    CHECK(bad.err.rfind("error: io:", 0) == 0);
  }
  SUBCASE("bad flag value") {
    const auto bad = dir.cli("generate --T two --out x.jsonl");
    CHECK(bad.status != 0);
    CHECK(single_prefixed_line(bad.err));
  }
}

TEST_CASE("solve") {
  testing::Scratch dir("solve");
  REQUIRE(dir.cli("generate --preset desk --T 40 --seed 3 --out set.jsonl").status == 0);
  Rng rng(derive_seed(3, Stream::kSolverInit));
  const BeamformingState init = initial_state(4, 8, rng);

  SUBCASE("L = 0 writes the initialization") {
    const auto r = dir.cli("solve --channels set.jsonl --seed 3 --L 0 --out state.csv");
    REQUIRE(r.status == 0);
    const StateCsv s = parse_state(dir.read("state.csv"));
    CHECK(s.m == init.m);
    CHECK(s.v == init.v);
    CHECK(dir.read("state_trace.csv") == "outer_iteration,u1,u2,train_outage,elapsed_seconds\n");
  }
  SUBCASE("random phase keeps the seeded phases") {
    const auto r = dir.cli("solve --channels set.jsonl --seed 3 --L 2 --R 3 --scheme random-phase --out rp.csv --trace rp_trace.csv");
    REQUIRE(r.status == 0);
    const StateCsv s = parse_state(dir.read("rp.csv"));
    CHECK(s.v == init.v);
    for (Eigen::Index i = 0; i < s.v.size(); ++i) CHECK(std::abs(std::abs(s.v(i)) - 1.0) < 1e-12);
    std::istringstream trace(dir.read("rp_trace.csv"));
    std::string line;
    int rows = -1;
    while (std::getline(trace, line)) ++rows;
    CHECK(rows == 2);
  }
  SUBCASE("alternating matches the library call") {
    REQUIRE(dir.cli("solve --channels set.jsonl --seed 3 --L 2 --R 3 --batch 10 --out alt.csv").status == 0);
    const ChannelSet set = read_channel_set(dir.path("set.jsonl"));
    RunConfig c = preset("desk");
    c.seed = 3;
    c.solver.rounds = 2;
    c.solver.epochs = 3;
    c.solver.batch_size = 10;
    const SolveResult ref = alternating_solve(set, c.solver_config(), c.gamma());
    const StateCsv s = parse_state(dir.read("alt.csv"));
    CHECK(s.m == ref.state.m);
    CHECK(s.v == ref.state.v);
  }
  SUBCASE("every scheme runs") {
    for (const char* scheme : {"alternating-svrg", "sgd", "random-phase", "no-ris"}) {
      CAPTURE(scheme);
      CHECK(dir.cli(std::string("solve --channels set.jsonl --L 1 --R 2 --scheme ") + scheme + " --out s.csv").status == 0);
    }
  }
  SUBCASE("dimension mismatch") {
    const auto r = dir.cli("solve --channels set.jsonl --M 16 --out s.csv");
    CHECK(r.status != 0);
    CHECK(single_prefixed_line(r.err));
    CHECK(r.err.find("M") != std::string::npos);
    CHECK(dir.cli("solve --channels set.jsonl --T 41 --out s.csv").status != 0);
  }
  SUBCASE("missing channel file") {
    const auto r = dir.cli("solve --channels missing.jsonl --out s.csv");
    CHECK(r.status != 0);
    CHECK(single_prefixed_line(r.err));
    CHECK(r.err.find("missing.jsonl") != std::string::npos);
  }
  SUBCASE("batch above T") {
    const auto r = dir.cli("solve --channels set.jsonl --batch 41 --out s.csv");
    CHECK(r.status != 0);
    CHECK(r.err.find("batch") != std::string::npos);
  }
}

TEST_CASE("sweep") {
  testing::Scratch dir("sweep");
  SUBCASE("single cell") {
    const auto r = dir.cli("sweep --preset desk --values 8 --realizations 1 --eval-samples 100 --L 1 --R 2 --out one.csv");
    REQUIRE(r.status == 0);
    std::istringstream in(dir.read("one.csv"));
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "param,value,scheme,mean_outage,stderr,realizations,eval_samples,error");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);  // one per desk scheme
  }
  SUBCASE("single scheme via config file") {
    std::ofstream(dir.path("one.ini")) << "[SweepSpec]\nparameter = M\nvalues = 4\nschemes = alternating-svrg\n"
                                          "realizations = 1\neval_samples = 50\n[SolverConfig]\nL = 1\nR = 1\n";
    REQUIRE(dir.cli("sweep --config one.ini --out one.csv").status == 0);
    std::istringstream in(dir.read("one.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
  }
  SUBCASE("all cells failing exits nonzero but still writes the table") {
    const auto r = dir.cli("sweep --values 8 --realizations 2 --eval-samples 10 --L 1 --R 1 --alpha-m 1e200 --out bad.csv");
    CHECK(r.status != 0);
    CHECK(single_prefixed_line(r.err));
    CHECK(dir.read("bad.csv").find("diverged") != std::string::npos);
  }
}

TEST_CASE("print-config") {
  testing::Scratch dir("print");
  const auto r = dir.cli("print-config --preset paper-fig1 --seed 9 --tau-db -27.5 --p-dbm 3 --alpha-v 0.02");
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  const RunConfig parsed = parse_run_config(in);
  RunConfig expect = preset("paper-fig1");
  expect.seed = 9;
  expect.tau_db = -27.5;
  expect.p_dbm = 3;
  expect.solver.step_v = 0.02;
  CHECK(parsed == expect);

  std::ofstream(dir.path("echo.ini")) << r.out;
  const auto again = dir.cli("print-config --config echo.ini");
  REQUIRE(again.status == 0);
  CHECK(again.out == r.out);

  const auto bad = dir.cli("print-config --preset paper-fig9");
  CHECK(bad.status != 0);
  CHECK(single_prefixed_line(bad.err));
}

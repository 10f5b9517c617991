// Copyright 2026 The Grover Noise Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grover/cli.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "grover/analytic.hpp"
#include "gtest/gtest.h"
#include "json.hpp"

using namespace grover;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "grover_sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("grover_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST(CliIo, doubles_round_trip) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
        EXPECT_EQ(std::stod(cli::format_double(x)), x);
    }
    EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
}

TEST_F(CliTest, config_reader_reports_lines) {
    std::ofstream(path("a.cfg")) << "# header\n\nn = 6   # trailing\n--p=0.01, 0.02\n";
    const auto cfg = cli::read_config(path("a.cfg"));
    ASSERT_EQ(cfg.size(), 2U);
    EXPECT_EQ(cfg.at("n").value, "6");
    EXPECT_EQ(cfg.at("n").line, 3);
    EXPECT_EQ(cfg.at("p").value, "0.01, 0.02");
    std::ofstream(path("b.cfg")) << "n = 6\nn = 8\n";
    try {
        cli::read_config(path("b.cfg"));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("b.cfg:2"), std::string::npos);
    }
    std::ofstream(path("c.cfg")) << "just words\n";
    EXPECT_THROW(cli::read_config(path("c.cfg")), ValidationError);
}

TEST_F(CliTest, sweep_dataset_round_trips) {
    std::vector<experiments::ScalingPoint> pts(3);
    pts[0] = {8, 0.01, 0.7, 0.7 - 1.0 / 256, 0, experiments::SweepEngine::Symmetric, 9, true, 0.0};
    pts[1] = {10, 0.1, 0.2, 0.2 - 1.0 / 1024, 32, experiments::SweepEngine::Mpdo, 1, true, 3e-8};
    pts[2] = {10, 0.3, std::nan(""), std::nan(""), 128, experiments::SweepEngine::Mpdo, 1, false, std::nan("")};
    cli::write_sweep(path("s.csv"), "m.json", pts);
    const auto back = cli::read_sweep(path("s.csv"));
    ASSERT_EQ(back.size(), 3U);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back[i].n, pts[i].n);
        EXPECT_EQ(back[i].p, pts[i].p);
        EXPECT_EQ(back[i].success, pts[i].success);
        EXPECT_EQ(back[i].excess, pts[i].excess);
        EXPECT_EQ(back[i].chi_used, pts[i].chi_used);
        EXPECT_EQ(back[i].engine, pts[i].engine);
        EXPECT_EQ(back[i].targets_averaged, pts[i].targets_averaged);
        EXPECT_EQ(back[i].convergence_delta, pts[i].convergence_delta);
    }
    EXPECT_FALSE(back[2].converged);
    EXPECT_TRUE(std::isnan(back[2].success));
    EXPECT_EQ(slurp(path("s.csv")).substr(0, 29), "# schema: grover-sim/sweep/v1");
}

TEST_F(CliTest, ideal_matches_closed_form) {
    const auto r = invoke({"ideal", "--n", "10", "--out", path("o")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto t = cli::read_csv(path("o/ideal.csv"));
    EXPECT_EQ(t.schema, "grover-sim/ideal/v1");
    ASSERT_EQ(t.rows.size(), static_cast<std::size_t>(analytic::optimal_iterations(10)) + 1);
    for (const auto& row : t.rows) {
        const long k = std::stol(row[0]);
        EXPECT_NEAR(std::stod(row[1]), analytic::ideal_success_probability(10, k), 1e-10);
        EXPECT_LE(std::stod(row[2]), 1.0);
    }
    const auto m = nlohmann::json::parse(slurp(path("o/ideal.manifest.json")));
    EXPECT_EQ(m["command"], "ideal");
    EXPECT_EQ(m["outputs"][0], "ideal.csv");
    EXPECT_TRUE(m["checks"]["passed"].get<bool>());
    EXPECT_EQ(m["checks"]["peak_k"], analytic::optimal_iterations(10));

    ASSERT_EQ(invoke({"ideal", "--n", "2", "--out", path("two")}).code, cli::kExitOk);
    const auto two = cli::read_csv(path("two/ideal.csv"));
    EXPECT_NEAR(std::stod(two.rows.at(1)[1]), 1.0, 1e-12);
}

TEST_F(CliTest, exit_codes) {
    EXPECT_EQ(invoke({"ideal", "--n", "5", "--out", path("a")}).code, cli::kExitValidation);
    EXPECT_EQ(invoke({"ideal", "--bogus"}).code, cli::kExitValidation);
    EXPECT_EQ(invoke({}).code, cli::kExitValidation);
    const auto truncated = invoke({"ideal", "--n", "10", "--chi", "1", "--out", path("b")});
    EXPECT_EQ(truncated.code, cli::kExitTolerance);
    EXPECT_NE(truncated.err.find("k=1 "), std::string::npos) << truncated.err;
    EXPECT_EQ(invoke({"crosscheck", "--n", "10", "--out", path("c")}).code, cli::kExitResource);
    EXPECT_EQ(invoke({"mpdo", "--n", "8", "--channel", "ad", "--p", "0.04", "--chi", "4", "--out", path("d")}).code,
              cli::kExitTolerance);
    EXPECT_EQ(invoke({"mpdo", "--n", "6", "--channel", "xx", "--out", path("e")}).code, cli::kExitValidation);
    EXPECT_EQ(invoke({"fit", path("missing.csv"), "--out", path("f")}).code, cli::kExitValidation);
    EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, config_errors_name_their_source) {
    std::ofstream(path("run.cfg")) << "n = 6\n\np = 1.5\n";
    const auto r = invoke({"trajectories", "--config", path("run.cfg"), "--out", path("o")});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("run.cfg:3"), std::string::npos) << r.err;
    const auto flag = invoke({"trajectories", "--config", path("run.cfg"), "--p", "0.01", "--traj", "3", "--out",
                              path("o")});
    EXPECT_EQ(flag.code, cli::kExitOk) << flag.err;
}

TEST_F(CliTest, zero_rate_collapses_bands) {
    const auto r = invoke({"trajectories", "--n", "6", "--p", "0", "--traj", "5", "--strategy", "naive", "--out",
                           path("o")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto t = cli::read_csv(path("o/trajectories_pf_p0_naive.csv"));
    EXPECT_EQ(t.schema, "grover-sim/trajectories/v1");
    for (const auto& row : t.rows) {
        const double s = std::stod(row[t.column("S_T")]);
        for (const char* c : {"p5", "p25", "p50", "p75", "p95", "S_min", "S_max"}) {
            EXPECT_NEAR(std::stod(row[t.column(c)]), s, 1e-12) << c;
        }
    }
}

TEST_F(CliTest, outputs_are_reproducible_from_the_manifest) {
    const std::vector<std::string> base = {"trajectories", "--n", "6", "--channel", "ad", "--p", "0.03,0.06",
                                           "--traj", "24", "--strategy", "naive,numu", "--records"};
    auto args = base;
    args.insert(args.end(), {"--workers", "1", "--out", path("w1")});
    ASSERT_EQ(invoke(args).code, cli::kExitOk);
    args = base;
    args.insert(args.end(), {"--workers", "3", "--out", path("w3")});
    ASSERT_EQ(invoke(args).code, cli::kExitOk);
    ASSERT_EQ(invoke({"trajectories", "--config", path("w1/trajectories.cfg"), "--workers", "2", "--out",
                      path("replay")})
                  .code,
              cli::kExitOk);
    const auto m = nlohmann::json::parse(slurp(path("w1/trajectories.manifest.json")));
    ASSERT_EQ(m["outputs"].size(), 8U);
    for (const auto& name : m["outputs"]) {
        const std::string file = name.get<std::string>();
        const std::string ref = slurp(dir_ / "w1" / file);
        EXPECT_FALSE(ref.empty());
        EXPECT_EQ(ref, slurp(dir_ / "w3" / file)) << file;
        EXPECT_EQ(ref, slurp(dir_ / "replay" / file)) << file;
    }
}

TEST_F(CliTest, sweep_has_one_row_per_grid_point) {
    const std::vector<std::string> base = {"sweep", "--n-list", "4,6,8", "--grid-count", "4", "--engine", "dense"};
    auto args = base;
    args.insert(args.end(), {"--workers", "1", "--out", path("a")});
    ASSERT_EQ(invoke(args).code, cli::kExitOk);
    args = base;
    args.insert(args.end(), {"--workers", "3", "--out", path("b")});
    ASSERT_EQ(invoke(args).code, cli::kExitOk);
    EXPECT_EQ(cli::read_sweep(path("a/sweep.csv")).size(), 12U);
    EXPECT_EQ(slurp(path("a/sweep.csv")), slurp(path("b/sweep.csv")));
}

TEST_F(CliTest, fit_recovers_the_shipped_fixture) {
    const auto r = invoke({"fit", std::string(GROVER_TEST_DATA_DIR) + "/synthetic_phase_flip.csv", "--floor", "0",
                           "--ceiling", "inf", "--out", path("o")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto j = nlohmann::json::parse(slurp(path("o/fit.json")));
    EXPECT_NEAR(j["exponents"]["rate"].get<double>(), 1.735, 1e-9);
    EXPECT_NEAR(j["exponents"]["size"].get<double>(), 0.7844, 1e-9);
    EXPECT_EQ(j["point_count"], 100);
    EXPECT_EQ(j["window"]["ceiling"], "inf");
    EXPECT_EQ(j["manifest"], "fit.manifest.json");

    const std::string fixture = std::string(GROVER_TEST_DATA_DIR) + "/synthetic_phase_flip.csv";
    ASSERT_EQ(invoke({"fit", fixture, "--out", path("p")}).code, cli::kExitOk);
    const auto narrow = nlohmann::json::parse(slurp(path("p/fit.json")));
    EXPECT_LT(narrow["point_count"].get<int>(), 100);
    EXPECT_NEAR(narrow["exponents"]["rate"].get<double>(), 1.735, 1e-9);

    const auto empty = invoke({"fit", fixture, "--n-min", "20", "--out", path("q")});
    EXPECT_EQ(empty.code, cli::kExitValidation);
    EXPECT_NE(empty.err.find("keeps 0 points"), std::string::npos) << empty.err;
}

TEST_F(CliTest, crosscheck_reports_three_engines) {
    const auto r = invoke({"crosscheck", "--n", "6", "--channel", "pf", "--p", "0.02", "--traj", "400", "--out",
                           path("o")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
    const auto t = cli::read_csv(path("o/crosscheck.csv"));
    ASSERT_EQ(t.rows.size(), static_cast<std::size_t>(analytic::optimal_iterations(6)) + 1);
    for (const auto& row : t.rows) {
        EXPECT_LE(std::stod(row[t.column("dP_mpdo")]), 1e-6);
        EXPECT_LE(std::stod(row[t.column("dOE_mpdo")]), 1e-6);
    }
    EXPECT_NE(r.out.find("dense vs mpdo"), std::string::npos);
}

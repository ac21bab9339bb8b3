// Copyright 2026 The NCQF Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncqf/cli.hpp"
#include "ncqf/experiments.hpp"

namespace ncqf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ncqf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string slurp(const fs::path &p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    RunRequest short_run(const std::string &sub) {
        RunRequest r;
        r.preset = "half_parity";
        r.trajectories = 2;
        r.seed = 17;
        r.workers = 2;
        r.out_dir = (dir_ / sub).string();
        return r;
    }

    fs::path dir_;
};

TEST_F(CliTest, RunWritesArtifactsAndManifest) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run(short_run("a"), out, err), kExitOk) << err.str();
    for (const char *f : {"config.json", "ensemble.json", "traj_0000.csv", "traj_0001.csv", "spectrum.csv",
                          "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    }
    json m = json::parse(slurp(dir_ / "a" / "manifest.json"));
    EXPECT_EQ(m["schema"], "ncqf.manifest/1");
    EXPECT_EQ(m["csv_schema"], kCsvSchema);
    EXPECT_EQ(m["n_traj"], 2);
    EXPECT_EQ(m["master_seed"], 17);
    EXPECT_EQ(m["files"].size(), 5u);
    std::string header = slurp(dir_ / "a" / "traj_0000.csv").substr(0, 40);
    EXPECT_EQ(header.rfind("t,fid:Phi+", 0), 0u);
}

TEST_F(CliTest, RepeatRunIsByteIdentical) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run(short_run("a"), out, err), kExitOk);
    RunRequest b = short_run("b");
    b.workers = 1;
    ASSERT_EQ(cmd_run(b, out, err), kExitOk);
    for (const char *f : {"config.json", "ensemble.json", "traj_0000.csv", "traj_0001.csv", "spectrum.csv"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
}

TEST_F(CliTest, ManifestReproducesRun) {
    std::ostringstream out, err;
    RunRequest a = short_run("a");
    a.preset = "half_parity_nofb";
    a.dt = 2e-3;
    a.trajectories = 20;
    ASSERT_EQ(cmd_run(a, out, err), kExitOk);
    EXPECT_TRUE(fs::exists(dir_ / "a" / "aggregate.csv"));
    RunRequest b;
    b.manifest_path = (dir_ / "a" / "manifest.json").string();
    b.out_dir = (dir_ / "b").string();
    ASSERT_EQ(cmd_run(b, out, err), kExitOk) << err.str();
    json ma = json::parse(slurp(dir_ / "a" / "manifest.json"));
    json mb = json::parse(slurp(dir_ / "b" / "manifest.json"));
    EXPECT_EQ(ma["summary_digest"], mb["summary_digest"]);
    EXPECT_EQ(ma["files"], mb["files"]);
}

TEST_F(CliTest, InvalidConfigReportsField) {
    json cfg = to_json(experiments::preset("half_parity"));
    cfg["channels"][0]["eta"] = -0.2;
    fs::path p = dir_ / "bad.json";
    std::ofstream(p) << cfg.dump();
    RunRequest r;
    r.config_path = p.string();
    r.out_dir = (dir_ / "out").string();
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(r, out, err), kExitValidation);
    json e = json::parse(err.str());
    EXPECT_EQ(e["error"], "validation");
    EXPECT_EQ(e["field"], "channels[0].eta");
    EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, ConflictingSourcesRejected) {
    RunRequest r = short_run("x");
    r.config_path = "also.json";
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(r, out, err), kExitValidation);
}

TEST_F(CliTest, IntegrationFailureExitCode) {
    json cfg = to_json(experiments::half_parity(experiments::HalfParityFeedback::basic, 1.0, 0.1));
    cfg["channels"][0]["eta"] = 0.5;
    fs::path p = dir_ / "impure.json";
    std::ofstream(p) << cfg.dump();
    RunRequest r;
    r.config_path = p.string();
    r.out_dir = (dir_ / "out").string();
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(r, out, err), kExitIntegration);
    EXPECT_EQ(json::parse(err.str())["error"], "integration");
}

TEST(Analytic, PrintsCsv) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_analytic("msd_ps", {"0", "0.12"}, out, err), kExitOk);
    EXPECT_EQ(out.str(), "eps,value\n0,0.16666666666666666\n0.12,0.097252266666666656\n");
    std::ostringstream out2, err2;
    EXPECT_EQ(cmd_analytic("msd_eps_out", {"2"}, out2, err2), kExitValidation);
    EXPECT_EQ(cmd_analytic("bogus", {"0.1"}, out2, err2), kExitValidation);
}

TEST(List, ShowsEveryPreset) {
    std::ostringstream out;
    EXPECT_EQ(cmd_list(out), kExitOk);
    std::string s = out.str();
    for (const auto &p : experiments::presets()) EXPECT_NE(s.find(p.name + "\t"), std::string::npos);
}

TEST(FormatDouble, RoundTrips) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(NAN), "nan");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace ncqf::cli

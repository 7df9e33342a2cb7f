// Copyright 2026 The Forrelab Authors
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

#include "forrelab/cli.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

using namespace forrelab;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(cli, phi_single_coordinate) {
    auto r = run_cli({"phi", "--n", "1", "--x", "1", "--y", "1"});
    EXPECT_EQ(r.code, EXIT_PASS);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j, nlohmann::json::parse(R"({"phi": 1.0})"));
}

TEST(cli, accept_reports_amplitude) {
    auto r = run_cli({"accept", "--x", "1,-1,1,1", "--y", "1,1,1,-1", "--shots", "100", "--seed", "3"});
    ASSERT_EQ(r.code, EXIT_PASS) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["accept_probability"].get<double>(), 0.5, 1e-15);
    EXPECT_NEAR(j["amplitude"].get<double>(), j["phi"].get<double>(), 1e-15);
    EXPECT_EQ(j["shots"], 100);
}

TEST(cli, usage_errors_produce_no_output) {
    for (const auto &args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"verify-prop"},
             {"verify-prop", "--n", "6"},
             {"verify-prop", "--n", "4", "--bogus"},
             {"phi", "--x", "1,1", "--y", "1"},
             {"accept", "--x", "1,0", "--y", "1,1"},
             {"verify-lemma"},
             {"verify-lemma", "--truth-table", "1,-1,2,1"},
             {"sweep", "--n", "16..10"},
         }) {
        auto r = run_cli(args);
        EXPECT_GE(r.code, 64) << (args.empty() ? "" : args[0]);
        EXPECT_TRUE(r.out.empty()) << r.out;
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(cli, unreadable_and_malformed_function_files) {
    auto r = run_cli({"verify-lemma", "--function", "/nonexistent/forrelab/f.json"});
    EXPECT_EQ(r.code, EXIT_NO_INPUT);
    EXPECT_TRUE(r.out.empty());

    std::string path = testing::TempDir() + "forrelab_bad_function.json";
    {
        std::ofstream f(path);
        f << "{\"n\": 2, \"coeffs\": [1, 2";
    }
    r = run_cli({"verify-lemma", "--function", path});
    EXPECT_EQ(r.code, EXIT_BAD_DATA);
    EXPECT_TRUE(r.out.empty());
    std::remove(path.c_str());
}

TEST(cli, help_documents_the_checked_statement) {
    auto r = run_cli({"verify-prop", "--help"});
    EXPECT_EQ(r.code, EXIT_PASS);
    EXPECT_NE(r.out.find("eps/4"), std::string::npos);
    r = run_cli({"verify-dynkin", "--help"});
    EXPECT_NE(r.out.find("Dynkin"), std::string::npos);
}

TEST(cli, verify_lemma_passes_on_grid) {
    auto r = run_cli({"verify-lemma", "--truth-table", "1,-1,-1,1,1,1,-1,1", "--no-timestamp"});
    ASSERT_EQ(r.code, EXIT_PASS) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["anchors"], 125);
    EXPECT_LT(j["max_residual"].get<double>(), 1e-9);
}

TEST(cli, function_file_and_verify_main) {
    std::string path = testing::TempDir() + "forrelab_function.json";
    {
        std::ofstream f(path);
        f << R"({"n": 2, "coeffs": [0, 0, 0, 1]})";
    }
    auto r = run_cli({"verify-main", "--function", path, "--gamma", "0.5", "--epsilon", "0.05", "--dt-divisor", "64",
                      "--samples", "2000", "--seed", "9", "--no-timestamp"});
    ASSERT_EQ(r.code, EXIT_PASS) << r.err << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["t"], 1.0);
    EXPECT_EQ(j["verdict"], "pass");
    std::remove(path.c_str());
}

TEST(cli, reports_are_reproducible_and_worker_independent) {
    std::vector<std::string> base = {"verify-prop", "--n", "8", "--samples", "500", "--dt-divisor", "64",
                                     "--seed", "11", "--no-timestamp"};
    auto a = run_cli(base);
    auto b = run_cli(base);
    auto with_workers = base;
    with_workers.insert(with_workers.end(), {"--workers", "3"});
    auto c = run_cli(with_workers);
    ASSERT_EQ(a.code, EXIT_PASS) << a.out;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    auto timed = run_cli({"verify-prop", "--n", "8", "--samples", "50", "--dt-divisor", "16", "--seed", "11"});
    EXPECT_TRUE(nlohmann::json::parse(timed.out).contains("timestamp"));
}

TEST(cli, sample_writes_path_csv) {
    auto r = run_cli({"sample", "--n", "2", "--samples", "3", "--dt-divisor", "16", "--round", "--seed", "5"});
    ASSERT_EQ(r.code, EXIT_PASS) << r.err;
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "stream,tau,exited,x1,x2,x3,x4,z1,z2,z3,z4");
    size_t rows = 0;
    for (std::string line; std::getline(lines, line);) {
        rows++;
    }
    EXPECT_EQ(rows, 3u);
}

TEST(cli, dump_paths_for_dynkin) {
    std::string path = testing::TempDir() + "forrelab_dynkin.csv";
    auto r = run_cli({"verify-dynkin", "--truth-table", "1,-1,-1,1", "--gamma", "0.5", "--epsilon", "0.05",
                      "--dt-divisor", "32", "--samples", "20", "--dump-paths", path, "--no-timestamp"});
    ASSERT_LE(r.code, EXIT_INCONCLUSIVE) << r.err;
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "stream,tau,f_value,accumulator");
    std::remove(path.c_str());
}

TEST(cli, sweep_small) {
    auto r = run_cli({"sweep", "--n", "16..64", "--samples", "300", "--dt-divisor", "32", "--mc-max-n", "16",
                      "--no-timestamp"});
    ASSERT_EQ(r.code, EXIT_PASS) << r.err << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["rows"].size(), 3u);
}

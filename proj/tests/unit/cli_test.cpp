#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace wavebif::cli {
namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "wavebif");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("wavebif_cli_test_" + name);
}

TEST(CliSolve, WritesSchemaConformingDocument) {
    const Outcome o = run_cli({"solve", "--p", "1", "--m", "sqrt2", "--rho", "1e-2"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto doc = nlohmann::json::parse(o.out);
    EXPECT_TRUE(validate_solve_document(doc).empty());
    EXPECT_EQ(doc["params"]["m_token"], "sqrt2");
    const double alpha = doc["result"]["alpha"];
    const double m = doc["params"]["m"];
    // ω² θ ρ² / π² with θ = 9π²/16
    const double predicted = (1 + m) * (9.0 / 16.0) * 1e-4;
    EXPECT_LT(std::abs(alpha / predicted - 1.0), 0.03);
    EXPECT_LE(doc["result"]["residuals"]["pde"].get<double>(), 1e-9);
}

TEST(CliSolve, ValidationAndSolverFailures) {
    EXPECT_EQ(run_cli({"solve", "--rho", "0"}).code, kExitInvalid);
    EXPECT_EQ(run_cli({"solve", "--rho", "1e-2", "--m", "banana"}).code, kExitInvalid);
    EXPECT_EQ(run_cli({"solve", "--rho", "1e-2", "--s", "30"}).code, kExitInvalid);
    EXPECT_EQ(run_cli({"solve", "--rho", "1e-2", "--s", "30", "--allow-s-override"}).code, kExitOk);
    EXPECT_EQ(run_cli({"solve", "--bogus"}).code, kExitInvalid);

    const Outcome big = run_cli({"solve", "--p", "1", "--m", "sqrt2", "--rho", "0.5"});
    EXPECT_EQ(big.code, kExitSolverFailed);
    EXPECT_NE(big.err.find("ContractionFailure"), std::string::npos);
    EXPECT_NE(big.err.find("0.05"), std::string::npos);
}

TEST(CliSolve, ResumeRoundTripIsBitIdentical) {
    const auto file = temp_path("solve.json");
    ASSERT_EQ(run_cli({"solve", "--rho", "3e-3", "--out", file.string()}).code, kExitOk);
    const std::string first = read_file(file);
    const Outcome again = run_cli({"solve", "--resume", file.string()});
    ASSERT_EQ(again.code, kExitOk) << again.err;
    EXPECT_EQ(again.out, first);

    // different flags must not silently reuse the file
    EXPECT_EQ(run_cli({"solve", "--resume", file.string(), "--nt", "32"}).code, kExitInvalid);
    std::filesystem::remove(file);
}

TEST(CliBranch, CsvSchemaAndTrend) {
    const Outcome o = run_cli({"branch", "--p", "1", "--rho-min", "1e-3", "--rho-max", "1e-2", "--points", "3"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_TRUE(validate_branch_csv(o.out).empty());
    EXPECT_EQ(o.out.substr(0, kBranchHeader.size()), kBranchHeader);

    std::istringstream lines(o.out);
    std::string line;
    std::getline(lines, line);
    std::vector<double> ratio_dev;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        ASSERT_EQ(cells.size(), 10u);
        EXPECT_EQ(cells[9].substr(0, 9), "converged");
        ratio_dev.push_back(std::abs(std::stod(cells[4]) - 1.0));
    }
    ASSERT_EQ(ratio_dev.size(), 3u);
    EXPECT_GT(ratio_dev[0], ratio_dev[1]);
    EXPECT_GT(ratio_dev[1], ratio_dev[2]);
}

TEST(CliBranch, SinglePointMatchesSolve) {
    const Outcome b = run_cli({"branch", "--rho-min", "5e-3", "--rho-max", "5e-3", "--points", "1", "--format", "json"});
    ASSERT_EQ(b.code, kExitOk) << b.err;
    const Outcome s = run_cli({"solve", "--rho", "5e-3"});
    ASSERT_EQ(s.code, kExitOk);
    const auto row = nlohmann::json::parse(b.out)["rows"][0];
    const auto res = nlohmann::json::parse(s.out)["result"];
    for (const char* key : {"rho", "alpha", "omega", "v_norm", "alpha_ratio"}) EXPECT_EQ(row[key], res[key]) << key;
    EXPECT_EQ(row["residuals"], res["residuals"]);
}

TEST(CliBranch, RowAboveThresholdFails) {
    const Outcome o = run_cli({"branch", "--rho-min", "1e-2", "--rho-max", "0.1", "--points", "2"});
    EXPECT_EQ(o.code, kExitOk);
    EXPECT_TRUE(validate_branch_csv(o.out).empty());
    EXPECT_NE(o.out.find(",,,,,,,,,failed"), std::string::npos);
    EXPECT_NE(o.out.find("converged"), std::string::npos);
    EXPECT_EQ(run_cli({"branch", "--rho-min", "0.1", "--rho-max", "0.2", "--points", "2"}).code, kExitSolverFailed);
    EXPECT_EQ(run_cli({"branch", "--rho-min", "1e-2", "--rho-max", "1e-3"}).code, kExitInvalid);
}

TEST(CliVerify, QuickDefaultsPass) {
    const auto file = temp_path("verify.json");
    const Outcome o = run_cli({"verify", "--quick", "--out", file.string()});
    EXPECT_EQ(o.code, kExitOk) << o.err;
    EXPECT_NE(o.out.find("pass  kernel_scan"), std::string::npos);
    const auto doc = nlohmann::json::parse(read_file(file));
    EXPECT_TRUE(validate_verify_document(doc).empty());
    EXPECT_TRUE(doc["passed"].get<bool>());
    std::filesystem::remove(file);
}

TEST(CliVerify, RationalMassWarnsWithoutFailing) {
    const Outcome o = run_cli({"verify", "--quick", "--m", "1.0"});
    EXPECT_NE(o.out.find("warn  kernel_scan"), std::string::npos);
}

TEST(Validators, RejectMalformedInput) {
    EXPECT_FALSE(validate_solve_document(nlohmann::json::array()).empty());
    auto doc = nlohmann::json::parse(run_cli({"solve", "--rho", "1e-3"}).out);
    ASSERT_TRUE(validate_solve_document(doc).empty());
    auto broken = doc;
    broken["result"].erase("alpha");
    EXPECT_FALSE(validate_solve_document(broken).empty());
    broken = doc;
    std::swap(broken["spectrum"][0], broken["spectrum"][1]);
    EXPECT_FALSE(validate_solve_document(broken).empty());
    broken = doc;
    broken["schema_version"] = 99;
    EXPECT_FALSE(validate_solve_document(broken).empty());

    EXPECT_FALSE(validate_branch_csv("rho,alpha\r\n").empty());
    EXPECT_FALSE(validate_branch_csv(std::string(kBranchHeader) + "\r\n1,2,3\r\n").empty());
    EXPECT_FALSE(validate_branch_csv(std::string(kBranchHeader) + "\r\n1,2,3,4,5,6,7,8,9,maybe\r\n").empty());
    EXPECT_TRUE(validate_branch_csv(std::string(kBranchHeader) + "\r\n0.5,,,,,,,,,failed\r\n").empty());

    EXPECT_FALSE(validate_verify_document(nlohmann::json{{"checks", 1}}).empty());
}

TEST(FormatDouble, RoundTrips) {
    for (double x : {0.1, 1e-300, 1.0 / 3.0, 12345.678901234567, -2.5e-17}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

}  // namespace
}  // namespace wavebif::cli

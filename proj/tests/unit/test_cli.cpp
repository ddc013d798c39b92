/*
   Copyright 2026 The wwr-cva Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using namespace wwr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("wwrcva_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string config_error(const std::string& text) {
    try {
        cli::parse_config(text, "t.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const std::string hw_fwd = "exposure.kind = forward\ncredit.hazard = 0.05\nmodel = hw\nmodel.hw.sigma = 0.04\n";

}  // namespace

TEST_CASE("config parsing", "[cli]") {
    const auto c = cli::parse_config(
        "# comment\nexposure.kind = irs\nexposure.gamma = 0.004  # trailing\ncredit.hazard = 0.01, 0.03\n"
        "credit.knots = 2\nmodel = cm\nmodel.cm.sigma = 0.5\nmodel.cm.rho = -0.3\nmodel.cm.sign_convention = raw\n"
        "grid.points = 20\nmc.paths = 64\nmc.antithetic = true\noutput.layout = wide\nsweep.rho = 0.1,0.2\n");
    CHECK(c.exposure.kind == ExposureKind::irs);
    CHECK(c.exposure.gamma == 0.004);
    CHECK(c.curve.hazard(1.0) == 0.01);
    CHECK(c.curve.hazard(3.0) == 0.03);
    const auto& p = std::get<cm::CmParams>(c.model);
    CHECK(p.sigma == 0.5);
    CHECK(p.rho == -0.3);
    CHECK(p.convention == cm::SignConvention::raw);
    CHECK(c.grid_points == 20);
    CHECK(c.mc.n_paths == 64);
    CHECK(c.mc.antithetic);
    CHECK(c.layout == cli::Layout::wide);
    CHECK(c.sweep_rho == std::vector<double>{0.1, 0.2});
    CHECK(c.sweep_rho_given);

    CHECK_THROWS_AS(cli::parse_config(""), ConfigError);
    const auto d = cli::parse_config("model = gc\n");
    CHECK(d.exposure.kind == ExposureKind::forward);
    CHECK(d.exposure.vartheta == 0.022);
    CHECK(std::holds_alternative<gc::GcParams>(d.model));
}

TEST_CASE("config diagnostics name the line and key", "[cli]") {
    CHECK_THAT(config_error("model = hw\nnot a pair\n"), ContainsSubstring("t.cfg:2"));
    CHECK_THAT(config_error("model = hw\nmodel.hw.sigma = abc\n"),
               ContainsSubstring("t.cfg:2") && ContainsSubstring("model.hw.sigma"));
    CHECK_THAT(config_error("model = hw\nmodel.hw.sigmaa = 0.1\n"), ContainsSubstring("model.hw.sigmaa"));
    CHECK_THAT(config_error("mc.paths = 10\nmc.paths = 20\n"), ContainsSubstring("t.cfg:2"));
    CHECK_THAT(config_error("model = hw\nmodel.hw.sigma = 0.1\nmodel.cm.sigma = 0.2\n"), ContainsSubstring("t.cfg:3"));
    CHECK_THAT(config_error("model = hw\nmodel.hw.rho = 1.5\n"), ContainsSubstring("model.hw.rho"));
    CHECK_THAT(config_error("model = vasicek\n"), ContainsSubstring("model"));
    CHECK_THAT(config_error("exposure.kind = swaption\n"), ContainsSubstring("exposure.kind"));
    CHECK_THAT(config_error("model = hw\nmodel.hw.corr_mode = fast\n"), ContainsSubstring("model.hw.corr_mode"));
    CHECK_THAT(config_error("model = gc\noutput.layout = tall\n"), ContainsSubstring("output.layout"));
}

TEST_CASE("csv formatting round trips", "[cli]") {
    for (double x : {0.0, -1.5, 1e-300, 0.1 + 0.2, 123456.789, -3.0e-7}) {
        CHECK(csv::parse_double(csv::format(x, 17)) == x);
    }
    CHECK(csv::parse_double(csv::format(0.1234567890123, 12)) == Approx(0.1234567890123).epsilon(1e-11));
    CHECK_THROWS_AS(csv::parse_double("1.0x"), Error);
    const auto parts = csv::split("a,b,,c");
    REQUIRE(parts.size() == 4);
    CHECK(parts[2].empty());
}

TEST_CASE("sweep usage errors", "[cli]") {
    auto c = cli::parse_config("model = hw\nsweep.rho =\n");
    c.out_dir = scratch("empty").string();
    std::ostringstream log;
    CHECK_THROWS_AS(cli::cmd_sweep(c, log), cli::UsageError);
    c = cli::parse_config("model = hw\nsweep.rho = 0.1\nsweep.sigma = 0.02\n");
    CHECK_THROWS_AS(cli::cmd_sweep(c, log), cli::UsageError);
    c = cli::parse_config("model = hw\n");
    CHECK_THROWS_AS(cli::cmd_sweep(c, log), cli::UsageError);
    c = cli::parse_config("model = gc\nsweep.sigma = 0.02\n");
    CHECK_THROWS_AS(cli::cmd_sweep(c, log), cli::UsageError);
    c = cli::parse_config("model = gaussian\n");
    CHECK_THROWS_AS(cli::cmd_cva(c, log), cli::UsageError);
}

TEST_CASE("commands write deterministic files", "[cli]") {
    auto c = cli::parse_config(hw_fwd + "sweep.rho = -0.4,0.4\ngrid.points = 10\n");
    std::ostringstream log;
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    c.out_dir = a.string();
    REQUIRE(cli::cmd_epe(c, log) == cli::kExitOk);
    REQUIRE(cli::cmd_sweep(c, log) == cli::kExitOk);
    REQUIRE(cli::cmd_cva(c, log) == cli::kExitOk);
    c.out_dir = b.string();
    cli::cmd_epe(c, log);
    cli::cmd_sweep(c, log);
    cli::cmd_cva(c, log);
    for (const char* f : {"epe_hw_rho_-0.4.csv", "epe_hw_rho_0.4.csv", "sweep_hw_rho.csv", "cva_hw.csv",
                          "cva_hw_samples.csv"}) {
        INFO(f);
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const std::string epe = slurp(a / "epe_hw_rho_0.4.csv");
    CHECK(epe.rfind("t,f_t\n", 0) == 0);
    const std::string sweep = slurp(a / "sweep_hw_rho.csv");
    CHECK(sweep.rfind("rho,cva\n", 0) == 0);

    // the sweep reproduces the library
    std::istringstream rows(sweep);
    std::string line;
    std::getline(rows, line);
    std::getline(rows, line);
    const auto cells = csv::split(line);
    auto p = std::get<hw::HwParams>(c.model);
    p.rho = -0.4;
    CHECK(csv::parse_double(cells[1]) == Approx(hw::hw_cva(p, c.exposure, c.curve).cva).epsilon(1e-10));

    c.layout = cli::Layout::wide;
    cli::cmd_epe(c, log);
    CHECK(slurp(b / "epe_hw.csv").rfind("t,rho=-0.4,rho=0.4\n", 0) == 0);
}

TEST_CASE("monte carlo commands are seeded", "[cli]") {
    auto c = cli::parse_config(
        "exposure.kind = irs\ncredit.hazard = 0.05\nmodel = ssrd\nmodel.ssrd.r0 = 0.05\nmodel.ssrd.theta = 0.12\n"
        "model.ssrd.sigma = 0.2\nmc.paths = 200\nmc.dt = 0.05\nmc.seed = 3\ngrid.points = 5\npaths.count = 4\n"
        "paths.steps = 20\n");
    std::ostringstream log;
    const auto a = scratch("mc_a");
    const auto b = scratch("mc_b");
    c.out_dir = a.string();
    cli::cmd_cva(c, log);
    cli::cmd_epe(c, log);
    cli::cmd_paths(c, log);
    c.out_dir = b.string();
    c.mc.threads = 3;
    cli::cmd_cva(c, log);
    cli::cmd_epe(c, log);
    cli::cmd_paths(c, log);
    for (const char* f : {"cva_ssrd.csv", "epe_ssrd_rho_0.csv", "paths_ssrd.csv", "paths_ssrd_summary.csv"}) {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(slurp(a / "cva_ssrd.csv").rfind("rho,cva,cva_independent,stderr\n", 0) == 0);
    CHECK(slurp(a / "epe_ssrd_rho_0.csv").rfind("t,f_t,stderr\n", 0) == 0);
    CHECK(slurp(a / "paths_ssrd.csv").rfind("t,path_id,S,zeta,lambda,V\n", 0) == 0);
    c.mc.seed = 4;
    c.out_dir = scratch("mc_c").string();
    cli::cmd_cva(c, log);
    CHECK(slurp(a / "cva_ssrd.csv") != slurp(fs::path(c.out_dir) / "cva_ssrd.csv"));
}

TEST_CASE("validation passes and detects an injected fault", "[cli]") {
    auto c = cli::parse_config(hw_fwd + "mc.paths = 4000\nmc.seed = 5\n");
    c.out_dir = scratch("validate").string();
    std::ostringstream log;
    CHECK(cli::cmd_validate(c, log) == cli::kExitOk);
    INFO(log.str());
    const auto report = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "validate.json"));
    CHECK(report["passed"].get<bool>());
    CHECK(report["checks"].size() > 10);

    c.fault_phi_bump = 0.01;
    std::ostringstream bad;
    CHECK(cli::cmd_validate(c, bad) == cli::kExitValidation);
    CHECK_THAT(bad.str(), ContainsSubstring("FAIL calibration.hw_analytic"));
}

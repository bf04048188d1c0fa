#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "ramanforge/cli_reports.hpp"
#include "ramanforge/csv.hpp"
#include "ramanforge/errors.hpp"
#include "ramanforge/fitting.hpp"

namespace fs = std::filesystem;
namespace rc = ramanforge::cli;
namespace csv = ramanforge::csv;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("ramanforge_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

rc::RunOutput run_in(const fs::path& dir, const json& config) {
    rc::RunOverrides o;
    o.out_dir = dir;
    return rc::run_experiment(config, o);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RAMANFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error_message(const json& config) {
    try {
        rc::RunOverrides o;
        o.out_dir = fs::path("/nonexistent-never-written");
        rc::run_experiment(config, o);
    } catch (const ramanforge::ConfigurationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Csv, NumberFormatAndLineEndings) {
    EXPECT_EQ(csv::format_number(0.1), "0.1");
    EXPECT_EQ(csv::format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(csv::format_number(1e-20), "1e-20");
    csv::Table t({"a", "b"});
    t.add_row({1.5, std::string("x")});
    t.add_row({2L, 3.0});
    EXPECT_EQ(t.to_string(), "a,b\n1.5,x\n2,3\n");
    EXPECT_THROW(t.add_row({1.0}), ramanforge::ConfigurationError);
}

TEST(Csv, WriteAndReadBack) {
    TempDir dir;
    csv::Table t({"x", "y"});
    t.add_row({0.25, 7.0});
    csv::write_table(dir.path() / "sub" / "t.csv", t);
    const auto back = csv::read_table(dir.path() / "sub" / "t.csv");
    EXPECT_EQ(back.header, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(back.numeric_column("y"), std::vector<double>{7.0});
    EXPECT_THROW(back.numeric_column("z"), ramanforge::ConfigurationError);
    EXPECT_THROW(csv::read_table(dir.path() / "missing.csv"), ramanforge::IoError);
}

TEST(TableS1, RowsMatchPublishedOptima) {
    const auto rows = rc::table_s1_rows();
    ASSERT_EQ(rows.size(), 6u);
    const std::vector<std::pair<double, double>> expect{
        {3.574, 0.144}, {1.664, 0.174}, {1.841, 0.169}, {2.718, 0.097}, {1.336, 0.339}};
    for (std::size_t i = 0; i < expect.size(); ++i) {
        EXPECT_NEAR(rows[i].beta_star, expect[i].first, 1e-3) << rows[i].method;
        EXPECT_NEAR(rows[i].report.coherence, expect[i].second, 1e-3) << rows[i].method;
    }
    EXPECT_EQ(rows[4].method, "dispersive");
    EXPECT_NEAR(rows[4].report.transmission, 1.0, 0.0);
    EXPECT_NEAR(rows[4].report.am_eff, 0.582, 1e-3);
    EXPECT_EQ(rows[5].method, "dispersive_joint");
    EXPECT_NEAR(rows[5].report.am_eff, 0.5819, 1e-3);
}

TEST(TableS1, WritesCsvFiles) {
    TempDir dir;
    const auto paths = rc::cmd_table_s1(dir.path());
    ASSERT_EQ(paths.size(), 3u);
    const auto table = csv::read_table(paths[0]);
    EXPECT_EQ(table.header, (std::vector<std::string>{"method", "beta_star", "T", "eta", "C"}));
    EXPECT_EQ(table.rows.size(), 6u);
    EXPECT_EQ(table.rows[0][0], "filter_carrier");
    const auto sweep = csv::read_table(paths[1]);
    EXPECT_EQ(sweep.header, (std::vector<std::string>{"method", "beta", "alpha", "T", "eta", "C"}));
    EXPECT_EQ(slurp(paths[0]).find('\r'), std::string::npos);
}

TEST(TableS1, BetaMaxCapsTheOptimum) {
    rc::TableS1Options capped;
    capped.beta_max = 1.0;
    const auto a = rc::table_s1_rows(capped);
    const auto b = rc::table_s1_rows();
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LE(a[i].beta_star, 1.0 + 1e-12) << a[i].method;
        EXPECT_LE(a[i].report.coherence, b[i].report.coherence + 1e-12) << a[i].method;
    }
    capped.beta_max = 7.0;
    EXPECT_THROW(rc::table_s1_rows(capped), ramanforge::ConfigurationError);
}

TEST(Fig2b, PeakFollowsBesselMaximum) {
    const auto betas = rc::fig2b_grid(20000);
    for (auto [alpha, peak, tol] : {std::tuple{kPi / 2, 0.9206, 1e-3}, std::tuple{0.73, 1.38, 0.01}}) {
        const auto eff = rc::fig2b_curve(betas, alpha);
        const auto it = std::max_element(eff.begin(), eff.end());
        const double beta_peak = betas[static_cast<std::size_t>(it - eff.begin())];
        EXPECT_NEAR(beta_peak, peak, tol) << alpha;
        EXPECT_NEAR(*it, 0.5819, 1e-3);
    }
}

TEST(Fig2b, LinearAtSmallBeta) {
    const std::vector<double> betas{1e-4, 2e-4};
    const auto eff = rc::fig2b_curve(betas, 0.73);
    EXPECT_NEAR(eff[1] / eff[0], 2.0, 1e-6);
    EXPECT_NEAR(eff[0], 1e-4 * std::sin(0.73), 1e-9);
    EXPECT_THROW(rc::fig2b_curve(std::vector<double>{4.0}, 0.73), ramanforge::ConfigurationError);
    EXPECT_THROW(rc::fig2b_grid(1), ramanforge::ConfigurationError);
}

TEST(Fig1e, CsvColumns) {
    TempDir dir;
    const auto paths = rc::cmd_fig1e(dir.path());
    const auto t = csv::read_table(paths.at(0));
    EXPECT_EQ(t.header, (std::vector<std::string>{"label", "gdd_fs2", "alpha_rad", "required_beta_rad", "reachable"}));
    bool found = false;
    for (const auto& row : t.rows) {
        if (row[0] == "cbg_double_bounce") {
            found = true;
            EXPECT_EQ(row[4], "true");
        }
    }
    EXPECT_TRUE(found);
}

TEST(Run, EmptyConfigRunsDefaults) {
    TempDir dir;
    const auto out = run_in(dir.path(), json::object());
    EXPECT_EQ(out.summary["schema_version"], rc::kSchemaVersion);
    EXPECT_EQ(out.summary["simulation"], "cpmg");
    EXPECT_EQ(out.summary["fit_model"], "exponential");
    EXPECT_EQ(out.summary["shots"], 2000);
    const double tau = out.summary["params"]["tau"].get<double>();
    EXPECT_NEAR(tau, 7852.0, 0.02 * 7852.0);
    for (const auto& f : out.files) EXPECT_TRUE(fs::exists(f)) << f;
}

TEST(Run, CpmgCsvRoundTripsToSummary) {
    TempDir dir;
    const json cfg = {{"simulation", "cpmg"}, {"label", "rt"}, {"sequence", {{"points", 25}}}};
    const auto out = run_in(dir.path(), cfg);
    const auto t = csv::read_table(dir.path() / "rt.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"scan_value", "signal", "stderr"}));
    const auto fit = ramanforge::fitting::fit_decay(t.numeric_column("scan_value"), t.numeric_column("signal"),
                                                    ramanforge::fitting::DecayModel::Exponential);
    for (const auto& name : ramanforge::fitting::parameter_names(fit.model)) {
        const double v = out.summary["params"][name].get<double>();
        const double u = out.summary["uncertainties"][name].get<double>();
        EXPECT_NEAR(fit.param(name), v, 1e-3 * u + 1e-9 * std::abs(v)) << name;
    }
}

TEST(Run, RamseyCsvRoundTripsToSummary) {
    TempDir dir;
    const json cfg = {{"simulation", "ramsey"}, {"shots", 500}};
    const auto out = run_in(dir.path(), cfg);
    const auto t = csv::read_table(dir.path() / "ramsey.csv");
    const auto fit = ramanforge::fitting::fit_decay(t.numeric_column("scan_value"), t.numeric_column("signal"),
                                                    ramanforge::fitting::DecayModel::Thermal);
    EXPECT_NEAR(fit.one_over_e_time(), out.summary["t2_star_s"].get<double>(),
                1e-3 * out.summary["t2_star_uncertainty_s"].get<double>() + 1e-12);
    EXPECT_NEAR(out.summary["t2_star_s"].get<double>(), 1.17e-3, 0.05 * 1.17e-3);
}

TEST(Run, IdenticalSeedGivesByteIdenticalSummary) {
    TempDir a, b;
    const json cfg = {{"simulation", "ramsey"},
                      {"seed", 99},
                      {"shots", 300},
                      {"noise", {{"scatter_prob", 0.001}, {"detuning", {{"kind", "gaussian"}, {"sigma_hz", 300.0}}}}}};
    const auto ra = run_in(a.path(), cfg);
    const auto rb = run_in(b.path(), cfg);
    EXPECT_EQ(slurp(a.path() / "ramsey_summary.json"), slurp(b.path() / "ramsey_summary.json"));
    EXPECT_EQ(slurp(a.path() / "ramsey.csv"), slurp(b.path() / "ramsey.csv"));
    rc::RunOverrides o;
    o.out_dir = b.path();
    o.seed = 100;
    const auto rc2 = rc::run_experiment(cfg, o);
    EXPECT_NE(rc::summary_text(ra.summary), rc::summary_text(rc2.summary));
    EXPECT_EQ(rc2.summary["seed"], 100);
}

TEST(Run, LightshiftCircularZ) {
    TempDir dir;
    const json cfg = {{"simulation", "lightshift"}, {"lightshift", {{"polarization", "sigma_plus_z"}}}};
    const auto out = run_in(dir.path(), cfg);
    EXPECT_EQ(out.summary["class"], "pi");
    const auto d = out.summary["direction"];
    EXPECT_DOUBLE_EQ(d[0].get<double>(), 0.0);
    EXPECT_DOUBLE_EQ(d[1].get<double>(), 0.0);
    EXPECT_DOUBLE_EQ(d[2].get<double>(), 1.0);
    const json lin = {{"simulation", "lightshift"}, {"lightshift", {{"polarization", {1.0, 0.0, 0.0}}}}};
    EXPECT_EQ(run_in(dir.path(), lin).summary["class"], "none");
}

TEST(Run, HzKeysAreAngular) {
    TempDir dir;
    const json hz = {{"simulation", "rabi"}, {"label", "hz"}, {"dynamics", {{"rabi_frequency_hz", 1e6}}}};
    const json rad = {{"simulation", "rabi"}, {"label", "rad"}, {"dynamics", {{"rabi_frequency_rad_s", 2.0 * kPi * 1e6}}}};
    const auto a = run_in(dir.path(), hz);
    const auto b = run_in(dir.path(), rad);
    EXPECT_NEAR(a.summary["params"]["frequency"].get<double>(), 1e6, 1.0);
    EXPECT_NEAR(a.summary["pi_time_s"].get<double>(), b.summary["pi_time_s"].get<double>(), 1e-20);
}

TEST(Run, OtherSimulationsProduceOutputs) {
    TempDir dir;
    const auto xy = run_in(dir.path(), {{"simulation", "xy16"}, {"shots", 10}});
    EXPECT_GE(xy.summary["final_xy16_signal"].get<double>(), 0.99);
    EXPECT_GT(xy.summary["final_xy16_signal"].get<double>(), xy.summary["final_plain_signal"].get<double>());
    const auto ens = run_in(dir.path(), {{"simulation", "ensemble"}});
    EXPECT_EQ(ens.summary["atoms"], 120);
    const auto head = csv::read_table(dir.path() / "ensemble.csv").header;
    EXPECT_EQ(head.front(), "t");
    EXPECT_EQ(head[1], "signal_row8");
    EXPECT_EQ(head.back(), "signal_mean");
    const auto idle = run_in(dir.path(), {{"simulation", "idle_decay"}, {"noise", {{"idle_t1_s", 0.3}}}});
    EXPECT_NEAR(idle.summary["t1_s"].get<double>(), 0.3, 1e-6);
    const auto fig = run_in(dir.path(), {{"simulation", "fig1e"}});
    EXPECT_EQ(fig.summary["rows"].size(), 4u);
    const auto tls = run_in(dir.path(), {{"simulation", "tls"}, {"dynamics", {{"samples", 801}}}});
    EXPECT_NEAR(tls.summary["relative_error"].get<double>(), 0.0, 0.01);
    EXPECT_EQ(csv::read_table(dir.path() / "tls.csv").header,
              (std::vector<std::string>{"t", "p0", "p1", "p2", "re_coh", "im_coh"}));
}

TEST(Run, ConfigErrorsNameTheField) {
    EXPECT_NE(config_error_message({{"noise", {{"bogus", 1}}}}).find("config.noise.bogus"), std::string::npos);
    EXPECT_NE(config_error_message({{"extra", 1}}).find("config.extra"), std::string::npos);
    EXPECT_NE(config_error_message({{"simulation", "warp"}}).find("config.simulation"), std::string::npos);
    EXPECT_NE(config_error_message({{"shots", "many"}}).find("config.shots"), std::string::npos);
    EXPECT_NE(config_error_message({{"noise", {{"detuning", {{"kind", "delta"}, {"value_hz", 1}, {"value_rad_s", 1}}}}}})
                  .find("config.noise.detuning.value"),
              std::string::npos);
    EXPECT_NE(config_error_message({{"spectrum", {{"beta_rad", 9.0}}}}).find("config.spectrum.beta_rad"),
              std::string::npos);
    EXPECT_NE(config_error_message({{"method", {{"name", "prism"}}}}).find("config.method.name"), std::string::npos);
}

TEST(ExitCodes, MapErrorKinds) {
    EXPECT_EQ(rc::exit_code_for(ramanforge::ConfigurationError("x")), rc::kExitConfig);
    EXPECT_EQ(rc::exit_code_for(ramanforge::IoError("x")), rc::kExitIo);
    EXPECT_EQ(rc::exit_code_for(ramanforge::SingularityError("x")), rc::kExitNumeric);
}

TEST(Cli, ProcessExitCodes) {
    TempDir dir;
    const auto out = dir.path().string();
    EXPECT_EQ(run_cli("fig1e --out-dir " + out), 0);
    EXPECT_TRUE(fs::exists(dir.path() / "fig1e.csv"));
    EXPECT_EQ(run_cli("fig2b --out-dir " + out + " --alpha 0.73"), 0);
    EXPECT_EQ(run_cli("run " + out + "/missing.json"), 2);
    {
        std::ofstream(dir.path() / "bad.json") << R"({"noise": {"bogus": 1}})";
        std::ofstream(dir.path() / "broken.json") << "{";
        std::ofstream(dir.path() / "singular.json")
            << R"({"simulation": "lightshift", "lightshift": {"laser_frequency_hz": 1e14, "d1_frequency_hz": 1e14}})";
        std::ofstream(dir.path() / "ok.json") << R"({"simulation": "lightshift"})";
    }
    EXPECT_EQ(run_cli("run " + out + "/bad.json --out-dir " + out), 1);
    EXPECT_EQ(run_cli("run " + out + "/broken.json --out-dir " + out), 1);
    EXPECT_EQ(run_cli("run " + out + "/singular.json --out-dir " + out), 3);
    EXPECT_EQ(run_cli("run " + out + "/ok.json --out-dir " + out), 0);
    EXPECT_TRUE(fs::exists(dir.path() / "lightshift_summary.json"));
    EXPECT_TRUE(fs::exists(dir.path() / "lightshift_meta.json"));
    EXPECT_EQ(run_cli("--out-dir " + out + " table-s1 --beta-max 1.0"), 0);
    EXPECT_EQ(run_cli("warp"), 1);
    EXPECT_EQ(run_cli("run " + out + "/ok.json --out-dir /proc/forbidden"), 2);
}

TEST(Cli, EnvironmentSetsDefaultOutputRoot) {
    TempDir dir;
    ::setenv("RAMANFORGE_OUT_DIR", dir.path().c_str(), 1);
    EXPECT_EQ(rc::default_output_root(), dir.path());
    EXPECT_EQ(run_cli("fig1e"), 0);
    ::unsetenv("RAMANFORGE_OUT_DIR");
    EXPECT_TRUE(fs::exists(dir.path() / "fig1e.csv"));
    EXPECT_EQ(rc::default_output_root(), fs::path("."));
}

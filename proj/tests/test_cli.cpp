#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace
{
    int run_cli(const std::string& args)
    {
        const std::string cmd = std::string(WH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    }

    fs::path fresh_dir(const std::string& name)
    {
        fs::path d = fs::temp_directory_path() / ("wh_cli_" + name);
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }

    void write_file(const fs::path& p, const std::string& text)
    {
        std::ofstream out(p);
        out << text;
    }

    std::string slurp(const fs::path& p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string first_line(const fs::path& p)
    {
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);
        return line;
    }

    int count_lines(const fs::path& p)
    {
        std::ifstream in(p);
        int n = 0;
        std::string line;
        while (std::getline(in, line))
            ++n;
        return n;
    }
} // namespace

TEST(Cli, HelpExitsCleanlyEverywhere)
{
    EXPECT_EQ(run_cli("--help"), 0);
    for (const char* sub : {"solve", "sweep-damped", "impedance-norm", "convergence-study",
                            "filter-check", "modfreq"})
        EXPECT_EQ(run_cli(std::string(sub) + " --help"), 0) << sub;
}

TEST(Cli, UnknownSubcommandIsAUsageError)
{
    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli(""), 1); // a subcommand is required
}

TEST(Cli, MissingConfigFileExitsOne)
{
    auto d = fresh_dir("missing");
    EXPECT_EQ(run_cli("solve --config " + (d / "nope.json").string() + " --out " + d.string()), 1);
}

TEST(Cli, MalformedConfigExitsOne)
{
    auto d = fresh_dir("malformed");
    write_file(d / "bad.json", "{ this is not json");
    EXPECT_EQ(run_cli("solve --config " + (d / "bad.json").string() + " --out " + d.string()), 1);
}

TEST(Cli, SolveWritesSolutionAndLog)
{
    auto d = fresh_dir("solve");
    write_file(d / "c.json", R"({"omega": 4.5, "bc": "dirichlet", "mode": "simplified",
                                 "nodes": 40, "m": 1, "cfl": 0.5, "tol": 1e-12})");
    ASSERT_EQ(run_cli("solve --config " + (d / "c.json").string() + " --out " + d.string()), 0);
    EXPECT_EQ(first_line(d / "solution.csv"), "x,re_u,im_u");
    EXPECT_EQ(first_line(d / "log.csv"), "iter,residual");
    EXPECT_EQ(count_lines(d / "solution.csv"), 39); // header + 38 interior nodes
    EXPECT_GT(count_lines(d / "log.csv"), 2);
}

TEST(Cli, SolveOutputsAreDeterministic)
{
    auto d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    const std::string cfg = R"({"omega": 4.5, "bc": "dirichlet", "nodes": 30,
                                "cfl": 0.5, "tol": 1e-10, "seed": 0})";
    write_file(d1 / "c.json", cfg);
    write_file(d2 / "c.json", cfg);
    ASSERT_EQ(run_cli("solve --config " + (d1 / "c.json").string() + " --out " + d1.string() +
                      " --seed 0"),
              0);
    ASSERT_EQ(run_cli("solve --config " + (d2 / "c.json").string() + " --out " + d2.string() +
                      " --seed 0"),
              0);
    EXPECT_EQ(slurp(d1 / "solution.csv"), slurp(d2 / "solution.csv"));
    EXPECT_EQ(slurp(d1 / "log.csv"), slurp(d2 / "log.csv"));
}

TEST(Cli, SolveReportsNonConvergenceWithExitTwo)
{
    auto d = fresh_dir("noconv");
    write_file(d / "c.json", R"({"omega": 4.5, "bc": "dirichlet", "nodes": 40,
                                 "cfl": 0.5, "tol": 1e-13, "max_iter": 3})");
    EXPECT_EQ(run_cli("solve --config " + (d / "c.json").string() + " --out " + d.string()), 2);
}

TEST(Cli, SolveSupportsGmresAndImpedance)
{
    auto d = fresh_dir("gmres");
    write_file(d / "c.json", R"({"omega": 9.0, "bc": "impedance", "solver": "gmres",
                                 "domain": {"a": 0.0, "b": 2.0}, "ppw": 15, "cfl": 0.3,
                                 "use_extension": false, "tol": 1e-10})");
    ASSERT_EQ(run_cli("solve --config " + (d / "c.json").string() + " --out " + d.string()), 0);
    EXPECT_GT(count_lines(d / "solution.csv"), 10);
}

TEST(Cli, FilterCheckPassesOnTheDefaultGrid)
{
    auto d = fresh_dir("filter");
    ASSERT_EQ(run_cli("filter-check --out " + d.string()), 0);
    EXPECT_EQ(first_line(d / "filter_check.csv"), "r,beta_bar,gamma_bar,mu_abs,bound_active,slack");
    EXPECT_EQ(count_lines(d / "filter_check.csv"), 20002); // header + 20001 ratios
    const std::string constants = slurp(d / "filter_constants.csv");
    EXPECT_NE(constants.find("b1_pair,1.3949340668482264"), std::string::npos);
    EXPECT_NE(constants.find("b1_scalar,6.3297362673929056"), std::string::npos);
}

TEST(Cli, ModfreqEmitsTheExpectedColumns)
{
    auto d = fresh_dir("modfreq");
    write_file(d / "c.json", R"({"omega_list": [1.0, 10.0], "dt_omega_list": [0.05, 0.1, 0.5],
                                 "m_list": [1, 2, 3]})");
    ASSERT_EQ(run_cli("modfreq --config " + (d / "c.json").string() + " --out " + d.string()), 0);
    EXPECT_EQ(first_line(d / "modfreq.csv"), "omega,dt,m,omega_tilde,omega_bar,err,bound");
    EXPECT_EQ(count_lines(d / "modfreq.csv"), 1 + 2 * 3 * 3);
}

TEST(Cli, SweepDampedRunsRowsInDeterministicOrder)
{
    auto d = fresh_dir("sweep");
    write_file(d / "c.json", R"({"omega_list": [10.0, 20.0], "eta": {"rule": "scaled", "factor": 0.5},
                                 "ppw": 10, "bc_list": ["dirichlet", "neumann"],
                                 "domain": {"a": -6.0, "b": 6.0}})");
    ASSERT_EQ(run_cli("sweep-damped --config " + (d / "c.json").string() + " --out " + d.string() +
                      " --workers 4"),
              0);
    std::ifstream in(d / "sweep_damped.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "omega,eta,bc,iterations,residual,status");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        rows.push_back(line);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].rfind("10,5,dirichlet", 0), 0u);
    EXPECT_EQ(rows[1].rfind("20,10,dirichlet", 0), 0u);
    EXPECT_EQ(rows[2].rfind("10,5,neumann", 0), 0u);
    EXPECT_EQ(rows[3].rfind("20,10,neumann", 0), 0u);
}

TEST(Cli, SweepDampedRejectsAnEmptyFrequencyList)
{
    auto d = fresh_dir("sweepempty");
    write_file(d / "c.json", R"({"omega_list": [], "eta": {"rule": "scaled", "factor": 0.5}})");
    EXPECT_EQ(run_cli("sweep-damped --config " + (d / "c.json").string() + " --out " + d.string()),
              1);
}

TEST(Cli, ImpedanceNormEmitsContractiveRows)
{
    auto d = fresh_dir("impnorm");
    write_file(d / "c.json", R"({"omega_list": [31.41592653589793, 62.83185307179586],
                                 "ppw": 20, "cfl": 0.2})");
    ASSERT_EQ(run_cli("impedance-norm --config " + (d / "c.json").string() + " --out " + d.string() +
                      " --workers 2"),
              0);
    std::ifstream in(d / "impedance_norm.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "omega,norm_estimate,one_minus_norm");
    int rows = 0;
    while (std::getline(in, line))
    {
        ++rows;
        std::stringstream ss(line);
        std::string w, nrm, rem;
        std::getline(ss, w, ',');
        std::getline(ss, nrm, ',');
        std::getline(ss, rem, ',');
        EXPECT_LT(std::stod(nrm), 1.0);
        EXPECT_GT(std::stod(rem), 0.0);
    }
    EXPECT_EQ(rows, 2);
}

TEST(Cli, ConvergenceStudyWritesSlopes)
{
    auto d = fresh_dir("convstudy");
    write_file(d / "c.json", R"({"omega": 1.0, "nodes": 21, "dt0": 0.05, "halvings": 3})");
    ASSERT_EQ(run_cli("convergence-study --config " + (d / "c.json").string() + " --out " +
                      d.string() + " --workers 4"),
              0);
    EXPECT_EQ(first_line(d / "convergence_study.csv"), "m,dt,err_standard,err_corrected");
    EXPECT_EQ(first_line(d / "convergence_slopes.csv"), "m,slope_standard,max_err_corrected");
    EXPECT_EQ(count_lines(d / "convergence_study.csv"), 1 + 2 * 4);
    EXPECT_EQ(count_lines(d / "convergence_slopes.csv"), 3);
}

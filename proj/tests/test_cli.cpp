// Runs the qosc executable end to end and checks exit codes and outputs.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code;
    std::string out;
};

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / ("qosc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

CliRun qosc(const std::string& args, const std::string& env = "")
{
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter++) + ".txt");
    const std::string cmd = env + " " + QOSC_BINARY + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

} // namespace

TEST(Cli, RepWorkedExample)
{
    const CliRun r = qosc("rep --mode unimodular --epsilon 1.5707963 --l auto --k 1");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["dim"], 2);
    EXPECT_NEAR(j["A"]["data"][1][0].get<double>(), 1.0, 1e-7);
    EXPECT_NEAR(j["Abar"]["data"][2][0].get<double>(), 1.0, 1e-7);
}

TEST(Cli, RepParameterErrors)
{
    EXPECT_EQ(qosc("rep --mode unimodular --epsilon 0 --k 1").code, 2);
    EXPECT_EQ(qosc("rep --mode realline --epsilon 1 --l 0 --k 1").code, 2);
    EXPECT_EQ(qosc("rep --mode sideways --epsilon 1 --k 1").code, 2);
    EXPECT_EQ(qosc("rep --mode realline --epsilon 1 --k 1..3").code, 2);
    EXPECT_EQ(qosc("rep --mode realline --epsilon 1 --k 1 --tol -1").code, 2);
    EXPECT_EQ(qosc("").code, 2);
}

TEST(Cli, VerifyFullSuites)
{
    EXPECT_EQ(qosc("verify --mode unimodular --epsilon 0.6283185307179586 --l 0 --k 3").code, 0);
    EXPECT_EQ(qosc("verify --mode realline --epsilon 1 --l 1 --k 3").code, 0);
    EXPECT_EQ(qosc("verify --mode realline --epsilon 1 --k 3 --checks star:canonical7").code, 0);
}

TEST(Cli, VerifyRejectsTheSuMapOnItsSingularLoci)
{
    for (const char* eps : {"1.5707963267948966", "4.71238898038469", "-1.5707963"})
        EXPECT_EQ(qosc(std::string("verify --mode unimodular --k 2 --checks suq2 --epsilon ") + eps).code, 2) << eps;
    EXPECT_EQ(qosc("verify --mode unimodular --k 2 --checks suq2 --epsilon 3.14159265358979").code, 2);
    EXPECT_EQ(qosc("verify --mode unimodular --k 2 --checks suq2 --epsilon 1.58").code, 0);
}

TEST(Cli, ToleranceEnvironmentVariable)
{
    const std::string args = "verify --mode realline --epsilon 1 --k 2 --checks algebra";
    EXPECT_EQ(qosc(args).code, 0);
    EXPECT_EQ(qosc(args, "QOSC_TOL=1e-30").code, 1);
    EXPECT_EQ(qosc(args + " --tol 1e-8", "QOSC_TOL=1e-30").code, 0) << "the flag wins over the environment";
    EXPECT_EQ(qosc(args, "QOSC_TOL=nonsense").code, 2);
}

TEST(Cli, OutFileAndDeterminism)
{
    const fs::path a = scratch_dir() / "a.json";
    const fs::path b = scratch_dir() / "b.json";
    ASSERT_EQ(qosc("verify --mode realline --epsilon 0.7 --k 3 --out " + a.string()).code, 0);
    ASSERT_EQ(qosc("verify --mode realline --epsilon 0.7 --k 3 --out " + b.string()).code, 0);
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, SweepCsv)
{
    const CliRun r = qosc("sweep --mode unimodular --epsilon-grid 0.1:0.5:0.1 --k 0..3 --format csv");
    EXPECT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 1 + 5 * 4);
    EXPECT_EQ(qosc("sweep --mode unimodular --epsilon-grid 3.14159265358979:3.2:1 --k 0..1").code, 2);
    EXPECT_EQ(qosc("sweep --mode unimodular --epsilon-grid 1:0:0.1 --k 0").code, 2);
}

TEST(Cli, Symbolic)
{
    EXPECT_EQ(qosc("symbolic --n-max 8 --epsilon 0.9 --mode unimodular").code, 0);
    EXPECT_EQ(qosc("symbolic --n-max 1 --epsilon 0.9 --mode unimodular").code, 0);
    EXPECT_EQ(qosc("symbolic --n-max 8 --epsilon 0.9 --mode unimodular --debug-tamper-delta 1e-3").code, 1);
    EXPECT_EQ(qosc("symbolic --n-max 17 --epsilon 0.9 --mode unimodular").code, 2);
}

TEST(Cli, InvolutionFile)
{
    const fs::path f = scratch_dir() / "inv.json";
    {
        std::ofstream out(f);
        out << R"({"alpha": [0, -1], "beta": [0, -1], "eta": [0, -9.42477796076938], "flavor": "standard"})";
    }
    EXPECT_EQ(qosc("verify --mode realline --epsilon 1 --k 2 --checks algebra --involution " + f.string()).code, 0);
    {
        std::ofstream out(f);
        out << R"({"alpha": [2, 0], "beta": [1, 0], "eta": [0, 0], "flavor": "standard"})";
    }
    EXPECT_EQ(qosc("verify --mode realline --epsilon 1 --k 2 --checks algebra --involution " + f.string()).code, 2);
}

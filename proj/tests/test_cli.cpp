#include "golden.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

using namespace nullcount;
namespace nt = nullcount::testing;
namespace fs = std::filesystem;

namespace {

const std::string kData = NULLCOUNT_DATA_DIR;

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("nullcount_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override
    {
        fs::remove_all(dir_);
        unsetenv("NULLCOUNT_ENUM_CAP");
    }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    std::string put(const std::string &name, const std::string &text) const
    {
        write_file(path(name), text);
        return path(name);
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, SampleInstanceCounts)
{
    auto val = nt::run_cli({"count", "-d", kData + "/sample.idb", "--query-file", kData + "/sample.query",
                            "--problem", "val"});
    EXPECT_EQ(val.code, 0) << val.err;
    EXPECT_EQ(val.out, "4\n");
    auto comp = nt::run_cli({"count", "-d", kData + "/sample.idb", "-q", "S(x,x)", "--problem", "comp"});
    EXPECT_EQ(comp.code, 0) << comp.err;
    EXPECT_EQ(comp.out, "3\n");
}

TEST_F(Cli, CountMethods)
{
    const std::string db = kData + "/sample.idb";
    for (const char *method : {"brute", "exact", "auto"})
        EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "S(x,x)", "--problem", "val", "--method", method}).out, "4\n")
            << method;
    auto json = nt::run_cli({"count", "-d", db, "-q", "S(x,x)", "--problem", "comp", "--format", "json"});
    auto j = nlohmann::json::parse(json.out);
    EXPECT_EQ(j["count"], "3");
    EXPECT_EQ(j["method"], "brute");
    EXPECT_EQ(j["problem"], "comp");
    EXPECT_NE(json.err.find("note:"), std::string::npos);
    auto empty = put("empty.idb", "S(a,b)\n");
    EXPECT_EQ(nt::run_cli({"count", "-d", empty, "-q", "R(x)", "--problem", "val"}).out, "0\n");
}

TEST_F(Cli, AutoAgreesWithBrute)
{
    nt::Rng64 rng(8);
    for (int i = 0; i < 40; ++i) {
        auto q = nt::random_query(rng);
        nt::DbShape shape;
        shape.uniform = nt::coin(rng);
        shape.codd = nt::coin(rng);
        auto db = put("r.idb", format_database(nt::random_database(rng, q, shape)));
        for (const char *problem : {"val", "comp"}) {
            auto a = nt::run_cli({"count", "-d", db, "-q", to_string(q), "--problem", problem});
            auto b = nt::run_cli({"count", "-d", db, "-q", to_string(q), "--problem", problem, "--method", "brute"});
            EXPECT_EQ(a.code, 0) << a.err;
            EXPECT_EQ(a.out, b.out) << to_string(q) << "\n" << read_file(db);
        }
    }
}

TEST_F(Cli, ClassifyCells)
{
    auto one = nt::run_cli(
        {"classify", "-q", "R(x,x)", "--problem", "val", "--table", "naive", "--domain", "uniform", "--format", "json"});
    EXPECT_EQ(one.code, 0);
    auto j = nlohmann::json::parse(one.out);
    EXPECT_EQ(j["exact"], "#P-complete");
    EXPECT_EQ(j["approx"], "FPRAS");
    EXPECT_EQ(j["setting"]["table"], "naive");
    EXPECT_EQ(j["witnesses"], nlohmann::json::array({"R(x,x)"}));

    auto all = nt::run_cli({"classify", "-q", "R(x)&S(y)", "--problem", "val", "--format", "json"});
    auto arr = nlohmann::json::parse(all.out);
    ASSERT_EQ(arr.size(), 4U);
    for (const auto &cell : arr)
        EXPECT_EQ(cell["exact"], "FP");

    auto codd = nt::run_cli({"classify", "-q", "R(x)", "--problem", "comp", "--domain", "nonuniform", "--table", "codd"});
    EXPECT_EQ(codd.out, "comp codd nonuniform: #P-complete, no FPRAS unless NP=RP [R(x)]\n");
}

TEST_F(Cli, ClassifyGolden)
{
    for (const auto &[query, expected] : nt::classification_golden())
        EXPECT_EQ(nt::run_cli({"classify", "-q", query}).out, expected) << query;
}

TEST_F(Cli, ExitCodes)
{
    const std::string db = kData + "/sample.idb";
    EXPECT_EQ(nt::run_cli({}).code, 1);
    EXPECT_EQ(nt::run_cli({"count", "-q", "S(x,x)"}).code, 1);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "--problem", "val"}).code, 1);
    EXPECT_EQ(nt::run_cli({"count", "-d", path("missing.idb"), "-q", "S(x,x)", "--problem", "val"}).code, 1);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "S(x,x)", "--problem", "val", "--method", "estimate"}).code, 1);
    EXPECT_EQ(nt::run_cli({"classify", "-q", "R(x"}).code, 2);
    EXPECT_EQ(nt::run_cli({"classify", "-q", "R(x)&R(y)"}).code, 2);
    auto bad = put("bad.idb", "R(_a\n");
    EXPECT_EQ(nt::run_cli({"count", "-d", bad, "-q", "R(x)", "--problem", "val"}).code, 2);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "S(x)", "--problem", "val"}).code, 3);

    auto refused = nt::run_cli({"count", "-d", db, "-q", "S(x,x)", "--problem", "comp", "--method", "exact"});
    EXPECT_EQ(refused.code, 3);
    EXPECT_NE(refused.err.find("hard patterns"), std::string::npos);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "S(x,x)", "--problem", "val", "--domain", "uniform"}).code, 3);
    auto naive = put("naive.idb", "@null _a 1 2\nR(_a,_a)\n");
    EXPECT_EQ(nt::run_cli({"count", "-d", naive, "-q", "R(x,y)", "--problem", "val", "--table", "codd"}).code, 3);
    EXPECT_EQ(nt::run_cli({"estimate", "-d", db, "-q", "S(x,x)", "--epsilon", "2", "--delta", "0.1", "--seed", "1"}).code,
              3);
}

TEST_F(Cli, EnumerationCap)
{
    std::string text = "@domain uniform 0 1 2 3 4 5 6 7 8 9\nR(_a)\nR(_b)\nR(_c)\n";
    auto db = put("big.idb", text);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "R(x)", "--problem", "val", "--method", "brute"}).out, "1000\n");
    setenv("NULLCOUNT_ENUM_CAP", "999", 1);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "R(x)", "--problem", "val", "--method", "brute"}).code, 3);
    // The exact route does not enumerate.
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "R(x)", "--problem", "val"}).out, "1000\n");
    setenv("NULLCOUNT_ENUM_CAP", "lots", 1);
    EXPECT_EQ(nt::run_cli({"count", "-d", db, "-q", "R(x)", "--problem", "val", "--method", "brute"}).code, 1);
}

TEST_F(Cli, CheckCompletion)
{
    auto db = put("d.idb", "@null _a 1 2\nR(_a)\nS(b)\n");
    auto yes = put("yes.txt", "R(2)\nS(b)\n");
    auto outside = put("no.txt", "R(3)\nS(b)\n");
    EXPECT_EQ(nt::run_cli({"check-completion", "-d", db, "-c", yes}).out, "true\n");
    EXPECT_EQ(nt::run_cli({"check-completion", "-d", db, "-c", outside}).out, "false\n");
    auto naive = put("n.idb", "@null _a 1 2\nR(_a,_a)\n");
    EXPECT_EQ(nt::run_cli({"check-completion", "-d", naive, "-c", put("c.txt", "R(1,1)\n")}).out, "true\n");
    EXPECT_EQ(nt::run_cli({"check-completion", "-d", naive, "-c", put("c2.txt", "R(1,2)\n")}).out, "false\n");
}

TEST_F(Cli, ReduceGadget)
{
    const std::string out = path("k3");
    auto r = nt::run_cli({"reduce", "gadget", "-g", kData + "/k3.graph", "-o", out});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "query: R(x,x)\nproblem: comp\n");
    auto count = nt::run_cli({"count", "-d", out + ".idb", "-q", "R(x,x)", "--problem", "comp"});
    EXPECT_EQ(count.out, "8\n");
    auto id = nlohmann::json::parse(read_file(out + ".identity.json"));
    EXPECT_EQ(id["kind"], "gadget");
    EXPECT_EQ(id["graphInvariant"], "3colorable");
    EXPECT_EQ(id["sideFactors"]["offset"], "-7");

    auto k4 = nt::run_cli({"reduce", "gadget", "-g", kData + "/k4.graph", "-o", path("k4"), "--verify"});
    EXPECT_NE(k4.out.find("count: 7\n"), std::string::npos);
    EXPECT_NE(k4.out.find("identity: holds"), std::string::npos);
}

TEST_F(Cli, ReduceEveryKind)
{
    for (const auto &kind : reduction_kinds()) {
        auto r = nt::run_cli({"reduce", kind, "-g", kData + "/k22.graph", "-o", path(kind), "--verify"});
        EXPECT_EQ(r.code, 0) << kind << r.err;
        EXPECT_NE(r.out.find("identity: holds"), std::string::npos) << kind << r.out;
    }
    EXPECT_EQ(nt::run_cli({"reduce", "avoidance", "-g", kData + "/k3.graph", "-o", path("x")}).code, 3);
    EXPECT_EQ(nt::run_cli({"reduce", "nonsense", "-g", kData + "/k3.graph", "-o", path("x")}).code, 1);
}

TEST_F(Cli, Estimate)
{
    auto db = put("e.idb", "@domain uniform 1 2 3\nR(_a,_a)\n");
    auto r = nt::run_cli({"estimate", "-d", db, "-q", "R(x,x)", "--epsilon", "0.2", "--delta", "0.25", "--seed", "7"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["estimate"], "3");
    EXPECT_EQ(j["seed"], 7);
    auto plain = nt::run_cli(
        {"estimate", "-d", db, "-q", "R(x,x)", "--epsilon", "0.2", "--delta", "0.25", "--seed", "7", "--format", "plain"});
    EXPECT_EQ(plain.out, "3\n");
    auto via_count = nt::run_cli({"count", "-d", db, "-q", "R(x,x)", "--problem", "val", "--method", "estimate",
                                  "--epsilon", "0.2", "--delta", "0.25", "--seed", "7"});
    EXPECT_EQ(via_count.out, "3\n");
}

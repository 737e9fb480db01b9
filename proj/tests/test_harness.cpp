#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccsim/harness.hpp"

#include <sstream>

using namespace ccsim;
using namespace ccsim::harness;

namespace {

Scenario scenario(std::map<std::string, std::string> entries) {
    return make_scenario(entries, {});
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t c = line.find(',', pos);
            if (c == std::string::npos) c = line.size();
            cells.push_back(line.substr(pos, c - pos));
            pos = c + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rat("3") == Rat(3));
    CHECK(parse_rat("1.5") == Rat(3, 2));
    CHECK(parse_rat("3/2") == Rat(3, 2));
    CHECK(parse_rat("0.125") == Rat(1, 8));
    CHECK(parse_rat("-2.5") == Rat(-5, 2));
    CHECK(parse_rat(" 2 ") == Rat(2));
    CHECK_THROWS_AS(parse_rat("abc"), UsageError);
    CHECK_THROWS_AS(parse_rat("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rat(""), UsageError);
}

TEST_CASE("config text parsing") {
    auto entries = parse_config_text("# a comment\nscheme = man\nN=4\n\nK = 4  # trailing\nM=1\n");
    CHECK(entries.at("scheme") == "man");
    CHECK(entries.at("N") == "4");
    CHECK(entries.at("K") == "4");
    CHECK_THROWS_AS(parse_config_text("not a pair\n"), UsageError);

    SUBCASE("flags override file entries") {
        auto sc = make_scenario(entries, {{"M", "2"}, {"seed", "9"}});
        CHECK(sc.scheme == Scheme::Man);
        CHECK(sc.seed == 9);
        CHECK(sc.get_rat("M") == Rat(2));
    }
}

TEST_CASE("scenario requires a scheme and validates fields") {
    CHECK_THROWS_AS(scenario({{"N", "4"}}), UsageError);
    CHECK_THROWS_AS(scenario({{"scheme", "bogus"}}), UsageError);
    CHECK_THROWS_AS(scenario({{"scheme", "man"}, {"trials", "0"}}), UsageError);
    auto sc = scenario({{"scheme", "man"}, {"N", "4"}, {"K", "4"}, {"M", "1"}});
    CHECK_THROWS_AS(sc.get_int("missing"), UsageError);
    CHECK(sc.get_int_or("missing", 7) == 7);
    CHECK_THROWS_AS(sc.get_rat_list("missing"), UsageError);
}

TEST_CASE("rate-curve emits the documented schema sorted by M") {
    auto sc = scenario({{"scheme", "man"}, {"N", "4"}, {"K", "4"}, {"M_grid", "2,0,1"}});
    std::ostringstream out, err;
    CHECK(cmd_rate_curve(sc, out, err) == kExitOk);
    auto rows = parse_csv(out.str());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"M", "M_exact", "formula_rate", "formula_rate_exact",
                                              "bound_rate", "bound_rate_exact", "measured_rate",
                                              "measured_rate_exact", "scheme", "seed"});
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][2] == "4");
    CHECK(rows[2][0] == "1");
    CHECK(rows[2][3] == "3/2");
    CHECK(rows[3][0] == "2");
    CHECK(rows[3][3] == "2/3");
}

TEST_CASE("rate-curve covers the popularity worked examples") {
    auto sc = scenario({{"scheme", "su"},
                        {"levels_n", "100,500,1000"},
                        {"levels_k", "100,50,5"},
                        {"M", "100"},
                        {"partitions", "I=0:H=1,2;I=0,1,2:H=;I=0,1:H=2"}});
    std::ostringstream out, err;
    CHECK(cmd_rate_curve(sc, out, err) == kExitOk);
    std::string text = out.str();
    CHECK(text.find(",55,") != std::string::npos);
    CHECK(text.find(",15,") != std::string::npos);
    CHECK(text.find(",10,") != std::string::npos);

    auto mu = scenario({{"scheme", "mu"},
                        {"levels_n", "100,200,300"},
                        {"levels_u", "10,5,1"},
                        {"K", "10"},
                        {"M", "100"},
                        {"partitions", "J=0:H=1,2;I=0,1,2;I=0,1:H=2"}});
    std::ostringstream mout, merr;
    CHECK(cmd_rate_curve(mu, mout, merr) == kExitOk);
    std::string mtext = mout.str();
    CHECK(mtext.find(",60,") != std::string::npos);
    CHECK(mtext.find(",35,") != std::string::npos);
    CHECK(mtext.find("48.9089") != std::string::npos);
}

TEST_CASE("missing memory grid is a usage error") {
    auto sc = scenario({{"scheme", "man"}, {"N", "4"}, {"K", "4"}});
    std::ostringstream out, err;
    CHECK_THROWS_AS(cmd_rate_curve(sc, out, err), UsageError);
}

TEST_CASE("simulate: the two-user example summary") {
    auto sc = scenario({{"scheme", "man"},
                        {"N", "2"},
                        {"K", "2"},
                        {"M", "1"},
                        {"file_size", "1024"},
                        {"seed", "5"}});
    std::ostringstream out, err;
    CHECK(cmd_simulate(sc, out, err, 1) == kExitOk);
    auto rows = parse_csv(out.str());
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][1] == "0.5");
    CHECK(rows[1][2] == "1/2");
    CHECK(rows[1][3] == "0");   // decode failures
    CHECK(err.str().find("mean=0.5") != std::string::npos);
}

TEST_CASE("simulate reports decode failures with a nonzero exit") {
    auto sc = make_scenario({{"scheme", "man"},
                             {"N", "4"},
                             {"K", "4"},
                             {"M", "2"},
                             {"fault_inject", "true"}},
                            {});
    std::ostringstream out, err;
    CHECK(cmd_simulate(sc, out, err, 1) == kExitFailure);
    auto rows = parse_csv(out.str());
    CHECK(rows[1][3] != "0");
}

TEST_CASE("simulate CSV is byte-identical across worker counts and reruns") {
    auto sc = scenario({{"scheme", "pcd"},
                        {"N", "8"},
                        {"K", "8"},
                        {"d", "4"},
                        {"rho", "0.25"},
                        {"t0", "0.1"},
                        {"M", "2"},
                        {"trials", "12"},
                        {"seed", "3"}});
    std::string first, second, third;
    {
        std::ostringstream out, err;
        cmd_simulate(sc, out, err, 1);
        first = out.str();
    }
    {
        std::ostringstream out, err;
        cmd_simulate(sc, out, err, 8);
        second = out.str();
    }
    {
        std::ostringstream out, err;
        cmd_simulate(sc, out, err, 8);
        third = out.str();
    }
    CHECK(first == second);
    CHECK(second == third);
}

TEST_CASE("demand policies") {
    SUBCASE("all_same sends the full coded rate anyway") {
        auto sc = scenario({{"scheme", "man"},
                            {"N", "4"},
                            {"K", "4"},
                            {"M", "1"},
                            {"demand_policy", "all_same"}});
        std::ostringstream out, err;
        CHECK(cmd_simulate(sc, out, err, 1) == kExitOk);
        CHECK(parse_csv(out.str())[1][2] == "3/2");
    }
    SUBCASE("explicit demands") {
        auto sc = scenario({{"scheme", "man"},
                            {"N", "4"},
                            {"K", "4"},
                            {"M", "1"},
                            {"demand_policy", "explicit"},
                            {"demands", "0:3,1:2"}});
        std::ostringstream out, err;
        CHECK(cmd_simulate(sc, out, err, 1) == kExitOk);
        // partial demand set: (C(4,2) - C(2,2)) / C(4,1)
        CHECK(parse_csv(out.str())[1][2] == "5/4");
    }
    SUBCASE("stochastic demands vary with the trial") {
        auto sc = scenario({{"scheme", "decentralized"},
                            {"N", "4"},
                            {"K", "4"},
                            {"M", "1"},
                            {"file_size", "512"},
                            {"demand_policy", "stochastic"},
                            {"trials", "4"}});
        std::ostringstream out, err;
        CHECK(cmd_simulate(sc, out, err, 2) == kExitOk);
        CHECK(parse_csv(out.str()).size() == 5);
    }
}

TEST_CASE("sweep emits one aggregated row per grid point") {
    auto sc = scenario({{"scheme", "man"},
                        {"N", "4"},
                        {"K", "4"},
                        {"M_grid", "0,2,4"},
                        {"trials", "3"},
                        {"file_size", "12"}});
    std::ostringstream out, err;
    CHECK(cmd_sweep(sc, out, err, 2) == kExitOk);
    auto rows = parse_csv(out.str());
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][6] == "4");   // mean measured at M=0
    CHECK(rows[2][6] == "0.666666666667");
    CHECK(rows[3][6] == "0");
    CHECK(rows[1][8] == "3");   // trials column
}

TEST_CASE("regularity-violating adaptive params skip the bound checks with a reason") {
    VerifyOptions opt;
    opt.workers = 2;
    opt.c6_cluster_size = 8;   // violates d >= 2(1+t0)/alpha ln K
    opt.only = "adaptive";
    auto results = run_acceptance(opt);
    REQUIRE(results.size() == 1);
    CHECK(results[0].pass);
    CHECK(results[0].detail.find("SKIP") != std::string::npos);
    CHECK(results[0].detail.find("regularity") != std::string::npos);
}

TEST_CASE("fault injection makes the decode criterion fail") {
    VerifyOptions opt;
    opt.fault_inject = true;
    opt.only = "01";
    auto results = run_acceptance(opt);
    REQUIRE(results.size() == 1);
    CHECK(!results[0].pass);
    std::ostringstream out;
    CHECK(cmd_verify(opt, out) == kExitFailure);
    CHECK(out.str().find("FAIL") != std::string::npos);
}

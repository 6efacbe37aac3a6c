#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = causal::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_args(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> args;
    for (std::string word; in >> word;) {
        if (word[0] == '@') word = FIGURES_DIR + word.substr(1);
        args.push_back(word);
    }
    return args;
}

std::string fig(const std::string& name) {
    return causal::test::figure_path(name + ".dag");
}

// Structural equality with numbers compared to an absolute 1e-12, enough to
// absorb summation order but nothing a change in logic would produce.
bool same_json(const json& a, const json& b, std::string& where) {
    if (a.is_number() && b.is_number()) {
        if (a.is_number_unsigned() || b.is_number_unsigned()) return a == b;
        return std::abs(a.get<double>() - b.get<double>()) <= 1e-12;
    }
    if (a.type() != b.type()) return false;
    if (a.is_object()) {
        if (a.size() != b.size()) return false;
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) return false;
            where += "/" + it.key();
            if (!same_json(it.value(), b.at(it.key()), where)) return false;
            where.resize(where.size() - it.key().size() - 1);
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!same_json(a[i], b[i], where)) return false;
        }
        return true;
    }
    return a == b;
}

}  // namespace

TEST_CASE("optimal set of Figure 3") {
    Result r = run_cli({"adjust-optimal", "--dag", fig("fig3"), "-A", "A", "-Y", "Y"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out) == json::parse(R"({"O":["O1","O2"],"O_min":["O1","O2"]})"));
}

TEST_CASE("Figure 10 is efficient") {
    Result r = run_cli({"eff-check", "--dag", fig("fig10"), "-A", "A", "-Y", "Y"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["efficient"] == true);
    CHECK(j["eif"]["text"] == "b - chi + IPW*(Y - b)");
}

TEST_CASE("Figure 1 has no time independent adjustment set") {
    Result r = run_cli({"adjust-enumerate", "--dag", fig("fig1"), "-A", "A0", "-A", "A1", "-Y", "Y"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["sets"] == json::array());
    CHECK(j["note"] == "no time independent adjustment set exists");
}

TEST_CASE("two word subcommands") {
    Result a = run_cli({"adjust", "optimal", "--dag", fig("fig3"), "-A", "A", "-Y", "Y"});
    Result b = run_cli({"adjust-optimal", "--dag", fig("fig3"), "-A", "A", "-Y", "Y"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("exit codes") {
    // Domain errors.
    Result optimal = run_cli({"adjust-optimal", "--dag", fig("fig1"), "-A", "A0", "-A", "A1", "-Y", "Y"});
    CHECK(optimal.code == causal::cli::kExitDomain);
    CHECK(json::parse(optimal.out)["error"]["kind"] == "no_adjustment_set");
    Result prune = run_cli({"adjust-prune", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--set", "O2"});
    CHECK(prune.code == causal::cli::kExitDomain);
    CHECK(json::parse(prune.out)["error"]["kind"] == "invalid_set");

    // Input errors.
    Result unknown = run_cli({"adjust-check", "--dag", fig("fig3"), "-A", "A", "-Y", "Q", "--set", "O1"});
    CHECK(unknown.code == causal::cli::kExitUsage);
    CHECK(json::parse(unknown.out)["error"]["detail"] == json::array({"Q"}));
    Result order = run_cli({"timedep-enumerate", "--dag", fig("fig1"), "-A", "A1", "-A", "A0", "-Y", "Y"});
    CHECK(order.code == causal::cli::kExitUsage);
    Result missing = run_cli({"adjust-optimal", "--dag", fig("fig3"), "-A", "A"});
    CHECK(missing.code == causal::cli::kExitUsage);
    CHECK(json::parse(missing.out)["error"]["kind"] == "usage");
    CHECK_FALSE(missing.err.empty());
    CHECK(run_cli({}).code == causal::cli::kExitUsage);
    CHECK(run_cli({"adjust-optimal", "--dag", "/nonexistent.dag", "-A", "A", "-Y", "Y"}).code ==
          causal::cli::kExitUsage);
    CHECK(run_cli({"adjust-optimal", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--format", "xml"}).code ==
          causal::cli::kExitUsage);
    CHECK(run_cli({"oracle-verify", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--identity", "nope"}).code ==
          causal::cli::kExitUsage);
}

TEST_CASE("bad DAG file reports the position") {
    std::string path = "test_cli_bad.dag";
    std::ofstream(path) << "node A\nA -> B\nB => C\n";
    Result r = run_cli({"adjust-optimal", "--dag", path, "-A", "A", "-Y", "B"});
    CHECK(r.code == causal::cli::kExitUsage);
    json e = json::parse(r.out)["error"];
    CHECK(e["kind"] == "syntax");
    CHECK(e["line"] == 3);
    std::remove(path.c_str());
}

TEST_CASE("failing identity hypotheses are a domain error") {
    Result r = run_cli({"oracle-verify", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--identity", "lemma1", "--set1",
                        "O2", "--set2", "O1"});
    CHECK(r.code == causal::cli::kExitDomain);
    CHECK(json::parse(r.out)["error"]["kind"] == "hypothesis_failed");
}

TEST_CASE("text format") {
    Result r = run_cli({"adjust-check", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--set", "O1,W2", "--format",
                        "text"});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid: yes") != std::string::npos);
    CHECK_FALSE(json::accept(r.out));

    Result e = run_cli({"adjust-check", "--dag", fig("fig3"), "-A", "A", "-Y", "Q", "--format", "text"});
    CHECK(e.code == causal::cli::kExitUsage);
    CHECK(e.out.empty());
    CHECK(e.err.find("error:") != std::string::npos);
}

TEST_CASE("help documents the file formats") {
    Result r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find(causal::cli::formats_help()) != std::string::npos);
    CHECK(causal::cli::formats_help().find("DAG file format") != std::string::npos);
    CHECK(causal::cli::formats_help().find("Law file format") != std::string::npos);
    Result sub = run_cli({"eff-check", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--dag") != std::string::npos);
}

TEST_CASE("identical inputs give identical bytes") {
    std::vector<std::string> args = {"oracle-search", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--predicate",
                                     "variance-reversal", "--set1", "O1,W2", "--set2", "O2,W1", "--seed", "3",
                                     "--trials", "200", "--with-law"};
    Result a = run_cli(args);
    Result b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out)["first_smaller"].contains("law"));
}

TEST_CASE("search that cannot succeed reports not found") {
    Result r = run_cli({"oracle-search", "--dag", fig("fig3"), "-A", "A", "-Y", "Y", "--predicate", "nonzero-mean",
                        "--set1", "O1,O2", "--trials", "20"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["witness"]["found"] == false);
}

TEST_CASE("golden outputs") {
    std::ifstream manifest(std::string(FIGURES_DIR) + "/golden/cases.txt");
    REQUIRE(manifest.good());
    const bool update = std::getenv("CAUSAL_UPDATE_GOLDEN") != nullptr;
    int cases = 0;
    for (std::string line; std::getline(manifest, line);) {
        if (line.empty() || line[0] == '#') continue;
        auto bar = line.find('|');
        std::string name = line.substr(0, bar);
        name.erase(name.find_last_not_of(' ') + 1);
        Result r = run_cli(split_args(line.substr(bar + 1)));
        std::string path = std::string(FIGURES_DIR) + "/golden/" + name + ".json";
        CAPTURE(name);
        CHECK(r.code == 0);
        if (update) {
            std::ofstream(path) << r.out;
            continue;
        }
        json expected = json::parse(causal::test::read_text(path));
        std::string where;
        CHECK_MESSAGE(same_json(json::parse(r.out), expected, where), (name + where));
        ++cases;
    }
    CHECK((update || cases == 28));
}

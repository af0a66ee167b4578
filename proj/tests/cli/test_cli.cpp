#include "homcw/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef HOMCW_TEST_DATA
#error "HOMCW_TEST_DATA must point at tests/data"
#endif

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "homcw");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    int code = homcw::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(HOMCW_TEST_DATA) + "/" + name; }

} // namespace

TEST_CASE("signature of K3") {
    auto r = run_cli({"signature", data("K3.graph")});
    CHECK(r.code == 0);
    CHECK(r.out == "s(H) = 6\n");
    auto l = run_cli({"signature", data("W6.graph"), "--list"});
    CHECK(l.code == 0);
    CHECK(l.out.find("witness") != std::string::npos);
    auto j = nlohmann::json::parse(run_cli({"--json", "signature", data("C5.graph"), "--list"}).out);
    CHECK(j["signature_number"] == 10);
    CHECK(j["sets"].size() == 10);
}

TEST_CASE("solve answers and exit codes") {
    auto no = run_cli({"solve", "--target", data("K3.graph"), "--expr", data("K4.cwexpr")});
    CHECK(no.code == 1);
    CHECK(no.out.rfind("no\n", 0) == 0);
    auto yes = run_cli({"solve", "--target", data("K4.graph"), "--expr", data("K4.cwexpr"), "--json"});
    CHECK(yes.code == 0);
    auto j = nlohmann::json::parse(yes.out);
    CHECK(j["answer"] == true);
    CHECK(j["method"] == "dp");
    CHECK(j["width"] == 2);
    CHECK(j["bound_ok"] == true);
    auto pre = run_cli({"solve", "--target", data("K3.graph"), "--expr", data("K3.cwexpr"), "--map", data("K3.map")});
    CHECK(pre.code == 0);
    auto fac = run_cli({"solve", "--target", data("W6.graph"), "--expr", data("C5.cwexpr"), "--factors", "--json"});
    CHECK(fac.code == 0);
    CHECK(nlohmann::json::parse(fac.out)["method"] == "factors");
    auto wit = run_cli({"solve", "--target", data("K3.graph"), "--expr", data("C5.cwexpr"), "--witness-limit", "10"});
    CHECK(wit.out.find("map x1") != std::string::npos);
}

TEST_CASE("core of W6") {
    auto r = run_cli({"core", data("W6.graph")});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("core: 3 vertices\n", 0) == 0);
    auto j = nlohmann::json::parse(run_cli({"core", data("W6.graph"), "--json"}).out);
    CHECK(j["core_order"] == 3);
    CHECK(j["retraction"].size() == 7);
}

TEST_CASE("factor, projective and oracle") {
    auto f = run_cli({"factor", data("K3.graph"), "--json"});
    CHECK(f.code == 0);
    CHECK(nlohmann::json::parse(f.out)["prime"] == true);
    auto p = run_cli({"projective", data("K3.graph"), "--ell", "2", "--json"});
    CHECK(p.code == 0);
    auto pj = nlohmann::json::parse(p.out);
    CHECK(pj["projective"] == true);
    CHECK(pj["extension_count"] == 2);
    auto o = run_cli({"oracle", "--target", data("K3.graph"), "--graph", data("K4.graph")});
    CHECK(o.code == 1);
    auto oc = run_cli({"oracle", "--target", data("K3.graph"), "--graph", data("C5.graph"), "--enumerate", "1000", "--json"});
    CHECK(oc.code == 0);
    CHECK(nlohmann::json::parse(oc.out)["count"] == 30);
}

TEST_CASE("gadget verification") {
    auto imp = run_cli({"verify-gadget", "--target", data("K3.graph"), "--kind", "implication", "--a", "1", "--b", "2"});
    CHECK(imp.code == 0);
    CHECK(imp.out.find("S1: holds") != std::string::npos);
    auto s = run_cli({"verify-gadget", "--target", data("K3.graph"), "--kind", "s", "--pairs", "1:2,2:1", "--json"});
    CHECK(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["extensions"] == 2);
    auto o = run_cli({"verify-gadget", "--target", data("K3.graph"), "--kind", "or", "--t", "3"});
    CHECK(o.code == 0);
    CHECK(o.out.find("O2: holds") != std::string::npos);
    auto bad = run_cli({"verify-gadget", "--target", data("K3.graph"), "--kind", "xor"});
    CHECK(bad.code == 2);
}

TEST_CASE("gen writes the four artifacts") {
    auto dir = std::filesystem::temp_directory_path() / "homcw_cli_gen";
    std::filesystem::remove_all(dir);
    auto r = run_cli({"gen", "--target", data("K3.graph"), "--csp", data("unary.csp"), "-o", dir.string(), "--json"});
    REQUIRE(r.code == 0);
    for (const char* f : {"G.graph", "G.map", "G.cwexpr", "meta.json"}) CHECK(std::filesystem::exists(dir / f));
    std::ifstream in(dir / "meta.json");
    auto meta = nlohmann::json::parse(in);
    CHECK(meta["blocks"] == 4);
    CHECK(meta["lambda"].size() == 6);
    CHECK(meta["labels"]["main"] == 1);
    CHECK(meta["forward_only"] == false);
    auto solved = run_cli({"oracle", "--target", data("K3.graph"), "--graph", (dir / "G.graph").string(), "--map",
                           (dir / "G.map").string()});
    CHECK(solved.code == 0);

    auto limited = run_cli({"gen", "--target", data("K3.graph"), "--csp", data("binary.csp"), "-o", dir.string(),
                            "--blocks", "1", "--to-hom"});
    CHECK(limited.code == 0);
    CHECK(limited.out.find("forward only") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"solve", "--target", data("K3.graph")}).code == 2);
    CHECK(run_cli({"signature", data("missing.graph")}).code == 2);
    CHECK(run_cli({"--threads", "0", "signature", data("K3.graph")}).code == 2);
    auto bad_expr = std::filesystem::temp_directory_path() / "homcw_bad.cwexpr";
    std::ofstream(bad_expr) << "(v(1,a) +\n v(0,b))\n";
    auto e = run_cli({"solve", "--target", data("K3.graph"), "--expr", bad_expr.string()});
    CHECK(e.code == 2);
    CHECK(e.err.find("line 2") != std::string::npos);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("bench emits CSV rows") {
    auto r = run_cli({"bench", "--family", "complete", "--sizes", "3", "--min-width", "2", "--max-width", "3", "--random", "1",
                      "--seed", "5"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 1 + 2 * 2);
    CHECK(r.out.rfind("family,target,expression,width", 0) == 0);
}

#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <dualq/json_io.hpp>

using namespace dualq;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

const fs::path& workdir() {
    static fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("dualq_cli_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

void write(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

Run run(const std::string& args) {
    const std::string cmd = std::string(DUALQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = ::popen(cmd.c_str(), "r");
    REQUIRE(f);
    std::string out;
    char buf[4096];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, k);
    const int st = ::pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

void bodies() {
    write("ball.json", R"({"dim": 2, "kind": "ball", "radius": 1})");
    write("ball2.json", R"({"dim": 2, "kind": "ball", "radius": 2})");
    write("trig.json", R"({"dim": 2, "kind": "trig", "c0": 2, "cos": [1]})");
    write("ball3.json", R"({"dim": 3, "kind": "ball", "radius": 1})");
}

}  // namespace

TEST_CASE("compute prints tuples") {
    bodies();
    auto r = run("compute " + path("ball.json") + " " + path("ball2.json"));
    REQUIRE(r.code == 0);
    auto t = tuple_from_json(Json::parse(r.out));
    CHECK(t.indices == std::vector<double>{0, 1, 2});
    CHECK_THAT(t.values[0], WithinRel(kPi, 1e-14));
    CHECK_THAT(t.values[1], WithinRel(2 * kPi, 1e-14));
    CHECK_THAT(t.values[2], WithinRel(4 * kPi, 1e-14));

    r = run("compute " + path("ball.json") + " " + path("trig.json") + " -i 0,1,2");
    REQUIRE(r.code == 0);
    t = tuple_from_json(Json::parse(r.out));
    CHECK_THAT(t.values[2], WithinRel(4.5 * kPi, 1e-14));
    // 15 significant digits
    CHECK(r.out.find("14.1371669411541") != std::string::npos);

    r = run("compute " + path("ball.json") + " " + path("trig.json") + " -i -1,0,0.5");
    REQUIRE(r.code == 0);
    t = tuple_from_json(Json::parse(r.out));
    CHECK(t.indices == std::vector<double>{-1, 0, 0.5});
}

TEST_CASE("exit codes") {
    bodies();
    CHECK(run("compute " + path("ball.json") + " " + path("ball3.json")).code == 3);
    write("junk.json", R"({"dim": 2})");
    CHECK(run("compute " + path("ball.json") + " " + path("junk.json")).code == 2);
    write("broken.json", "{");
    CHECK(run("compute " + path("ball.json") + " " + path("broken.json")).code == 2);
    CHECK(run("compute " + path("ball.json") + " " + path("missing.json")).code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("compute " + path("ball.json")).code == 2);

    write("bad.json", R"({"dim": 2, "indices": [0, 1, 2], "values": [1, 2, 3]})");
    auto r = run("check " + path("bad.json"));
    CHECK(r.code == 4);
    CHECK(Json::parse(r.out)["status"] == "OUTSIDE");
    r = run("realize " + path("bad.json") + " --out " + path("bad_"));
    CHECK(r.code == 4);
    CHECK(Json::parse(r.out)["status"] == "OUTSIDE");
}

TEST_CASE("check and realize round trip") {
    bodies();
    write("t.json", R"({"dim": 2, "indices": [0, 1, 2], "values": [3.14159265358979, 6.28318530717959, 14.1371669411541]})");
    auto r = run("check " + path("t.json"));
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["status"] == "INTERIOR");

    r = run("realize " + path("t.json") + " --out " + path("w_"));
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["max_rel_dev"].get<double>() <= 1e-6);
    r = run("compute " + path("w_K.json") + " " + path("w_L.json"));
    REQUIRE(r.code == 0);
    auto t = tuple_from_json(Json::parse(r.out));
    CHECK_THAT(t.values[0], WithinRel(kPi, 1e-6));
    CHECK_THAT(t.values[1], WithinRel(2 * kPi, 1e-6));
    CHECK_THAT(t.values[2], WithinRel(4.5 * kPi, 1e-6));
}

TEST_CASE("roots and verify") {
    bodies();
    auto r = run("roots " + path("ball.json") + " " + path("trig.json"));
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["stability"] == "stable");
    for (const auto& z : j["roots"]) {
        CHECK(std::abs(z[0].get<double>() + 4.0 / 9) < 1e-12);
        CHECK(std::abs(std::abs(z[1].get<double>()) - std::sqrt(2.0) / 9) < 1e-12);
    }
    r = run("verify " + path("ball.json") + " " + path("trig.json"));
    CHECK(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["dilate"] == false);
    CHECK(j["monotonicity"]["applicable"] == false);

    r = run("verify " + path("ball2.json") + " " + path("ball.json"));
    CHECK(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["dilate"] == true);
    CHECK(j["monotonicity"]["pass"] == true);
    CHECK(j["hankel"][0]["mode"] == "psd");
}

TEST_CASE("cone maps, config files and determinism") {
    auto r = run("cone 2 36 --format csv --out " + path("wit"));
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,status,witness_id");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        const double theta = std::stod(line.substr(0, c1));
        const std::string status = line.substr(c1 + 1, c2 - c1 - 1), id = line.substr(c2 + 1);
        CHECK(status == (theta > kPi / 2 + 1e-12 ? "IN" : "OUT"));
        if (status == "IN") CHECK(fs::exists(workdir() / "wit" / ("witness_" + id + ".json")));
        ++rows;
    }
    CHECK(rows == 36);

    write("run.cfg", "# map settings\nsamples = 8\nformat = csv\nseed = 7\nres.3 = 48\n");
    auto a = run("cone 3 --config " + path("run.cfg"));
    auto b = run("cone 3 --config " + path("run.cfg"));
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 9);
    // flags win over the file
    auto c = run("cone 3 --config " + path("run.cfg") + " --format json");
    CHECK(Json::parse(c.out).size() == 8);

    write("bad.cfg", "samples = many\n");
    CHECK(run("cone 3 --config " + path("bad.cfg")).code == 2);
    write("bad2.cfg", "colour = blue\n");
    CHECK(run("cone 3 --config " + path("bad2.cfg")).code == 2);
}

TEST_CASE("body documents round trip") {
    GridSet grids(std::map<int, int>{{3, 16}});
    const auto g3 = grids.get(3);
    std::vector<double> vals(g3->size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 1.0 + 0.5 * g3->node(i)[0] * g3->node(i)[0];
    StarBody tab = StarBody::grid_table(g3, vals, TableInterp::Zonal);
    StarBody z = StarBody::zonal(3, {0.0, 0.3, 1.0}, {1.0, 1.2, 2.0});
    std::vector<StarBody> all = {StarBody::ball(3, 1.5), StarBody::dilate(z, 2.0), z, tab, StarBody::radial_sum(z, tab, 0.5, 2.0)};
    for (const StarBody& b : all) {
        const std::string text = to_json(b).dump();
        StarBody c = body_from_json(Json::parse(text), &grids);
        CHECK(to_json(c).dump() == text);
        for (std::size_t i = 0; i < g3->size(); i += 7) CHECK(c.eval(g3->node(i)) == b.eval(g3->node(i)));
    }
    StarBody t = StarBody::trig(2.0, {1.0}, {0.25});
    CHECK(to_json(body_from_json(to_json(t))).dump() == to_json(t).dump());

    CHECK_THROWS_AS(body_from_json(Json::parse(R"({"dim": 3, "kind": "trig", "c0": 1})")), Error);
    CHECK_THROWS_AS(body_from_json(Json::parse(R"({"dim": 2, "kind": "blob"})")), Error);
    CHECK_THROWS_AS(body_from_json(Json::parse(R"({"dim": 2, "kind": "ball", "radius": -1})")), Error);
    CHECK_THROWS_AS(tuple_from_json(Json::parse(R"({"dim": 2, "indices": [1, 2], "values": [1, 2]})")), Error);
}

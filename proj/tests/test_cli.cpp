#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kModels = SEGRISK_MODELS;

struct Workspace {
    fs::path dir;
    Workspace() : dir(fs::temp_directory_path() / ("segrisk_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
    std::string read(const std::string& name) const {
        std::ifstream in(dir / name);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SEGRISK_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("sample") {
    Workspace w;
    CHECK(cli("sample --model " + kModels + "/m2.json --n 100 --seed 7 --out " + w.path("a.csv")) == 0);
    CHECK(cli("sample --model " + kModels + "/m2.json --n 100 --seed 7 --out " + w.path("b.csv")) == 0);
    CHECK(w.read("a.csv") == w.read("b.csv"));
    CHECK(w.read("a.csv").rfind("x\n", 0) == 0);
    CHECK(cli("sample --model " + kModels + "/m2.json --n 0 --out " + w.path("c.csv")) == 1);

    CHECK(cli("sample --model " + kModels + "/mid.json --n 200 --seed 3 --with-truth --out " + w.path("mid.csv")) == 0);
    std::istringstream in(w.read("mid.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y");
    while (std::getline(in, line)) CHECK(line.substr(0, line.find(',')) == line.substr(line.find(',') + 1));
}

TEST_CASE("align") {
    Workspace w;
    w.write("x.csv", "x\n0\n0\n");
    REQUIRE(cli("align --model " + kModels + "/m2.json --input " + w.path("x.csv") + " --out " + w.path("a.json")) == 0);
    json doc = json::parse(w.read("a.json"));
    CHECK(doc["methods"]["viterbi"]["path"] == "0,0");
    CHECK(doc["methods"]["viterbi"]["rbar_inf"].get<double>() == doctest::Approx(0.0681).epsilon(1e-3));

    w.write("y.csv", "x\n0\n1\n1\n0\n1\n1\n1\n0\n");
    REQUIRE(cli("align --model " + kModels + "/m2.json --input " + w.path("y.csv") +
                " --method hybrid --c 0 --out " + w.path("h.json")) == 0);
    REQUIRE(cli("align --model " + kModels + "/m2.json --input " + w.path("y.csv") + " --method pmap --out " +
                w.path("p.json")) == 0);
    CHECK(json::parse(w.read("h.json"))["methods"]["hybrid"]["path"] ==
          json::parse(w.read("p.json"))["methods"]["pmap"]["path"]);

    CHECK(cli("align --model " + w.path("missing.json") + " --input " + w.path("x.csv")) != 0);
    w.write("bad.csv", "x\n0\nzero\n");
    CHECK(cli("align --model " + kModels + "/m2.json --input " + w.path("bad.csv")) == 1);
    CHECK(cli("align --model " + kModels + "/m2.json --input " + w.path("x.csv") + " --method nope") == 1);
}

TEST_CASE("exit codes for model and runtime failures") {
    Workspace w;
    w.write("reducible.json", R"({"states":2,"transition":[[1,0],[0,1]],"initial":[0.5,0.5],
        "emission":{"type":"categorical","probs":[[0.5,0.5],[0.5,0.5]]}})");
    CHECK(cli("check --model " + w.path("reducible.json")) == 2);
    w.write("garbage.json", "{not json");
    CHECK(cli("check --model " + w.path("garbage.json")) == 2);

    // Symbol 1 is possible only in state 1, which is unreachable from state 0.
    w.write("trap.json", R"({"states":2,"transition":[[0.5,0.5],[0.5,0.5]],"initial":[1,0],
        "emission":{"type":"categorical","probs":[[1,0],[0,1]]}})");
    w.write("x.csv", "x\n1\n");
    CHECK(cli("align --model " + w.path("trap.json") + " --input " + w.path("x.csv")) == 3);
}

TEST_CASE("check") {
    Workspace w;
    REQUIRE(cli("check --model " + kModels + "/m2.json --out " + w.path("c.json")) == 0);
    json doc = json::parse(w.read("c.json"));
    CHECK(doc["a1"]["holds"] == true);
    CHECK(doc["a1"]["cluster"] == json::array({0, 1}));
    CHECK(doc["a1"]["r"] == 1);
    CHECK(doc["a2"]["holds"] == true);

    w.write("identical.json", R"({"states":2,"transition":[[0.5,0.5],[0.5,0.5]],
        "emission":{"type":"categorical","probs":[[0.5,0.5],[0.5,0.5]]}})");
    REQUIRE(cli("check --model " + w.path("identical.json") + " --out " + w.path("p.json")) == 0);
    CHECK(json::parse(w.read("p.json"))["a2"]["holds"] == false);
}

TEST_CASE("estimate") {
    Workspace w;
    REQUIRE(cli("estimate --model " + kModels + "/mid.json --n 3000 --reps 2 --trace " + w.path("t.csv") + " --out " +
                w.path("e.json")) == 0);
    std::istringstream in(w.read("t.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,replicate,empirical_r1,conditional_r1,rbar1_viterbi,rbar1_pmap,rbar_inf_direct,rbar_inf_decomposed");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        std::getline(cells, cell, ',');
        while (std::getline(cells, cell, ',')) CHECK(cell == "0");
    }
    CHECK(rows == 4);
    json doc = json::parse(w.read("e.json"));
    CHECK(doc["model_id"] == "mid");
    CHECK(doc["rbar1"]["value"] == 0.0);
    CHECK(cli("estimate --model " + kModels + "/m2.json --n 10") == 1);
    CHECK(cli("estimate --model " + kModels + "/m2.json --n 2000 --checkpoints 1500,1000") == 1);
}

TEST_CASE("forgetting") {
    Workspace w;
    REQUIRE(cli("forgetting --model " + kModels + "/m2.json --n 500 --seed 1 --out " + w.path("f.csv")) == 0);
    std::istringstream in(w.read("f.csv"));
    std::string line, last;
    std::getline(in, line);
    CHECK(line == "t,gap,tv");
    while (std::getline(in, line)) last = line;
    REQUIRE(last.rfind("mean,fit,", 0) == 0);
    CHECK(std::stod(last.substr(9)) < 0.0);
    CHECK(cli("forgetting --model " + kModels + "/m2.json --n 30 --max-gap 40") == 1);
    CHECK(cli("forgetting --model " + kModels + "/m2.json --n 100 --max-gap 20 --anchors 90") == 1);
}

TEST_CASE("oracle") {
    Workspace w;
    w.write("x.csv", "x\n0\n0\n");
    REQUIRE(cli("oracle --model " + kModels + "/m2.json --input " + w.path("x.csv") + " --out " + w.path("o.json")) == 0);
    json doc = json::parse(w.read("o.json"));
    CHECK(doc["path"] == "0,0");
    CHECK(doc["value"].get<double>() == doctest::Approx(std::log(0.384)));
    CHECK(std::exp(doc["log_evidence"].get<double>()) == doctest::Approx(0.44));
    w.write("long.csv", "x\n" + [] {
        std::string s;
        for (int i = 0; i < 30; ++i) s += "0\n";
        return s;
    }());
    CHECK(cli("oracle --model " + kModels + "/m2.json --input " + w.path("long.csv")) == 1);
}

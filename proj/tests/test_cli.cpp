#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "alge/cli.hpp"
#include "alge/error.hpp"
#include "alge/config.hpp"
#include "alge/io.hpp"

using namespace alge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("alge_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("config parsing: defaults, unknown keys, echo") {
    RunConfig cfg = RunConfig::parse_text("graph = g.edges\nruns = 50\n# comment\n");
    CHECK(cfg.graph == "g.edges");
    CHECK(cfg.runs == 50);
    CHECK(cfg.beta == "auto");
    CHECK(cfg.beta_multiplier == 1.5);

    CHECK_THROWS_AS(RunConfig::parse_text("nope = 1\n"), ParseError);
    CHECK_THROWS_AS(RunConfig::parse_text("runs 50\n"), ParseError);
    CHECK_THROWS_AS(RunConfig::parse_text("runs = 0\n"), DataError);
    CHECK_THROWS_AS(RunConfig::parse_text("beta = 2\n"), DataError);

    // resolved text re-parses to the same config; hash is stable
    RunConfig again = RunConfig::parse_text(cfg.resolved_text());
    CHECK(again.resolved_text() == cfg.resolved_text());
    CHECK(again.hash() == cfg.hash());
    CHECK(RunConfig{}.hash() != cfg.hash());
}

TEST_CASE("generator specs") {
    auto ba = GeneratorSpec::parse("ba:n=20,m=2,seed=5");
    CHECK(ba.build().num_nodes() == 20);
    auto er = GeneratorSpec::parse("er:n=10,m=0,seed=1");
    CHECK(er.build().num_edges() == 0);
    CHECK_THROWS_AS(GeneratorSpec::parse("ws:n=3,m=1"), DataError);
    CHECK_THROWS_AS(GeneratorSpec::parse("ba:n=3"), DataError);
}

TEST_CASE("cli: generate is reproducible and exits nonzero on bad input") {
    TempDir tmp;
    const std::string out = tmp.file("g.edges");
    CHECK(cli::run({"generate", "--spec", "ba:n=50,m=2,seed=3", "--out", out}) == 0);
    const std::string first = read_file(out);
    CHECK(cli::run({"generate", "--spec", "ba:n=50,m=2,seed=3", "--out", out}) == 0);
    CHECK(read_file(out) == first);
    CHECK(first.find("# generated-by: generate") != std::string::npos);

    CHECK(cli::run({"generate", "--spec", "bad", "--out", out}) == 2);
    CHECK(cli::run({"generate"}) == 1);
    CHECK(cli::run({"nonsense"}) == 1);
}

TEST_CASE("cli: simulate writes a parseable table and honors beta=0") {
    TempDir tmp;
    const std::string graph = tmp.file("g.edges");
    CHECK(cli::run({"generate", "--spec", "ba:n=30,m=2,seed=1", "--out", graph}) == 0);

    const std::string cfgp = tmp.file("run.cfg");
    write(cfgp, "beta = 0\nruns = 5\n");
    const std::string out = tmp.file("inf.csv");
    CHECK(cli::run({"simulate", "--graph", graph, "--config", cfgp, "--out", out}) == 0);
    auto table = influence_from_text(read_file(out));
    CHECK(table.complete());
    for (NodeId v = 0; v < table.num_nodes(); ++v) CHECK(table.value(v) == 1.0);

    // different worker counts give identical bytes
    const std::string out2 = tmp.file("inf2.csv");
    write(cfgp, "beta = 0.4\nruns = 40\n");
    CHECK(cli::run({"simulate", "--graph", graph, "--config", cfgp, "--out", out,
                    "--workers", "1"}) == 0);
    CHECK(cli::run({"simulate", "--graph", graph, "--config", cfgp, "--out", out2,
                    "--workers", "7"}) == 0);
    CHECK(read_file(out) == read_file(out2));

    CHECK(cli::run({"simulate", "--graph", tmp.file("missing.edges"), "--out", out}) == 2);
}

TEST_CASE("cli: sample then simulate labels then imp") {
    TempDir tmp;
    const std::string graph = tmp.file("g.edges");
    CHECK(cli::run({"generate", "--spec", "ba:n=40,m=2,seed=9", "--out", graph}) == 0);
    const std::string cfgp = tmp.file("run.cfg");
    write(cfgp, "runs = 30\nmax_labels = 8\nseed_budget = 4\n");

    const std::string reps = tmp.file("reps.csv");
    CHECK(cli::run({"sample", "--graph", graph, "--config", cfgp, "--out", reps}) == 0);
    auto rset = representatives_from_text(read_file(reps));
    CHECK(!rset.nodes.empty());
    CHECK(rset.nodes.size() <= 8);

    const std::string labels = tmp.file("labels.csv");
    CHECK(cli::run({"simulate", "--graph", graph, "--config", cfgp, "--out", labels,
                    "--nodes", reps}) == 0);
    auto lt = influence_from_text(read_file(labels));
    CHECK(lt.present_nodes().size() == rset.nodes.size());

    const std::string full = tmp.file("full.csv");
    CHECK(cli::run({"simulate", "--graph", graph, "--config", cfgp, "--out", full}) == 0);
    CHECK(cli::run({"imp", "--graph", graph, "--influence", full, "--config", cfgp,
                    "--out-dir", tmp.file("imp")}) == 0);
    auto seeds = seeds_from_text(read_file(tmp.file("imp/seeds.csv")));
    CHECK(seeds.seeds.size() == 4);
    CHECK(fs::exists(tmp.file("imp/overlap.csv")));
    CHECK(fs::exists(tmp.file("imp/curve.csv")));
}

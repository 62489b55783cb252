#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "truss/graph.hpp"
#include "truss/inmem.hpp"

using namespace truss;

namespace {

struct RunOutput {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Workspace {
public:
    Workspace() {
        dir_ = std::filesystem::temp_directory_path() /
               ("truss-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter_++));
        std::filesystem::create_directories(dir_);
    }
    ~Workspace() { std::filesystem::remove_all(dir_); }

    std::string path(const std::string& name) const {
        return (dir_ / name).string();
    }

    RunOutput run(const std::string& args) const {
        std::string out = path("stdout.txt");
        std::string err = path("stderr.txt");
        std::string cmd = std::string(TRUSS_CLI_PATH) + " " + args + " > " +
                          out + " 2> " + err;
        int status = std::system(cmd.c_str());
        RunOutput r;
        if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

private:
    std::filesystem::path dir_;
    static int counter_;
};

int Workspace::counter_ = 0;

} // namespace

TEST_CASE("gen writes the fixture graph to stdout") {
    Workspace ws;
    RunOutput r = ws.run("gen fig2");
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    Graph g = load_graph(in, GraphFormat::edge_list);
    CHECK(g == fig2_graph());
    CHECK(r.out.rfind("0 1\n", 0) == 0);
}

TEST_CASE("gen produces deterministic random graphs") {
    Workspace ws;
    RunOutput a = ws.run("gen er 30 0.2 --seed 7");
    RunOutput b = ws.run("gen er 30 0.2 --seed 7");
    RunOutput c = ws.run("gen er 30 0.2 --seed 8");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);

    RunOutput k = ws.run("gen clique 5 --out " + ws.path("k5.edges"));
    CHECK(k.code == 0);
    Graph k5 = load_graph_file(ws.path("k5.edges"), GraphFormat::edge_list);
    CHECK(k5.m() == 10);

    CHECK(ws.run("gen pl 50 2.3 --seed 1").code == 0);
    CHECK(ws.run("gen hub 20 30 --seed 1").code == 0);
}

TEST_CASE("gen rejects bad arguments") {
    Workspace ws;
    CHECK(ws.run("gen nosuch").code == 2);
    CHECK(ws.run("gen clique").code == 2);      // missing size
    CHECK(ws.run("gen er 30 zap").code == 2);   // malformed probability
}

TEST_CASE("decompose writes artifacts and a summary") {
    Workspace ws;
    REQUIRE(ws.run("gen fig2 --out " + ws.path("g.edges")).code == 0);
    RunOutput r = ws.run("decompose " + ws.path("g.edges") + " --algo inmem" +
                         " --out " + ws.path("run"));
    CHECK(r.code == 0);
    CHECK(r.out.find("k_max=5") != std::string::npos);
    CHECK(r.out.find("classes=4") != std::string::npos);
    CHECK(std::filesystem::exists(ws.path("run/labeling.txt")));
    CHECK(std::filesystem::exists(ws.path("run/manifest.txt")));
    CHECK(std::filesystem::exists(ws.path("run/phi_5.edges")));
    TrussLabeling l = load_labeling_file(ws.path("run/labeling.txt"));
    CHECK(l == decompose_improved(fig2_graph()));
}

TEST_CASE("all four algorithms write the same labeling") {
    Workspace ws;
    REQUIRE(ws.run("gen er 25 0.3 --seed 3 --out " + ws.path("g.edges"))
                .code == 0);
    std::string first;
    for (const std::string algo :
         {"inmem-baseline", "inmem", "bottomup", "topdown"}) {
        std::string dir = ws.path("run-" + algo);
        std::string extra = algo == "topdown" ? " --all" : "";
        RunOutput r = ws.run("decompose " + ws.path("g.edges") + " --algo " +
                             algo + extra + " --out " + dir);
        REQUIRE(r.code == 0);
        std::string bytes = slurp(dir + "/labeling.txt");
        if (first.empty())
            first = bytes;
        else
            CHECK(bytes == first);
    }
}

TEST_CASE("budgeted decompose reports scan totals") {
    Workspace ws;
    REQUIRE(ws.run("gen fig2 --out " + ws.path("g.edges")).code == 0);
    RunOutput r =
        ws.run("decompose " + ws.path("g.edges") +
               " --algo bottomup --memory 31 --block 4 --out " + ws.path("run"));
    CHECK(r.code == 0);
    std::string rep = slurp(ws.path("run/scan_report.txt"));
    CHECK(rep.find("records_read=") != std::string::npos);
    CHECK(rep.find("k_max=5") != std::string::npos);
    CHECK(std::filesystem::exists(ws.path("run/g_new.current")));
}

TEST_CASE("verify accepts the written labeling and catches tampering") {
    Workspace ws;
    REQUIRE(ws.run("gen fig2 --out " + ws.path("g.edges")).code == 0);
    REQUIRE(ws.run("decompose " + ws.path("g.edges") + " --out " +
                   ws.path("run"))
                .code == 0);
    std::string lab = ws.path("run/labeling.txt");

    RunOutput ok = ws.run("verify " + ws.path("g.edges") + " " + lab);
    CHECK(ok.code == 0);
    CHECK(ok.out.find("no violations") != std::string::npos);

    // Overstate one truss number: structural violation, exit 1.
    TrussLabeling l = load_labeling_file(lab);
    l.phi[Edge(8, 10)] = 3;
    save_labeling_file(ws.path("forged.txt"), l);
    RunOutput bad = ws.run("verify " + ws.path("g.edges") + " " +
                           ws.path("forged.txt"));
    CHECK(bad.code == 1);
    CHECK(bad.out.find("INVALID") != std::string::npos);

    // Labeling for a different edge set: input error, exit 2.
    l = load_labeling_file(lab);
    l.phi.erase(Edge(8, 10));
    save_labeling_file(ws.path("short.txt"), l);
    CHECK(ws.run("verify " + ws.path("g.edges") + " " + ws.path("short.txt"))
              .code == 2);
}

TEST_CASE("stats prints the truss/core comparison") {
    Workspace ws;
    REQUIRE(ws.run("gen fig2 --out " + ws.path("g.edges")).code == 0);
    RunOutput r = ws.run("stats " + ws.path("g.edges"));
    CHECK(r.code == 0);
    CHECK(r.out.find("k_max=5") != std::string::npos);
    CHECK(r.out.find("c_max=4") != std::string::npos);
    CHECK(r.out.find("containment") != std::string::npos);
}

TEST_CASE("adjacency-list inputs work end to end") {
    Workspace ws;
    Graph g = fig2_graph();
    save_graph_file(ws.path("g.adj"), g, GraphFormat::adjacency_list);
    RunOutput r = ws.run("decompose " + ws.path("g.adj") +
                         " --format adjacency-list --out " + ws.path("run"));
    CHECK(r.code == 0);
    CHECK(r.out.find("k_max=5") != std::string::npos);
}

TEST_CASE("argument and input problems exit with 2") {
    Workspace ws;
    CHECK(ws.run("decompose " + ws.path("missing.edges")).code == 2);
    REQUIRE(ws.run("gen fig2 --out " + ws.path("g.edges")).code == 0);
    CHECK(ws.run("decompose " + ws.path("g.edges") + " --algo nosuch").code ==
          2);
    CHECK(ws.run("decompose " + ws.path("g.edges") + " --format nosuch")
              .code == 2);
    CHECK(ws.run("decompose " + ws.path("g.edges") + " --algo topdown").code ==
          2); // needs --t or --all
    CHECK(ws.run("decompose " + ws.path("g.edges") +
                 " --algo topdown --t 2 --all")
              .code == 2);
    CHECK(ws.run("decompose " + ws.path("g.edges") + " --algo topdown --t 0")
              .code == 2);
    CHECK(ws.run("decompose " + ws.path("g.edges") + " --algo inmem --t 2")
              .code == 2);
    CHECK(ws.run("nosuchcommand").code == 2);

    std::ofstream bad(ws.path("bad.edges"));
    bad << "1 2\nnot an edge\n";
    bad.close();
    CHECK(ws.run("decompose " + ws.path("bad.edges")).code == 2);
}

TEST_CASE("infeasible budgets exit with 3") {
    Workspace ws;
    REQUIRE(ws.run("gen fig2 --out " + ws.path("g.edges")).code == 0);
    // The busiest vertex needs 15 units; 6 cannot fit any partition.
    CHECK(ws.run("decompose " + ws.path("g.edges") +
                 " --algo bottomup --memory 6 --out " + ws.path("run"))
              .code == 3);
}

TEST_CASE("help exits cleanly") {
    Workspace ws;
    CHECK(ws.run("--help").code == 0);
    CHECK(ws.run("decompose --help").code == 0);
}

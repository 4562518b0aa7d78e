// End-to-end checks of the CLI binary: exit codes, file round trips, and
// byte-identical output for identical seeded invocations.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "[ok] " << what << "\n";
    } else {
        std::cout << "[FAIL] " << what << "\n";
        ++failures;
    }
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_checks <path-to-maxcut-stream>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string dir = "cli_checks_tmp";
    if (run("rm -rf " + dir + " && mkdir -p " + dir) != 0) {
        std::cerr << "cannot prepare temp dir\n";
        return 2;
    }

    check(run(cli + " --help > " + dir + "/help.txt") == 0, "--help exits 0");
    check(run(cli + " definitely-not-a-command 2> /dev/null") == 2, "unknown subcommand exits 2");
    check(run(cli + " run-insertion 2> /dev/null") == 2, "missing required flags exit 2");

    // generate a small line instance and round-trip it
    check(run(cli + " gen --kind uniform_line --n 12 --span 9 --seed 3 --out " + dir +
              "/line > /dev/null") == 0,
          "gen uniform_line");
    check(run(cli + " verify-metric --metric " + dir + "/line.metric > /dev/null") == 0,
          "verify-metric accepts the generated line");

    // exact on the 3-point line prints 3
    write_file(dir + "/tiny.metric", "euclidean 1\n0 0\n1 1\n2 2\n");
    write_file(dir + "/tiny.stream", "+ 0\n+ 1\n+ 2\n");
    check(run(cli + " exact --metric " + dir + "/tiny.metric --stream " + dir +
              "/tiny.stream > " + dir + "/exact.txt") == 0,
          "exact runs");
    check(slurp(dir + "/exact.txt") == "3\n", "exact prints 3 on the 3-point line");

    // validation failures exit 3
    write_file(dir + "/bad.stream", "- 5\n");
    check(run(cli + " exact --metric " + dir + "/tiny.metric --stream " + dir +
              "/bad.stream 2> /dev/null") == 3,
          "delete-before-insert exits 3");
    write_file(dir + "/empty.stream", "");
    check(run(cli + " run-insertion --metric " + dir + "/tiny.metric --stream " + dir +
              "/empty.stream --capacity 4 2> /dev/null") == 3,
          "empty stream exits 3");
    check(run(cli + " exact --metric " + dir + "/missing.metric 2> /dev/null") == 3,
          "missing metric file exits 3");
    write_file(dir + "/broken.metric", "matrix 3\n0 1 5\n1 0 1\n5 1 0\n");
    check(run(cli + " verify-metric --metric " + dir + "/broken.metric > /dev/null") == 3,
          "verify-metric reports a broken triangle with exit 3");

    // insertion run: determinism of CSV bytes for a fixed seed
    const std::string run_cmd = cli + " run-insertion --metric " + dir + "/line.metric" +
                                " --stream " + dir + "/line.stream --epsilon 0.25 --samples 16" +
                                " --replicas 3 --seed 9 --exact --format csv --out " + dir;
    check(run(run_cmd + "/a.csv") == 0, "run-insertion (csv)");
    check(run(run_cmd + "/b.csv") == 0, "run-insertion repeat");
    check(!slurp(dir + "/a.csv").empty() && slurp(dir + "/a.csv") == slurp(dir + "/b.csv"),
          "identical invocations give byte-identical CSV");

    // window run over the same instance
    check(run(cli + " run-window --metric " + dir + "/line.metric --stream " + dir +
              "/line.stream --window 5 --epsilon 0.2 --samples 8 --replicas 1 --seed 4 " +
              "--exact --format json --out " + dir + "/w.json") == 0,
          "run-window (json)");
    check(slurp(dir + "/w.json").find("\"records\"") != std::string::npos,
          "window json carries records");

    // adversarial instance end to end
    check(run(cli + " gen --kind adversarial --n 27 --seed 5 --out " + dir +
              "/adv > /dev/null") == 0,
          "gen adversarial");
    check(run(cli + " verify-metric --metric " + dir + "/adv.metric > /dev/null") == 0,
          "adversarial metric is valid");
    check(run(cli + " adversary-demo --n 27 --seed 5 --samples 16 > " + dir + "/demo.txt") == 0,
          "adversary-demo runs");
    check(slurp(dir + "/demo.txt").find("store-everything") != std::string::npos,
          "demo reports the store-everything path");

    // bench emits one row per configuration
    check(run(cli + " bench --metric " + dir + "/line.metric --stream " + dir +
              "/line.stream --epsilons 0.25 --samples-list 8 --replicas-list 1 --seeds 2" +
              " --exact --out " + dir + "/bench.csv") == 0,
          "bench runs");
    {
        std::istringstream rows(slurp(dir + "/bench.csv"));
        std::string line;
        int count = 0;
        while (std::getline(rows, line))
            if (!line.empty()) ++count;
        check(count == 3, "bench: header plus one row per (config, seed)");
    }

    std::cout << (failures ? "FAILURES: " : "all cli checks passed: ")
              << (failures ? std::to_string(failures) : "") << "\n";
    return failures ? 1 : 0;
}

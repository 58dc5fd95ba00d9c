#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "twostage_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(TWOSTAGE_CLI) + " " + args + " > " +
                            (kWork / "stdout.txt").string() + " 2> " + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Workdir {
    Workdir() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

}  // namespace

TEST_CASE_FIXTURE(Workdir, "generate: lines, byte-stable, unknown name") {
    const auto a = kWork / "a.csv", b = kWork / "b.csv";
    CHECK(run("generate lines --n 1000 --segments 10 --seed 7 -o " + a.string()) == 0);
    CHECK(slurp(kWork / "stdout.txt").find("N=1000 A=2 L=10") != std::string::npos);
    CHECK(run("generate lines --n 1000 --segments 10 --seed 7 -o " + b.string()) == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);

    CHECK(run("generate nosuch") == 2);
    CHECK(slurp(kWork / "stderr.txt").find("banana") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "run: report with the requested runs; errors map to exit codes") {
    const auto data = kWork / "lines.csv";
    REQUIRE(run("generate lines --n 1000 --seed 7 -o " + data.string()) == 0);
    const auto report = kWork / "r.json";
    CHECK(run("run -m kmeans -d " + data.string() + " --runs 2 -o " + report.string()) == 0);
    const auto json = slurp(report);
    CHECK(json.find("\"entropies\"") != std::string::npos);
    CHECK(json.find("\"config\"") != std::string::npos);

    CHECK(run("run -m kmeans -d " + (kWork / "missing.csv").string()) == 2);
    CHECK(slurp(kWork / "stderr.txt").find("missing.csv") != std::string::npos);
    CHECK(run("run -m nosuch") == 2);
    CHECK(run("run --runs 1") == 2);
    CHECK(run("--frobnicate") == 2);

    std::ofstream(kWork / "bad.ini") << "[soinn]\nlambda = 0\n";
    CHECK(run("run -c " + (kWork / "bad.ini").string()) == 2);
    CHECK(slurp(kWork / "stderr.txt").find("soinn") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "matrix: bundle layout, identical reruns, report") {
    std::ofstream(kWork / "m.ini") << "[run]\nseed = 3\nruns = 2\nfolds = 3\n"
                                      "methods = kmeans, somk, soinak\n"
                                      "datasets = simple:d=20:n=40\n"
                                      "[som]\nrows = 5\ncols = 5\n";
    const auto cfg = (kWork / "m.ini").string();
    CHECK(run("matrix -c " + cfg + " -o " + (kWork / "b1").string()) == 0);
    CHECK(run("matrix -c " + cfg + " -o " + (kWork / "b2").string()) == 0);
    for (const char* f : {"table.csv", "ttest.csv", "ci_simple_d_20_n_40.csv", "reports.json",
                          "config.ini", "failures.csv"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(kWork / "b1" / f));
        CHECK(slurp(kWork / "b1" / f) == slurp(kWork / "b2" / f));
    }
    CHECK(fs::exists(kWork / "b1" / "timing.csv"));
    const auto tt = slurp(kWork / "b1" / "ttest.csv");
    CHECK(std::count(tt.begin(), tt.end(), '\n') == 1 + 3);
    CHECK(slurp(kWork / "b1" / "ci_simple_d_20_n_40.csv").rfind("method,mean,lo,hi\n", 0) == 0);

    CHECK(run("report " + (kWork / "b1").string()) == 0);
    CHECK(slurp(kWork / "stdout.txt").find("somk") != std::string::npos);
    CHECK(run("report " + (kWork / "b1" / "table.csv").string()) == 0);
    CHECK(run("report " + (kWork / "nothing").string()) == 2);

    // env var picks the default output directory
    const std::string env = "TWOSTAGE_OUT_DIR=" + (kWork / "envout").string() + " ";
    const std::string cmd = env + TWOSTAGE_CLI + " generate banana --n 10 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(kWork / "envout" / "banana.csv"));
}

TEST_CASE_FIXTURE(Workdir, "matrix: a failing cell is reported and the rest proceed") {
    CHECK(run("matrix --methods kmeans,somk --datasets simple:n=20:d=20 --runs 2 --folds 2 "
              "--nc 12 --som-rows 3 --som-cols 3 -o " +
              (kWork / "bf").string()) == 1);
    const auto failures = slurp(kWork / "bf" / "failures.csv");
    CHECK(failures.find("somk") != std::string::npos);
    CHECK(slurp(kWork / "bf" / "table.csv").find("kmeans") != std::string::npos);
}

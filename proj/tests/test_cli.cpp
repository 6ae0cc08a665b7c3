#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string kCli = QGRAPH_CLI_PATH;
const std::string kFixtures = QGRAPH_FIXTURES_DIR;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::string temp_path(const std::string& stem) {
    static int counter = 0;
    return (std::filesystem::temp_directory_path() /
            (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++)))
        .string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string out = temp_path("cli_out");
    const std::string cmd = env_prefix + kCli + " " + args + " >" + out + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.output = slurp(out);
    std::filesystem::remove(out);
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string g15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

}  // namespace

TEST_CASE("spectrum command lists the figure-8 eigenvalues") {
    const auto r = run_cli("spectrum --graph " + kFixtures + "/fig8.json" +
                           " --lambda-min -1 --lambda-max 50");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"index", "lambda", "multiplicity"});
    CHECK(std::abs(std::stod(rows[1][1])) < 1e-8);
    CHECK(rows[1][2] == "1");
    CHECK(std::abs(std::stod(rows[2][1]) - M_PI * M_PI) < 1e-7);
    CHECK(rows[2][2] == "1");
    CHECK(std::abs(std::stod(rows[3][1]) - 4.0 * M_PI * M_PI) < 1e-7);
    CHECK(rows[3][2] == "3");
    // 15-significant-digit format: the printed token is the shortest %.15g form.
    for (int i = 1; i <= 3; ++i)
        CHECK(rows[i][1] == g15(std::stod(rows[i][1])));
}

TEST_CASE("spectrum output is byte-identical across runs and thread counts") {
    const std::string args = "spectrum --graph " + kFixtures + "/bouquet13.json" +
                             " --lambda-min -1 --lambda-max 30";
    const auto serial = run_cli(args, "QGRAPH_THREADS=1 ");
    const auto threaded = run_cli(args, "QGRAPH_THREADS=4 ");
    REQUIRE(serial.exit_code == 0);
    REQUIRE(threaded.exit_code == 0);
    CHECK(serial.output == threaded.output);

    const auto again = run_cli(args, "QGRAPH_THREADS=4 ");
    CHECK(threaded.output == again.output);
}

TEST_CASE("det-scan brackets the first loop eigenvalue") {
    const auto r = run_cli("det-scan --graph " + kFixtures + "/fig8.json" +
                           " --lambda-min 0 --lambda-max 50 --points 101");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 102);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "det_regular", "sigma_min"});
    bool flip_near_pi2 = false;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double prev_l = std::stod(rows[i - 1][0]);
        const double prev_d = std::stod(rows[i - 1][1]);
        const double cur_d = std::stod(rows[i][1]);
        if (prev_d * cur_d < 0.0 && std::abs(prev_l - M_PI * M_PI) < 1.0)
            flip_near_pi2 = true;
        CHECK(std::stod(rows[i][2]) >= 0.0);
    }
    CHECK(flip_near_pi2);
}

TEST_CASE("forests command lists odd saturated forests") {
    const auto r = run_cli("forests --graph " + kFixtures + "/bouquet13.json");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"index", "edges", "kappa", "incidence_det"});
    CHECK(rows[1][1] == "e1_1;e2_1;e2_2");
    CHECK(rows[4][1] == "e2_1;e2_2;e2_3");
    for (int i = 1; i <= 4; ++i) {
        CHECK(rows[i][2] == "1");
        CHECK(std::abs(std::stoll(rows[i][3])) == 2);
    }

    // The even 4-cycle has no odd saturated forest.
    const auto c4 = run_cli("forests --graph " + kFixtures + "/cycle4.json");
    REQUIRE(c4.exit_code == 0);
    CHECK(parse_csv(c4.output).size() == 1);
}

TEST_CASE("verify-expansion error shrinks with k") {
    const auto r = run_cli("verify-expansion --graph " + kFixtures +
                           "/bouquet13_q.json --d 1 --k-min 10 --k-max 20");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0][4] == "scaled_error");
    const double first = std::stod(rows[1][4]);
    const double last = std::stod(rows[11][4]);
    CHECK(first < 1.0);
    CHECK(last < first);
}

TEST_CASE("clusters command reports shifts against the polynomial root") {
    const auto r = run_cli("clusters --graph " + kFixtures +
                           "/fig8_q10.json --k-min 2 --k-max 4");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "k");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][2] == "1");                       // total multiplicity
        CHECK(rows[i][4] == "1");                       // member multiplicity
        CHECK(std::stod(rows[i][6]) == Catch::Approx(0.5));   // nearest root
        CHECK(std::stod(rows[i][7]) < 0.05);            // gap to the root
    }
    // Shift approaches the root monotonically over these k.
    CHECK(std::stod(rows[3][7]) < std::stod(rows[1][7]));
}

TEST_CASE("hypothesis check on the zero potential") {
    const auto r = run_cli("ambarzumian-check --graph " + kFixtures + "/fig8.json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("monomial: true") != std::string::npos);
    CHECK(r.output.find("verdict: consistent with q = 0 hypotheses") != std::string::npos);
}

TEST_CASE("hypothesis check flags a non-monomial shift polynomial") {
    const auto r = run_cli("ambarzumian-check --graph " + kFixtures + "/fig8_q10.json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("monomial: false") != std::string::npos);
    CHECK(r.output.find("verdict: cluster hypothesis violated") != std::string::npos);
}

TEST_CASE("hypothesis check flags a shifted spectral bottom") {
    // p(d) = 2d is a monomial, yet the spectrum does not start at zero: the
    // spectral hypothesis is the one that fails.
    const auto r = run_cli("ambarzumian-check --graph " + kFixtures +
                           "/fig8_pm1.json --k-max 30");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("monomial: true") != std::string::npos);
    CHECK(r.output.find("verdict: spectrum hypothesis violated: lambda_min != 0") !=
          std::string::npos);
    CHECK(r.output.find("max_shift_at_k30:") != std::string::npos);
}

TEST_CASE("exit codes") {
    SECTION("missing file is a validation error") {
        const auto r = run_cli("spectrum --graph /nonexistent.json");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("error:") != std::string::npos);
    }

    SECTION("malformed arguments are a validation error") {
        CHECK(run_cli("spectrum").exit_code == 1);
        CHECK(run_cli("no-such-command").exit_code == 1);
    }

    SECTION("non-bouquet input to clusters is a validation error") {
        // A theta graph is connected but not a bouquet of cycles.
        const std::string path = temp_path("theta");
        {
            std::ofstream out(path);
            out << R"({"vertices": ["a", "b"], "edges": [
                {"id": "e1", "from": "a", "to": "b"},
                {"id": "e2", "from": "a", "to": "b"},
                {"id": "e3", "from": "a", "to": "b"}]})";
        }
        const auto r = run_cli("ambarzumian-check --graph " + path);
        std::filesystem::remove(path);
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("not a bouquet") != std::string::npos);
    }

    SECTION("oversized enumeration exits with the guard code") {
        const std::string path = temp_path("big");
        {
            std::ofstream out(path);
            out << R"({"vertices": [)";
            for (int v = 0; v < 15; ++v)
                out << (v ? "," : "") << "\"v" << v << "\"";
            out << R"(], "edges": [)";
            int eid = 0;
            for (int v = 1; v < 15; ++v)
                out << (eid ? "," : "") << R"({"id": "e)" << eid++ << R"(", "from": "v)"
                    << (v - 1) << R"(", "to": "v)" << v << "\"}";
            for (int x = 0; x < 16; ++x)
                out << R"(,{"id": "e)" << eid++ << R"(", "from": "v0", "to": "v0"})";
            out << "]}";
        }
        const auto r = run_cli("forests --graph " + path);
        std::filesystem::remove(path);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("guard") != std::string::npos);
    }
}

TEST_CASE("output file option") {
    const std::string out_file = temp_path("csv");
    const auto r = run_cli("spectrum --graph " + kFixtures +
                           "/fig8.json --lambda-min -1 --lambda-max 12 --output " + out_file);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.empty());
    const auto rows = parse_csv(slurp(out_file));
    std::filesystem::remove(out_file);
    REQUIRE(rows.size() == 3);
    CHECK(std::abs(std::stod(rows[2][1]) - M_PI * M_PI) < 1e-7);
}

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpc/optimizer.hpp"
#include "qpc/report.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QPC_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) {
        res.output.append(buf, got);
    }
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

// column lookup on a header + single data row table
double cell(const std::vector<std::vector<std::string>>& rows, const std::string& column) {
    REQUIRE(rows.size() >= 2);
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
        if (rows[0][c] == column) return std::stod(rows[1][c]);
    }
    FAIL("column not found: ", column);
    return 0.0;
}

}  // namespace

TEST_CASE("cli: dist on a single qubit mirrors the qubit-pair table") {
    const CliResult res = run_cli("dist --n 1 --m 1 --eps 1e-3 --pc 0.05 --l0 1.0");
    REQUIRE(res.exit_code == 0);
    std::map<std::string, std::string> values;
    for (const auto& row : parse_csv(res.output)) {
        if (row.size() == 3) values[row[0] + "|" + row[1]] = row[2];
    }
    CHECK(values.at("encoded|+1/+1") == values.at("qubit_pair|eps_I"));
    CHECK(values.at("encoded|+1/-1") == values.at("qubit_pair|eps_X"));
    CHECK(values.at("encoded|-1/-1") == values.at("qubit_pair|eps_Y"));
    CHECK(values.at("encoded|-1/+1") == values.at("qubit_pair|eps_Z"));
    CHECK(values.at("encoded|0/0") == values.at("qubit_pair|eps_e"));
    CHECK(std::stod(values.at("row|sum")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(values.at("encoded|sum")) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli: dist rejects parameters outside the model") {
    const CliResult res = run_cli("dist --n 2 --m 2 --eps 0.9 --pc 0 --l0 1.0");
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("error") != std::string::npos);
}

TEST_CASE("cli: missing required parameters exit with the config code") {
    CHECK(run_cli("dist --m 2").exit_code == 2);
    CHECK(run_cli("rate --n 2 --m 2").exit_code == 2);  // no --ltot
    CHECK(run_cli("").exit_code == 2);                  // no subcommand
    CHECK(run_cli("dist --n 2 --m 2 --bogus 1").exit_code == 2);
}

TEST_CASE("cli: rate reproduces a resource-table row") {
    const CliResult res = run_cli("rate --n 13 --m 6 --eps 1e-3 --pc 0 --l0 1.5 --ltot 10000");
    REQUIRE(res.exit_code == 0);
    const auto rows = parse_csv(res.output);
    CHECK(cell(rows, "r_t0") == doctest::Approx(0.78).epsilon(0.04));
    CHECK(cell(rows, "N") == 6667);
    CHECK(cell(rows, "eps_en") > 0.0);
}

TEST_CASE("cli: near-perfect channel saturates the rate") {
    const CliResult res =
        run_cli("rate --n 3 --m 3 --eps 0 --pc 0 --l0 1e-4 --ltot 1e-4");
    REQUIRE(res.exit_code == 0);
    CHECK(cell(parse_csv(res.output), "r_t0") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cli: json output round-trips through the schema") {
    const CliResult res =
        run_cli("rate --n 13 --m 6 --eps 1e-3 --pc 0 --l0 1.5 --ltot 10000 --format json");
    REQUIRE(res.exit_code == 0);
    const auto doc = nlohmann::json::parse(res.output);
    CHECK_NOTHROW(qpc::validate_output_json(doc));
    CHECK(doc["result"]["r_t0"].get<double>() == doctest::Approx(0.78).epsilon(0.04));
}

TEST_CASE("cli: identical configs produce byte-identical output") {
    const std::string cmd = "mc --n 2 --m 2 --eps 1e-2 --pc 0.05 --l0 1.0 --samples 20000 --seed 7";
    const CliResult a = run_cli(cmd);
    const CliResult b = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);

    const std::string opt =
        "optimize --ltot 1000 --eps 1e-3 --pc 0 --n-max 12 --m-max 6 --l0-min 1.5 --l0-max 2.5";
    const CliResult c = run_cli(opt);
    const CliResult d = run_cli(opt + " --threads 2");
    REQUIRE(c.exit_code == 0);
    CHECK(c.output == d.output);
}

TEST_CASE("cli: config files supply defaults and flags override them") {
    const std::string path = "qpc_cli_test_config.json";
    {
        std::ofstream cfg(path);
        cfg << R"({"n": 13, "m": 6, "eps": 1e-3, "pc": 0, "l0": 1.5, "ltot": 10000})";
    }
    const CliResult from_cfg = run_cli("rate --config " + path);
    const CliResult from_flags =
        run_cli("rate --n 13 --m 6 --eps 1e-3 --pc 0 --l0 1.5 --ltot 10000");
    REQUIRE(from_cfg.exit_code == 0);
    CHECK(from_cfg.output == from_flags.output);

    const CliResult overridden = run_cli("rate --config " + path + " --l0 2.0");
    REQUIRE(overridden.exit_code == 0);
    CHECK(cell(parse_csv(overridden.output), "L0_km") == 2.0);
    std::remove(path.c_str());
}

TEST_CASE("cli: optimize emits one row and reports infeasibility via exit code") {
    const CliResult ok = run_cli(
        "optimize --ltot 1000 --eps 1e-3 --pc 0 --n-max 12 --m-max 6 --l0-min 1.6 --l0-max 2.4");
    REQUIRE(ok.exit_code == 0);
    const auto rows = parse_csv(ok.output);
    REQUIRE(rows.size() == 2);
    CHECK(cell(rows, "cost") > 0.0);

    const CliResult bad = run_cli(
        "optimize --ltot 2000 --eps 0.3 --pc 0.6 --n-max 3 --m-max 3 --l0-min 3 --l0-max 4");
    CHECK(bad.exit_code == 3);
    CHECK(bad.output.find("no_key") != std::string::npos);
}

TEST_CASE("cli: threshold matches the library search") {
    const CliResult res =
        run_cli("threshold --eps 1e-4 --loss 0 --target 2e-14 --n-max 40 --m-max 12");
    REQUIRE(res.exit_code == 0);
    const auto rows = parse_csv(res.output);

    qpc::ThresholdQuery query;
    query.eps = 1e-4;
    query.loss = 0.0;
    query.target = 2e-14;
    query.n_max = 40;
    query.m_max = 12;
    const qpc::ThresholdResult expect = qpc::threshold_code(query);
    CHECK(cell(rows, "n") == expect.n);
    CHECK(cell(rows, "m") == expect.m);
    CHECK(cell(rows, "qubits") == expect.n * expect.m);

    const CliResult none =
        run_cli("threshold --eps 1e-2 --loss 0 --target 1e-30 --n-max 4 --m-max 3");
    CHECK(none.exit_code == 3);
    CHECK(none.output.find("not_achievable") != std::string::npos);
}

TEST_CASE("cli: mc emits nine estimate rows with analytic comparisons") {
    const CliResult res =
        run_cli("mc --n 3 --m 3 --eps 1e-2 --pc 0.05 --l0 1.0 --samples 50000 --seed 3");
    REQUIRE(res.exit_code == 0);
    const auto rows = parse_csv(res.output);
    REQUIRE(rows.size() == 10);  // header + nine entries
    int z_col = -1;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
        if (rows[0][c] == "z") z_col = static_cast<int>(c);
    }
    REQUIRE(z_col >= 0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::fabs(std::stod(rows[r][static_cast<std::size_t>(z_col)])) <= 5.0);
    }
}

TEST_CASE("cli: sweeps emit one row per point and keep running through no-key points") {
    const CliResult res = run_cli(
        "sweep --ltot-list 500,1000 --eps 1e-3 --pc 0 --n-max 12 --m-max 6 "
        "--l0-min 1.4 --l0-max 2.2 --l0-step 0.2 --fit");
    REQUIRE(res.exit_code == 0);
    const auto rows = parse_csv(res.output);
    REQUIRE(rows.size() == 3);  // header + two points
    CHECK(res.output.find("# polylog_fit") != std::string::npos);

    const CliResult lossy = run_cli(
        "sweep --ltot-list 3000 --eps 0.3 --pc 0.6 --n-max 3 --m-max 3 "
        "--l0-min 3 --l0-max 4 --l0-step 0.5");
    REQUIRE(lossy.exit_code == 0);  // sweeps finish even when points fail
    CHECK(lossy.output.find("no_key") != std::string::npos);
}

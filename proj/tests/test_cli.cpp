#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "hent/cli.hpp"
#include "hent/error.hpp"

using namespace hent;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hent_cli_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

int run(const std::string& args, std::string* err_out = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(split(args), out, err);
    if (err_out) *err_out = err.str();
    return code;
}

}  // namespace

TEST_CASE("parse: Monte Carlo echo run") {
    const RunConfig c = parse_config(
        split("--mode mc --noise static --sigma 1 --protocol echo --tbar 4 --tmax 8 --points 801 --ntraj 100000 --seed 7"));
    CHECK(c.mode == RunMode::MonteCarlo);
    REQUIRE(c.noise.has_value());
    CHECK(c.noise->kind == NoiseKind::Static);
    CHECK(c.protocol.kind == PulseProtocol::Kind::Echo);
    CHECK(c.protocol.interval == 4.0);
    CHECK(c.points == 801);
    CHECK(c.n_traj == 100000);
    CHECK(c.master_seed == 7);
    CHECK(c.output_path == "hent_mc.csv");
}

TEST_CASE("parse: analytic PDD run with defaults") {
    const RunConfig c = parse_config(split("--mode analytic --noise ou --sigma 1 --tau 20 --protocol pdd --dt-pulse 0.25"));
    CHECK(c.mode == RunMode::Analytic);
    CHECK(c.noise->kind == NoiseKind::OrnsteinUhlenbeck);
    CHECK(c.noise->tau == 20.0);
    CHECK(c.protocol.kind == PulseProtocol::Kind::PDD);
    CHECK(c.protocol.interval == 0.25);
    CHECK(c.t_max == 8.0);
    CHECK(c.points == 801);
}

TEST_CASE("parse: scenario defaults") {
    const RunConfig jc = parse_config(split("--mode jc --g 2"));
    CHECK(jc.t_max == doctest::Approx(M_PI));
    CHECK(jc.points == 401);
    const RunConfig rf = parse_config(split("--mode randomfield"));
    CHECK(rf.t_max == doctest::Approx(4 * M_PI));
    CHECK(rf.points == 401);
    CHECK(rf.output_path == "hent_randomfield.csv");
}

TEST_CASE("parse: validation errors name the problem") {
    auto message = [](const std::string& args) {
        try {
            parse_config(split(args));
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("<no error>");
    };
    CHECK(message("--mode mc").find("noise") != std::string::npos);
    CHECK(message("--mode analytic --noise ou").find("tau") != std::string::npos);
    CHECK(message("--mode mc --noise static --protocol echo").find("tbar") != std::string::npos);
    CHECK(message("--mode mc --noise static --protocol pdd").find("dt-pulse") != std::string::npos);
    CHECK(message("--mode mc --noise static --protocol echo --tbar 4.005").find("4.005") != std::string::npos);
    CHECK(message("--mode mc --noise static --points 1") != "<no error>");
    CHECK(message("--mode mc --noise static --sigma -1") != "<no error>");
    CHECK(message("--mode mc --noise static --ntraj 0") != "<no error>");
    CHECK(message("--mode mc --noise static --bogus 3") != "<no error>");
    CHECK(message("--mode quantum") != "<no error>");
    CHECK(message("--noise static") != "<no error>");
}

TEST_CASE("config file with flag overrides") {
    TempDir dir;
    const std::string cfg = dir.file("run.conf");
    {
        std::ofstream os(cfg);
        os << "# echo run\nmode = analytic\nnoise = ou\nsigma = 1\ntau = 100\nprotocol = echo\ntbar = 4\npoints = 81\n";
    }
    const RunConfig c = parse_config(split("--config " + cfg + " --tau 200"));
    CHECK(c.mode == RunMode::Analytic);
    CHECK(c.noise->tau == 200.0);
    CHECK(c.protocol.interval == 4.0);
    CHECK(c.points == 81);

    const std::string bad = dir.file("bad.conf");
    {
        std::ofstream os(bad);
        os << "mode = jc\nunknown_key = 1\n";
    }
    CHECK_THROWS_AS(parse_config(split("--config " + bad)), ConfigError);
    CHECK_THROWS_AS(parse_config(split("--config " + dir.file("missing.conf") + " --mode jc")), ConfigError);
}

TEST_CASE("exit codes") {
    TempDir dir;
    std::string err;
    CHECK(run("--mode mc", &err) == kExitConfig);
    CHECK(err.find("noise") != std::string::npos);
    CHECK(run("--mode jc --nonsense") == kExitConfig);
    CHECK(run("--mode jc -o " + dir.file("no/such/dir/out.csv"), &err) == kExitIo);
    CHECK(run("--mode analytic --noise ou --tau 1 --quad-tol 1e-300 --points 5 -o " + dir.file("q.csv"), &err) ==
          kExitNumerical);
    CHECK(err.find("analytic") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.file("q.csv")));
    std::ostringstream out, e2;
    CHECK(run_cli({"--help"}, out, e2) == kExitOk);
    CHECK(out.str().find("--mode") != std::string::npos);
}

TEST_CASE("jc run writes the CSV and a consistent manifest") {
    TempDir dir;
    const std::string csv = dir.file("jc.csv");
    REQUIRE(run("--mode jc --points 401 -o " + csv) == kExitOk);
    const std::string text = slurp(csv);
    CHECK(text.find('\r') == std::string::npos);
    const auto rows = csv_cells(text);
    REQUIRE(rows.size() == 402);
    CHECK(rows[0] == csv_columns());
    CHECK(rows[0] == std::vector<std::string>{"t", "x", "concurrence", "e_f", "e_av", "e_hidden"});
    // g t = pi sits at row 201.
    CHECK(std::abs(std::stod(rows[201][1]) - M_PI) < 1e-11);
    CHECK(std::abs(std::stod(rows[201][3])) <= 1e-9);
    CHECK(std::stod(rows[1][3]) == 1.0);

    const auto manifest = nlohmann::json::parse(slurp(csv + ".manifest.json"));
    CHECK(manifest["tool"] == "hent");
    CHECK(manifest["version"] == kToolVersion);
    CHECK(manifest["config"]["mode"] == "jc");
    CHECK(manifest["x"] == "g*t");
    CHECK(manifest["rows"] == 401);
    CHECK(manifest["wall_clock_seconds"].get<double>() >= 0.0);
    for (std::size_t k = 0; k < rows[0].size(); ++k) {
        std::string column;
        for (std::size_t r = 1; r < rows.size(); ++r) column += rows[r][k] + "\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(column)));
        CHECK(manifest["checksums"][rows[0][k]] == std::string(buf));
    }
    CHECK_FALSE(fs::exists(csv + ".tmp"));
}

TEST_CASE("static echo run recovers full entanglement at the horizon") {
    TempDir dir;
    const std::string csv = dir.file("echo.csv");
    REQUIRE(run("--mode mc --noise static --sigma 1 --protocol echo --tbar 4 --points 161 --ntraj 100000 --seed 7 -o " +
                csv) == kExitOk);
    const auto rows = csv_cells(slurp(csv));
    CHECK(std::stod(rows.back()[1]) == 8.0);
    CHECK(std::abs(std::stod(rows.back()[3]) - 1.0) <= 0.01);
}

TEST_CASE("identical runs give byte-identical CSVs") {
    TempDir dir;
    const std::string args = "--mode mc --noise ou --sigma 1 --tau 3 --protocol pdd --dt-pulse 0.5 --points 81 --ntraj 3000 --seed 11";
    REQUIRE(run(args + " -o " + dir.file("a.csv")) == kExitOk);
    REQUIRE(run(args + " --threads 3 -o " + dir.file("b.csv")) == kExitOk);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
}

TEST_CASE("installed binary") {
    TempDir dir;
    const std::string exe = HENT_CLI_PATH;
    const std::string csv = dir.file("rf.csv");
    CHECK(std::system((exe + " --mode randomfield -o " + csv + " > /dev/null").c_str()) == 0);
    CHECK(fs::exists(csv));
    const int status = std::system((exe + " --mode mc > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == kExitConfig);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(M_PI) == "3.14159265359");
    CHECK(format_number(1e-20) == "1e-20");
}

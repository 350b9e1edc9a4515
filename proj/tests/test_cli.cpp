// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line tool: exit codes, file outputs and
// the determinism contract, driven through the real binary.

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sha256.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << content;
}

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "derw_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const std::string cmd =
        std::string(DERW_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.stdout_text = slurp(out);
    return result;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "derw_cli_test";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    spit(path, text);
    return path;
}

std::string base_config(const std::string& out_dir, const std::string& extra = "") {
    return "model.p = 0.9\n"
           "model.q = 0.5\n"
           "model.alpha.kind = constant\n"
           "model.alpha.value = 0.8\n"
           "model.beta.kind = constant\n"
           "model.beta.value = 0.7\n"
           "run.n_max = 500\n"
           "run.checkpoints = [1, 5, 100, 500]\n"
           "run.n_paths = 40\n"
           "run.master_seed = 11\n"
           "output.directory = " + out_dir + "\n" + extra;
}

}  // namespace

TEST_CASE("cli: regime classification lines and exit codes") {
    const auto strong = write_config("strong.conf", base_config("/tmp/derw_cli_out/regime"));
    auto r = run_cli("regime --config " + strong.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("superdiffusive, strong elephant, Theorem 3(I)") != std::string::npos);

    const auto diffusive = write_config("diffusive.conf",
                                        "model.p = 0.5\nmodel.q = 0.5\n"
                                        "model.alpha.kind = constant\nmodel.alpha.value = 0.9\n"
                                        "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
                                        "run.n_max = 10\n"
                                        "output.directory = /tmp/derw_cli_out/regime\n");
    r = run_cli("regime --config " + diffusive.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("diffusive") != std::string::npos);
    CHECK(r.stdout_text.find("no theorem applies") != std::string::npos);

    const auto critical = write_config("critical.conf",
                                       "model.p = 0.75\nmodel.q = 0.5\n"
                                       "model.alpha.kind = constant\nmodel.alpha.value = 0.9\n"
                                       "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
                                       "run.n_max = 10\n"
                                       "output.directory = /tmp/derw_cli_out/regime\n");
    r = run_cli("regime --config " + critical.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("critical") != std::string::npos);
    CHECK(r.stdout_text.find("no theorem applies") != std::string::npos);

    const auto weak = write_config("weak.conf",
                                   "model.p = 0.8\nmodel.q = 0.5\n"
                                   "model.alpha.kind = constant\nmodel.alpha.value = 0.5\n"
                                   "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
                                   "run.n_max = 10\n"
                                   "output.directory = /tmp/derw_cli_out/regime\n");
    r = run_cli("regime --config " + weak.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("weak elephant, Theorem 1(I)") != std::string::npos);
}

TEST_CASE("cli: config errors exit 1 with diagnostics") {
    const auto bad_key = write_config(
        "bad_key.conf", base_config("/tmp/derw_cli_out/x", "run.n_pathz = 3\n"));
    auto r = run_cli("regime --config " + bad_key.string());
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("run.n_pathz") != std::string::npos);

    const auto bad_value = write_config(
        "bad_value.conf",
        "model.p = 1.4\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0.8\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.7\n"
        "run.n_max = 10\noutput.directory = /tmp/derw_cli_out/x\n");
    CHECK(run_cli("regime --config " + bad_value.string()).exit_code == 1);

    const auto zero_paths = write_config(
        "zero_paths.conf", base_config("/tmp/derw_cli_out/x", "") + "X");
    // (malformed trailing byte -> parse error, still exit 1)
    CHECK(run_cli("simulate --config " + zero_paths.string()).exit_code == 1);

    std::string zp = base_config("/tmp/derw_cli_out/x");
    zp.replace(zp.find("run.n_paths = 40"), 16, "run.n_paths = 0\n");
    const auto zero = write_config("zero.conf", zp);
    CHECK(run_cli("simulate --config " + zero.string()).exit_code == 1);
}

TEST_CASE("cli: theorem gate exits 2 naming Lemma 10") {
    const std::string weak_thm3 =
        "model.p = 0.8\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0.5\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
        "run.n_max = 200\nrun.checkpoints = [1, 2]\nrun.n_paths = 60\n"
        "analysis.scale_kind = thm3_strong\n"
        "output.directory = /tmp/derw_cli_out/gate\n";
    const auto path = write_config("weak_thm3.conf", weak_thm3);
    const auto r = run_cli("clt --config " + path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.stdout_text.find("Lemma 10") != std::string::npos);
}

TEST_CASE("cli: normalizers asked for A_inf^2 in a non-summable regime exits 2") {
    const std::string cfg =
        "model.p = 0.7\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0.9\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
        "run.n_max = 100\nanalysis.estimate_a_inf = always\n"
        "output.directory = /tmp/derw_cli_out/na\n";
    const auto path = write_config("na.conf", cfg);
    CHECK(run_cli("normalizers --config " + path.string()).exit_code == 2);
}

TEST_CASE("cli: normalizers table values") {
    const std::string cfg =
        "model.p = 1\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 1\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
        "run.n_max = 100\n"
        "output.directory = /tmp/derw_cli_out/norm\n";
    const auto path = write_config("norm.conf", cfg);
    REQUIRE(run_cli("normalizers --config " + path.string()).exit_code == 0);
    const std::string csv = slurp("/tmp/derw_cli_out/norm/normalizers.csv");
    // a_10 = 10 for p = 1, alpha = 1 (integer after rounding).
    std::stringstream ss(csv);
    std::string line;
    bool found = false;
    while (std::getline(ss, line)) {
        if (line.rfind("10,", 0) == 0) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const double a10 = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            CHECK(std::llround(a10) == 10);
            CHECK(a10 == doctest::Approx(10.0).epsilon(1e-12));
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("cli: simulate determinism across reruns and worker counts") {
    const auto cfg1 = write_config(
        "det1.conf", base_config("/tmp/derw_cli_out/det1", "run.worker_count = 1\n"));
    const auto cfg8 = write_config(
        "det8.conf", base_config("/tmp/derw_cli_out/det8", "run.worker_count = 8\n"));
    REQUIRE(run_cli("simulate --config " + cfg1.string()).exit_code == 0);
    REQUIRE(run_cli("simulate --config " + cfg8.string()).exit_code == 0);
    const std::string d1 = slurp("/tmp/derw_cli_out/det1/paths.csv");
    const std::string d8 = slurp("/tmp/derw_cli_out/det8/paths.csv");
    CHECK(derw_lab::sha256_hex(d1) == derw_lab::sha256_hex(d8));

    REQUIRE(run_cli("simulate --config " + cfg1.string()).exit_code == 0);
    CHECK(slurp("/tmp/derw_cli_out/det1/paths.csv") == d1);

    // A different seed must change the dump.
    REQUIRE(run_cli("simulate --config " + cfg1.string() + " --seed 999").exit_code == 0);
    CHECK(slurp("/tmp/derw_cli_out/det1/paths.csv") != d1);
}

TEST_CASE("cli: rerun from the manifest alone reproduces the dump") {
    const auto cfg = write_config(
        "manifest_src.conf", base_config("/tmp/derw_cli_out/man1"));
    REQUIRE(run_cli("simulate --config " + cfg.string()).exit_code == 0);
    const std::string original = slurp("/tmp/derw_cli_out/man1/paths.csv");
    const std::string manifest = slurp("/tmp/derw_cli_out/man1/run_manifest.json");

    const auto manifest_path = write_config("replay_manifest.json", manifest);
    REQUIRE(run_cli("simulate --config " + manifest_path.string() +
                    " --out-dir /tmp/derw_cli_out/man2")
                .exit_code == 0);
    CHECK(slurp("/tmp/derw_cli_out/man2/paths.csv") == original);
}

TEST_CASE("cli: lemmas with no elephant component reports exact unit ratios") {
    const std::string cfg =
        "model.p = 0.6\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.7\n"
        "run.n_max = 400\nrun.checkpoints = [10, 50, 200]\nrun.n_paths = 50\n"
        "output.directory = /tmp/derw_cli_out/lem\n";
    const auto path = write_config("lem.conf", cfg);
    REQUIRE(run_cli("lemmas --config " + path.string()).exit_code == 0);
    const std::string csv = slurp("/tmp/derw_cli_out/lem/lemmas.csv");
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);  // header
    int rows = 0;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        CHECK(line.substr(c1 + 1, c2 - c1 - 1) == "1");  // ratio_lemma1 exactly 1
        ++rows;
    }
    CHECK(rows == 3);
    // var_floor column: 1 - 0.4^2 = 0.84 exactly.
    CHECK(csv.find("0.84000000000000008") != std::string::npos);
}

TEST_CASE("cli: phase-scan emits the grid with threshold-exact flips") {
    const std::string cfg =
        "model.p = 0.9\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0.8\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.6\n"
        "run.n_max = 10\n"
        "scan.p.from = 0.8\nscan.p.to = 0.8\nscan.p.count = 2\n"
        "scan.alpha.from = 0.5\nscan.alpha.to = 0.9\nscan.alpha.count = 2\n"
        "output.directory = /tmp/derw_cli_out/scan\n";
    const auto path = write_config("scan.conf", cfg);
    REQUIRE(run_cli("phase-scan --config " + path.string()).exit_code == 0);
    const std::string csv = slurp("/tmp/derw_cli_out/scan/phase_scan.csv");
    CHECK(csv.find("0.5,superdiffusive,weak") != std::string::npos);
    CHECK(csv.find("0.90000000000000002,superdiffusive,strong") != std::string::npos);

    const auto no_grid = write_config("nogrid.conf", base_config("/tmp/derw_cli_out/scan"));
    CHECK(run_cli("phase-scan --config " + no_grid.string()).exit_code == 1);
}

TEST_CASE("cli: mconv emits dyadic pairs and drift statistics") {
    const auto cfg = write_config(
        "mconv.conf",
        base_config("/tmp/derw_cli_out/mconv", "run.worker_count = 2\n"));
    REQUIRE(run_cli("mconv --config " + cfg.string()).exit_code == 0);
    const std::string csv = slurp("/tmp/derw_cli_out/mconv/mconv.csv");
    CHECK(csv.find("n,n2,mean_sq_diff,std_err") == 0);
    CHECK(csv.find("\n64,128,") != std::string::npos);
    CHECK(csv.find("\n128,256,") != std::string::npos);
    const std::string js = slurp("/tmp/derw_cli_out/mconv/mconv.json");
    CHECK(js.find("m_hat_var") != std::string::npos);

    // Outside the finite-tail regime the command refuses with exit 2.
    const std::string weak =
        "model.p = 0.6\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0.5\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
        "run.n_max = 64\nrun.n_paths = 20\n"
        "output.directory = /tmp/derw_cli_out/mconv\n";
    const auto weak_cfg = write_config("mconv_weak.conf", weak);
    CHECK(run_cli("mconv --config " + weak_cfg.string()).exit_code == 2);
}

TEST_CASE("cli: lil reports quantiles and lists exclusions") {
    const std::string cfg =
        "model.p = 0.9\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 0.8\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.7\n"
        "run.n_max = 60000\nrun.n_paths = 120\nrun.master_seed = 3\n"
        "run.worker_count = 2\n"
        "analysis.lil_window = [10000, 60000]\n"
        "analysis.lil_points = 10\n"
        "analysis.rel_tol = 0.01\n"
        "output.directory = /tmp/derw_cli_out/lil\n";
    const auto path = write_config("lil.conf", cfg);
    const auto r = run_cli("lil --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp("/tmp/derw_cli_out/lil/lil.csv");
    CHECK(csv.find("quantile,+,0.5,") != std::string::npos);
    CHECK(csv.find("frac_above,-,1.5,") != std::string::npos);
    const std::string js = slurp("/tmp/derw_cli_out/lil/lil.json");
    CHECK(js.find("excluded_checkpoints") != std::string::npos);
    // The window top sits inside the truncation guard, so at least one
    // checkpoint must have been excluded and reported.
    CHECK(r.stdout_text.find("excluded checkpoint") != std::string::npos);

    // A window beyond n_max is a config error.
    std::string bad = cfg;
    bad.replace(bad.find("analysis.lil_window = [10000, 60000]"), 36,
                "analysis.lil_window = [10000, 90000]");
    const auto bad_cfg = write_config("lil_bad.conf", bad);
    CHECK(run_cli("lil --config " + bad_cfg.string()).exit_code == 1);
}

TEST_CASE("cli: classical-walk clt sanity run") {
    const std::string cfg =
        "model.p = 0.5\nmodel.q = 0.5\n"
        "model.alpha.kind = constant\nmodel.alpha.value = 1\n"
        "model.beta.kind = constant\nmodel.beta.value = 0.5\n"
        "run.n_max = 1024\nrun.checkpoints = [1024]\nrun.n_paths = 2000\n"
        "run.master_seed = 5\nrun.worker_count = 2\n"
        "analysis.scale_kind = thm1_weak\n"
        "output.directory = /tmp/derw_cli_out/classical\n";
    const auto path = write_config("classical.conf", cfg);
    const auto r = run_cli("clt --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp("/tmp/derw_cli_out/classical/clt.csv");
    std::stringstream ss(csv);
    std::string header;
    std::string row;
    REQUIRE(std::getline(ss, header));
    REQUIRE(std::getline(ss, row));
    // last column is ks_p
    const auto last_comma = row.rfind(',');
    CHECK(std::stod(row.substr(last_comma + 1)) > 1e-3);
}

TEST_CASE("cli: --format json suppresses csv files") {
    const auto cfg = write_config(
        "fmt.conf", base_config("/tmp/derw_cli_out/fmt", "analysis.scale_kind = thm1_weak\n"));
    fs::remove_all("/tmp/derw_cli_out/fmt");
    REQUIRE(run_cli("clt --config " + cfg.string() + " --format json").exit_code == 0);
    CHECK(!fs::exists("/tmp/derw_cli_out/fmt/clt.csv"));
    CHECK(fs::exists("/tmp/derw_cli_out/fmt/clt.json"));
    CHECK(fs::exists("/tmp/derw_cli_out/fmt/run_manifest.json"));
}

TEST_CASE("cli: DERW_LAB_THREADS is the workers fallback") {
    std::string cfg_text = base_config("/tmp/derw_cli_out/env");
    const auto cfg = write_config("env.conf", cfg_text);
    const fs::path dir = fs::temp_directory_path() / "derw_cli_test";
    const fs::path out = dir / "stdout_env.txt";
    const std::string cmd = std::string("DERW_LAB_THREADS=5 ") + DERW_CLI_PATH +
                            " simulate --config " + cfg.string() + " > " + out.string() + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp(out).find("5 worker(s)") != std::string::npos);
}

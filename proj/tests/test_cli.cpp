#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

#include "hslra/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = HSLRA_CLI_PATH;

int run_cli(const std::string& args, const std::string& log = "/dev/null") {
    const std::string cmd = kCli + " " + args + " >" + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path d =
        fs::temp_directory_path() / ("hslra-cli-" + tag + "-" + std::to_string(counter++));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("simulate writes deterministic bytes") {
    const fs::path d = fresh_dir("sim");
    const std::string base = "simulate --n=24 --sigma=0.5 --seed=9 --out=";
    CHECK(run_cli(base + (d / "a.csv").string()) == 0);
    CHECK(run_cli(base + (d / "b.csv").string()) == 0);
    CHECK(hslra::read_text((d / "a.csv").string()) == hslra::read_text((d / "b.csv").string()));

    CHECK(run_cli("simulate --n=10 --noise=none --out=" + (d / "clean.csv").string()) == 0);
    const std::vector<double> sig = hslra::read_series_csv((d / "clean.csv").string(), "signal");
    const std::vector<double> sum = hslra::read_series_csv((d / "clean.csv").string(), "sum");
    CHECK(sig == sum);

    CHECK(run_cli("simulate --n=6 --noise=alternating --c=0.2 --out=" +
                  (d / "alt.csv").string()) == 0);
    const std::vector<double> alt = hslra::read_series_csv((d / "alt.csv").string(), "noise");
    CHECK(alt == std::vector<double>{-0.2, 0.2, -0.2, 0.2, -0.2, 0.2});
}

TEST_CASE("approximate: ssa equals one cadzow iteration and reports convergence") {
    const fs::path d = fresh_dir("approx");
    const std::string input = (d / "in.csv").string();
    CHECK(run_cli("simulate --n=24 --sigma=0.4 --seed=3 --out=" + input) == 0);

    const std::string common = " --input=" + input + " --column=sum --rank=3 --window=12 --out=";
    CHECK(run_cli("approximate --method=ssa" + common + (d / "ssa").string()) == 0);
    CHECK(run_cli("approximate --method=cadzow --max-iters=1" + common +
                  (d / "one").string()) == 0);
    CHECK(hslra::read_text((d / "ssa" / "approximant.csv").string()) ==
          hslra::read_text((d / "one" / "approximant.csv").string()));

    // a clean finite-rank input is already a fixed point
    CHECK(run_cli("simulate --n=24 --noise=none --out=" + (d / "clean.csv").string()) == 0);
    CHECK(run_cli("approximate --input=" + (d / "clean.csv").string() +
                  " --column=signal --rank=2 --window=12 --out=" + (d / "fix").string()) == 0);
    const json rep = json::parse(hslra::read_text((d / "fix" / "report.json").string()));
    CHECK(rep["results"]["converged"] == true);
    CHECK(rep["results"]["iterations"] == 1);
    CHECK(rep["results"]["objective"].get<double>() < 1e-10);
    CHECK(rep["config"]["method"] == "cadzow");
    CHECK_FALSE(rep["config"].contains("out"));
    CHECK_FALSE(rep["config"].contains("threads"));
}

TEST_CASE("forecast: recurrence extension and zero horizon") {
    const fs::path d = fresh_dir("fc");
    const std::string input = (d / "fib.csv").string();
    hslra::write_csv(input, {"v"}, {{1, 1, 2, 3, 5, 8}});

    CHECK(run_cli("forecast --input=" + input +
                  " --mode=exact --rank=2 --horizon=2 --window=4 --out=" +
                  (d / "ext").string()) == 0);
    const std::vector<double> f =
        hslra::read_series_csv((d / "ext" / "forecast.csv").string(), "forecast");
    REQUIRE(f.size() == 2);
    CHECK(f[0] == doctest::Approx(13.0).epsilon(1e-10));
    CHECK(f[1] == doctest::Approx(21.0).epsilon(1e-10));

    CHECK(run_cli("forecast --input=" + input +
                  " --mode=exactfit --horizon=0 --window=3 --out=" + (d / "z").string()) == 0);
    CHECK(fs::exists(d / "z" / "completed.csv"));
    CHECK_FALSE(fs::exists(d / "z" / "forecast.csv"));
    const json rep = json::parse(hslra::read_text((d / "z" / "report.json").string()));
    CHECK(rep["results"]["converged"] == true);
    CHECK(rep["results"]["iterations"] == 0);
    CHECK(rep["results"]["rmse"].is_null());
}

TEST_CASE("exit codes distinguish argument, io, and numerical failures") {
    const fs::path d = fresh_dir("codes");
    CHECK(run_cli("approximate --input=" + (d / "missing.csv").string() +
                  " --out=" + (d / "x").string()) == 2);
    CHECK(run_cli("simulate --no-such-flag=1") == 1);
    CHECK(run_cli("experiment --name=uncharted --out=" + (d / "y").string()) == 1);
    CHECK(run_cli("simulate --n=-5") == 1);
    CHECK(run_cli("") == 1); // a subcommand is required

    // starving the splitting solver of iterations must surface as exit 3
    const std::string input = (d / "in.csv").string();
    CHECK(run_cli("simulate --n=20 --sigma=0.5 --seed=4 --out=" + input) == 0);
    CHECK(run_cli("forecast --input=" + input + " --column=sum" +
                  " --mode=regularized --gamma=0.5 --horizon=0 --window=10" +
                  " --admm-iters=1 --out=" + (d / "starved").string()) == 3);
    const json rep =
        json::parse(hslra::read_text((d / "starved" / "report.json").string()));
    CHECK(rep["results"]["converged"] == false);
}

TEST_CASE("config file fills gaps; flags and environment win") {
    const fs::path d = fresh_dir("cfg");
    hslra::write_text((d / "cfg.json").string(), R"({"n": 12, "sigma": 0.5, "seed": 2})");

    CHECK(run_cli("simulate --config=" + (d / "cfg.json").string() + " --sigma=0.7 --out=" +
                  (d / "mixed.csv").string()) == 0);
    CHECK(run_cli("simulate --n=12 --sigma=0.7 --seed=2 --out=" + (d / "flag.csv").string()) ==
          0);
    CHECK(hslra::read_text((d / "mixed.csv").string()) ==
          hslra::read_text((d / "flag.csv").string()));

    // environment variable beats the config file
    const std::string env_cmd = "HSLRA_SIGMA=0.9 " + kCli + " simulate --config=" +
                                (d / "cfg.json").string() + " --out=" +
                                (d / "env.csv").string() + " >/dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    CHECK(run_cli("simulate --n=12 --sigma=0.9 --seed=2 --out=" + (d / "envref.csv").string()) ==
          0);
    CHECK(hslra::read_text((d / "env.csv").string()) ==
          hslra::read_text((d / "envref.csv").string()));

    hslra::write_text((d / "bad.json").string(), R"({"no-such-key": 1})");
    CHECK(run_cli("simulate --config=" + (d / "bad.json").string()) == 1);
    hslra::write_text((d / "nest.json").string(), R"({"config": "other.json"})");
    CHECK(run_cli("simulate --config=" + (d / "nest.json").string()) == 1);
    hslra::write_text((d / "broken.json").string(), "{");
    CHECK(run_cli("simulate --config=" + (d / "broken.json").string()) == 2);
}

TEST_CASE("the echoed report config reproduces the run") {
    const fs::path d = fresh_dir("echo");
    const std::string input = (d / "in.csv").string();
    CHECK(run_cli("simulate --n=30 --sigma=0.6 --seed=11 --out=" + input) == 0);

    CHECK(run_cli("approximate --input=" + input +
                  " --column=sum --method=apbr --rank=3 --window=15 --trajectories=4" +
                  " --seed=5 --out=" + (d / "r1").string()) == 0);
    const json rep = json::parse(hslra::read_text((d / "r1" / "report.json").string()));
    hslra::write_text((d / "replay.json").string(), rep["config"].dump());

    CHECK(run_cli("approximate --config=" + (d / "replay.json").string() + " --input=" + input +
                  " --out=" + (d / "r2").string()) == 0);
    CHECK(hslra::read_text((d / "r1" / "approximant.csv").string()) ==
          hslra::read_text((d / "r2" / "approximant.csv").string()));
}

TEST_CASE("rankprofile finds the structured rank of a clean signal") {
    const fs::path d = fresh_dir("rank");
    const std::string clean = (d / "clean.csv").string();
    CHECK(run_cli("simulate --n=16 --noise=none --out=" + clean) == 0);
    CHECK(run_cli("rankprofile --input=" + clean + " --column=signal --out=" +
                  (d / "rp").string()) == 0);
    const json rep = json::parse(hslra::read_text((d / "rp" / "report.json").string()));
    CHECK(rep["results"]["plateau_detected"] == true);
    CHECK(rep["results"]["rank"] == 2);

    const std::string noisy = (d / "noisy.csv").string();
    CHECK(run_cli("simulate --n=16 --sigma=1.0 --seed=6 --out=" + noisy) == 0);
    CHECK(run_cli("rankprofile --input=" + noisy + " --column=sum --out=" +
                  (d / "rpn").string()) == 0);
    const json noisy_rep = json::parse(hslra::read_text((d / "rpn" / "report.json").string()));
    CHECK(noisy_rep["results"]["plateau_detected"] == false);
    CHECK(noisy_rep["results"]["rank"].is_null());
}

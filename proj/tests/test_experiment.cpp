#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "osa/errors.hpp"
#include "osa/experiment.hpp"
#include "osa/generators.hpp"

using namespace osa;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

// Runs the installed binary and captures stdout; stderr is dropped.
CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(OSA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    const int status = ::pclose(pipe);
    return CliResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("instance json round trip") {
    const Instance inst = validate_instance({2.0, 1.0}, {0.0, 1.0});
    const json j = instance_to_json(inst);
    CHECK(j["f"] == json::array({2.0, 1.0}));
    CHECK(j["c"] == json::array({0.0, 1.0}));
    const Instance back = instance_from_json(j);
    CHECK(back.f.weights() == inst.f.weights());
    CHECK(back.c.costs() == inst.c.costs());

    CHECK_THROWS_AS((void)instance_from_json(json::array()), Error);
    CHECK_THROWS_AS((void)instance_from_json(json{{"f", {1.0}}}), Error);
    CHECK_THROWS_AS((void)instance_from_json(json{{"f", {1.0}}, {"c", {"x"}}}), Error);

    const auto path = temp_file("osa_inst_roundtrip.json");
    save_instance(inst, path);
    const Instance loaded = load_instance(path);
    CHECK(loaded.f.weights() == inst.f.weights());
    std::filesystem::remove(path);

    CHECK_THROWS_AS((void)load_instance("/nonexistent/osa-instance.json"), Error);
}

TEST_CASE("evaluation report fields and bounds") {
    const Instance inst = validate_instance({2.0, 1.0}, {0.0, 1.0});
    EvaluationConfig cfg;
    cfg.rational = true;
    const json j = evaluate_instance(inst, cfg);

    CHECK(j["n"] == 2);
    CHECK(j["cost_class"] == "concave");
    CHECK(j["expected_cost"].get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(j["stderr"] == 0.0);
    CHECK(j["trials"] == 0);
    CHECK(j["opt"] == 1.0);
    CHECK(j["ratio"].get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(j["expected_cost_exact"] == "4/3");
    CHECK(j["opt_exact"] == "1");
    CHECK(j["ratio_exact"] == "4/3");
    CHECK(j["config"]["policy"] == "fcfs");
    CHECK(j["config"]["mode"] == "exact");

    REQUIRE(j["bounds"].is_array());
    bool saw_general = false;
    bool saw_concave = false;
    for (const auto& b : j["bounds"]) {
        if (b["kind"] == "general-hk") {
            saw_general = true;
            CHECK(b["value"].get<double>() == doctest::Approx(2.0));
            CHECK(b["target"] == "ratio");
            CHECK(b["satisfied"] == true);
        }
        if (b["kind"] == "concave-2") saw_concave = true;
    }
    CHECK(saw_general);
    CHECK(saw_concave);
}

TEST_CASE("codeword shaped costs get the guarantee bound") {
    const Instance inst = make_instance({FrequencySpec::Kind::Zipf, 5, 1.0},
                                        {CostSpec::Kind::Codeword, 5, 0, 0.0});
    const json j = bounds_report(inst);
    bool saw = false;
    for (const auto& b : j["bounds"]) {
        if (b["kind"] == "ohc-guarantee") {
            saw = true;
            CHECK(b["target"] == "expected_cost");
        }
    }
    CHECK(saw);
}

TEST_CASE("log shaped costs get the entropy bound when slack is given") {
    const Instance inst = make_instance({FrequencySpec::Kind::Uniform, 6, 0.0},
                                        {CostSpec::Kind::Log, 6, 0, 0.0});
    const json without = bounds_report(inst);
    for (const auto& b : without["bounds"]) CHECK(b["kind"] != "log-entropy");

    const json with = bounds_report(inst, 0.01);
    bool saw = false;
    for (const auto& b : with["bounds"])
        if (b["kind"] == "log-entropy") saw = true;
    CHECK(saw);
}

TEST_CASE("degenerate optimum reports a null ratio") {
    const Instance inst = validate_instance({1.0}, {0.0});
    const json j = evaluate_instance(inst, EvaluationConfig{});
    CHECK(j["opt"] == 0.0);
    CHECK(j["ratio"].is_null());
}

TEST_CASE("monte carlo evaluation reports are reproducible") {
    const Instance inst = make_instance({FrequencySpec::Kind::Zipf, 12, 1.0},
                                        {CostSpec::Kind::Linear, 12, 0, 0.0});
    EvaluationConfig cfg;
    cfg.mode = "mc";
    cfg.trials = 20000;
    cfg.seed = 9;
    const std::string a = evaluate_instance(inst, cfg).dump();
    const std::string b = evaluate_instance(inst, cfg).dump();
    CHECK(a == b);
    CHECK(evaluate_instance(inst, cfg)["trials"] == 20000);
}

TEST_CASE("invalid evaluation configs are rejected") {
    const Instance inst = validate_instance({1.0, 1.0}, {0.0, 1.0});
    EvaluationConfig cfg;
    cfg.policy = "bogus";
    CHECK_THROWS_AS((void)evaluate_instance(inst, cfg), Error);
    cfg.policy = "fcfs";
    cfg.mode = "sideways";
    CHECK_THROWS_AS((void)evaluate_instance(inst, cfg), Error);
}

TEST_CASE("sweeps carry one point per size") {
    const std::vector<SweepPoint> points =
        sweep_sizes({4, 8}, FrequencySpec::Kind::Zipf, 1.0, CostSpec::Kind::Log, 4000, 3, 2);
    REQUIRE(points.size() == 2);
    CHECK(points[0].n == 4);
    CHECK(points[1].n == 8);
    CHECK(points[0].entropy > 0.0);
    CHECK(points[0].ratio > 0.0);

    const std::string csv = sweep_to_csv(points);
    CHECK(csv.rfind("n,entropy,expected_cost,stderr,opt,ratio\n", 0) == 0);

    const json arr = sweep_to_json(points);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 2);
    CHECK(arr[0]["n"] == 4);

    // Same arguments, same bytes.
    const std::vector<SweepPoint> again =
        sweep_sizes({4, 8}, FrequencySpec::Kind::Zipf, 1.0, CostSpec::Kind::Log, 4000, 3, 1);
    CHECK(sweep_to_csv(again) == csv);
}

TEST_CASE("cli evaluate reports the golden ratio and bounds") {
    const auto path = temp_file("osa_cli_inst.json");
    save_instance(validate_instance({2.0, 1.0}, {0.0, 1.0}), path);

    const CliResult r = run_cli("evaluate --instance " + path.string() + " --rational");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j["ratio"].get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(j["expected_cost_exact"] == "4/3");

    const CliResult csv = run_cli("evaluate --instance " + path.string() + " --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.output.rfind("expected_cost,stderr,opt,ratio\n", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("cli exit codes separate usage from runtime failures") {
    CHECK(run_cli("evaluate --no-such-flag").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);  // a subcommand is required
    CHECK(run_cli("evaluate --instance /nonexistent/osa.json").exit_code == 2);
    CHECK(run_cli("ucode").exit_code == 1);  // needs --rank or --kraft
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli sample rows are seed deterministic") {
    const auto path = temp_file("osa_cli_sample.json");
    save_instance(validate_instance({5.0, 2.0, 1.0}, {0.0, 1.0, 2.0}), path);
    const std::string args = "sample --instance " + path.string() + " --count 5 --seed 11";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(std::count(a.output.begin(), a.output.end(), '\n') == 5);
    std::filesystem::remove(path);
}

TEST_CASE("cli ucode prints codeword facts") {
    const CliResult r = run_cli("ucode --rank 2");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j["length"] == 5);
    CHECK(j["bits"] == "01000");

    const json k = json::parse(run_cli("ucode --kraft 100").output);
    CHECK(k["kraft_sum"].get<double>() <= 1.0);
}

TEST_CASE("cli codec round trips a file") {
    const auto src = temp_file("osa_cli_codec_in.bin");
    const auto enc = temp_file("osa_cli_codec.ohc");
    const auto dec = temp_file("osa_cli_codec_out.bin");
    {
        std::ofstream out(src, std::ios::binary);
        for (int i = 0; i < 4096; ++i) out.put(static_cast<char>((i * 37 + i / 7) & 0xff));
    }
    const CliResult e =
        run_cli("ohc encode --in " + src.string() + " --out " + enc.string());
    REQUIRE(e.exit_code == 0);
    const json report = json::parse(e.output);
    CHECK(report["symbol_count"] == 4096);

    REQUIRE(run_cli("ohc decode --in " + enc.string() + " --out " + dec.string()).exit_code == 0);
    std::ifstream a(src, std::ios::binary), b(dec, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);

    const json rep = json::parse(run_cli("ohc report --in " + enc.string()).output);
    CHECK(rep["symbol_count"] == 4096);

    for (const auto& p : {src, enc, dec}) std::filesystem::remove(p);
}

TEST_CASE("cli pipeline from generator to bounds") {
    const auto path = temp_file("osa_cli_gen.json");
    REQUIRE(run_cli("gen-instance --n 6 --freq zipf --freq-param 1 --cost codeword --out " +
                    path.string())
                .exit_code == 0);
    const json j = json::parse(run_cli("bounds --instance " + path.string()).output);
    CHECK(j["n"] == 6);
    bool saw_guarantee = false;
    for (const auto& b : j["bounds"])
        if (b["kind"] == "ohc-guarantee") saw_guarantee = true;
    CHECK(saw_guarantee);
    std::filesystem::remove(path);
}

TEST_CASE("cli lowerbound emits a loadable instance") {
    const auto path = temp_file("osa_cli_lb.json");
    REQUIRE(run_cli("lowerbound --kind concave --n 5 --eps 0.1 --out " + path.string())
                .exit_code == 0);
    const Instance inst = load_instance(path);
    CHECK(inst.size() == 5);
    CHECK(inst.c[0] == 0.0);
    CHECK(inst.c[1] == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("cli sweep emits csv by default") {
    const CliResult r = run_cli("sweep --sizes 4,8 --trials 1000 --seed 2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.rfind("n,entropy,expected_cost,stderr,opt,ratio\n", 0) == 0);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') == 3);
}

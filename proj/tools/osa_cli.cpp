// Command line front end: instance generation, sampling, evaluation,
// bound reports, lower-bound families, codeword inspection, the streaming
// codec, and ratio sweeps. Exit codes: 0 success, 1 usage error, 2 runtime
// error. Bound violations are report data and never change the exit code.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "osa/analysis.hpp"
#include "osa/core.hpp"
#include "osa/corpus.hpp"
#include "osa/errors.hpp"
#include "osa/experiment.hpp"
#include "osa/generators.hpp"
#include "osa/ohc.hpp"
#include "osa/sampling.hpp"
#include "osa/strategies.hpp"
#include "osa/ucode.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    CLI::Option* format_opt = nullptr;
};

void write_text(const GlobalOpts& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.out_path, std::ios::binary);
    if (!out) osa::fail(osa::Errc::IoError, "cannot open " + g.out_path);
    out << text;
    if (!out) osa::fail(osa::Errc::IoError, "write failed: " + g.out_path);
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) osa::fail(osa::Errc::IoError, "cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) osa::fail(osa::Errc::IoError, "write failed: " + path);
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) osa::fail(osa::Errc::IoError, "cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) osa::fail(osa::Errc::IoError, "read failed: " + path);
    return data;
}

// Where a command takes an instance: a JSON file, a generator spec, or a
// corpus whose symbol counts become the weights.
struct SourceOpts {
    std::string instance_path;
    std::size_t n = 0;
    std::string freq = "uniform";
    double freq_param = 1.0;
    std::string cost = "linear";
    std::size_t zeros = 1;
    double cost_value = 1.0;
    std::string corpus_path;
    bool tokens = false;
};

osa::FrequencySpec::Kind parse_freq_kind(const std::string& name) {
    if (name == "uniform") return osa::FrequencySpec::Kind::Uniform;
    if (name == "zipf") return osa::FrequencySpec::Kind::Zipf;
    return osa::FrequencySpec::Kind::Geometric;
}

osa::CostSpec::Kind parse_cost_kind(const std::string& name) {
    if (name == "zero-one") return osa::CostSpec::Kind::ZeroOne;
    if (name == "linear") return osa::CostSpec::Kind::Linear;
    if (name == "log") return osa::CostSpec::Kind::Log;
    if (name == "constant") return osa::CostSpec::Kind::Constant;
    return osa::CostSpec::Kind::Codeword;
}

void add_source_options(CLI::App* cmd, SourceOpts& s) {
    cmd->add_option("--instance", s.instance_path, "Instance JSON file {\"f\": [..], \"c\": [..]}");
    cmd->add_option("--n", s.n, "Generate an instance with this many items");
    cmd->add_option("--freq", s.freq, "Weight family for --n")
        ->check(CLI::IsMember({"uniform", "zipf", "geometric"}));
    cmd->add_option("--freq-param", s.freq_param, "Zipf exponent or geometric ratio");
    cmd->add_option("--cost", s.cost, "Cost family for --n or --corpus")
        ->check(CLI::IsMember({"zero-one", "linear", "log", "constant", "codeword"}));
    cmd->add_option("--zeros", s.zeros, "Free slots for --cost zero-one");
    cmd->add_option("--cost-value", s.cost_value, "Level for --cost constant");
    cmd->add_option("--corpus", s.corpus_path, "Take weights from this file's symbol counts");
    cmd->add_flag("--tokens", s.tokens, "Corpus symbols are whitespace tokens, not bytes");
}

osa::Instance materialize(const SourceOpts& s) {
    if (!s.instance_path.empty()) return osa::load_instance(s.instance_path);
    if (!s.corpus_path.empty()) {
        const osa::CorpusStats stats = osa::ingest_corpus(
            s.corpus_path, s.tokens ? osa::Tokenization::Whitespace : osa::Tokenization::Bytes);
        const osa::CostSpec cs{parse_cost_kind(s.cost), stats.alphabet_size(), s.zeros,
                               s.cost_value};
        return osa::Instance{stats.frequencies(), osa::gen_costs(cs)};
    }
    if (s.n > 0) {
        return osa::make_instance(osa::FrequencySpec{parse_freq_kind(s.freq), s.n, s.freq_param},
                                  osa::CostSpec{parse_cost_kind(s.cost), s.n, s.zeros,
                                                s.cost_value});
    }
    osa::fail(osa::Errc::BadParameters, "no instance: pass --instance, --n or --corpus");
}

json report_to_json(const osa::CodeCostReport& r) {
    return json{{"symbol_count", r.symbol_count},
                {"distinct_symbols", r.distinct_symbols},
                {"assignment_bits", r.assignment_bits},
                {"literal_bits", r.literal_bits},
                {"assignment_cost", r.assignment_cost},
                {"entropy", r.entropy},
                {"guarantee", r.guarantee},
                {"literal_width", r.literal_width}};
}

std::string evaluate_csv(const json& j) {
    std::ostringstream out;
    out << "expected_cost,stderr,opt,ratio\n";
    out << j["expected_cost"].dump() << ',' << j["stderr"].dump() << ',' << j["opt"].dump()
        << ',' << (j["ratio"].is_null() ? std::string() : j["ratio"].dump()) << '\n';
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online slot allocation and streaming code workbench"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Master seed; fixes every random choice of a run");
    app.add_option("--out", g.out_path, "Write output here instead of stdout");
    g.format_opt = app.add_option("--format", g.format, "json or csv")
                       ->check(CLI::IsMember({"json", "csv"}));

    // gen-instance
    auto* gen = app.add_subcommand("gen-instance", "Generate an instance file");
    gen->fallthrough();
    auto gen_src = std::make_shared<SourceOpts>();
    add_source_options(gen, *gen_src);
    gen->callback([&g, gen_src] {
        write_text(g, osa::instance_to_json(materialize(*gen_src)).dump(2) + "\n");
    });

    // sample
    auto* sample = app.add_subcommand("sample", "Draw full orders without replacement, CSV rows");
    sample->fallthrough();
    auto sample_src = std::make_shared<SourceOpts>();
    add_source_options(sample, *sample_src);
    auto sample_count = std::make_shared<std::uint64_t>(1);
    sample->add_option("--count", *sample_count, "Rows to draw");
    sample->callback([&g, sample_src, sample_count] {
        const osa::Instance inst = materialize(*sample_src);
        std::ostringstream out;
        for (std::uint64_t row = 0; row < *sample_count; ++row) {
            osa::RandomSource rng = osa::RandomSource::derive(g.seed, row);
            const osa::DrawSequence seq = osa::draw_without_replacement(inst.f, rng);
            for (std::size_t t = 0; t < seq.size(); ++t) out << (t ? "," : "") << seq[t];
            out << '\n';
        }
        write_text(g, out.str());
    });

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Expected cost, optimum, ratio and bounds");
    eval->fallthrough();
    auto eval_src = std::make_shared<SourceOpts>();
    add_source_options(eval, *eval_src);
    auto eval_cfg = std::make_shared<osa::EvaluationConfig>();
    eval->add_option("--policy", eval_cfg->policy, "fcfs or optimal-dp")
        ->check(CLI::IsMember({"fcfs", "optimal-dp"}));
    eval->add_option("--mode", eval_cfg->mode, "exact or mc")
        ->check(CLI::IsMember({"exact", "mc"}));
    eval->add_option("--trials", eval_cfg->trials, "Monte Carlo trials");
    eval->add_option("--threads", eval_cfg->threads, "Worker threads, 0 = hardware default");
    eval->add_flag("--rational", eval_cfg->rational, "Exact mode: add exact fraction fields");
    eval->add_option("--log-slack", eval_cfg->log_slack,
                     "Also check the entropy bound for log-shaped costs within this slack");
    eval->callback([&g, eval_src, eval_cfg] {
        eval_cfg->seed = g.seed;
        const json j = osa::evaluate_instance(materialize(*eval_src), *eval_cfg);
        write_text(g, g.format == "csv" ? evaluate_csv(j) : j.dump(2) + "\n");
    });

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Applicable cost bounds for an instance");
    bounds->fallthrough();
    auto bounds_src = std::make_shared<SourceOpts>();
    add_source_options(bounds, *bounds_src);
    auto bounds_slack = std::make_shared<double>(-1.0);
    bounds->add_option("--log-slack", *bounds_slack,
                       "Report the entropy bound when costs match log2 within this slack");
    bounds->callback([&g, bounds_src, bounds_slack] {
        write_text(g, osa::bounds_report(materialize(*bounds_src), *bounds_slack).dump(2) + "\n");
    });

    // lowerbound
    auto* lb = app.add_subcommand("lowerbound", "Emit a hard instance family member");
    lb->fallthrough();
    auto lb_kind = std::make_shared<std::string>();
    auto lb_k = std::make_shared<std::size_t>(1);
    auto lb_n = std::make_shared<std::size_t>(0);
    auto lb_eps = std::make_shared<double>(0.01);
    lb->add_option("--kind", *lb_kind, "general or concave")
        ->required()
        ->check(CLI::IsMember({"general", "concave"}));
    lb->add_option("--K", *lb_k, "Free slots (general family)");
    lb->add_option("--n", *lb_n, "Items")->required();
    lb->add_option("--eps", *lb_eps, "Light-item weight");
    lb->callback([&g, lb_kind, lb_k, lb_n, lb_eps] {
        const osa::Instance inst = *lb_kind == "general"
                                       ? osa::lower_bound_instance_general(*lb_k, *lb_n, *lb_eps)
                                       : osa::lower_bound_instance_concave(*lb_n, *lb_eps);
        write_text(g, osa::instance_to_json(inst).dump(2) + "\n");
    });

    // ucode
    auto* ucode = app.add_subcommand("ucode", "Inspect the universal codeword set");
    ucode->fallthrough();
    auto uc_rank = std::make_shared<std::uint64_t>(0);
    auto uc_kraft = std::make_shared<std::uint64_t>(0);
    auto* uc_rank_opt = ucode->add_option("--rank", *uc_rank, "Print this rank's length and bits");
    auto* uc_kraft_opt =
        ucode->add_option("--kraft", *uc_kraft, "Partial Kraft sum over ranks 1..N");
    uc_rank_opt->excludes(uc_kraft_opt);
    ucode->callback([&g, ucode, uc_rank, uc_kraft] {
        if (ucode->count("--rank")) {
            const osa::Codeword cw = osa::codeword_for_rank(*uc_rank);
            write_text(g, json{{"rank", *uc_rank},
                               {"length", cw.length},
                               {"bits", cw.to_string()}}
                                  .dump(2) +
                              "\n");
            return;
        }
        if (ucode->count("--kraft")) {
            std::vector<std::uint32_t> lengths;
            lengths.reserve(*uc_kraft);
            for (std::uint64_t r = 1; r <= *uc_kraft; ++r)
                lengths.push_back(osa::ucode_length(r));
            write_text(g, json{{"ranks", *uc_kraft}, {"kraft_sum", osa::kraft_sum(lengths)}}
                                  .dump(2) +
                              "\n");
            return;
        }
        throw CLI::RequiredError("--rank or --kraft");
    });

    // ohc
    auto* ohc = app.add_subcommand("ohc", "Streaming one-pass prefix-free codec");
    ohc->require_subcommand(1);
    ohc->fallthrough();

    auto* enc = ohc->add_subcommand("encode", "Encode a file; prints the cost report");
    enc->fallthrough();
    auto enc_in = std::make_shared<std::string>();
    auto enc_tokens = std::make_shared<bool>(false);
    auto enc_width = std::make_shared<unsigned>(0);
    enc->add_option("--in", *enc_in, "Input file")->required();
    enc->add_flag("--tokens", *enc_tokens, "Whitespace tokens as symbols (ids on the wire)");
    enc->add_option("--width", *enc_width, "Literal bits per symbol (default 8, tokens 16)");
    enc->callback([&g, enc_in, enc_tokens, enc_width] {
        if (g.out_path.empty()) throw CLI::RequiredError("--out");
        const std::vector<std::uint8_t> raw = read_bytes(*enc_in);
        osa::EncodeResult result;
        if (*enc_tokens) {
            const std::string text(raw.begin(), raw.end());
            const osa::CorpusStats stats =
                osa::ingest_text(text, osa::Tokenization::Whitespace);
            const unsigned width = *enc_width ? *enc_width : 16;
            result = osa::ohc_encode(stats.ids, width);
        } else if (*enc_width == 0 || *enc_width == 8) {
            result = osa::ohc_encode_bytes(raw);
        } else {
            std::vector<std::uint32_t> symbols(raw.begin(), raw.end());
            result = osa::ohc_encode(symbols, *enc_width);
        }
        write_bytes(g.out_path, result.stream.serialize());
        std::cout << report_to_json(result.report).dump(2) << "\n";
    });

    auto* dec = ohc->add_subcommand("decode", "Decode a stream back to symbols");
    dec->fallthrough();
    auto dec_in = std::make_shared<std::string>();
    dec->add_option("--in", *dec_in, "Encoded .ohc file")->required();
    dec->callback([&g, dec_in] {
        if (g.out_path.empty()) throw CLI::RequiredError("--out");
        const std::vector<std::uint8_t> raw = read_bytes(*dec_in);
        const osa::EncodedStream stream = osa::EncodedStream::parse(raw);
        if (stream.literal_width == 8) {
            write_bytes(g.out_path, osa::ohc_decode_bytes(raw));
            return;
        }
        // Wider literals carry numeric ids; emit them one per line.
        std::ostringstream out;
        for (std::uint32_t symbol : osa::ohc_decode(stream)) out << symbol << '\n';
        write_text(g, out.str());
    });

    auto* rep = ohc->add_subcommand("report", "Cost report of an encoded stream");
    rep->fallthrough();
    auto rep_in = std::make_shared<std::string>();
    rep->add_option("--in", *rep_in, "Encoded .ohc file")->required();
    rep->callback([&g, rep_in] {
        const osa::EncodedStream stream = osa::EncodedStream::parse(read_bytes(*rep_in));
        write_text(g, report_to_json(osa::ohc_report(stream)).dump(2) + "\n");
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Ratio trend across instance sizes");
    sweep->fallthrough();
    auto sw_sizes = std::make_shared<std::vector<std::size_t>>();
    auto sw_freq = std::make_shared<std::string>("zipf");
    auto sw_param = std::make_shared<double>(1.0);
    auto sw_cost = std::make_shared<std::string>("log");
    auto sw_trials = std::make_shared<std::uint64_t>(10000);
    auto sw_threads = std::make_shared<int>(0);
    sweep->add_option("--sizes", *sw_sizes, "Instance sizes")->required()->delimiter(',');
    sweep->add_option("--freq", *sw_freq, "Weight family")
        ->check(CLI::IsMember({"uniform", "zipf", "geometric"}));
    sweep->add_option("--freq-param", *sw_param, "Zipf exponent or geometric ratio");
    sweep->add_option("--cost", *sw_cost, "Cost family")
        ->check(CLI::IsMember({"zero-one", "linear", "log", "constant", "codeword"}));
    sweep->add_option("--trials", *sw_trials, "Monte Carlo trials per size");
    sweep->add_option("--threads", *sw_threads, "Worker threads, 0 = hardware default");
    sweep->callback([&g, sw_sizes, sw_freq, sw_param, sw_cost, sw_trials, sw_threads] {
        const std::vector<osa::SweepPoint> points =
            osa::sweep_sizes(*sw_sizes, parse_freq_kind(*sw_freq), *sw_param,
                             parse_cost_kind(*sw_cost), *sw_trials, g.seed, *sw_threads);
        // Tables default to CSV; single results default to JSON.
        const bool csv = g.format_opt->count() ? g.format == "csv" : true;
        write_text(g, csv ? osa::sweep_to_csv(points) : osa::sweep_to_json(points).dump(2) + "\n");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const osa::Error& e) {
        std::cerr << "error: " << e.what() << " [" << osa::errc_name(e.code()) << "]\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

#include "latticetail/decoder.hpp"
#include "latticetail/errors.hpp"
#include "latticetail/io.hpp"
#include "latticetail/montecarlo.hpp"
#include "latticetail/version.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace latticetail;

namespace {

std::size_t worker_cap() {
    const char* env = std::getenv("LATTICETAIL_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
        std::cerr << "warning: ignoring invalid LATTICETAIL_THREADS='" << env << "'\n";
        return 0;
    }
    return static_cast<std::size_t>(v);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + path);
}

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::string ccdf_path;
    std::string h_path;
    std::string obs_path;
    double rho = 0.0;
    std::string method;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> node_budget;
    double q_lo = 0.90;
    double q_hi = 0.999;
};

TrialConfig load_config(const Options& opt) {
    TrialConfig cfg = parse_trial_config(read_file(opt.config_path));
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.trials) cfg.trials = *opt.trials;
    if (opt.node_budget) cfg.node_budget = *opt.node_budget;
    if (!opt.method.empty()) cfg.method = parse_method(opt.method);
    cfg.validate();
    return cfg;
}

int cmd_simulate(const Options& opt) {
    const TrialConfig cfg = load_config(opt);
    const auto t0 = std::chrono::steady_clock::now();
    const SampleSet set = run_trials(cfg, worker_cap());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw IoError("cannot create directory " + opt.out_dir);

    const std::string samples_path = (fs::path(opt.out_dir) / "samples.csv").string();
    const std::string ccdf_path = (fs::path(opt.out_dir) / "ccdf.csv").string();
    const std::string manifest_path = (fs::path(opt.out_dir) / "manifest.json").string();

    {
        std::ostringstream ss;
        write_samples_csv(ss, set);
        write_file(samples_path, ss.str());
    }
    {
        std::ostringstream ss;
        write_ccdf_csv(ss, complexity_ccdf(set));
        write_file(ccdf_path, ss.str());
    }
    RunManifest manifest;
    manifest.config = cfg;
    manifest.version = kVersion;
    manifest.wall_seconds = wall;
    manifest.found_fraction =
        static_cast<double>(set.found_count) / static_cast<double>(cfg.trials);
    manifest.censored_count = set.censored_count;
    manifest.output_files = {samples_path, ccdf_path};
    const std::string manifest_text = manifest_json(manifest);
    write_file(manifest_path, manifest_text);
    std::cout << manifest_text << "\n";
    return 0;
}

int cmd_fit(const Options& opt) {
    std::ifstream in(opt.ccdf_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + opt.ccdf_path);
    const CCDF ccdf = read_ccdf_csv(in);
    const TailFit fit = fit_tail(ccdf, opt.q_lo, opt.q_hi);
    std::cout << tail_fit_json(fit) << "\n";
    return fit.reliable ? 0 : 4;
}

int cmd_verify(const Options& opt) {
    const TrialConfig cfg = load_config(opt);
    const ConditionReport report = verify_theorem_conditions(cfg, 2000, worker_cap());
    std::cout << condition_report_json(report) << "\n";
    return report.deterministic_ok() ? 0 : 1;
}

int cmd_decode(const Options& opt) {
    const ComplexMatrix h = parse_matrix_json(read_file(opt.h_path));
    const CplxVector y = parse_vector_json(read_file(opt.obs_path));
    if (y.size() != h.rows())
        throw ConfigError("decode: observation length " + std::to_string(y.size()) +
                          " does not match matrix rows " + std::to_string(h.rows()));
    const PreprocMethod method = opt.method.empty() ? PreprocMethod::Direct
                                                    : parse_method(opt.method);
    const DecodeResult res = solve(h, y, opt.rho, method, 0.75, opt.node_budget);
    std::cout << decode_result_json(res) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sphere decoder complexity laboratory"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* sim = app.add_subcommand("simulate", "run trials, write samples/ccdf/manifest");
    sim->add_option("--config", opt.config_path, "experiment config JSON")->required();
    sim->add_option("--out-dir", opt.out_dir, "output directory (default .)");
    sim->add_option("--seed", opt.seed, "override config seed");
    sim->add_option("--trials", opt.trials, "override config trials");
    sim->add_option("--method", opt.method, "override method: qrd, lll, vblast");
    sim->add_option("--node-budget", opt.node_budget, "override per-trial node budget");

    CLI::App* fit = app.add_subcommand("fit", "fit a tail exponent to a ccdf csv");
    fit->add_option("ccdf", opt.ccdf_path, "ccdf csv file")->required();
    fit->add_option("--q-lo", opt.q_lo, "lower quantile of the fit window (default 0.90)");
    fit->add_option("--q-hi", opt.q_hi, "upper quantile of the fit window (default 0.999)");

    CLI::App* verify = app.add_subcommand("verify", "check the tail theorem's conditions");
    verify->add_option("--config", opt.config_path, "experiment config JSON")->required();
    verify->add_option("--seed", opt.seed, "override config seed");
    verify->add_option("--trials", opt.trials, "override config trials");
    verify->add_option("--method", opt.method, "override method: qrd, lll, vblast");

    CLI::App* dec = app.add_subcommand("decode", "decode one instance from JSON files");
    dec->add_option("matrix", opt.h_path, "channel matrix JSON (rows of [re,im])")->required();
    dec->add_option("observation", opt.obs_path, "observation JSON (array of [re,im])")->required();
    dec->add_option("rho", opt.rho, "search radius")->required();
    dec->add_option("--method", opt.method, "preprocessing: qrd, lll, vblast");
    dec->add_option("--node-budget", opt.node_budget, "abort after this many nodes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opt);
        if (fit->parsed()) return cmd_fit(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (dec->parsed()) return cmd_decode(opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RankDeficientError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

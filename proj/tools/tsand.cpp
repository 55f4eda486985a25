// tsand: synthetic data generation, single completions, and experiment
// sweeps for the tensor-sandwich completion pipeline. See README for the
// file formats and CSV schemas.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tensorsandwich/experiments.hpp"
#include "tensorsandwich/io.hpp"
#include "tensorsandwich/linalg.hpp"
#include "tensorsandwich/sandwich.hpp"
#include "tensorsandwich/synthetic.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_weights(const std::string& text, int rank) {
    if (text.empty() || text == "quadratic") return {};
    if (text == "equal") return std::vector<double>(static_cast<std::size_t>(rank), 1.0);
    std::vector<double> w;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
    return w;
}

double parse_snr(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("snr_db entries must be numbers or \"inf\"");
    }
    return j.get<double>();
}

ts::ExperimentSpec spec_from_json(const json& cfg, bool paper_scale) {
    ts::ExperimentSpec spec;
    if (paper_scale) {
        spec.n = 200;
        spec.ranks = {5, 10, 20};
    }
    if (cfg.contains("kind")) spec.kind = ts::sweep_kind_from_string(cfg.at("kind").get<std::string>());
    if (cfg.contains("n")) spec.n = cfg.at("n").get<int>();
    if (cfg.contains("ranks")) spec.ranks = cfg.at("ranks").get<std::vector<int>>();
    if (cfg.contains("budgets")) spec.budgets = cfg.at("budgets").get<std::vector<std::int64_t>>();
    if (cfg.contains("budget_fractions"))
        spec.budget_fractions = cfg.at("budget_fractions").get<std::vector<double>>();
    if (cfg.contains("budget_fraction")) spec.budget_fraction = cfg.at("budget_fraction").get<double>();
    if (cfg.contains("snr_db")) {
        spec.snr_db.clear();
        for (const auto& item : cfg.at("snr_db")) spec.snr_db.push_back(parse_snr(item));
    }
    if (cfg.contains("trials")) spec.trials = cfg.at("trials").get<int>();
    if (cfg.contains("base_seed")) spec.base_seed = cfg.at("base_seed").get<std::uint64_t>();
    if (cfg.contains("s")) spec.s = cfg.at("s").get<int>();
    if (cfg.contains("gamma")) spec.gamma = cfg.at("gamma").get<int>();
    if (cfg.contains("delta")) spec.delta = cfg.at("delta").get<double>();
    if (cfg.contains("als_iters")) spec.als_iters = cfg.at("als_iters").get<int>();
    if (cfg.contains("weights")) spec.weights = cfg.at("weights").get<std::vector<double>>();
    return spec;
}

json report_to_json(const ts::CompletionReport& report) {
    json j;
    j["status"] = ts::to_string(report.status);
    if (!report.message.empty()) j["message"] = report.message;
    j["omega1"] = report.omega1_count;
    j["omega2"] = report.omega2_count;
    j["total"] = report.total_count;
    j["fraction"] = report.fraction;
    if (std::isfinite(report.rel_error)) j["rel_error"] = report.rel_error;
    j["jennrich_redraws"] = report.jennrich_redraws;
    j["fully_sampled_columns"] = report.fully_sampled_columns;
    j["phase_ms"] = report.phase_ms;
    return j;
}

std::string summary_path_for(const std::string& out) {
    const std::string suffix = ".csv";
    if (out.size() > suffix.size() && out.substr(out.size() - suffix.size()) == suffix)
        return out.substr(0, out.size() - suffix.size()) + ".summary.csv";
    return out + ".summary.csv";
}

int cmd_generate(int n, int rank, std::uint64_t seed, const std::string& weights,
                 const std::string& out, const std::string& model_out) {
    auto [model, tensor] = ts::generate_synthetic(n, rank, seed, parse_weights(weights, rank));
    ts::write_tensor(tensor, out);
    if (!model_out.empty()) ts::write_model(model, model_out);
    json j;
    j["n"] = n;
    j["rank"] = rank;
    j["seed"] = seed;
    j["tensor"] = out;
    if (!model_out.empty()) j["model"] = model_out;
    j["frobenius_norm"] = tensor.frobenius_norm();
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct CompleteArgs {
    std::string input;
    int rank = 0;
    int s = 2;
    std::vector<int> slice_indices;
    int gamma = 4;
    double delta = 0.1;
    std::int64_t budget = 0;
    int col_samples = 0;
    double residual_tol = 1e-8;
    std::uint64_t seed = 0;
    int als_iters = 0;
    double snr_db = std::numeric_limits<double>::infinity();
    std::string out;
};

int cmd_complete(const CompleteArgs& args) {
    const ts::DenseTensor3 truth = ts::read_tensor(args.input);
    const ts::DenseTensor3 source =
        std::isinf(args.snr_db) ? truth : ts::add_noise_snr(truth, args.snr_db, args.seed);

    ts::SandwichConfig cfg;
    cfg.s = args.s;
    cfg.explicit_slices = args.slice_indices;
    cfg.gamma = args.gamma;
    cfg.delta = args.delta;
    cfg.seed = args.seed;
    cfg.als_iters = args.als_iters;
    if (args.budget > 0) {
        cfg.slice_cfg = ts::SliceCompletionConfig::from_budget(args.rank, truth.n1(), args.budget);
    } else {
        // No budget given: size the probe from the theory formula using the
        // coherence bound mu0 = n/rank (worst case is still fine at CLI scale).
        cfg.slice_cfg = ts::SliceCompletionConfig::from_theory(
            args.rank, truth.n1(), static_cast<double>(truth.n1()) / args.rank, args.delta);
    }
    if (args.col_samples > 0) cfg.slice_cfg.per_column_samples = args.col_samples;
    cfg.slice_cfg.residual_tol = args.residual_tol;

    ts::SamplingOracle oracle(source);
    auto [model, report] = ts::tensor_sandwich(oracle, cfg);
    report.rel_error = ts::relative_error(ts::cp_to_dense(model), truth);

    json j = report_to_json(report);
    j["input"] = args.input;
    j["rank"] = args.rank;
    j["seed"] = args.seed;
    if (std::isfinite(args.snr_db)) j["snr_db"] = args.snr_db;
    const std::string text = j.dump(2);
    std::cout << text << "\n";
    if (!args.out.empty()) {
        std::ofstream f(args.out, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open for writing: " + args.out);
        f << text << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out, int threads,
              bool paper_scale) {
    json cfg = json::object();
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw std::runtime_error("cannot open config: " + config_path);
        f >> cfg;
    }
    ts::ExperimentSpec spec = spec_from_json(cfg, paper_scale);
    spec.threads = threads;
    const ts::SweepResult result = ts::run_sweep(spec);
    ts::write_csv(result, out);
    ts::write_summary_csv(result, summary_path_for(out));
    std::cerr << "wrote " << result.rows.size() << " rows to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive CP-rank tensor completion: sandwich sampling pipeline"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic tensor (and model) to file");
    int gen_n = 50, gen_rank = 5;
    std::uint64_t gen_seed = 0;
    std::string gen_weights = "quadratic", gen_out, gen_model_out;
    gen->add_option("--n", gen_n, "Mode length");
    gen->add_option("--rank", gen_rank, "CP rank");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--weights", gen_weights, "quadratic | equal | w1,w2,...");
    gen->add_option("--out", gen_out, "Tensor container path")->required();
    gen->add_option("--model-out", gen_model_out, "Optional CP model container path");

    // complete
    auto* comp = app.add_subcommand("complete", "Run one completion on a tensor file");
    CompleteArgs comp_args;
    comp->add_option("--input", comp_args.input, "Tensor container path")->required();
    comp->add_option("--rank", comp_args.rank, "CP rank")->required();
    comp->add_option("--slices", comp_args.s, "Number of slices to complete (s)");
    comp->add_option("--slice-indices", comp_args.slice_indices,
                     "Explicit slice indices (overrides the uniform draw)");
    comp->add_option("--gamma", comp_args.gamma, "Fiber oversampling factor");
    comp->add_option("--delta", comp_args.delta, "Per-slice failure budget");
    comp->add_option("--budget", comp_args.budget, "Per-slice sample budget (0 = theory default)");
    comp->add_option("--col-samples", comp_args.col_samples, "Probe samples per column (0 = derived)");
    comp->add_option("--residual-tol", comp_args.residual_tol, "Column residual tolerance");
    comp->add_option("--seed", comp_args.seed, "RNG seed");
    comp->add_option("--als-iters", comp_args.als_iters, "Masked-ALS refinement sweeps");
    comp->add_option("--snr", comp_args.snr_db, "Corrupt the input at this SNR (dB) first");
    comp->add_option("--out", comp_args.out, "Also write the JSON report here");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run an experiment grid from a JSON config");
    std::string sweep_config, sweep_out = "results.csv";
    int sweep_threads = 1;
    bool paper_scale = false;
    sweep->add_option("--config", sweep_config, "JSON experiment spec");
    sweep->add_option("--out", sweep_out, "CSV output path");
    sweep->add_option("--threads", sweep_threads, "Worker threads");
    sweep->add_flag("--paper-scale", paper_scale, "Default to the n=200 long-running settings");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(gen_n, gen_rank, gen_seed, gen_weights, gen_out, gen_model_out);
        if (comp->parsed()) return cmd_complete(comp_args);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_threads, paper_scale);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

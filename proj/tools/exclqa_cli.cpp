// Command-line front end: instance generation, reduction, oracles, encoding,
// solving, penalty tuning, the benchmark sweep, spectra and cost traces.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "exclqa/bench.hpp"
#include "exclqa/config.hpp"
#include "exclqa/json_io.hpp"
#include "exclqa/metropolis.hpp"
#include "exclqa/oracle.hpp"

namespace fs = std::filesystem;
using namespace exclqa;

namespace {

struct SeedFlag {
    std::uint64_t value = 0;
    bool provided = false;

    /// Every run is reproducible: an omitted seed is drawn once and printed.
    std::uint64_t resolve() {
        if (!provided) {
            std::random_device rd;
            value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            std::printf("seed: %" PRIu64 "\n", value);
        }
        return value;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", value, "master seed (omitted: drawn and printed)")
            ->each([this](const std::string&) { provided = true; });
    }
};

std::vector<int> parse_ranks(const std::string& spec) {
    std::vector<int> ranks;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string token = spec.substr(pos, comma - pos);
        const std::size_t dash = token.find('-');
        if (dash == std::string::npos) {
            ranks.push_back(std::stoi(token));
        } else {
            const int lo = std::stoi(token.substr(0, dash));
            const int hi = std::stoi(token.substr(dash + 1));
            for (int r = lo; r <= hi; ++r) ranks.push_back(r);
        }
        pos = comma + 1;
    }
    if (ranks.empty()) {
        throw ValidationError("empty rank list");
    }
    return ranks;
}

Json m_rule_json(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return Json(v);
    } catch (const std::exception&) {
    }
    return Json(s);
}

/// Shared hyperparameter/config flags; preset, then config file, then
/// explicit flags, the later layers winning.
struct HyperFlags {
    std::string preset_name;
    std::string config_path;
    std::string method = "exclqa";
    std::string m_rule;
    int steps = -1;
    double gamma = -1, beta = -1, mu = -1, eta = -1, f = -1;
    double alpha = -1, s = -1, r_factor = -1;
    int local_dim = -1;
    int max_shots = -1;
    bool tune = false;
    std::int64_t iterations = -1;
    double temperature = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--preset", preset_name,
                        "hyperparameter preset: paper-lqa2 | paper-lqa4 | paper-alt2 | paper-alt4");
        cmd->add_option("--config", config_path, "JSON config file (keys mirror the presets)");
        cmd->add_option("--method", method, "exclqa | exclqa-alt | metropolis");
        cmd->add_option("--N", steps, "annealing points / chain iterations");
        cmd->add_option("--gamma", gamma, "final-cost strength");
        cmd->add_option("--beta", beta, "schedule exponent");
        cmd->add_option("--mu", mu, "SGD momentum");
        cmd->add_option("--eta", eta, "SGD learning rate");
        cmd->add_option("--f", f, "initial weight half-width");
        cmd->add_option("--M", m_rule, "Gram rescale: gram_norm | gram_norm/50 | <number>");
        cmd->add_option("--alpha", alpha, "inverse-penalty prefactor");
        cmd->add_option("--s", s, "exponential-penalty decay");
        cmd->add_option("--r-factor", r_factor,
                        "exponential-penalty prefactor, times gh(L)^2 (raw r for bare Hamiltonians)");
        cmd->add_option("--local-dim", local_dim, "local dimension 2^k of each coefficient");
        cmd->add_option("--max-shots", max_shots, "shot budget per instance");
        cmd->add_flag("--tune-alpha", tune, "binary-search alpha per instance");
        cmd->add_option("--iterations", iterations, "metropolis chain length");
        cmd->add_option("--temperature", temperature, "metropolis temperature (0: auto)");
    }

    ExperimentConfig apply(ExperimentConfig cfg) const {
        if (!preset_name.empty()) cfg.hyper = preset(preset_name);
        if (!config_path.empty()) cfg = experiment_from_json(load_json_file(config_path), cfg);
        cfg.solver = solver_from_name(method);
        Json overrides = Json::object();
        if (steps >= 0) overrides["N"] = steps;
        if (gamma >= 0) overrides["gamma"] = gamma;
        if (beta >= 0) overrides["beta"] = beta;
        if (mu >= 0) overrides["mu"] = mu;
        if (eta >= 0) overrides["eta"] = eta;
        if (f >= 0) overrides["f"] = f;
        if (!m_rule.empty()) overrides["M"] = m_rule_json(m_rule);
        if (alpha >= 0) overrides["alpha"] = alpha;
        if (s >= 0) overrides["s"] = s;
        if (r_factor >= 0) overrides["r_factor"] = r_factor;
        if (local_dim >= 0) overrides["local_dim"] = local_dim;
        cfg.hyper = hyper_from_json(overrides, cfg.hyper);
        if (max_shots >= 0) cfg.max_shots = max_shots;
        if (tune) cfg.tune_alpha_per_instance = true;
        if (iterations >= 0) cfg.metropolis_iterations = iterations;
        if (temperature >= 0) cfg.metropolis_temperature = temperature;
        return cfg;
    }
};

LatticeProfile profile_by_name(const std::string& name) {
    if (name == "desk") return LatticeProfile::desk();
    if (name == "paper") return LatticeProfile::paper();
    throw ValidationError("unknown profile: " + name + " (expected desk or paper)");
}

/// Standalone instance file: the instances.jsonl line schema, with basis_file
/// resolved relative to the instance file.
Instance load_instance_file(const fs::path& path) {
    const Json j = load_json_file(path);
    const fs::path basis_path = path.parent_path() / j.at("basis_file").get<std::string>();
    if (!fs::exists(basis_path)) {
        throw ValidationError("cannot open " + basis_path.string() +
                              " (basis_file resolves relative to the instance file; keep the "
                              "instance file next to its bases/ directory)");
    }
    const auto file = basis_from_json(load_json_file(basis_path));
    Basis basis(file.rows);
    GramMatrix g = gram(basis);
    std::vector<std::int64_t> v;
    if (j.contains("v")) v = j.at("v").get<std::vector<std::int64_t>>();
    return Instance{j.at("id").get<std::string>(),
                    j.at("rank").get<int>(),
                    j.value("q", std::int64_t{0}),
                    j.value("d", 0),
                    j.value("k_qary", 0),
                    j.value("seed", std::uint64_t{0}),
                    std::move(basis),
                    std::move(g),
                    j.at("x").get<std::vector<std::int64_t>>(),
                    std::move(v),
                    j.at("lambda1_sq").get<std::int64_t>()};
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write file: " + path.string());
    }
    out << content;
}

Basis load_basis_file(const fs::path& path) {
    return Basis(basis_from_json(load_json_file(path)).rows);
}

int run(CLI::App& app, int argc, char** argv) {
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "generate SVP instances with oracle certificates");
    std::string gen_profile = "desk";
    std::string gen_ranks = "10-16";
    int gen_instances = 20;
    int gen_workers = 0;
    double gen_timeout = 60.0;
    std::string gen_out = "instances";
    SeedFlag gen_seed;
    gen_cmd->add_option("--profile", gen_profile,
                        "desk (q=257,d=40,k=20) or paper (q=65537,d=180,k=90)");
    gen_cmd->add_option("--ranks", gen_ranks, "rank list, e.g. 10-16 or 8,10,12");
    gen_cmd->add_option("--instances", gen_instances, "instances per rank");
    gen_cmd->add_option("--workers", gen_workers, "parallel workers (0: all cores)");
    gen_cmd->add_option("--enum-timeout", gen_timeout,
                        "oracle enumeration budget per instance, seconds");
    gen_cmd->add_option("--out", gen_out, "output directory");
    gen_seed.attach(gen_cmd);

    // ---- reduce ----
    auto* reduce_cmd = app.add_subcommand("reduce", "LLL-reduce a basis file");
    std::string reduce_in, reduce_out;
    double reduce_delta = 0.99;
    reduce_cmd->add_option("--in", reduce_in, "basis JSON file")->required();
    reduce_cmd->add_option("--out", reduce_out, "output basis JSON file")->required();
    reduce_cmd->add_option("--delta", reduce_delta, "Lovasz parameter in (1/4, 1)");

    // ---- oracle ----
    auto* oracle_cmd = app.add_subcommand("oracle", "certify lambda_1 by exact enumeration");
    std::string oracle_basis, oracle_out;
    double oracle_timeout = 60.0;
    oracle_cmd->add_option("--basis", oracle_basis, "basis JSON file")->required();
    oracle_cmd->add_option("--out", oracle_out, "oracle JSON output ({lambda1_sq, x, v})");
    oracle_cmd->add_option("--timeout", oracle_timeout, "wall-clock budget, seconds");

    // ---- encode ----
    auto* encode_cmd = app.add_subcommand("encode", "Gram matrix to Ising Hamiltonian file");
    std::string encode_basis, encode_gram, encode_out, encode_m = "1";
    std::string encode_instance_out;
    int encode_local_dim = 2;
    encode_cmd->add_option("--basis", encode_basis, "basis JSON file (Gram computed from it)");
    encode_cmd->add_option("--gram", encode_gram,
                           "Gram JSON file ({gram: [[...]]} or a bare matrix)");
    encode_cmd->add_option("--local-dim", encode_local_dim, "local dimension 2^k");
    encode_cmd->add_option("--M", encode_m, "rescale: gram_norm | gram_norm/50 | <number>");
    encode_cmd->add_option("--out", encode_out, "Hamiltonian JSON output")->required();
    encode_cmd->add_option("--encoded-out", encode_instance_out,
                           "also write the {gram, k, M, spin_count} file");

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "run one solver on one instance");
    std::string solve_instance, solve_out = "results.csv";
    HyperFlags solve_hyper;
    SeedFlag solve_seed;
    solve_cmd->add_option("--instance", solve_instance, "instance JSON file")->required();
    solve_cmd->add_option("--out", solve_out, "results CSV output");
    solve_hyper.attach(solve_cmd);
    solve_seed.attach(solve_cmd);

    // ---- tune-alpha ----
    auto* tune_cmd = app.add_subcommand("tune-alpha", "binary-search the inverse penalty");
    std::string tune_instance, tune_out;
    HyperFlags tune_hyper;
    SeedFlag tune_seed;
    tune_cmd->add_option("--instance", tune_instance, "instance JSON file")->required();
    tune_cmd->add_option("--out", tune_out, "optional JSON output ({alpha})");
    tune_hyper.attach(tune_cmd);
    tune_seed.attach(tune_cmd);

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "full sweep: generate, filter, solve, report");
    std::string bench_profile = "desk";
    std::string bench_ranks = "10-16";
    std::string bench_methods = "exclqa,metropolis";
    std::string bench_out = "bench_out";
    int bench_instances = 20;
    int bench_valid = 0;
    int bench_workers = 0;
    double bench_timeout = 60.0;
    HyperFlags bench_hyper;
    SeedFlag bench_seed;
    bench_cmd->add_option("--profile", bench_profile, "desk or paper");
    bench_cmd->add_option("--ranks", bench_ranks, "rank list, e.g. 10-16");
    bench_cmd->add_option("--instances", bench_instances,
                          "instances generated per rank and batch");
    bench_cmd->add_option("--valid-per-rank", bench_valid,
                          "keep exactly this many valid instances per rank (0: keep all valid)");
    bench_cmd->add_option("--methods", bench_methods, "comma list of solvers to compare");
    bench_cmd->add_option("--workers", bench_workers, "parallel workers (0: all cores)");
    bench_cmd->add_option("--enum-timeout", bench_timeout, "oracle budget per instance, seconds");
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_hyper.attach(bench_cmd);
    bench_seed.attach(bench_cmd);

    // ---- spectrum ----
    auto* spectrum_cmd = app.add_subcommand("spectrum", "exact spectrum of a small Hamiltonian");
    std::string spectrum_file;
    int spectrum_max_n = 20;
    spectrum_cmd->add_option("--hamiltonian", spectrum_file, "Hamiltonian JSON file")->required();
    spectrum_cmd->add_option("--max-n", spectrum_max_n, "refuse larger spin counts");

    // ---- trace ----
    auto* trace_cmd = app.add_subcommand("trace", "per-step cost trace of annealing shots");
    std::string trace_instance, trace_hamiltonian, trace_out = "trace.csv";
    int trace_shots = 1;
    HyperFlags trace_hyper;
    SeedFlag trace_seed;
    trace_cmd->add_option("--instance", trace_instance, "instance JSON file");
    trace_cmd->add_option("--hamiltonian", trace_hamiltonian, "Hamiltonian JSON file");
    trace_cmd->add_option("--shots", trace_shots, "number of traced shots");
    trace_cmd->add_option("--out", trace_out, "trace CSV output");
    trace_hyper.attach(trace_cmd);
    trace_seed.attach(trace_cmd);

    app.parse(argc, argv);

    if (gen_cmd->parsed()) {
        ExperimentConfig cfg;
        cfg.profile = profile_by_name(gen_profile);
        cfg.ranks = parse_ranks(gen_ranks);
        cfg.instances_per_rank = gen_instances;
        cfg.workers = gen_workers;
        cfg.enum_timeout_seconds = gen_timeout;
        cfg.seed = gen_seed.resolve();
        const auto gen = generate_instances(cfg);
        save_instances(gen_out, gen.instances);
        std::printf("generated %zu instances into %s\n", gen.instances.size(), gen_out.c_str());
        for (const auto& note : gen.skipped) {
            std::printf("skipped %s\n", note.c_str());
        }
        return 0;
    }

    if (reduce_cmd->parsed()) {
        const auto file = basis_from_json(load_json_file(reduce_in));
        const Basis reduced = lll_reduce(Basis(file.rows), reduce_delta);
        save_json_file(reduce_out, basis_to_json(reduced, file.q, file.d, file.k, file.seed));
        const auto stats = lattice_stats(reduced);
        std::printf("reduced %zu x %zu basis -> %s\n", reduced.rank(), reduced.dim(),
                    reduce_out.c_str());
        std::printf("det %.6g, gaussian heuristic %.6g, minkowski bound %.6g\n",
                    stats.determinant, stats.gaussian_heuristic, stats.minkowski_bound);
        return 0;
    }

    if (oracle_cmd->parsed()) {
        const Basis basis = load_basis_file(oracle_basis);
        const auto result = enumerate_shortest(basis, {oracle_timeout});
        std::printf("lambda1_sq: %" PRId64 "\n", result.lambda1_sq);
        if (!oracle_out.empty()) {
            save_json_file(oracle_out, Json{{"lambda1_sq", result.lambda1_sq},
                                            {"x", result.x},
                                            {"v", result.v}});
        }
        return 0;
    }

    if (encode_cmd->parsed()) {
        if (encode_basis.empty() == encode_gram.empty()) {
            throw CLI::ValidationError("encode", "give exactly one of --basis or --gram");
        }
        GramMatrix g = encode_basis.empty() ? gram_from_json(load_json_file(encode_gram))
                                            : gram(load_basis_file(encode_basis));
        HyperParams hp;
        hp = hyper_from_json(Json{{"M", m_rule_json(encode_m)}, {"local_dim", encode_local_dim}},
                             hp);
        const double m = hp.rescale.value_for(g);
        const QuditEncoding enc{g.size(), hp.local_bits, m};
        const auto h = build_svp_hamiltonian(g, enc);
        save_json_file(encode_out, hamiltonian_to_json(h));
        if (!encode_instance_out.empty()) {
            save_json_file(encode_instance_out, encoded_to_json(g, hp.local_bits, m));
        }
        std::printf("encoded %zu coefficients x %d bits -> %zu spins (M = %.6g)\n", g.size(),
                    hp.local_bits, enc.spins(), m);
        return 0;
    }

    if (solve_cmd->parsed()) {
        ExperimentConfig cfg = solve_hyper.apply(ExperimentConfig{});
        cfg.seed = solve_seed.resolve();
        const Instance inst = load_instance_file(solve_instance);
        const auto result = run_experiment(cfg, {inst});
        write_text_file(solve_out, results_csv({{solver_name(cfg.solver), result}}));
        const auto& rec = result.records.front();
        std::printf("%s on %s: %s in %d shots (lambda1_sq %" PRId64 ")\n",
                    solver_name(cfg.solver).c_str(), rec.instance_id.c_str(),
                    rec.solved ? "solved" : "not solved", rec.shots_used, rec.lambda1_sq);
        return 0;
    }

    if (tune_cmd->parsed()) {
        ExperimentConfig cfg = tune_hyper.apply(ExperimentConfig{});
        cfg.seed = tune_seed.resolve();
        const Instance inst = load_instance_file(tune_instance);
        const double alpha = tune_alpha(inst.gram, cfg.hyper, cfg.tuner, cfg.seed);
        std::printf("alpha: %.10g\n", alpha);
        if (!tune_out.empty()) {
            save_json_file(tune_out, Json{{"alpha", alpha}});
        }
        return 0;
    }

    if (bench_cmd->parsed()) {
        ExperimentConfig cfg = bench_hyper.apply(ExperimentConfig{});
        cfg.profile = profile_by_name(bench_profile);
        cfg.ranks = parse_ranks(bench_ranks);
        cfg.instances_per_rank = bench_instances;
        cfg.workers = bench_workers;
        cfg.enum_timeout_seconds = bench_timeout;
        cfg.seed = bench_seed.resolve();

        std::vector<Instance> valid;
        std::vector<std::string> skipped;
        if (bench_valid > 0) {
            auto set = generate_valid_instances(cfg, bench_valid);
            valid = std::move(set.valid);
            skipped = std::move(set.skipped);
        } else {
            auto gen = generate_instances(cfg);
            valid = filter_valid(gen.instances, cfg.hyper.local_bits);
            skipped = std::move(gen.skipped);
        }
        for (const auto& note : skipped) {
            std::printf("skipped %s\n", note.c_str());
        }
        save_instances(fs::path(bench_out), valid);

        std::vector<MethodReport> reports;
        std::string methods = bench_methods;
        while (!methods.empty()) {
            const std::size_t comma = methods.find(',');
            const std::string name = methods.substr(0, comma);
            methods = comma == std::string::npos ? "" : methods.substr(comma + 1);
            ExperimentConfig method_cfg = cfg;
            method_cfg.solver = solver_from_name(name);
            reports.push_back({name, run_experiment(method_cfg, valid)});
        }
        write_text_file(fs::path(bench_out) / "results.csv", results_csv(reports));
        write_text_file(fs::path(bench_out) / "metrics.csv", metrics_csv(reports));
        for (const auto& [method, m] : compare_methods(reports)) {
            std::printf("%s rank %d: solved %d/%d (%.3f), avg shots %s, avg approx %s\n",
                        method.c_str(), m.rank, m.solved_count, m.valid_count, m.solved_ratio,
                        m.avg_shots ? std::to_string(*m.avg_shots).c_str() : "-",
                        m.avg_approx_factor ? std::to_string(*m.avg_approx_factor).c_str() : "-");
        }
        std::printf("wrote %s/results.csv and %s/metrics.csv\n", bench_out.c_str(),
                    bench_out.c_str());
        return 0;
    }

    if (spectrum_cmd->parsed()) {
        const auto h = hamiltonian_from_json(load_json_file(spectrum_file));
        const auto spectrum = exact_spectrum(h, static_cast<std::size_t>(spectrum_max_n));
        for (const auto& entry : spectrum) {
            std::printf("%.10g (", entry.energy);
            for (std::size_t i = 0; i < entry.config.size(); ++i) {
                std::printf("%s%+d", i ? "," : "", static_cast<int>(entry.config[i]));
            }
            std::printf(")\n");
        }
        return 0;
    }

    if (trace_cmd->parsed()) {
        ExperimentConfig cfg = trace_hyper.apply(ExperimentConfig{});
        cfg.seed = trace_seed.resolve();

        IsingHamiltonian h(1);
        CostKind kind = CostKind::ground_state();
        if (!trace_instance.empty()) {
            const Instance inst = load_instance_file(trace_instance);
            const double m = cfg.hyper.rescale.value_for(inst.gram);
            const QuditEncoding enc{inst.gram.size(), cfg.hyper.local_bits, m};
            h = build_svp_hamiltonian(inst.gram, enc);
            if (cfg.tune_alpha_per_instance) {
                cfg.hyper.alpha =
                    tune_alpha(inst.gram, cfg.hyper, cfg.tuner, derive_seed(cfg.seed, 0xA1FA));
                std::printf("alpha: %.10g\n", cfg.hyper.alpha);
            }
            if (cfg.hyper.cost == CostKind::Type::ExpPenalty) {
                const double gh = gaussian_heuristic(inst.gram);
                kind = CostKind::exp_penalty(cfg.hyper.r_factor * gh * gh, cfg.hyper.s);
            } else if (cfg.hyper.cost == CostKind::Type::InversePenalty) {
                kind = CostKind::inverse_penalty(cfg.hyper.alpha);
            }
        } else if (!trace_hamiltonian.empty()) {
            h = hamiltonian_from_json(load_json_file(trace_hamiltonian));
            if (cfg.hyper.cost == CostKind::Type::InversePenalty) {
                kind = CostKind::inverse_penalty(cfg.hyper.alpha);
            } else if (cfg.hyper.cost == CostKind::Type::ExpPenalty) {
                kind = CostKind::exp_penalty(cfg.hyper.r_factor, cfg.hyper.s);
            }
        } else {
            throw CLI::ValidationError("trace", "give --instance or --hamiltonian");
        }

        const auto schedule = cfg.hyper.schedule();
        std::string csv = "shot,step,t,E_F,E_Total\n";
        for (int shot = 0; shot < trace_shots; ++shot) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(shot)));
            std::vector<double> w0(h.size());
            for (auto& w : w0) {
                w = rng.uniform(-schedule.init_half_width, schedule.init_half_width);
            }
            const auto result = anneal(h, kind, schedule, w0, true);
            for (const auto& point : *result.trace) {
                char line[160];
                std::snprintf(line, sizeof(line), "%d,%d,%.8f,%.10g,%.10g\n", shot, point.step,
                              point.t, point.e_final, point.e_total);
                csv += line;
            }
        }
        write_text_file(trace_out, csv);
        std::printf("wrote %d shot trace(s) to %s\n", trace_shots, trace_out.c_str());
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"physics-inspired excited-state solver and SVP benchmark pipeline"};
    try {
        return run(app, argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

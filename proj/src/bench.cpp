#include "exclqa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "exclqa/json_io.hpp"
#include "exclqa/metropolis.hpp"

namespace exclqa {

namespace {

// Seed-stream salts so instance generation, alpha tuning and shot sampling
// never share a stream.
constexpr std::uint64_t kGenSalt = 0x67656e65'72617465ULL;
constexpr std::uint64_t kAlphaSalt = 0x616c7068'61000000ULL;
constexpr std::uint64_t kShotSalt = 0x73686f74'73000000ULL;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
}

} // namespace

std::string solver_name(SolverKind kind) {
    switch (kind) {
    case SolverKind::ExcLqa: return "exclqa";
    case SolverKind::ExcLqaAlt: return "exclqa-alt";
    case SolverKind::Metropolis: return "metropolis";
    }
    return "unknown";
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "exclqa") return SolverKind::ExcLqa;
    if (name == "exclqa-alt") return SolverKind::ExcLqaAlt;
    if (name == "metropolis") return SolverKind::Metropolis;
    throw ValidationError("unknown solver: " + name);
}

double RescaleRule::value_for(const GramMatrix& g) const {
    switch (mode) {
    case Mode::GramNorm: return frobenius_norm(g);
    case Mode::GramNormOver50: return frobenius_norm(g) / 50.0;
    case Mode::Fixed: return fixed;
    }
    return 1.0;
}

AnnealSchedule HyperParams::schedule() const {
    AnnealSchedule s;
    s.steps = steps;
    s.gamma = gamma;
    s.beta = beta;
    s.learning_rate = eta;
    s.momentum = mu;
    s.init_half_width = f;
    return s;
}

HyperParams preset(const std::string& name) {
    HyperParams h;
    if (name == "paper-lqa2") {
        h.steps = 100; h.gamma = 8.0; h.beta = 3.8; h.mu = 0.9989; h.eta = 0.999;
        h.rescale = RescaleRule::gram_norm(); h.alpha = 0.055; h.f = 0.2;
        h.cost = CostKind::Type::InversePenalty; h.local_bits = 1;
    } else if (name == "paper-lqa4") {
        h.steps = 250; h.gamma = 30.0; h.beta = 3.8; h.mu = 0.999; h.eta = 0.009;
        h.rescale = RescaleRule::gram_norm_over_50(); h.alpha = 3e-10; h.f = 0.2;
        h.cost = CostKind::Type::InversePenalty; h.local_bits = 2;
    } else if (name == "paper-alt2") {
        h.steps = 4000; h.gamma = 1.0; h.beta = 3.8; h.mu = 0.9989; h.eta = 0.0091;
        h.rescale = RescaleRule::fixed_value(1.0); h.s = 4.6e-7; h.r_factor = 0.72;
        h.f = 0.15; h.cost = CostKind::Type::ExpPenalty; h.local_bits = 1;
    } else if (name == "paper-alt4") {
        h.steps = 100; h.gamma = 0.008; h.beta = 3.8; h.mu = 0.999999; h.eta = 0.091;
        h.rescale = RescaleRule::fixed_value(16385.0); h.s = 0.0005; h.r_factor = 0.72;
        h.f = 0.15; h.cost = CostKind::Type::ExpPenalty; h.local_bits = 2;
    } else {
        throw ValidationError("unknown preset: " + name);
    }
    return h;
}

std::vector<std::string> preset_names() {
    return {"paper-lqa2", "paper-lqa4", "paper-alt2", "paper-alt4"};
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                      : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string instance_id(int rank, int index) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "r%02d-i%04d", rank, index);
    return std::string(buf);
}

} // namespace

GenerationResult generate_instances(const ExperimentConfig& cfg) {
    if (cfg.ranks.empty()) {
        throw ValidationError("no ranks configured");
    }
    for (int r : cfg.ranks) {
        if (r < 1 || r > cfg.profile.d) {
            throw ValidationError("rank out of range for the lattice profile");
        }
    }
    struct Task {
        int rank;
        int index;
    };
    std::vector<Task> tasks;
    for (int rank : cfg.ranks) {
        for (int i = 0; i < cfg.instances_per_rank; ++i) {
            tasks.push_back({rank, cfg.instance_index_offset + i});
        }
    }
    std::vector<std::optional<Instance>> slots(tasks.size());
    std::vector<std::string> notes(tasks.size());

    parallel_for(tasks.size(), cfg.workers, [&](std::size_t t) {
        const auto [rank, index] = tasks[t];
        const std::uint64_t seed =
            derive_seed(cfg.seed, kGenSalt + static_cast<std::uint64_t>(rank),
                        static_cast<std::uint64_t>(index));
        Rng rng(seed);
        Basis full = qary_basis(cfg.profile.q, cfg.profile.d, cfg.profile.k, rng);
        Basis reduced = lll_reduce(full);
        Basis sub = sublattice(reduced, static_cast<std::size_t>(rank));
        const std::string id = instance_id(rank, index);
        try {
            EnumResult oracle = enumerate_shortest(sub, {cfg.enum_timeout_seconds});
            GramMatrix g = gram(sub);
            slots[t] = Instance{id,    rank, cfg.profile.q,        cfg.profile.d,
                                cfg.profile.k, seed, std::move(sub), std::move(g),
                                std::move(oracle.x), std::move(oracle.v), oracle.lambda1_sq};
        } catch (const EnumerationTimeout& e) {
            notes[t] = id + ": " + e.what();
        }
    });

    GenerationResult out;
    for (std::size_t t = 0; t < slots.size(); ++t) {
        if (slots[t]) {
            out.instances.push_back(std::move(*slots[t]));
        } else {
            out.skipped.push_back(notes[t]);
        }
    }
    return out;
}

bool instance_is_valid(const Instance& inst, int k) {
    if (in_search_space(inst.x, k)) return true;
    std::vector<std::int64_t> neg(inst.x.size());
    for (std::size_t i = 0; i < inst.x.size(); ++i) neg[i] = -inst.x[i];
    return in_search_space(neg, k);
}

std::vector<Instance> filter_valid(const std::vector<Instance>& instances, int k) {
    std::vector<Instance> out;
    for (const auto& inst : instances) {
        if (instance_is_valid(inst, k)) out.push_back(inst);
    }
    return out;
}

std::vector<SearchSpaceCell> search_space_probability(const std::vector<Instance>& instances,
                                                      const std::vector<int>& k_list) {
    std::set<int> ranks;
    for (const auto& inst : instances) ranks.insert(inst.rank);
    std::vector<SearchSpaceCell> cells;
    for (int rank : ranks) {
        for (int k : k_list) {
            int valid = 0;
            int total = 0;
            for (const auto& inst : instances) {
                if (inst.rank != rank) continue;
                ++total;
                if (instance_is_valid(inst, k)) ++valid;
            }
            cells.push_back({rank, k, valid, total,
                             total > 0 ? static_cast<double>(valid) / total : 0.0});
        }
    }
    return cells;
}

namespace {

bool all_zero(const std::vector<std::int64_t>& x) {
    for (auto v : x) {
        if (v != 0) return false;
    }
    return true;
}

/// One tuner probe: fraction of shots that decode to the zero vector.
bool probe_majority_zero(const IsingHamiltonian& h, const QuditEncoding& enc,
                         const AnnealSchedule& schedule, double alpha, int shots,
                         std::uint64_t seed) {
    const CostKind kind = CostKind::inverse_penalty(alpha);
    int zeros = 0;
    for (int shot = 0; shot < shots; ++shot) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(shot)));
        std::vector<double> w0(h.size());
        for (auto& w : w0) w = rng.uniform(-schedule.init_half_width, schedule.init_half_width);
        const ShotResult r = anneal(h, kind, schedule, w0);
        if (all_zero(decode_coefficients(r.config, enc))) ++zeros;
    }
    return 2 * zeros > shots;
}

} // namespace

double tune_alpha(const GramMatrix& g, const HyperParams& hyper, const AlphaTunerOptions& options,
                  std::uint64_t seed) {
    const double m = hyper.rescale.value_for(g);
    const QuditEncoding enc{g.size(), hyper.local_bits, m};
    const IsingHamiltonian h = build_svp_hamiltonian(g, enc);
    const AnnealSchedule schedule = hyper.schedule();

    const double gh = gaussian_heuristic(g);
    const double e1_est = gh * gh / m;
    double lo = options.lo_override.value_or(options.lo_factor * e1_est * e1_est);
    double hi = options.hi_override.value_or(options.hi_factor * e1_est * e1_est);
    if (!(lo > 0.0) || !(hi > lo)) {
        throw ValidationError("alpha bracket is empty");
    }

    if (probe_majority_zero(h, enc, schedule, hi, options.probe_shots, derive_seed(seed, 0))) {
        throw BracketExhaustedError(
            "annealing never leaves the zero vector at the upper alpha bracket");
    }
    for (int it = 0; it < options.max_iterations && hi / lo >= options.bracket_ratio; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (probe_majority_zero(h, enc, schedule, mid, options.probe_shots,
                                derive_seed(seed, static_cast<std::uint64_t>(it) + 1))) {
            lo = mid; // under-penalized
        } else {
            hi = mid;
        }
    }
    return options.boost * std::sqrt(lo * hi);
}

namespace {

std::vector<double> sample_initial_weights(std::size_t n, double f, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> w(n);
    for (auto& v : w) v = rng.uniform(-f, f);
    return w;
}

struct ResolvedInstanceRun {
    IsingHamiltonian hamiltonian;
    QuditEncoding enc;
    CostKind kind;
};

ResolvedInstanceRun resolve_instance(const ExperimentConfig& cfg, const Instance& inst,
                                     std::size_t instance_index) {
    const HyperParams& hp = cfg.hyper;
    const double m = hp.rescale.value_for(inst.gram);
    QuditEncoding enc{inst.gram.size(), hp.local_bits, m};
    IsingHamiltonian h = build_svp_hamiltonian(inst.gram, enc);

    CostKind kind = CostKind::ground_state();
    switch (cfg.solver) {
    case SolverKind::ExcLqa:
    case SolverKind::Metropolis: {
        double alpha = hp.alpha;
        if (cfg.tune_alpha_per_instance) {
            alpha = tune_alpha(inst.gram, hp, cfg.tuner,
                               derive_seed(cfg.seed, kAlphaSalt, instance_index));
        }
        kind = CostKind::inverse_penalty(alpha);
        break;
    }
    case SolverKind::ExcLqaAlt: {
        const double gh = gaussian_heuristic(inst.gram);
        kind = CostKind::exp_penalty(hp.r_factor * gh * gh, hp.s);
        break;
    }
    }
    return ResolvedInstanceRun{std::move(h), enc, kind};
}

RunRecord run_one_instance(const ExperimentConfig& cfg, const Instance& inst,
                           std::size_t instance_index, const InstanceSolver& custom_solver) {
    RunRecord rec;
    rec.instance_id = inst.id;
    rec.rank = inst.rank;
    rec.lambda1_sq = inst.lambda1_sq;
    rec.valid = instance_is_valid(inst, cfg.hyper.local_bits);
    if (!rec.valid) {
        return rec;
    }

    std::optional<ResolvedInstanceRun> run;
    if (!custom_solver) {
        run.emplace(resolve_instance(cfg, inst, instance_index));
    } else {
        const HyperParams& hp = cfg.hyper;
        run.emplace(ResolvedInstanceRun{
            build_svp_hamiltonian(inst.gram,
                                  QuditEncoding{inst.gram.size(), hp.local_bits,
                                                hp.rescale.value_for(inst.gram)}),
            QuditEncoding{inst.gram.size(), hp.local_bits, hp.rescale.value_for(inst.gram)},
            CostKind::ground_state()});
    }

    const AnnealSchedule schedule = cfg.hyper.schedule();
    for (int shot = 0; shot < cfg.max_shots; ++shot) {
        const std::uint64_t shot_seed =
            derive_seed(cfg.seed, kShotSalt + instance_index, static_cast<std::uint64_t>(shot));
        SpinConfig config;
        if (custom_solver) {
            config = custom_solver(inst, run->hamiltonian, run->enc, shot_seed);
        } else if (cfg.solver == SolverKind::Metropolis) {
            MetropolisConfig mc;
            mc.iterations = cfg.metropolis_iterations > 0 ? cfg.metropolis_iterations
                                                          : cfg.hyper.steps;
            mc.temperature = cfg.metropolis_temperature;
            mc.seed = shot_seed;
            config = metropolis_optimize(run->hamiltonian, run->kind, mc).config;
        } else {
            const auto w0 =
                sample_initial_weights(run->hamiltonian.size(), schedule.init_half_width, shot_seed);
            config = anneal(run->hamiltonian, run->kind, schedule, w0).config;
        }
        rec.shots_used = shot + 1;
        const auto x = decode_coefficients(config, run->enc);
        if (all_zero(x)) {
            continue; // trivial decode counts as a failed shot
        }
        const std::int64_t norm = vector_norm_sq(x, inst.gram);
        if (!rec.best_norm_sq || norm < *rec.best_norm_sq) {
            rec.best_norm_sq = norm;
        }
        if (norm == inst.lambda1_sq) {
            rec.solved = true;
            break;
        }
    }
    if (!rec.solved) {
        rec.shots_used = cfg.max_shots;
    }
    if (rec.best_norm_sq) {
        rec.approx_factor = std::sqrt(static_cast<double>(*rec.best_norm_sq) /
                                      static_cast<double>(rec.lambda1_sq));
    }
    return rec;
}

std::vector<RankMetrics> aggregate_metrics(const std::vector<RunRecord>& records) {
    std::set<int> ranks;
    for (const auto& r : records) ranks.insert(r.rank);
    std::vector<RankMetrics> out;
    for (int rank : ranks) {
        RankMetrics m;
        m.rank = rank;
        double shots_sum = 0.0;
        double approx_sum = 0.0;
        int approx_count = 0;
        for (const auto& r : records) {
            if (r.rank != rank || !r.valid) continue;
            ++m.valid_count;
            if (r.solved) {
                ++m.solved_count;
                shots_sum += r.shots_used;
            } else if (r.approx_factor) {
                approx_sum += *r.approx_factor;
                ++approx_count;
            }
        }
        m.solved_ratio = m.valid_count > 0
                             ? static_cast<double>(m.solved_count) / m.valid_count
                             : 0.0;
        if (m.solved_count > 0) m.avg_shots = shots_sum / m.solved_count;
        if (approx_count > 0) m.avg_approx_factor = approx_sum / approx_count;
        out.push_back(m);
    }
    return out;
}

} // namespace

ExperimentResult run_experiment_with_solver(const ExperimentConfig& cfg,
                                            const std::vector<Instance>& instances,
                                            const InstanceSolver& solver) {
    if (cfg.max_shots < 1) {
        throw ValidationError("max_shots must be at least 1");
    }
    std::vector<RunRecord> records(instances.size());
    parallel_for(instances.size(), cfg.workers, [&](std::size_t i) {
        records[i] = run_one_instance(cfg, instances[i], i, solver);
    });
    ExperimentResult out;
    out.metrics = aggregate_metrics(records);
    out.records = std::move(records);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<Instance>& instances) {
    return run_experiment_with_solver(cfg, instances, {});
}

std::vector<std::pair<std::string, RankMetrics>> compare_methods(
    const std::vector<MethodReport>& reports) {
    if (reports.empty()) {
        throw ValidationError("no method reports to compare");
    }
    std::set<std::string> reference;
    for (const auto& r : reports.front().result.records) reference.insert(r.instance_id);
    for (const auto& report : reports) {
        std::set<std::string> ids;
        for (const auto& r : report.result.records) ids.insert(r.instance_id);
        if (ids != reference) {
            throw ValidationError("method reports cover different instance sets");
        }
    }
    std::vector<std::pair<std::string, RankMetrics>> merged;
    for (const auto& report : reports) {
        for (const auto& m : report.result.metrics) {
            merged.emplace_back(report.method, m);
        }
    }
    return merged;
}

std::string results_csv(const std::vector<MethodReport>& reports) {
    std::string out =
        "method,rank,instance_id,valid,solved,shots_used,best_norm_sq,lambda1_sq,approx_factor\n";
    for (const auto& report : reports) {
        for (const auto& r : report.result.records) {
            out += report.method;
            out += ',' + std::to_string(r.rank);
            out += ',' + r.instance_id;
            out += r.valid ? ",1" : ",0";
            out += r.solved ? ",1" : ",0";
            out += ',' + std::to_string(r.shots_used);
            out += ',';
            if (r.best_norm_sq) out += std::to_string(*r.best_norm_sq);
            out += ',' + std::to_string(r.lambda1_sq);
            out += ',';
            if (r.approx_factor) out += format_double(*r.approx_factor);
            out += '\n';
        }
    }
    return out;
}

std::string metrics_csv(const std::vector<MethodReport>& reports) {
    std::string out =
        "method,rank,valid_count,solved_count,solved_ratio,avg_shots,avg_approx_factor\n";
    for (const auto& report : reports) {
        for (const auto& m : report.result.metrics) {
            out += report.method;
            out += ',' + std::to_string(m.rank);
            out += ',' + std::to_string(m.valid_count);
            out += ',' + std::to_string(m.solved_count);
            out += ',' + format_double(m.solved_ratio);
            out += ',';
            if (m.avg_shots) out += format_double(*m.avg_shots);
            out += ',';
            if (m.avg_approx_factor) out += format_double(*m.avg_approx_factor);
            out += '\n';
        }
    }
    return out;
}

void save_instances(const std::filesystem::path& dir, const std::vector<Instance>& instances) {
    std::filesystem::create_directories(dir / "bases");
    std::filesystem::create_directories(dir / "oracle");
    std::ofstream jsonl(dir / "instances.jsonl");
    if (!jsonl) {
        throw ValidationError("cannot write " + (dir / "instances.jsonl").string());
    }
    for (const auto& inst : instances) {
        const std::string basis_file = "bases/" + inst.id + ".json";
        save_json_file(dir / basis_file,
                       basis_to_json(inst.basis, inst.q, inst.d, inst.k_qary, inst.seed));
        save_json_file(dir / "oracle" / (inst.id + ".json"),
                       Json{{"lambda1_sq", inst.lambda1_sq}, {"x", inst.x}, {"v", inst.v}});
        const Json line{{"id", inst.id},       {"rank", inst.rank}, {"q", inst.q},
                        {"d", inst.d},         {"k_qary", inst.k_qary}, {"seed", inst.seed},
                        {"basis_file", basis_file}, {"lambda1_sq", inst.lambda1_sq},
                        {"x", inst.x}};
        jsonl << line.dump() << "\n";
    }
}

ValidSetResult generate_valid_instances(ExperimentConfig cfg, int valid_per_rank,
                                        int max_batches) {
    if (valid_per_rank < 1) {
        throw ValidationError("valid_per_rank must be at least 1");
    }
    ValidSetResult out;
    std::map<int, int> valid_count;
    for (int batch = 0; batch < max_batches; ++batch) {
        cfg.instance_index_offset = batch * cfg.instances_per_rank;
        auto gen = generate_instances(cfg);
        for (auto& note : gen.skipped) out.skipped.push_back(std::move(note));
        for (auto& inst : gen.instances) {
            if (instance_is_valid(inst, cfg.hyper.local_bits) &&
                valid_count[inst.rank] < valid_per_rank) {
                ++valid_count[inst.rank];
                out.valid.push_back(inst);
            }
            out.all_raw.push_back(std::move(inst));
        }
        bool done = true;
        for (int rank : cfg.ranks) {
            if (valid_count[rank] < valid_per_rank) done = false;
        }
        if (done) return out;
    }
    throw ValidationError("could not collect enough valid instances within the batch budget");
}

std::vector<Instance> load_instances(const std::filesystem::path& dir) {
    std::ifstream jsonl(dir / "instances.jsonl");
    if (!jsonl) {
        throw ValidationError("cannot open " + (dir / "instances.jsonl").string());
    }
    std::vector<Instance> out;
    std::string line;
    while (std::getline(jsonl, line)) {
        if (line.empty()) continue;
        const Json j = Json::parse(line);
        const auto file = basis_from_json(load_json_file(dir / j.at("basis_file").get<std::string>()));
        Basis basis(file.rows);
        GramMatrix g = gram(basis);
        const Json oracle = load_json_file(dir / "oracle" / (j.at("id").get<std::string>() + ".json"));
        out.push_back(Instance{j.at("id").get<std::string>(),
                               j.at("rank").get<int>(),
                               j.at("q").get<std::int64_t>(),
                               j.at("d").get<int>(),
                               j.at("k_qary").get<int>(),
                               j.at("seed").get<std::uint64_t>(),
                               std::move(basis),
                               std::move(g),
                               oracle.at("x").get<std::vector<std::int64_t>>(),
                               oracle.at("v").get<std::vector<std::int64_t>>(),
                               oracle.at("lambda1_sq").get<std::int64_t>()});
    }
    return out;
}

} // namespace exclqa

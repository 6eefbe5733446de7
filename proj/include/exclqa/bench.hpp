#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "exclqa/anneal.hpp"
#include "exclqa/lattice.hpp"
#include "exclqa/oracle.hpp"
#include "exclqa/svp_encode.hpp"

namespace exclqa {

/// q-ary lattice generation parameters.
struct LatticeProfile {
    std::int64_t q = 257;
    int d = 40;
    int k = 20;

    static LatticeProfile desk() { return {257, 40, 20}; }
    static LatticeProfile paper() { return {65537, 180, 90}; }
};

enum class SolverKind { ExcLqa, ExcLqaAlt, Metropolis };

std::string solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);

/// Per-instance rule for the Gram rescale M.
struct RescaleRule {
    enum class Mode { GramNorm, GramNormOver50, Fixed };
    Mode mode = Mode::GramNorm;
    double fixed = 1.0;

    double value_for(const GramMatrix& g) const;
    static RescaleRule gram_norm() { return {Mode::GramNorm, 1.0}; }
    static RescaleRule gram_norm_over_50() { return {Mode::GramNormOver50, 1.0}; }
    static RescaleRule fixed_value(double v) { return {Mode::Fixed, v}; }
};

/// One hyperparameter column: annealing schedule, penalty parameters, the
/// Gram rescale and the local dimension of the coefficient search space.
struct HyperParams {
    int steps = 100;        // N
    double gamma = 8.0;
    double beta = 3.8;
    double mu = 0.9989;
    double eta = 0.999;
    double f = 0.2;
    RescaleRule rescale = RescaleRule::gram_norm(); // M
    double alpha = 0.055;   // inverse-penalty prefactor
    double s = 0.0;         // exponential-penalty decay
    double r_factor = 0.72; // r = r_factor * gh(L)^2
    CostKind::Type cost = CostKind::Type::InversePenalty;
    int local_bits = 1;     // k; local dimension 2^k

    AnnealSchedule schedule() const;
};

/// Named hyperparameter presets: paper-lqa2, paper-lqa4, paper-alt2,
/// paper-alt4.
HyperParams preset(const std::string& name);
std::vector<std::string> preset_names();

struct AlphaTunerOptions {
    int probe_shots = 10;
    int max_iterations = 12;
    double bracket_ratio = 1.1;
    double lo_factor = 1e-6; // bracket ends, times (estimated E_1)^2
    double hi_factor = 1e2;
    // The bisection converges onto the lower edge of the useful range (the
    // point where decodes start leaving the zero vector); the returned value
    // is boosted into the middle of the first-excited plateau.
    double boost = 1.5;
    std::optional<double> lo_override;
    std::optional<double> hi_override;
};

struct ExperimentConfig {
    LatticeProfile profile = LatticeProfile::desk();
    std::vector<int> ranks;
    int instances_per_rank = 100;
    int instance_index_offset = 0;
    int max_shots = 100;
    SolverKind solver = SolverKind::ExcLqa;
    HyperParams hyper;
    bool tune_alpha_per_instance = false;
    AlphaTunerOptions tuner;
    std::int64_t metropolis_iterations = 0; // 0: reuse hyper.steps
    double metropolis_temperature = 0.0;    // <= 0: automatic
    double enum_timeout_seconds = 60.0;
    std::uint64_t seed = 1;
    int workers = 0; // 0: hardware concurrency
};

/// A generated SVP instance: the reduced sublattice basis, its exact Gram
/// matrix and the enumeration certificate.
struct Instance {
    std::string id;
    int rank;
    std::int64_t q;
    int d;
    int k_qary;
    std::uint64_t seed;
    Basis basis;
    GramMatrix gram;
    std::vector<std::int64_t> x; // oracle shortest-vector coefficients
    std::vector<std::int64_t> v; // the vector itself
    std::int64_t lambda1_sq;
};

struct GenerationResult {
    std::vector<Instance> instances;
    std::vector<std::string> skipped; // "<id>: reason" lines
};

/// Generates instances_per_rank instances per configured rank: fresh q-ary
/// basis per instance, LLL reduction, rank-n prefix, then the enumeration
/// oracle. Instances whose enumeration times out are skipped with a note.
GenerationResult generate_instances(const ExperimentConfig& cfg);

/// True when the oracle solution of the instance (or its negation) lies in
/// the local-dimension-2^k coefficient box.
bool instance_is_valid(const Instance& inst, int k);

/// Keeps the valid instances for local dimension 2^k.
std::vector<Instance> filter_valid(const std::vector<Instance>& instances, int k);

struct SearchSpaceCell {
    int rank;
    int k;
    int valid;
    int total;
    double probability;
};

/// Fraction of instances per (rank, k) whose solution fits the search space.
std::vector<SearchSpaceCell> search_space_probability(const std::vector<Instance>& instances,
                                                      const std::vector<int>& k_list);

/// Log-scale binary search for the inverse-penalty prefactor: probes run a
/// small batch of annealing shots; a majority of zero-vector decodes means
/// under-penalized (raise the lower end), anything else lowers the upper end.
/// The bracket ends default to [1e-6, 1e2] times the squared first-excited
/// estimate gh(L)^2 / M. Throws BracketExhaustedError when even the upper
/// end never leaves the zero vector.
double tune_alpha(const GramMatrix& g, const HyperParams& hyper, const AlphaTunerOptions& options,
                  std::uint64_t seed);

struct RunRecord {
    std::string instance_id;
    int rank = 0;
    bool valid = false;
    bool solved = false;
    int shots_used = 0;
    std::optional<std::int64_t> best_norm_sq; // best nonzero decode over all shots
    std::int64_t lambda1_sq = 0;
    std::optional<double> approx_factor; // sqrt(best_norm_sq / lambda1_sq)
};

struct RankMetrics {
    int rank = 0;
    int valid_count = 0;
    int solved_count = 0;
    double solved_ratio = 0.0;
    std::optional<double> avg_shots;         // over solved instances
    std::optional<double> avg_approx_factor; // over unsolved instances with a nonzero decode
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<RankMetrics> metrics;
};

/// Solver hook: returns the decoded spin configuration of one shot.
using InstanceSolver = std::function<SpinConfig(
    const Instance&, const IsingHamiltonian&, const QuditEncoding&, std::uint64_t shot_seed)>;

/// Runs the configured solver over every valid instance, up to max_shots
/// shots each; a shot succeeds when its decoded nonzero vector has squared
/// norm exactly lambda1_sq. Zero-vector decodes are failed shots. Invalid
/// instances get a record with valid=false and are not run.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::vector<Instance>& instances);

/// Same, with a custom per-shot solver (used by harness tests).
ExperimentResult run_experiment_with_solver(const ExperimentConfig& cfg,
                                            const std::vector<Instance>& instances,
                                            const InstanceSolver& solver);

struct MethodReport {
    std::string method;
    ExperimentResult result;
};

/// Validates that all reports cover the same instance set, then returns the
/// aligned per-rank metric rows.
std::vector<std::pair<std::string, RankMetrics>> compare_methods(
    const std::vector<MethodReport>& reports);

/// CSV renderers; schemas are frozen so downstream plots regenerate stably.
std::string results_csv(const std::vector<MethodReport>& reports);
std::string metrics_csv(const std::vector<MethodReport>& reports);

/// instances.jsonl plus per-instance basis and oracle files under dir.
void save_instances(const std::filesystem::path& dir, const std::vector<Instance>& instances);
std::vector<Instance> load_instances(const std::filesystem::path& dir);

/// Runs fn(0..count-1) on the given number of worker threads (0 = hardware
/// concurrency). Results must be written to per-index slots; the outcome is
/// identical for any worker count.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct ValidSetResult {
    std::vector<Instance> valid;   // exactly valid_per_rank per rank (generation order)
    std::vector<Instance> all_raw; // every generated instance, for validity statistics
    std::vector<std::string> skipped;
};

/// Generates batches of instances until every configured rank has at least
/// valid_per_rank instances whose solution fits the configured search space,
/// then keeps the first valid_per_rank per rank. Throws ValidationError when
/// max_batches batches are not enough.
ValidSetResult generate_valid_instances(ExperimentConfig cfg, int valid_per_rank,
                                        int max_batches = 6);

} // namespace exclqa

#ifndef IADMM_BENCH_HPP_
#define IADMM_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iadmm/admm.hpp"
#include "iadmm/rpcp.hpp"

namespace iadmm::bench {

/// One solver configuration of a sweep. For the inertial variant in coupled
/// mode, a missing lambda is filled from fixed_sigma_schedule(alpha, sigma).
struct SolverSpec {
    std::string name;
    AdmmVariant variant = AdmmVariant::classical;
    std::optional<double> lambda;
    AlphaRule alpha;
    InertiaMode mode = InertiaMode::coupled;
    double sigma = 0.01;
    double proximal_s_scale = 0.0;
    double proximal_t_scale = 0.0;
};

/// The five stock configurations: classical ADMM, GADMM (lambda 1.6), the
/// Chen-style inertial proximal ADMM (alpha 0.3), and the two inertial-ADMM
/// regimes (alpha 0.2 / lambda 1.2496, and lambda 1.5 with the adaptive
/// inertia rule).
std::vector<SolverSpec> stock_solver_suite();

struct ExperimentConfig {
    std::vector<Index> orders = {100, 200};
    std::vector<double> rank_fractions = {0.05};
    std::vector<double> sparsity_fractions = {0.05};
    std::vector<double> epsilons = {1e-7};
    double gamma = 0.01;
    std::vector<SolverSpec> solvers = stock_solver_suite();
    std::vector<std::uint64_t> seeds = {1};
    std::string output_path = "results.csv";
    int max_iterations = 5000;
    bool paper_scale = false;       // switches default orders to 500/800/1000
    bool include_wall_time = false; // real timings break byte determinism
    int jobs = 1;
    std::string trace_dir;          // per-run trace CSVs when nonempty

    void validate() const;  // throws std::invalid_argument
};

struct ResultRow {
    std::string solver;
    Index m = 0;
    Index r = 0;
    Index nnz = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    int iterations = 0;
    double rel_u_star = 0.0;
    double rel_v_star = 0.0;
    Index rank_u = 0;
    double wall_seconds = 0.0;
    SolveStatus status = SolveStatus::budget_exhausted;
};

/// Called after each completed cell with the row and the full solve report
/// (trace included); used for re-verification and plotting hooks.
using CellCallback = std::function<void(const ResultRow&, const SolveReport&)>;

/// Runs the full cartesian sweep solver x m x rank x sparsity x epsilon x
/// seed. Rows stream to config.output_path as they complete so partial runs
/// survive interruption; cell failures become diverged rows and never abort
/// the sweep. Instance data depends only on (seed, m, r, nnz), so every
/// solver and epsilon sees the same matrices and parallel execution cannot
/// change any result.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const CellCallback& on_cell = {});

std::string csv_header();
std::string to_csv_line(const ResultRow& row, bool include_wall_time);

/// Header plus one line per row; >= 10 significant digits on reals and
/// byte-stable under identical inputs. I/O failures throw std::runtime_error
/// with the path in the message.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path,
              bool include_wall_time = false);

/// Rows of (alpha, delta, lambda) from fixed_sigma_schedule, 4 decimal places.
void print_param_table(const std::vector<double>& alphas, double sigma,
                       std::ostream& out);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace iadmm::bench

#endif  // IADMM_BENCH_HPP_

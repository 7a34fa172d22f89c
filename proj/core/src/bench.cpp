#include "iadmm/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "iadmm/rng.hpp"

namespace iadmm::bench {

namespace {

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string sanitize_for_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    }
    return out;
}

void write_trace_file(const SolveReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file: " + path);
    out << "iteration,rel_u,rel_v,rel_b,primal_obj,r3\n";
    for (const TraceRow& row : report.trace) {
        out << row.k << ',' << format_real(row.rel_u) << ','
            << format_real(row.rel_v) << ',' << format_real(row.rel_b) << ','
            << format_real(row.primal_obj) << ',' << format_real(row.r3) << '\n';
    }
}

AdmmParams make_params(const SolverSpec& spec, const ExperimentConfig& config,
                       double epsilon) {
    AdmmParams params;
    params.variant = spec.variant;
    params.gamma = config.gamma;
    params.epsilon = epsilon;
    params.max_iterations = config.max_iterations;
    switch (spec.variant) {
        case AdmmVariant::classical:
            break;
        case AdmmVariant::gadmm:
            if (!spec.lambda) {
                throw std::invalid_argument("solver '" + spec.name +
                                            "': gadmm requires lambda");
            }
            params.lambda_schedule = constant_lambda(*spec.lambda);
            break;
        case AdmmVariant::iadmm_chen:
            params.alpha = spec.alpha;
            params.proximal_s_scale = spec.proximal_s_scale;
            params.proximal_t_scale = spec.proximal_t_scale;
            break;
        case AdmmVariant::inertial: {
            params.alpha = spec.alpha;
            params.mode = spec.mode;
            params.sigma = spec.sigma;
            double lambda;
            if (spec.lambda) {
                lambda = *spec.lambda;
            } else if (spec.mode == InertiaMode::coupled &&
                       spec.alpha.kind == AlphaRule::Kind::constant) {
                lambda = fixed_sigma_schedule(spec.alpha.value, spec.sigma).lambda;
            } else {
                throw std::invalid_argument("solver '" + spec.name +
                                            "': inertial/summable mode requires lambda");
            }
            params.lambda_schedule = constant_lambda(lambda);
            break;
        }
    }
    return params;
}

struct Cell {
    SolverSpec spec;
    Index m = 0;
    Index r = 0;
    Index nnz = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

std::pair<ResultRow, SolveReport> run_cell(const Cell& cell,
                                           const ExperimentConfig& config) {
    ResultRow row;
    row.solver = cell.spec.name;
    row.m = cell.m;
    row.r = cell.r;
    row.nnz = cell.nnz;
    row.epsilon = cell.epsilon;
    row.seed = cell.seed;
    SolveReport report;
    try {
        const std::uint64_t instance_seed =
            mix_seed({cell.seed, static_cast<std::uint64_t>(cell.m),
                      static_cast<std::uint64_t>(cell.r),
                      static_cast<std::uint64_t>(cell.nnz)});
        const RpcpInstance instance =
            generate_rpcp(cell.m, cell.r, cell.nnz, instance_seed);
        const TwoBlockProblem problem = as_problem(instance);
        const AdmmParams params = make_params(cell.spec, config, cell.epsilon);
        report = solve(problem, params);
        const RecoveryMetrics metrics =
            recovery_metrics(instance, report.state.u, report.state.v);
        row.iterations = report.iterations;
        row.status = report.status;
        row.rel_u_star = metrics.rel_u_star;
        row.rel_v_star = metrics.rel_v_star;
        row.rank_u = metrics.rank_u;
        row.wall_seconds = config.include_wall_time ? report.wall_seconds : 0.0;
    } catch (const std::exception&) {
        row.status = SolveStatus::diverged;
        row.rel_u_star = std::numeric_limits<double>::quiet_NaN();
        row.rel_v_star = std::numeric_limits<double>::quiet_NaN();
    }
    return {std::move(row), std::move(report)};
}

}  // namespace

std::vector<SolverSpec> stock_solver_suite() {
    std::vector<SolverSpec> suite(5);
    suite[0].name = "ADMM";
    suite[0].variant = AdmmVariant::classical;

    suite[1].name = "GADMM";
    suite[1].variant = AdmmVariant::gadmm;
    suite[1].lambda = 1.6;

    suite[2].name = "iADMM_Chen";
    suite[2].variant = AdmmVariant::iadmm_chen;
    suite[2].alpha = constant_alpha(0.3);

    suite[3].name = "iADMM-1";
    suite[3].variant = AdmmVariant::inertial;
    suite[3].alpha = constant_alpha(0.2);
    suite[3].lambda = 1.2496;
    suite[3].mode = InertiaMode::coupled;

    suite[4].name = "iADMM-2";
    suite[4].variant = AdmmVariant::inertial;
    suite[4].alpha = adaptive_alpha(0.05);
    suite[4].lambda = 1.5;
    suite[4].mode = InertiaMode::summable;
    return suite;
}

void ExperimentConfig::validate() const {
    if (orders.empty()) throw std::invalid_argument("config: need at least one order");
    for (Index m : orders) {
        if (m < 1) throw std::invalid_argument("config: orders must be >= 1");
    }
    auto check_fractions = [](const std::vector<double>& fractions, const char* what) {
        if (fractions.empty()) {
            throw std::invalid_argument(std::string("config: need at least one ") + what);
        }
        for (double f : fractions) {
            if (!(f > 0.0 && f <= 1.0)) {
                throw std::invalid_argument(std::string("config: ") + what +
                                            " must lie in (0, 1]");
            }
        }
    };
    check_fractions(rank_fractions, "rank fraction");
    check_fractions(sparsity_fractions, "sparsity fraction");
    if (epsilons.empty()) throw std::invalid_argument("config: need at least one epsilon");
    for (double eps : epsilons) {
        if (!(eps > 0.0)) throw std::invalid_argument("config: epsilons must be positive");
    }
    if (!(gamma > 0.0)) throw std::invalid_argument("config: gamma must be positive");
    if (solvers.empty()) throw std::invalid_argument("config: need at least one solver");
    if (seeds.empty()) throw std::invalid_argument("config: need at least one seed");
    if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
    if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
    for (const SolverSpec& spec : solvers) {
        const AdmmParams params = make_params(spec, *this, epsilons.front());
        const ValidationReport report = iadmm::validate_params(params);
        if (!report.ok) {
            throw std::invalid_argument("config: solver '" + spec.name +
                                        "': " + report.to_string());
        }
    }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const CellCallback& on_cell) {
    config.validate();

    std::vector<Cell> cells;
    for (Index m : config.orders) {
        for (double rank_fraction : config.rank_fractions) {
            const Index r = std::max<Index>(
                1, static_cast<Index>(std::llround(rank_fraction * static_cast<double>(m))));
            for (double sparsity_fraction : config.sparsity_fractions) {
                const Index nnz = static_cast<Index>(std::llround(
                    sparsity_fraction * static_cast<double>(m) * static_cast<double>(m)));
                for (std::uint64_t seed : config.seeds) {
                    for (double epsilon : config.epsilons) {
                        for (const SolverSpec& spec : config.solvers) {
                            cells.push_back(Cell{spec, m, r, nnz, epsilon, seed});
                        }
                    }
                }
            }
        }
    }

    std::ofstream out;
    if (!config.output_path.empty()) {
        out.open(config.output_path);
        if (!out) {
            throw std::runtime_error("run_experiment: cannot open output file: " +
                                     config.output_path);
        }
        out << csv_header() << '\n' << std::flush;
    }
    if (!config.trace_dir.empty()) {
        std::filesystem::create_directories(config.trace_dir);
    }

    std::vector<ResultRow> rows;
    rows.reserve(cells.size());

    const std::size_t window = static_cast<std::size_t>(std::max(1, config.jobs));
    std::vector<std::future<std::pair<ResultRow, SolveReport>>> futures(cells.size());
    std::size_t next_launch = 0;
    auto launch = [&](std::size_t i) {
        futures[i] = std::async(std::launch::async, run_cell, cells[i],
                                std::cref(config));
    };
    for (; next_launch < std::min(cells.size(), window); ++next_launch) {
        launch(next_launch);
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto [row, report] = futures[i].get();
        if (next_launch < cells.size()) launch(next_launch++);

        if (out.is_open()) {
            out << to_csv_line(row, config.include_wall_time) << '\n' << std::flush;
        }
        if (!config.trace_dir.empty() && !report.trace.empty()) {
            std::ostringstream name;
            name << sanitize_for_filename(row.solver) << "_m" << row.m << "_r"
                 << row.r << "_nnz" << row.nnz << "_eps" << format_real(row.epsilon)
                 << "_seed" << row.seed << ".csv";
            write_trace_file(
                report, (std::filesystem::path(config.trace_dir) / name.str()).string());
        }
        if (on_cell) on_cell(row, report);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_header() {
    return "solver,m,r,nnz,epsilon,seed,iterations,rel_u_star,rel_v_star,rank_u,"
           "wall_seconds,status";
}

std::string to_csv_line(const ResultRow& row, bool include_wall_time) {
    std::ostringstream line;
    line << row.solver << ',' << row.m << ',' << row.r << ',' << row.nnz << ','
         << format_real(row.epsilon) << ',' << row.seed << ',' << row.iterations
         << ',' << format_real(row.rel_u_star) << ',' << format_real(row.rel_v_star)
         << ',' << row.rank_u << ','
         << format_real(include_wall_time ? row.wall_seconds : 0.0) << ','
         << to_string(row.status);
    return line.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path,
              bool include_wall_time) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot open output file: " + path);
    out << csv_header() << '\n';
    for (const ResultRow& row : rows) {
        out << to_csv_line(row, include_wall_time) << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write failed: " + path);
}

void print_param_table(const std::vector<double>& alphas, double sigma,
                       std::ostream& out) {
    out << "alpha\tdelta\tlambda\n";
    char buffer[96];
    for (double alpha : alphas) {
        const FixedSigmaSchedule schedule = fixed_sigma_schedule(alpha, sigma);
        std::snprintf(buffer, sizeof(buffer), "%g\t%.4f\t%.4f\n", alpha,
                      schedule.delta, schedule.lambda);
        out << buffer;
    }
}

namespace {

using nlohmann::json;

std::string variant_name(AdmmVariant variant) { return to_string(variant); }

AdmmVariant variant_from_name(const std::string& name) {
    if (name == "classical") return AdmmVariant::classical;
    if (name == "gadmm") return AdmmVariant::gadmm;
    if (name == "iadmm_chen") return AdmmVariant::iadmm_chen;
    if (name == "inertial") return AdmmVariant::inertial;
    throw std::invalid_argument("unknown solver variant: " + name);
}

json solver_to_json(const SolverSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["variant"] = variant_name(spec.variant);
    if (spec.lambda) j["lambda"] = *spec.lambda;
    if (spec.alpha.kind == AlphaRule::Kind::adaptive) {
        j["alpha"] = "adaptive";
        j["alpha_cap"] = spec.alpha.cap;
    } else if (spec.alpha.value != 0.0) {
        j["alpha"] = spec.alpha.value;
    }
    if (spec.variant == AdmmVariant::inertial) {
        j["mode"] = spec.mode == InertiaMode::coupled ? "coupled" : "summable";
        j["sigma"] = spec.sigma;
    }
    if (spec.proximal_s_scale != 0.0) j["proximal_s_scale"] = spec.proximal_s_scale;
    if (spec.proximal_t_scale != 0.0) j["proximal_t_scale"] = spec.proximal_t_scale;
    return j;
}

SolverSpec solver_from_json(const json& j) {
    SolverSpec spec;
    spec.variant = variant_from_name(j.at("variant").get<std::string>());
    spec.name = j.value("name", variant_name(spec.variant));
    if (j.contains("lambda")) spec.lambda = j.at("lambda").get<double>();
    if (j.contains("alpha")) {
        if (j.at("alpha").is_string()) {
            if (j.at("alpha").get<std::string>() != "adaptive") {
                throw std::invalid_argument("solver alpha: expected a number or \"adaptive\"");
            }
            spec.alpha = adaptive_alpha(j.value("alpha_cap", 0.05));
        } else {
            spec.alpha = constant_alpha(j.at("alpha").get<double>());
        }
    }
    if (j.contains("mode")) {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "coupled") {
            spec.mode = InertiaMode::coupled;
        } else if (mode == "summable") {
            spec.mode = InertiaMode::summable;
        } else {
            throw std::invalid_argument("unknown inertial-solver mode: " + mode);
        }
    }
    spec.sigma = j.value("sigma", 0.01);
    spec.proximal_s_scale = j.value("proximal_s_scale", 0.0);
    spec.proximal_t_scale = j.value("proximal_t_scale", 0.0);
    return spec;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["orders"] = config.orders;
    j["rank_fractions"] = config.rank_fractions;
    j["sparsity_fractions"] = config.sparsity_fractions;
    j["epsilons"] = config.epsilons;
    j["gamma"] = config.gamma;
    j["seeds"] = config.seeds;
    j["output"] = config.output_path;
    j["max_iterations"] = config.max_iterations;
    j["paper_scale"] = config.paper_scale;
    j["include_wall_time"] = config.include_wall_time;
    j["jobs"] = config.jobs;
    j["trace_dir"] = config.trace_dir;
    j["solvers"] = json::array();
    for (const SolverSpec& spec : config.solvers) {
        j["solvers"].push_back(solver_to_json(spec));
    }
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig config;
    config.paper_scale = j.value("paper_scale", false);
    if (config.paper_scale) {
        config.orders = {500, 800, 1000};
        config.rank_fractions = {0.05, 0.1};
        config.sparsity_fractions = {0.05, 0.1};
    }
    if (j.contains("orders")) config.orders = j.at("orders").get<std::vector<Index>>();
    if (j.contains("rank_fractions")) {
        config.rank_fractions = j.at("rank_fractions").get<std::vector<double>>();
    }
    if (j.contains("sparsity_fractions")) {
        config.sparsity_fractions = j.at("sparsity_fractions").get<std::vector<double>>();
    }
    if (j.contains("epsilons")) config.epsilons = j.at("epsilons").get<std::vector<double>>();
    config.gamma = j.value("gamma", 0.01);
    if (j.contains("seeds")) {
        config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    config.output_path = j.value("output", std::string("results.csv"));
    config.max_iterations = j.value("max_iterations", 5000);
    config.include_wall_time = j.value("include_wall_time", false);
    config.jobs = j.value("jobs", 1);
    config.trace_dir = j.value("trace_dir", std::string());
    if (j.contains("solvers")) {
        config.solvers.clear();
        for (const json& solver : j.at("solvers")) {
            config.solvers.push_back(solver_from_json(solver));
        }
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return config_from_json(text.str());
}

void save_config(const ExperimentConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_config: cannot open: " + path);
    out << config_to_json(config);
    if (!out) throw std::runtime_error("save_config: write failed: " + path);
}

}  // namespace iadmm::bench

// Copyright 2026 The minfine Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "minfine/cli.hpp"

#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "minfine/bundle.hpp"
#include "minfine/compile.hpp"
#include "minfine/model_io.hpp"
#include "minfine/mps.hpp"
#include "minfine/solve.hpp"

namespace minfine {

namespace fs = std::filesystem;

namespace {

int statusExitCode(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return 0;
        case SolveStatus::infeasible: return 2;
        case SolveStatus::unbounded: return 3;
        case SolveStatus::iterationLimit:
        case SolveStatus::nodeLimit: return 4;
    }
    return 1;
}

struct CommonOptions {
    std::string modelPath;
    std::string output = ".";
    int periodLength = 0;
    int clusters = 0;
    unsigned seed = 0;
    long maxIter = 100000;
    long maxNodes = 100000;
    double solverTol = 1e-7;

    bool wantsAggregation() const { return periodLength > 0 || clusters > 0; }

    std::optional<TypicalPeriodSet> maybeAggregate(
        const EnergySystemModel& model) const {
        if (!wantsAggregation()) return std::nullopt;
        if (periodLength <= 0 || clusters <= 0) {
            throw Error(
                "aggregation needs both --period-length and --clusters");
        }
        return aggregate(model, periodLength, clusters, seed);
    }

    LpOptions lpOptions() const {
        LpOptions lp;
        lp.tolPrimal = solverTol;
        lp.tolDual = solverTol;
        lp.maxIter = maxIter;
        return lp;
    }
};

void addAggregationFlags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--period-length", opts.periodLength,
                    "steps per period for time-series aggregation");
    cmd->add_option("--clusters", opts.clusters, "number of typical periods");
    cmd->add_option("--seed", opts.seed, "aggregation seed");
}

void addSolverFlags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--max-iter", opts.maxIter, "simplex iteration limit");
    cmd->add_option("--max-nodes", opts.maxNodes, "branch-and-bound node limit");
    cmd->add_option("--solver-tol", opts.solverTol,
                    "primal/dual feasibility tolerance");
}

int doValidate(const CommonOptions& opts, std::ostream& out,
               std::ostream& err) {
    EnergySystemModel model;
    try {
        model = load_model(opts.modelPath);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    auto diags = validate_model(model);
    if (diags.empty()) {
        out << "ok: " << model.name << " (" << model.regions.size()
            << " regions, " << model.components.size() << " components, "
            << model.time.numSteps << " steps)\n";
        return 0;
    }
    for (const auto& d : diags) {
        err << (d.severity == Severity::error ? "error" : "warning") << " ["
            << d.component << "] " << d.message << "\n";
    }
    return 1;
}

int doRun(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    LoadedModel loaded = load_model_with_hash(opts.modelPath);
    const EnergySystemModel& model = loaded.model;
    std::optional<TypicalPeriodSet> tps = opts.maybeAggregate(model);
    SparseProblem problem =
        tps ? build_linked_problem(model, *tps) : build_problem(model);

    Solution solution;
    if (problem.isMip()) {
        MilpOptions mo;
        mo.maxNodes = opts.maxNodes;
        mo.lp = opts.lpOptions();
        solution = solve_milp(problem, mo);
    } else {
        solution = solve_lp(problem, opts.lpOptions());
    }

    std::optional<ResultSet> results;
    if (solution.status == SolveStatus::optimal) {
        results = extract_results(model, problem, solution);
    }
    write_results_bundle(opts.output, model, problem, solution,
                         results ? &*results : nullptr, tps ? &*tps : nullptr,
                         loaded.contentHash);
    out << "status " << to_string(solution.status);
    if (results) out << ", TAC " << format_full(results->objectiveTAC);
    out << ", bundle in " << opts.output << "\n";
    (void)err;
    return statusExitCode(solution.status);
}

int doAggregate(const CommonOptions& opts, std::ostream& out) {
    EnergySystemModel model = load_model(opts.modelPath);
    if (opts.periodLength <= 0 || opts.clusters <= 0) {
        throw Error("aggregate needs --period-length and --clusters");
    }
    TypicalPeriodSet tps =
        aggregate(model, opts.periodLength, opts.clusters, opts.seed);
    fs::create_directories(opts.output);
    nlohmann::ordered_json agg;
    agg["clusters"] = tps.numClusters;
    agg["periodLength"] = tps.periodLength;
    agg["weights"] = tps.weights;
    agg["orderingMap"] = tps.orderingMap;
    agg["medoidIndices"] = tps.medoidIndices;
    agg["totalWithinClusterDistance"] = tps.totalWithinClusterDistance;
    std::string path = (fs::path(opts.output) / "aggregation.json").string();
    atomic_write_file(path, agg.dump(2) + "\n");
    out << "wrote " << path << " (within-cluster distance "
        << format_full(tps.totalWithinClusterDistance) << ")\n";
    return 0;
}

int doExportMps(const CommonOptions& opts, const std::string& outFile,
                std::ostream& out) {
    EnergySystemModel model = load_model(opts.modelPath);
    std::optional<TypicalPeriodSet> tps = opts.maybeAggregate(model);
    SparseProblem problem =
        tps ? build_linked_problem(model, *tps) : build_problem(model);
    write_mps(problem, outFile);
    out << "wrote " << outFile << " (" << problem.numVars << " variables, "
        << problem.rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"minfine: multi-commodity energy system optimization"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string mpsFile;
    std::string bundleDir;

    CLI::App* validate =
        app.add_subcommand("validate", "check a model document");
    validate->add_option("model", opts.modelPath, "model document (JSON)")
        ->required();

    CLI::App* run = app.add_subcommand(
        "run", "optimize a model and write a results bundle");
    run->add_option("model", opts.modelPath, "model document (JSON)")
        ->required();
    run->add_option("-o,--output", opts.output, "bundle directory");
    addAggregationFlags(run, opts);
    addSolverFlags(run, opts);

    CLI::App* agg = app.add_subcommand(
        "aggregate", "preview a time-series aggregation without solving");
    agg->add_option("model", opts.modelPath, "model document (JSON)")
        ->required();
    agg->add_option("-o,--output", opts.output, "output directory");
    addAggregationFlags(agg, opts);

    CLI::App* exportMps = app.add_subcommand(
        "export-mps", "compile and write the problem in free MPS format");
    exportMps->add_option("model", opts.modelPath, "model document (JSON)")
        ->required();
    exportMps->add_option("-o,--output", mpsFile, "destination file")
        ->required();
    addAggregationFlags(exportMps, opts);

    CLI::App* report =
        app.add_subcommand("report", "render tables from a results bundle");
    report->add_option("bundle", bundleDir, "bundle directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (validate->parsed()) return doValidate(opts, out, err);
        if (run->parsed()) return doRun(opts, out, err);
        if (agg->parsed()) return doAggregate(opts, out);
        if (exportMps->parsed()) return doExportMps(opts, mpsFile, out);
        if (report->parsed()) {
            out << render_report(bundleDir);
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace minfine

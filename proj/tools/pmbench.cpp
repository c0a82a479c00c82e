// pmbench: cost-sensitive predictive-maintenance benchmark CLI.
//
//   pmbench validate <dataset.csv>
//   pmbench run [dataset.csv] [--config file] [--seeds ...] [--pipelines ...]
//               [--tp-cost N --fp-cost N --fn-cost N --tn-cost N]
//               [--dag file] [--out dir] [--format table-text csv json] ...
//   pmbench report <results.json> [--format ...] [--out dir]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmbench/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cost-sensitive benchmark of correlation and causal failure-prediction models"};
    app.require_subcommand(1);

    // validate
    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "check dataset schema and print a summary");
    validate->add_option("dataset", validate_path, "dataset CSV path")->required();

    // run
    pmbench::cli::RunOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "run the benchmark and write report files");
    run->set_config("--config", "", "flat key=value config file; command-line flags win");
    run->add_option("dataset", run_opts.dataset, "dataset CSV path");
    run->add_option("--seeds", run_opts.seeds, "random seeds for the shuffled splits")
        ->delimiter(',');
    run->add_option("--pipelines", run_opts.pipelines, "pipelines to run (L0..L6)")
        ->delimiter(',');
    run->add_option("--tp-cost", run_opts.bench.schedule.tp_cost, "true-positive cost in USD");
    run->add_option("--fp-cost", run_opts.bench.schedule.fp_cost, "false-positive cost in USD");
    run->add_option("--fn-cost", run_opts.bench.schedule.fn_cost, "false-negative cost in USD");
    run->add_option("--tn-cost", run_opts.bench.schedule.tn_cost, "true-negative cost in USD");
    run->add_option("--test-fraction", run_opts.bench.test_fraction, "held-out fraction per seed");
    run->add_option("--dag", run_opts.dag_path, "causal DAG edge-list file (default: built-in)");
    run->add_option("--out", run_opts.out_dir, "output directory for report files");
    run->add_option("--format", run_opts.formats, "table formats: table-text, csv, json")
        ->delimiter(',');
    run->add_flag("--quiet", run_opts.quiet, "suppress stdout tables");
    // learner hyperparameters
    run->add_option("--l2-penalty", run_opts.bench.logistic.l2_penalty, "logistic L2 penalty");
    run->add_option("--logit-max-iters", run_opts.bench.logistic.max_iters,
                    "logistic optimizer iteration cap");
    run->add_option("--logit-tolerance", run_opts.bench.logistic.tolerance,
                    "logistic gradient-norm tolerance");
    run->add_option("--tree-depth", run_opts.bench.tree.max_depth, "decision tree max depth");
    run->add_option("--tree-min-split", run_opts.bench.tree.min_samples_split,
                    "min samples to split a tree node");
    run->add_option("--tree-min-leaf", run_opts.bench.tree.min_samples_leaf,
                    "min samples per tree leaf");
    run->add_option("--gbm-trees", run_opts.bench.gbm.n_trees, "boosting rounds");
    run->add_option("--gbm-learning-rate", run_opts.bench.gbm.learning_rate, "boosting step size");
    run->add_option("--gbm-depth", run_opts.bench.gbm.max_depth, "boosted tree max depth");
    run->add_option("--gbm-min-leaf", run_opts.bench.gbm.min_samples_leaf,
                    "min samples per boosted-tree leaf");
    run->add_option("--mcmc-draws", run_opts.bench.posterior.draws, "posterior draws per chain");
    run->add_option("--mcmc-tune", run_opts.bench.posterior.tune, "tuning draws per chain");
    run->add_option("--mcmc-chains", run_opts.bench.posterior.chains, "number of chains");
    run->add_option("--mcmc-thin", run_opts.bench.posterior.thin, "kernel steps per kept draw");
    run->add_option("--prior-sd", run_opts.bench.posterior.prior_sd,
                    "normal prior standard deviation");
    run->add_option("--rule-budget", run_opts.bench.rule_budget, "rule random-search candidates");

    // report
    pmbench::cli::ReportOptions report_opts;
    CLI::App* report = app.add_subcommand("report", "re-render tables from a results dump");
    report->add_option("dump", report_opts.dump_path, "results.json produced by run")->required();
    report->add_option("--format", report_opts.formats, "table-text, csv, json")->delimiter(',');
    report->add_option("--out", report_opts.out_dir, "write files here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pmbench::cli::kExitUsage;
    }

    if (*validate) return pmbench::cli::cmd_validate(validate_path, std::cout, std::cerr);
    if (*run) return pmbench::cli::cmd_run(run_opts, std::cout, std::cerr);
    return pmbench::cli::cmd_report(report_opts, std::cout, std::cerr);
}

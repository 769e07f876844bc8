#pragma once

#include <edclust/edclust.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace edclust::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

namespace detail {

struct CostOptions
{
    std::string matrix_path;
    double del_cost = 1.0;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--cost-matrix", matrix_path, "CSV substitution matrix over the dataset alphabet");
        cmd.add_option("--del-cost", del_cost, "Deletion cost")->check(CLI::NonNegativeNumber);
    }

    CostModel build(const Alphabet& alphabet) const
    {
        if (!matrix_path.empty())
            return read_cost_matrix(matrix_path, alphabet, del_cost);
        if (del_cost == 1.0)
            return make_unit_cost_model(alphabet);
        // Unit substitutions with a custom deletion cost.
        std::vector<double> sub(alphabet.size() * alphabet.size(), 1.0);
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            sub[i * alphabet.size() + i] = 0.0;
        return CostModel(alphabet.size(), std::move(sub), del_cost);
    }
};

/// Source first: the longer sequence, or `a` when lengths tie.
inline std::pair<std::size_t, std::size_t> orient(const Dataset& d, std::size_t a, std::size_t b)
{
    return d.sequences[a].size() >= d.sequences[b].size() ? std::pair{a, b} : std::pair{b, a};
}

/// Two rows, columns padded to the wider token and separated by one space;
/// gaps print as '-'.
inline void print_alignment(std::ostream& os, const EditSequence& seq, const Alphabet& alphabet)
{
    std::vector<std::string> top, bottom;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        top.push_back(alphabet.token(seq.alpha()[i]));
        const auto b = seq.beta()[i];
        bottom.push_back(b.is_gap() ? "-" : alphabet.token(b.symbol()));
    }
    auto emit = [&](const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0)
                line += ' ';
            line += row[i];
            if (i + 1 < row.size())
                line.append(std::max(top[i].size(), bottom[i].size()) - row[i].size(), ' ');
        }
        os << line << '\n';
    };
    emit(top);
    emit(bottom);
}

inline std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix)
{
    auto p = out;
    p.replace_extension();
    p += suffix;
    return p;
}

} // namespace detail

/// Entry point for the `edclust` tool. Returns 0 on success, 1 on usage or
/// configuration errors, 2 on data errors.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Edit-distance clustering of variable-length symbol sequences", "edclust"};
    app.require_subcommand(1);

    // dist / align
    std::string file, id_a, id_b;
    detail::CostOptions cost_opts;
    auto* dist = app.add_subcommand("dist", "Print the edit distance between two dataset rows");
    dist->add_option("FILE", file, "Dataset CSV")->required();
    dist->add_option("idA", id_a)->required();
    dist->add_option("idB", id_b)->required();
    cost_opts.add_to(*dist);

    auto* align_cmd = app.add_subcommand("align", "Print an optimal edit sequence between two dataset rows");
    align_cmd->add_option("FILE", file, "Dataset CSV")->required();
    align_cmd->add_option("idA", id_a)->required();
    align_cmd->add_option("idB", id_b)->required();
    cost_opts.add_to(*align_cmd);

    // cluster
    ClusterConfig ccfg;
    std::string tie_policy = "random";
    std::string out_path, centroids_path, config_path;
    auto* cluster = app.add_subcommand("cluster", "Cluster a dataset");
    cluster->add_option("FILE", file, "Dataset CSV")->required();
    auto* k_opt = cluster->add_option("--k", ccfg.k, "Number of clusters")->check(CLI::PositiveNumber);
    auto* tie_opt = cluster->add_option("--tie-policy", tie_policy, "Vote tie rule")
                        ->check(CLI::IsMember({"random", "first", "last", "empty"}));
    auto* iters_opt = cluster->add_option("--max-iters", ccfg.max_iters)->check(CLI::PositiveNumber);
    auto* restarts_opt = cluster->add_option("--restarts", ccfg.restarts)->check(CLI::PositiveNumber);
    auto* seed_opt = cluster->add_option("--seed", ccfg.seed);
    auto* workers_opt = cluster->add_option("--workers", ccfg.workers)->check(CLI::PositiveNumber);
    cluster->add_option("--out", out_path, "Assignment CSV (default: stdout)");
    cluster->add_option("--centroids", centroids_path, "Centroid file (default: <out>.centroids)");
    cluster->add_option("--config", config_path, "JSON defaults; flags take precedence");
    auto* del_opt = cluster->add_option("--del-cost", cost_opts.del_cost)->check(CLI::NonNegativeNumber);
    auto* matrix_opt = cluster->add_option("--cost-matrix", cost_opts.matrix_path);

    // gen
    std::string spec_path;
    std::string prototypes_path;
    auto* gen = app.add_subcommand("gen", "Generate a labeled synthetic dataset");
    gen->add_option("--spec", spec_path, "Generator spec (JSON)")->required();
    gen->add_option("--out", out_path, "Dataset CSV")->required();
    gen->add_option("--prototypes", prototypes_path, "Also write the planted prototypes");

    // eval
    std::string pred_path, truth_path;
    std::size_t eval_k = 0;
    auto* eval_cmd = app.add_subcommand("eval", "Score an assignment against labels");
    eval_cmd->add_option("--pred", pred_path, "Assignment CSV")->required();
    eval_cmd->add_option("--truth", truth_path, "Labeled dataset CSV")->required();
    eval_cmd->add_option("--k", eval_k)->required()->check(CLI::PositiveNumber);

    // experiment
    std::size_t samples = 1;
    std::string detail_path;
    auto* experiment = app.add_subcommand("experiment", "Repeated generate/cluster/eval runs");
    experiment->add_option("--spec", spec_path, "Experiment spec (JSON)")->required();
    auto* samples_opt = experiment->add_option("--samples", samples)->check(CLI::PositiveNumber);
    experiment->add_option("--out", out_path, "Histogram CSV")->required();
    experiment->add_option("--detail", detail_path, "Per-sample CSV (default: <out>.detail.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "edclust: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*dist || *align_cmd) {
            const auto data = read_dataset(file);
            const auto [src, dst] = detail::orient(data, data.index_of(id_a), data.index_of(id_b));
            const auto cost = cost_opts.build(data.alphabet);
            if (*dist)
                out << format_real(distance(data.sequences[src], data.sequences[dst], cost)) << '\n';
            else
                detail::print_alignment(out, align(data.sequences[src], data.sequences[dst], cost), data.alphabet);
            return exit_ok;
        }

        if (*cluster) {
            ClusterConfig cfg;
            detail::CostOptions file_cost;
            bool have_k = k_opt->count() > 0;
            if (!config_path.empty()) {
                const auto j = read_json(config_path);
                edclust::detail::reject_unknown_keys(j,
                                                     {"k", "tie_policy", "max_iters", "restarts", "seed",
                                                      "workers", "del_cost", "cost_matrix"},
                                                     "cluster config");
                cfg = cluster_config_from_json(j);
                have_k = have_k || j.contains("k");
                edclust::detail::get_if_present(j, "del_cost", file_cost.del_cost);
                edclust::detail::get_if_present(j, "cost_matrix", file_cost.matrix_path);
            }
            if (k_opt->count()) cfg.k = ccfg.k;
            if (tie_opt->count()) cfg.tie_policy = parse_tie_policy(tie_policy);
            if (iters_opt->count()) cfg.max_iters = ccfg.max_iters;
            if (restarts_opt->count()) cfg.restarts = ccfg.restarts;
            if (seed_opt->count()) cfg.seed = ccfg.seed;
            if (workers_opt->count()) cfg.workers = ccfg.workers;
            if (del_opt->count()) file_cost.del_cost = cost_opts.del_cost;
            if (matrix_opt->count()) file_cost.matrix_path = cost_opts.matrix_path;
            if (!have_k)
                throw config_error("--k is required");

            const auto data = read_dataset(file);
            const auto cost = file_cost.build(data.alphabet);
            const auto result = run(std::span<const Seq>(data.sequences), cfg, cost);

            if (out_path.empty()) {
                write_assignment(out, data.ids, result.assignment);
            } else {
                auto f = edclust::detail::open_output(out_path);
                write_assignment(f, data.ids, result.assignment);
            }
            if (centroids_path.empty() && !out_path.empty())
                centroids_path = detail::sibling(out_path, ".centroids").string();
            if (!centroids_path.empty()) {
                auto f = edclust::detail::open_output(centroids_path);
                write_centroids(f, result.centroids, data.alphabet);
            }
            err << "iterations=" << result.iterations << " converged=" << (result.converged ? "true" : "false")
                << " objective=" << format_real(result.objective) << " restart=" << result.restart << '\n';
            return exit_ok;
        }

        if (*gen) {
            const auto spec = gen_spec_from_json(read_json(spec_path));
            const auto generated = generate(spec);
            write_dataset(out_path, to_dataset(generated));
            if (!prototypes_path.empty()) {
                auto f = edclust::detail::open_output(prototypes_path);
                write_centroids(f, generated.prototypes, generated.alphabet);
            }
            return exit_ok;
        }

        if (*eval_cmd) {
            const auto truth = read_dataset(truth_path);
            auto in = edclust::detail::open_input(pred_path);
            const auto pred_rows = parse_assignment(in);
            if (pred_rows.size() != truth.size())
                throw data_error("prediction has " + std::to_string(pred_rows.size()) + " rows, truth has " +
                                 std::to_string(truth.size()));
            std::vector<std::size_t> predicted(truth.size());
            std::vector<bool> filled(truth.size(), false);
            for (const auto& [id, c] : pred_rows) {
                const auto i = truth.index_of(id);
                if (filled[i])
                    throw data_error("duplicate prediction for '" + id + "'");
                filled[i] = true;
                predicted[i] = c;
            }
            const auto labels = truth.label_vector();
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (predicted[i] >= eval_k || labels[i] >= eval_k)
                    throw data_error("cluster or label of '" + truth.ids[i] + "' is not below k");
            write_report(out, evaluate(predicted, labels, eval_k));
            return exit_ok;
        }

        if (*experiment) {
            auto cfg = experiment_from_json(read_json(spec_path));
            if (samples_opt->count())
                cfg.samples = samples;
            const auto result = batch_experiment(cfg);
            {
                auto f = edclust::detail::open_output(out_path);
                write_histogram_csv(f, result);
            }
            if (detail_path.empty())
                detail_path = detail::sibling(out_path, ".detail.csv").string();
            auto f = edclust::detail::open_output(detail_path);
            write_detail_csv(f, result);
            return exit_ok;
        }
    } catch (const config_error& e) {
        err << "edclust: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "edclust: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}

} // namespace edclust::cli

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "cli.hpp"
#include "oracle.hpp"

#include <edclust/edclust.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace edclust;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr std::size_t property_pairs = 1000;
constexpr std::size_t property_max_len = 10;
constexpr std::uint32_t property_max_alphabet = 4;
constexpr double oracle_budget_s = 10.0;

constexpr std::size_t zero_overlap_samples = 100;
constexpr std::size_t zero_overlap_required = 95;
constexpr double zero_overlap_budget_s = 120.0;

constexpr std::size_t monotonic_samples = 50;
constexpr double monotonic_budget_s = 300.0;

constexpr std::size_t scaling_runs = 9;
constexpr std::size_t scaling_steps_per_run = 25;
constexpr double scaling_low = 1.5;
constexpr double scaling_high = 3.0;

constexpr double pipeline_min_accuracy = 0.9;

// Synthetic workload shared by the clustering criteria.
GenSpec base_spec()
{
    GenSpec s;
    s.m = 200;
    s.k_true = 2;
    s.alphabet_size = 4;
    s.len_min = 10;
    s.len_max = 20;
    s.edit_noise = 3.0;
    return s;
}

ClusterConfig base_cluster()
{
    ClusterConfig c;
    c.restarts = 5;
    return c;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

class Report
{
public:
    void record(int id, const std::string& name, const std::function<Outcome()>& check)
    {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures_ += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << std::endl;
    }

    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

std::vector<oracle::IdPair> property_pairs_sample()
{
    std::mt19937_64 rng(20240601);
    std::vector<oracle::IdPair> pairs;
    for (std::size_t i = 0; i < property_pairs; ++i)
        pairs.push_back(oracle::random_pair(rng, property_max_len, property_max_alphabet));
    return pairs;
}

// Clusters 100 zero-overlap samples and writes the histogram and per-sample CSVs into dir.
ExperimentResult zero_overlap_run(const fs::path& dir)
{
    ExperimentConfig cfg;
    cfg.specs = {base_spec()};
    cfg.cluster = base_cluster();
    cfg.samples = zero_overlap_samples;
    const auto result = batch_experiment(cfg);
    fs::create_directories(dir);
    {
        auto f = edclust::detail::open_output(dir / "histogram.csv");
        write_histogram_csv(f, result);
    }
    auto f = edclust::detail::open_output(dir / "detail.csv");
    write_detail_csv(f, result);
    return result;
}

// Mean wall time of one centroid update plus reassignment, starting from a
// random initialization drawn with the given seed.
double step_seconds(std::span<const Seq> inputs, std::size_t k, const CostModel& cost, std::uint64_t seed)
{
    Rng rng(seed);
    auto centroids = init_centroids(inputs, k, rng);
    auto assignment = assign(inputs, std::span<const Seq>(centroids), cost, 1);
    const auto t0 = Clock::now();
    for (std::size_t step = 0; step < scaling_steps_per_run; ++step) {
        centroids = update_centroids(inputs, std::span<const std::size_t>(assignment), std::span<const Seq>(centroids),
                                     cost, TiePolicy::random, rng);
        assignment = assign(inputs, std::span<const Seq>(centroids), cost, 1);
    }
    return seconds_since(t0) / static_cast<double>(scaling_steps_per_run);
}

double median(std::vector<double> v)
{
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

int call_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    args.insert(args.begin(), "edclust");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace

int main()
{
    Report report;
    const auto unit2 = make_unit_cost_model(2);
    const auto pairs = property_pairs_sample();
    const auto work = fs::temp_directory_path() / "edclust_acceptance";
    fs::remove_all(work);

    report.record(1, "worked example edit sequence scores 6", [&] {
        const double score = score_edit_sequence(oracle::example_display_sequence(), unit2);
        return Outcome{score == 6.0, "score=" + format_real(score)};
    });

    report.record(2, "worked example optimal distance is 4", [&] {
        const auto x = Seq::from_ids(oracle::example_x);
        const auto y = Seq::from_ids(oracle::example_y);
        const double dp = distance(x, y, unit2);
        const double brute = oracle::brute_force_distance(oracle::example_x, oracle::example_y, unit2);
        const auto subsets = oracle::binomial(oracle::example_x.size(), oracle::example_x.size() - oracle::example_y.size());
        return Outcome{dp == 4.0 && brute == 4.0 && subsets == 330,
                       "dp=" + format_real(dp) + " oracle=" + format_real(brute) + " subsets=" + std::to_string(subsets)};
    });

    report.record(3, "DP matches subset enumeration on random pairs", [&] {
        const auto t0 = Clock::now();
        std::size_t agree = 0;
        for (const auto& p : pairs) {
            const auto cost = make_unit_cost_model(p.alphabet);
            agree += distance(Seq::from_ids(p.x), Seq::from_ids(p.y), cost) ==
                     oracle::brute_force_distance(p.x, p.y, cost);
        }
        const double t = seconds_since(t0);
        return Outcome{agree == pairs.size() && t < oracle_budget_s,
                       std::to_string(agree) + "/" + std::to_string(pairs.size()) + " in " + fixed(t) + "s"};
    });

    report.record(4, "backtracking yields a sound optimal edit sequence", [&] {
        std::size_t sound = 0;
        for (const auto& p : pairs) {
            const auto cost = make_unit_cost_model(p.alphabet);
            const auto x = Seq::from_ids(p.x);
            const auto y = Seq::from_ids(p.y);
            const auto e = align(x, y, cost);
            bool ok = e.size() == x.size() && e.deletions() == x.size() - y.size();
            for (std::size_t i = 0; ok && i < x.size(); ++i)
                ok = e.alpha()[i] == x[i];
            ok = ok && Seq(strip_gaps(e.beta())) == y && score_edit_sequence(e, cost) == distance(x, y, cost);
            sound += ok;
        }
        return Outcome{sound == pairs.size(), std::to_string(sound) + "/" + std::to_string(pairs.size())};
    });

    report.record(5, "equal lengths reduce to per-position cost", [&] {
        std::mt19937_64 rng(777);
        std::uniform_int_distribution<std::size_t> len(1, property_max_len);
        std::uniform_int_distribution<std::uint32_t> alpha(1, property_max_alphabet);
        std::size_t agree = 0;
        for (std::size_t i = 0; i < property_pairs; ++i) {
            const auto a = alpha(rng);
            const auto n = len(rng);
            const auto x = oracle::random_ids(rng, n, n, a);
            const auto y = oracle::random_ids(rng, n, n, a);
            const auto cost = make_unit_cost_model(a);
            double hamming = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                hamming += cost.substitution(Symbol{x[j]}, Symbol{y[j]});
            agree += distance(Seq::from_ids(x), Seq::from_ids(y), cost) == hamming;
        }
        return Outcome{agree == property_pairs, std::to_string(agree) + "/" + std::to_string(property_pairs)};
    });

    report.record(6, "zero-overlap samples are clustered without error", [&] {
        const auto t0 = Clock::now();
        const auto result = zero_overlap_run(work / "run_a");
        const double t = seconds_since(t0);
        const auto perfect = result.histogram[0][0];
        return Outcome{perfect >= zero_overlap_required && t < zero_overlap_budget_s,
                       std::to_string(perfect) + "/" + std::to_string(zero_overlap_samples) + " perfect (need " +
                           std::to_string(zero_overlap_required) + ") in " + fixed(t) + "s"};
    });

    report.record(7, "mean misclustered is nondecreasing in overlap", [&] {
        const auto t0 = Clock::now();
        ExperimentConfig cfg;
        for (double f : {0.0, 0.1, 0.2}) {
            auto s = base_spec();
            s.overlap_fraction = f;
            cfg.specs.push_back(s);
        }
        cfg.cluster = base_cluster();
        cfg.samples = monotonic_samples;
        const auto result = batch_experiment(cfg);
        const double t = seconds_since(t0);
        std::vector<double> means;
        for (std::size_t s = 0; s < cfg.specs.size(); ++s)
            means.push_back(result.mean_misclustered(s));
        const bool monotone = std::is_sorted(means.begin(), means.end());
        return Outcome{monotone && t < monotonic_budget_s, "means=" + fixed(means[0], 2) + "," + fixed(means[1], 2) +
                                                               "," + fixed(means[2], 2) + " in " + fixed(t) + "s"};
    });

    report.record(8, "per-iteration time scales linearly in m", [&] {
        // Same spec apart from m; runs alternate between sizes so drift hits both.
        auto spec = base_spec();
        spec.m = 1000;
        const auto small_data = generate(spec);
        spec.m = 2000;
        const auto large_data = generate(spec);
        const auto cost = make_unit_cost_model(spec.alphabet_size);
        const std::span<const Seq> small_in(small_data.sequences), large_in(large_data.sequences);
        step_seconds(small_in, spec.k_true, cost, 0); // warm-up
        std::vector<double> small_t, large_t;
        for (std::size_t r = 0; r < scaling_runs; ++r) {
            small_t.push_back(step_seconds(small_in, spec.k_true, cost, r));
            large_t.push_back(step_seconds(large_in, spec.k_true, cost, r));
        }
        const double small = median(small_t);
        const double large = median(large_t);
        const double ratio = large / small;
        return Outcome{ratio >= scaling_low && ratio <= scaling_high,
                       "ratio=" + fixed(ratio) + " (m=1000: " + fixed(small * 1e3) + "ms, m=2000: " +
                           fixed(large * 1e3) + "ms)"};
    });

    report.record(9, "gen, cluster, eval pipeline for k = 2, 3, 4", [&] {
        const auto dir = work / "pipeline";
        fs::create_directories(dir);
        bool ok = true;
        std::string detail;
        for (std::size_t k : {2u, 3u, 4u}) {
            const auto ks = std::to_string(k);
            const auto spec_path = dir / ("spec" + ks + ".json");
            std::ofstream(spec_path) << R"({"m": 200, "k_true": )" << k
                                     << R"(, "alphabet_size": 4, "len_min": 10, "len_max": 20, "edit_noise": 3, "rng_seed": 11})";
            const auto data = dir / ("data" + ks + ".csv");
            const auto pred = dir / ("assign" + ks + ".csv");
            std::ostringstream out, err;
            bool step = call_cli({"gen", "--spec", spec_path.string(), "--out", data.string()}, out, err) == 0;
            step = step && call_cli({"cluster", data.string(), "--k", ks, "--seed", "3", "--out", pred.string()},
                                    out, err) == 0;
            const bool converged = err.str().find("converged=true") != std::string::npos;
            out.str("");
            step = step && call_cli({"eval", "--pred", pred.string(), "--truth", data.string(), "--k", ks}, out,
                                    err) == 0;
            const auto text = out.str();
            const auto at = text.find("accuracy: ");
            double accuracy = 0.0;
            if (at != std::string::npos)
                parse_real(std::string_view(text).substr(at + 10, text.find('\n', at) - at - 10), accuracy);
            ok = ok && step && converged && accuracy >= pipeline_min_accuracy;
            detail += (detail.empty() ? "" : " ") + ("k=" + ks + " converged=" + (converged ? "true" : "false") +
                                                    " accuracy=" + fixed(accuracy));
        }
        return Outcome{ok, detail};
    });

    report.record(10, "repeated zero-overlap runs write identical files", [&] {
        zero_overlap_run(work / "run_b");
        bool same = true;
        for (const char* name : {"histogram.csv", "detail.csv"}) {
            const auto a = slurp(work / "run_a" / name);
            same = same && !a.empty() && a == slurp(work / "run_b" / name);
        }
        return Outcome{same, same ? "histogram.csv and detail.csv match" : "outputs differ"};
    });

    fs::remove_all(work);
    std::cout << (report.failures() == 0 ? "all criteria passed" : std::to_string(report.failures()) + " failed")
              << std::endl;
    return report.failures() == 0 ? 0 : 1;
}

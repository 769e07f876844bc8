#pragma once

#include "cluster.hpp"
#include "cost_model.hpp"
#include "datagen.hpp"
#include "error.hpp"
#include "format.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace edclust {

/// Largest k handled by the exhaustive label matching (8! = 40320 maps).
inline constexpr std::size_t max_matched_clusters = 8;

struct LabelMatch
{
    std::size_t misclustered = 0;
    /// label_map[predicted cluster] = true label.
    std::vector<std::size_t> label_map;
};

/// Fewest disagreements over every bijection from predicted cluster ids to
/// true labels. The lexicographically first optimal map is reported.
inline LabelMatch mismatch_count(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                                 std::size_t k)
{
    if (k == 0)
        throw config_error("k must be at least 1");
    if (k > max_matched_clusters)
        throw config_error("label matching supports k <= " + std::to_string(max_matched_clusters) + ", got " +
                           std::to_string(k));
    if (predicted.size() != truth.size())
        throw precondition_error("predicted and true labelings differ in length");
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] >= k || truth[i] >= k)
            throw precondition_error("label out of range at position " + std::to_string(i));

    // confusion[p * k + t]: points predicted p with true label t.
    std::vector<std::size_t> confusion(k * k, 0);
    for (std::size_t i = 0; i < predicted.size(); ++i)
        ++confusion[predicted[i] * k + truth[i]];

    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i)
        perm[i] = i;
    LabelMatch best{predicted.size() + 1, perm};
    do {
        std::size_t agree = 0;
        for (std::size_t p = 0; p < k; ++p)
            agree += confusion[p * k + perm[p]];
        const std::size_t bad = predicted.size() - agree;
        if (bad < best.misclustered)
            best = {bad, perm};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Category bins for misclustered counts. Bin i covers
/// (upper_bounds[i-1], upper_bounds[i]]; one extra bin holds everything above.
struct HistogramBins
{
    std::vector<std::size_t> upper_bounds{0, 5, 20, 100};

    std::size_t count() const { return upper_bounds.size() + 1; }

    std::size_t bin_of(std::size_t value) const
    {
        for (std::size_t i = 0; i < upper_bounds.size(); ++i)
            if (value <= upper_bounds[i])
                return i;
        return upper_bounds.size();
    }

    /// "0", "1-5", "6-20", "21-100", ">100" for the defaults.
    std::string label(std::size_t bin) const
    {
        if (bin == upper_bounds.size())
            return upper_bounds.empty() ? ">=0" : ">" + std::to_string(upper_bounds.back());
        const std::size_t lo = bin == 0 ? 0 : upper_bounds[bin - 1] + 1;
        const std::size_t hi = upper_bounds[bin];
        return lo == hi ? std::to_string(hi) : std::to_string(lo) + "-" + std::to_string(hi);
    }

    void validate() const
    {
        for (std::size_t i = 1; i < upper_bounds.size(); ++i)
            if (upper_bounds[i] <= upper_bounds[i - 1])
                throw config_error("histogram bin bounds must be strictly increasing");
    }
};

struct EvalReport
{
    std::size_t misclustered = 0;
    double accuracy = 1.0;
    std::map<std::string, std::size_t> per_category_histogram;
    std::vector<std::size_t> best_label_map;
};

inline EvalReport evaluate(std::span<const std::size_t> predicted, std::span<const std::size_t> truth, std::size_t k,
                           const HistogramBins& bins = {})
{
    auto match = mismatch_count(predicted, truth, k);
    EvalReport r;
    r.misclustered = match.misclustered;
    r.accuracy = truth.empty() ? 1.0
                               : 1.0 - static_cast<double>(match.misclustered) / static_cast<double>(truth.size());
    r.best_label_map = std::move(match.label_map);
    r.per_category_histogram[bins.label(bins.bin_of(r.misclustered))] = 1;
    return r;
}

inline void write_report(std::ostream& os, const EvalReport& r)
{
    os << "misclustered: " << r.misclustered << '\n';
    os << "accuracy: " << format_real(r.accuracy) << '\n';
    os << "best_label_map:";
    for (std::size_t p = 0; p < r.best_label_map.size(); ++p)
        os << (p == 0 ? " " : ",") << p << "->" << r.best_label_map[p];
    os << '\n';
    os << "histogram:";
    for (const auto& [bin, count] : r.per_category_histogram)
        os << ' ' << bin << '=' << count;
    os << '\n';
}

struct ExperimentConfig
{
    std::vector<GenSpec> specs;
    ClusterConfig cluster;
    /// Cluster with each spec's k_true instead of cluster.k.
    bool k_from_spec = true;
    std::size_t samples = 1;
    HistogramBins bins;
};

struct SampleRecord
{
    std::size_t spec_id = 0;
    std::size_t sample = 0;
    std::size_t misclustered = 0;
    std::size_t iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

struct ExperimentResult
{
    std::vector<SampleRecord> samples;
    /// histogram[spec_id][bin] = number of samples.
    std::vector<std::vector<std::size_t>> histogram;
    HistogramBins bins;

    double mean_misclustered(std::size_t spec_id) const
    {
        double total = 0.0;
        std::size_t n = 0;
        for (const auto& s : samples)
            if (s.spec_id == spec_id) {
                total += static_cast<double>(s.misclustered);
                ++n;
            }
        return n == 0 ? 0.0 : total / static_cast<double>(n);
    }
};

/// generate -> run -> mismatch_count for every spec and sample. Sample i of a
/// spec uses generator seed spec.rng_seed + i and cluster seed
/// cluster.seed + i, so every sample is independent of execution order.
inline ExperimentResult batch_experiment(const ExperimentConfig& config)
{
    if (config.samples == 0)
        throw config_error("samples must be at least 1");
    config.bins.validate();

    ExperimentResult result;
    result.bins = config.bins;
    result.histogram.assign(config.specs.size(), std::vector<std::size_t>(config.bins.count(), 0));
    for (std::size_t spec_id = 0; spec_id < config.specs.size(); ++spec_id) {
        for (std::size_t i = 0; i < config.samples; ++i) {
            GenSpec gen = config.specs[spec_id];
            gen.rng_seed += i;
            const auto data = generate(gen);

            ClusterConfig cc = config.cluster;
            cc.seed += i;
            if (config.k_from_spec)
                cc.k = gen.k_true;
            const auto cost = make_unit_cost_model(gen.alphabet_size);
            const auto clustering = run(std::span<const Seq>(data.sequences), cc, cost);
            const auto match = mismatch_count(clustering.assignment, data.labels, std::max(cc.k, gen.k_true));

            result.samples.push_back(
                {spec_id, i, match.misclustered, clustering.iterations, clustering.converged, clustering.objective});
            ++result.histogram[spec_id][config.bins.bin_of(match.misclustered)];
        }
    }
    return result;
}

/// Columns spec_id,bin,count; one row per spec and bin, empty bins included.
inline void write_histogram_csv(std::ostream& os, const ExperimentResult& r)
{
    os << "spec_id,bin,count\n";
    for (std::size_t s = 0; s < r.histogram.size(); ++s)
        for (std::size_t b = 0; b < r.histogram[s].size(); ++b)
            os << s << ',' << r.bins.label(b) << ',' << r.histogram[s][b] << '\n';
}

/// Columns spec_id,sample,misclustered,iterations,converged,objective.
inline void write_detail_csv(std::ostream& os, const ExperimentResult& r)
{
    os << "spec_id,sample,misclustered,iterations,converged,objective\n";
    for (const auto& s : r.samples)
        os << s.spec_id << ',' << s.sample << ',' << s.misclustered << ',' << s.iterations << ','
           << (s.converged ? "true" : "false") << ',' << format_real(s.objective) << '\n';
}

} // namespace edclust

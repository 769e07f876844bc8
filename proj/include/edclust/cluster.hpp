#pragma once

#include "cost_model.hpp"
#include "edit_distance.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "sequence.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace edclust {

/// How a coordinate is resolved when several aligned symbols share the top vote.
enum class TiePolicy
{
    random,           ///< uniform among the tied symbols
    nearest_to_first, ///< tied symbol with the smallest alphabet position
    nearest_to_last,  ///< tied symbol with the largest alphabet position
    prefer_empty,     ///< the gap if it is tied, otherwise random
};

inline std::string_view to_string(TiePolicy p) noexcept
{
    switch (p) {
    case TiePolicy::random: return "random";
    case TiePolicy::nearest_to_first: return "first";
    case TiePolicy::nearest_to_last: return "last";
    case TiePolicy::prefer_empty: return "empty";
    }
    return "random";
}

inline TiePolicy parse_tie_policy(std::string_view s)
{
    if (s == "random") return TiePolicy::random;
    if (s == "first") return TiePolicy::nearest_to_first;
    if (s == "last") return TiePolicy::nearest_to_last;
    if (s == "empty") return TiePolicy::prefer_empty;
    throw config_error("unknown tie policy '" + std::string(s) + "' (expected random|first|last|empty)");
}

struct ClusterConfig
{
    std::size_t k = 2;
    TiePolicy tie_policy = TiePolicy::random;
    std::size_t max_iters = 100;
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
    /// Threads used for the assignment step. Results never depend on it.
    std::size_t workers = 1;
};

struct Clustering
{
    std::vector<std::size_t> assignment; ///< cluster index per input, in input order
    std::vector<Seq> centroids;
    std::size_t iterations = 0; ///< centroid recomputations performed
    bool converged = false;     ///< stopped because the partition repeated
    double objective = 0.0;     ///< sum-of-squares of within-cluster distances
    std::size_t restart = 0;    ///< which restart produced this result
};

/// Seed for restart `r` of a run seeded with `base`.
inline std::uint64_t restart_seed(std::uint64_t base, std::size_t restart)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Indices of k distinct inputs drawn without replacement (partial Fisher-Yates).
inline std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k, Rng& rng)
{
    if (k > population)
        throw config_error("cannot pick " + std::to_string(k) + " centroids from " + std::to_string(population) +
                           " inputs");
    std::vector<std::size_t> idx(population);
    for (std::size_t i = 0; i < population; ++i)
        idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, population - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(k);
    return idx;
}

/// Copies of k distinct random inputs.
inline std::vector<Seq> init_centroids(std::span<const Seq> inputs, std::size_t k, Rng& rng)
{
    std::vector<Seq> out;
    out.reserve(k);
    for (auto i : sample_indices(inputs.size(), k, rng))
        out.push_back(inputs[i]);
    return out;
}

/// Nearest centroid per input; ties go to the lowest centroid index. The
/// inputs are split into contiguous chunks across `workers` threads and the
/// result is indexed by input, so it is identical for any worker count.
template <edit_cost Cost>
std::vector<std::size_t> assign(std::span<const Seq> inputs, std::span<const Seq> centroids, const Cost& cost,
                                std::size_t workers = 1)
{
    if (centroids.empty())
        throw precondition_error("assign: no centroids");
    std::vector<std::size_t> out(inputs.size(), 0);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centroids.size(); ++c) {
                const double d = distance_sym(inputs[i], centroids[c], cost);
                if (d < best) {
                    best = d;
                    out[i] = c;
                }
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(inputs.size(), 1));
    if (workers == 1) {
        work(0, inputs.size());
        return out;
    }
    {
        std::vector<std::jthread> threads;
        const std::size_t chunk = (inputs.size() + workers - 1) / workers;
        for (std::size_t begin = 0; begin < inputs.size(); begin += chunk)
            threads.emplace_back(work, begin, std::min(begin + chunk, inputs.size()));
    }
    return out;
}

namespace detail {

inline AlignedSymbol break_tie(std::span<const std::size_t> tied_slots, std::size_t gap_slot, TiePolicy policy,
                               Rng& rng)
{
    auto to_symbol = [gap_slot](std::size_t slot) {
        return slot == gap_slot ? AlignedSymbol::gap() : AlignedSymbol(Symbol{static_cast<std::uint32_t>(slot)});
    };
    // tied_slots is ascending, so the gap (if tied) is last and real symbols
    // come in alphabet order.
    const bool gap_tied = tied_slots.back() == gap_slot;
    const std::size_t symbols_tied = tied_slots.size() - (gap_tied ? 1 : 0);
    switch (policy) {
    case TiePolicy::nearest_to_first:
        return to_symbol(tied_slots.front());
    case TiePolicy::nearest_to_last:
        return to_symbol(tied_slots[symbols_tied - 1]);
    case TiePolicy::prefer_empty:
        if (gap_tied)
            return AlignedSymbol::gap();
        [[fallthrough]];
    case TiePolicy::random:
        break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, tied_slots.size() - 1);
    return to_symbol(tied_slots[pick(rng)]);
}

/// Centroid of the members `inputs[i]` for i in `members` (ascending input order).
template <edit_cost Cost>
Seq centroid_of(std::span<const Seq> inputs, std::span<const std::size_t> members, const Cost& cost,
                TiePolicy policy, Rng& rng)
{
    if (members.empty())
        throw precondition_error("compute_centroid: empty cluster");

    // Longest member; the first one wins among equals.
    std::size_t longest = members.front();
    std::uint32_t max_id = 0;
    for (auto i : members) {
        if (inputs[i].size() > inputs[longest].size())
            longest = i;
        for (auto sym : inputs[i])
            max_id = std::max(max_id, sym.id);
    }
    const Seq& source = inputs[longest];
    if (members.size() == 1)
        return source;

    const std::size_t width = source.size();
    const std::size_t gap_slot = static_cast<std::size_t>(max_id) + 1;
    const std::size_t slots = gap_slot + 1;
    std::vector<std::uint32_t> votes(width * slots, 0);
    for (auto i : members) {
        if (i == longest)
            continue;
        const auto row = align(source, inputs[i], cost);
        for (std::size_t j = 0; j < width; ++j)
            ++votes[j * slots + row.beta()[j].slot(gap_slot)];
    }

    std::vector<AlignedSymbol> expanded;
    expanded.reserve(width);
    std::vector<std::size_t> tied;
    for (std::size_t j = 0; j < width; ++j) {
        const auto* col = votes.data() + j * slots;
        const std::uint32_t top = *std::max_element(col, col + slots);
        tied.clear();
        for (std::size_t v = 0; v < slots; ++v)
            if (col[v] == top)
                tied.push_back(v);
        if (tied.size() == 1)
            expanded.push_back(tied[0] == gap_slot ? AlignedSymbol::gap()
                                                   : AlignedSymbol(Symbol{static_cast<std::uint32_t>(tied[0])}));
        else
            expanded.push_back(break_tie(tied, gap_slot, policy, rng));
    }

    auto stripped = strip_gaps(expanded);
    if (stripped.empty())
        return source;
    return Seq(std::move(stripped));
}

} // namespace detail

/// Majority-vote centroid. The longest member (first among equals) is aligned
/// to every other member; the gap-expanded rows of the others vote per
/// coordinate, the gap counting as a symbol. Gaps are then removed. A
/// singleton cluster, or a vote that yields only gaps, returns the longest
/// member itself.
template <edit_cost Cost>
Seq compute_centroid(std::span<const Seq> members, const Cost& cost, TiePolicy policy, Rng& rng)
{
    std::vector<std::size_t> idx(members.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    return detail::centroid_of(members, idx, cost, policy, rng);
}

/// Input indices grouped by cluster, each group ascending.
inline std::vector<std::vector<std::size_t>> group_members(std::span<const std::size_t> assignment, std::size_t k)
{
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] >= k)
            throw precondition_error("assignment refers to cluster " + std::to_string(assignment[i]) +
                                     " but k = " + std::to_string(k));
        groups[assignment[i]].push_back(i);
    }
    return groups;
}

/// New centroids for every cluster of `assignment`. A cluster that lost all
/// of its members keeps its previous centroid. Clusters are processed in
/// index order so tie draws consume `rng` deterministically.
template <edit_cost Cost>
std::vector<Seq> update_centroids(std::span<const Seq> inputs, std::span<const std::size_t> assignment,
                                  std::span<const Seq> previous, const Cost& cost, TiePolicy policy, Rng& rng)
{
    const auto groups = group_members(assignment, previous.size());
    std::vector<Seq> out;
    out.reserve(previous.size());
    for (std::size_t c = 0; c < groups.size(); ++c) {
        if (groups[c].empty())
            out.push_back(previous[c]);
        else
            out.push_back(detail::centroid_of(inputs, groups[c], cost, policy, rng));
    }
    return out;
}

/// Sum over clusters of squared distances over ordered pairs r != s of members.
template <edit_cost Cost>
double sum_of_squares(std::span<const Seq> inputs, std::span<const std::size_t> assignment, std::size_t k,
                      const Cost& cost)
{
    double total = 0.0;
    for (const auto& g : group_members(assignment, k)) {
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (std::size_t b = a + 1; b < g.size(); ++b) {
                const Seq& p = inputs[g[a]];
                const Seq& q = inputs[g[b]];
                const double d_pq = distance_sym(p, q, cost);
                // Different lengths orient the same way in both orders.
                const double d_qp = p.size() == q.size() ? distance_sym(q, p, cost) : d_pq;
                total += d_pq * d_pq + d_qp * d_qp;
            }
        }
    }
    return total;
}

/// One seeded run from a random initialization. Used by `run` per restart.
template <edit_cost Cost>
Clustering run_once(std::span<const Seq> inputs, const ClusterConfig& config, const Cost& cost, std::uint64_t seed)
{
    Rng rng(seed);
    Clustering out;
    out.centroids = init_centroids(inputs, config.k, rng);
    out.assignment = assign(inputs, std::span<const Seq>(out.centroids), cost, config.workers);
    while (out.iterations < config.max_iters) {
        out.centroids = update_centroids(inputs, std::span<const std::size_t>(out.assignment),
                                         std::span<const Seq>(out.centroids), cost, config.tie_policy, rng);
        ++out.iterations;
        auto next = assign(inputs, std::span<const Seq>(out.centroids), cost, config.workers);
        if (next == out.assignment) {
            out.converged = true;
            break;
        }
        out.assignment = std::move(next);
    }
    out.objective = sum_of_squares(inputs, std::span<const std::size_t>(out.assignment), config.k, cost);
    return out;
}

/// k-means-style clustering of variable-length sequences: random initial
/// centroids, then alternate majority-vote centroids and nearest-centroid
/// reassignment until the partition repeats or `max_iters` is hit. Runs
/// `restarts` independently seeded restarts and keeps the lowest objective
/// (earliest restart on equal objectives).
template <edit_cost Cost>
Clustering run(std::span<const Seq> inputs, const ClusterConfig& config, const Cost& cost)
{
    if (inputs.empty())
        throw config_error("no input sequences");
    if (config.k == 0)
        throw config_error("k must be at least 1");
    if (config.k > inputs.size())
        throw config_error("k = " + std::to_string(config.k) + " exceeds the number of inputs (" +
                           std::to_string(inputs.size()) + ")");
    if (config.max_iters == 0)
        throw config_error("max_iters must be at least 1");
    if (config.restarts == 0)
        throw config_error("restarts must be at least 1");

    std::optional<Clustering> best;
    for (std::size_t r = 0; r < config.restarts; ++r) {
        auto result = run_once(inputs, config, cost, restart_seed(config.seed, r));
        result.restart = r;
        if (!best || result.objective < best->objective)
            best = std::move(result);
    }
    return std::move(*best);
}

} // namespace edclust

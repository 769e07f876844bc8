#pragma once

#include "cost_model.hpp"
#include "edit_distance.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace edclust {

/// Parameters of a planted-cluster dataset.
struct GenSpec
{
    std::size_t m = 200;                ///< number of sequences
    std::size_t k_true = 2;             ///< planted clusters
    std::size_t alphabet_size = 4;
    std::size_t len_min = 10;
    std::size_t len_max = 20;
    double overlap_fraction = 0.0;      ///< share of members not strictly closer to their own prototype
    double edit_noise = 2.0;            ///< expected edit operations per member, half substitutions, half deletions
    std::optional<double> separation;   ///< min pairwise prototype distance; defaults to len_max / 2
    std::uint64_t rng_seed = 1;
    std::size_t max_attempts = 20000;   ///< per prototype and per member

    double effective_separation() const { return separation.value_or(static_cast<double>(len_max) / 2.0); }

    /// Throws config_error when the fields are inconsistent.
    void validate() const
    {
        if (k_true == 0)
            throw config_error("k_true must be at least 1");
        if (m < k_true)
            throw config_error("m must be at least k_true");
        if (alphabet_size == 0)
            throw config_error("alphabet_size must be at least 1");
        if (len_min == 0)
            throw config_error("len_min must be at least 1");
        if (len_max < len_min)
            throw config_error("len_max must be at least len_min");
        if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0))
            throw config_error("overlap_fraction must lie in [0, 1]");
        if (!(edit_noise >= 0.0) || !std::isfinite(edit_noise))
            throw config_error("edit_noise must be finite and nonnegative");
        if (overlap_fraction > 0.0 && k_true < 2)
            throw config_error("overlap needs at least two planted clusters");
        if (max_attempts == 0)
            throw config_error("max_attempts must be at least 1");
    }

    /// Members that must overlap a foreign prototype.
    std::size_t overlap_target() const
    {
        return static_cast<std::size_t>(std::llround(overlap_fraction * static_cast<double>(m)));
    }
};

struct LabeledDataset
{
    Alphabet alphabet;
    std::vector<Seq> sequences;
    std::vector<std::size_t> labels;
    std::vector<Seq> prototypes;
};

/// True when `member` is at least as close to some prototype other than
/// `prototypes[label]` as to its own.
template <edit_cost Cost>
bool is_overlapping(const Seq& member, std::size_t label, const std::vector<Seq>& prototypes, const Cost& cost)
{
    const double own = distance_sym(member, prototypes[label], cost);
    for (std::size_t j = 0; j < prototypes.size(); ++j)
        if (j != label && distance_sym(member, prototypes[j], cost) <= own)
            return true;
    return false;
}

namespace detail {

inline Seq random_sequence(std::size_t len_min, std::size_t len_max, std::size_t alphabet_size, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> len(len_min, len_max);
    std::uniform_int_distribution<std::uint32_t> sym(0, static_cast<std::uint32_t>(alphabet_size - 1));
    std::vector<Symbol> out(len(rng));
    for (auto& s : out)
        s = Symbol{sym(rng)};
    return Seq(std::move(out));
}

/// Independent effective substitutions with rate (noise/2)/n, then a
/// binomial number of deletions with mean about noise/2. At least one
/// symbol always survives.
inline Seq perturb(const Seq& base, double noise, std::size_t alphabet_size, Rng& rng)
{
    std::vector<Symbol> out(base.begin(), base.end());
    const std::size_t n = out.size();
    const double half = noise / 2.0;

    if (alphabet_size > 1 && half > 0.0) {
        std::bernoulli_distribution flip(std::min(1.0, half / static_cast<double>(n)));
        std::uniform_int_distribution<std::uint32_t> other(1, static_cast<std::uint32_t>(alphabet_size - 1));
        for (auto& s : out)
            if (flip(rng))
                s = Symbol{static_cast<std::uint32_t>((s.id + other(rng)) % alphabet_size)};
    }

    if (n > 1 && half > 0.0) {
        std::binomial_distribution<std::size_t> dels(n - 1, std::min(1.0, half / static_cast<double>(n - 1)));
        std::size_t count = dels(rng);
        for (; count > 0; --count) {
            std::uniform_int_distribution<std::size_t> pos(0, out.size() - 1);
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos(rng)));
        }
    }
    return Seq(std::move(out));
}

/// Prefix of `own` up to a random cut, followed by the proportionally
/// placed suffix of `foreign`. Never longer than the longer parent.
inline Seq crossover(const Seq& own, const Seq& foreign, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> cut_dist(0, own.size());
    const std::size_t cut = cut_dist(rng);
    const auto foreign_cut = static_cast<std::size_t>(
        std::llround(static_cast<double>(cut) * static_cast<double>(foreign.size()) / static_cast<double>(own.size())));
    std::vector<Symbol> out(own.begin(), own.begin() + static_cast<std::ptrdiff_t>(cut));
    out.insert(out.end(), foreign.begin() + static_cast<std::ptrdiff_t>(foreign_cut), foreign.end());
    if (out.empty())
        out.push_back(own[0]);
    return Seq(std::move(out));
}

} // namespace detail

/// Draws k_true random prototypes that are pairwise at least `separation`
/// apart, then derives members by perturbing them. Members meant to overlap
/// are perturbed crossovers of their prototype with a foreign one, rejected
/// until they overlap; all others are rejected until strictly closer to
/// their own prototype. The overlap count is exactly round(f * m). Member
/// order is shuffled. Same spec, same output.
inline LabeledDataset generate(const GenSpec& spec)
{
    spec.validate();
    Rng rng(spec.rng_seed);
    const auto cost = make_unit_cost_model(spec.alphabet_size);
    const double separation = spec.effective_separation();

    LabeledDataset out;
    out.alphabet = Alphabet::numeric(spec.alphabet_size);

    for (std::size_t p = 0; p < spec.k_true; ++p) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
            auto cand = detail::random_sequence(spec.len_min, spec.len_max, spec.alphabet_size, rng);
            placed = std::all_of(out.prototypes.begin(), out.prototypes.end(),
                                 [&](const Seq& q) { return distance_sym(cand, q, cost) >= separation; });
            if (placed)
                out.prototypes.push_back(std::move(cand));
        }
        if (!placed)
            throw generation_error("could not place prototype " + std::to_string(p) + " at separation " +
                                   std::to_string(separation) + " after " + std::to_string(spec.max_attempts) +
                                   " attempts");
    }

    const std::size_t overlap_total = spec.overlap_target();
    std::vector<Seq> members;
    std::vector<std::size_t> labels;
    members.reserve(spec.m);
    labels.reserve(spec.m);
    std::uniform_int_distribution<std::size_t> foreign_offset(1, std::max<std::size_t>(spec.k_true - 1, 1));

    for (std::size_t label = 0; label < spec.k_true; ++label) {
        const std::size_t size = spec.m / spec.k_true + (label < spec.m % spec.k_true ? 1 : 0);
        const std::size_t overlapping =
            std::min(size, overlap_total / spec.k_true + (label < overlap_total % spec.k_true ? 1 : 0));
        const Seq& own = out.prototypes[label];
        for (std::size_t i = 0; i < size; ++i) {
            const bool want_overlap = i < overlapping;
            bool accepted = false;
            for (std::size_t attempt = 0; attempt < spec.max_attempts && !accepted; ++attempt) {
                Seq cand = own;
                if (want_overlap) {
                    const std::size_t foreign = (label + foreign_offset(rng)) % spec.k_true;
                    cand = detail::crossover(own, out.prototypes[foreign], rng);
                }
                cand = detail::perturb(cand, spec.edit_noise, spec.alphabet_size, rng);
                if (is_overlapping(cand, label, out.prototypes, cost) == want_overlap) {
                    members.push_back(std::move(cand));
                    labels.push_back(label);
                    accepted = true;
                }
            }
            if (!accepted)
                throw generation_error(std::string("could not draw a ") + (want_overlap ? "overlapping" : "clean") +
                                       " member for cluster " + std::to_string(label) + " after " +
                                       std::to_string(spec.max_attempts) + " attempts");
        }
    }

    std::vector<std::size_t> order(members.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    out.sequences.reserve(order.size());
    out.labels.reserve(order.size());
    for (auto i : order) {
        out.sequences.push_back(std::move(members[i]));
        out.labels.push_back(labels[i]);
    }
    return out;
}

} // namespace edclust

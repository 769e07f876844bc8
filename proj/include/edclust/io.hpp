#pragma once

#include "cluster.hpp"
#include "cost_model.hpp"
#include "datagen.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "format.hpp"
#include "sequence.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

// Text formats:
//
//   dataset      #alphabet: tok1,tok2,...
//                id,label,seq
//                a1,0,tok1;tok2;tok1      (label may be empty)
//
//   cost matrix  ,tok1,tok2               (first cell ignored)
//                tok1,0,1
//                tok2,1,0
//
//   assignment   id,cluster
//   centroids    one seq per line, tokens joined by ';'

namespace edclust {

struct Dataset
{
    Alphabet alphabet;
    std::vector<std::string> ids;
    std::vector<Seq> sequences;
    std::vector<std::optional<std::size_t>> labels;

    std::size_t size() const noexcept { return sequences.size(); }

    bool fully_labeled() const
    {
        for (const auto& l : labels)
            if (!l)
                return false;
        return !labels.empty();
    }

    /// Labels as plain indices. Throws data_error if any row is unlabeled.
    std::vector<std::size_t> label_vector() const
    {
        std::vector<std::size_t> out;
        out.reserve(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!labels[i])
                throw data_error("row '" + ids[i] + "' has no label");
            out.push_back(*labels[i]);
        }
        return out;
    }

    /// Position of `id`. Throws data_error for unknown ids.
    std::size_t index_of(std::string_view id) const
    {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id)
                return i;
        throw data_error("no sequence with id '" + std::string(id) + "'");
    }
};

/// Generated data with ids s1..sm.
inline Dataset to_dataset(const LabeledDataset& generated)
{
    Dataset d;
    d.alphabet = generated.alphabet;
    d.sequences = generated.sequences;
    for (std::size_t i = 0; i < generated.sequences.size(); ++i) {
        d.ids.push_back("s" + std::to_string(i + 1));
        d.labels.emplace_back(generated.labels[i]);
    }
    return d;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline bool read_line(std::istream& is, std::string& line)
{
    if (!std::getline(is, line))
        return false;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return true;
}

inline std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open '" + path.string() + "'");
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw data_error("cannot write '" + path.string() + "'");
    return out;
}

} // namespace detail

inline Seq parse_seq(std::string_view field, const Alphabet& alphabet, std::size_t line = 0)
{
    if (field.empty())
        throw data_error("empty sequence", line);
    std::vector<Symbol> symbols;
    for (auto tok : detail::split(field, ';')) {
        if (tok.empty())
            throw data_error("empty token in sequence", line);
        if (!alphabet.contains(tok))
            throw data_error("token '" + std::string(tok) + "' is not in the alphabet", line);
        symbols.push_back(alphabet.intern(tok));
    }
    return Seq(std::move(symbols));
}

inline std::string format_seq(const Seq& seq, const Alphabet& alphabet)
{
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0)
            out += ';';
        out += alphabet.token(seq[i]);
    }
    return out;
}

/// Parses the dataset format. Errors name the 1-based line.
inline Dataset parse_dataset(std::istream& is)
{
    constexpr std::string_view alphabet_tag = "#alphabet:";
    Dataset d;
    std::string line;
    std::size_t lineno = 1;
    if (!detail::read_line(is, line) || !std::string_view(line).starts_with(alphabet_tag))
        throw data_error("expected '#alphabet: tok1,tok2,...' header", lineno);
    const auto decl = detail::trim(std::string_view(line).substr(alphabet_tag.size()));
    if (decl.empty())
        throw data_error("empty alphabet", lineno);
    for (auto tok : detail::split(decl, ',')) {
        try {
            d.alphabet.add(std::string(detail::trim(tok)));
        } catch (const data_error& e) {
            throw data_error(e.what(), lineno);
        }
    }

    ++lineno;
    if (!detail::read_line(is, line) || detail::trim(line) != "id,label,seq")
        throw data_error("expected column header 'id,label,seq'", lineno);

    std::unordered_set<std::string> seen;
    while (detail::read_line(is, line)) {
        ++lineno;
        if (detail::trim(line).empty())
            continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 3)
            throw data_error("expected 3 fields (id,label,seq), found " + std::to_string(fields.size()), lineno);
        const std::string id(fields[0]);
        if (id.empty())
            throw data_error("empty id", lineno);
        if (!seen.insert(id).second)
            throw data_error("duplicate id '" + id + "'", lineno);
        std::optional<std::size_t> label;
        if (!fields[1].empty()) {
            std::size_t v = 0;
            if (!parse_int(fields[1], v))
                throw data_error("label '" + std::string(fields[1]) + "' is not a nonnegative integer", lineno);
            label = v;
        }
        d.sequences.push_back(parse_seq(fields[2], d.alphabet, lineno));
        d.ids.push_back(id);
        d.labels.push_back(label);
    }
    return d;
}

inline Dataset read_dataset(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return parse_dataset(in);
}

inline void write_dataset(std::ostream& os, const Dataset& d)
{
    os << "#alphabet: ";
    for (std::size_t i = 0; i < d.alphabet.size(); ++i)
        os << (i == 0 ? "" : ",") << d.alphabet.tokens()[i];
    os << "\nid,label,seq\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        os << d.ids[i] << ',';
        if (d.labels[i])
            os << *d.labels[i];
        os << ',' << format_seq(d.sequences[i], d.alphabet) << '\n';
    }
}

inline void write_dataset(const std::filesystem::path& path, const Dataset& d)
{
    auto out = detail::open_output(path);
    write_dataset(out, d);
}

/// Reads a square substitution matrix whose row and column headers name
/// every alphabet token exactly once, in any order.
inline CostModel parse_cost_matrix(std::istream& is, const Alphabet& alphabet, double del_cost)
{
    std::string line;
    std::size_t lineno = 1;
    if (!detail::read_line(is, line))
        throw data_error("empty cost matrix", lineno);
    const auto header = detail::split(line, ',');
    const std::size_t n = alphabet.size();
    if (header.size() != n + 1)
        throw data_error("cost matrix header has " + std::to_string(header.size() - 1) + " tokens, alphabet has " +
                         std::to_string(n),
                         lineno);
    std::vector<std::size_t> col_id(n);
    std::vector<bool> col_seen(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        const auto tok = detail::trim(header[c + 1]);
        if (!alphabet.contains(tok))
            throw data_error("cost matrix token '" + std::string(tok) + "' is not in the alphabet", lineno);
        col_id[c] = alphabet.intern(tok).id;
        if (col_seen[col_id[c]])
            throw data_error("duplicate column '" + std::string(tok) + "'", lineno);
        col_seen[col_id[c]] = true;
    }

    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
    std::vector<bool> row_seen(n, false);
    std::size_t rows = 0;
    while (detail::read_line(is, line)) {
        ++lineno;
        if (detail::trim(line).empty())
            continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != n + 1)
            throw data_error("expected " + std::to_string(n + 1) + " fields", lineno);
        const auto tok = detail::trim(fields[0]);
        if (!alphabet.contains(tok))
            throw data_error("cost matrix token '" + std::string(tok) + "' is not in the alphabet", lineno);
        const auto r = alphabet.intern(tok).id;
        if (row_seen[r])
            throw data_error("duplicate row '" + std::string(tok) + "'", lineno);
        row_seen[r] = true;
        for (std::size_t c = 0; c < n; ++c) {
            double v = 0.0;
            if (!parse_real(detail::trim(fields[c + 1]), v))
                throw data_error("'" + std::string(fields[c + 1]) + "' is not a number", lineno);
            matrix[r][col_id[c]] = v;
        }
        ++rows;
    }
    if (rows != n)
        throw data_error("cost matrix has " + std::to_string(rows) + " rows, alphabet has " + std::to_string(n));
    return make_matrix_cost_model(alphabet, matrix, del_cost);
}

inline CostModel read_cost_matrix(const std::filesystem::path& path, const Alphabet& alphabet, double del_cost)
{
    auto in = detail::open_input(path);
    return parse_cost_matrix(in, alphabet, del_cost);
}

inline void write_assignment(std::ostream& os, const std::vector<std::string>& ids,
                             std::span<const std::size_t> assignment)
{
    os << "id,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        os << ids[i] << ',' << assignment[i] << '\n';
}

/// id -> cluster, in file order.
inline std::vector<std::pair<std::string, std::size_t>> parse_assignment(std::istream& is)
{
    std::string line;
    std::size_t lineno = 1;
    if (!detail::read_line(is, line) || detail::trim(line) != "id,cluster")
        throw data_error("expected column header 'id,cluster'", lineno);
    std::vector<std::pair<std::string, std::size_t>> out;
    while (detail::read_line(is, line)) {
        ++lineno;
        if (detail::trim(line).empty())
            continue;
        const auto fields = detail::split(line, ',');
        std::size_t c = 0;
        if (fields.size() != 2 || fields[0].empty() || !parse_int(fields[1], c))
            throw data_error("expected 'id,cluster'", lineno);
        out.emplace_back(std::string(fields[0]), c);
    }
    return out;
}

inline void write_centroids(std::ostream& os, const std::vector<Seq>& centroids, const Alphabet& alphabet)
{
    for (const auto& c : centroids)
        os << format_seq(c, alphabet) << '\n';
}

// JSON configuration. Unknown keys are rejected so typos do not pass silently.

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<std::string_view> known,
                                std::string_view what)
{
    if (!j.is_object())
        throw config_error(std::string(what) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto k : known)
            ok = ok || key == k;
        if (!ok)
            throw config_error("unknown key '" + key + "' in " + std::string(what));
    }
}

template <class T>
void get_if_present(const nlohmann::json& j, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace detail

inline GenSpec gen_spec_from_json(const nlohmann::json& j)
{
    detail::reject_unknown_keys(j,
                                {"m", "k_true", "alphabet_size", "len_min", "len_max", "overlap_fraction",
                                 "edit_noise", "separation", "rng_seed", "max_attempts"},
                                "generator spec");
    GenSpec s;
    detail::get_if_present(j, "m", s.m);
    detail::get_if_present(j, "k_true", s.k_true);
    detail::get_if_present(j, "alphabet_size", s.alphabet_size);
    detail::get_if_present(j, "len_min", s.len_min);
    detail::get_if_present(j, "len_max", s.len_max);
    detail::get_if_present(j, "overlap_fraction", s.overlap_fraction);
    detail::get_if_present(j, "edit_noise", s.edit_noise);
    detail::get_if_present(j, "rng_seed", s.rng_seed);
    detail::get_if_present(j, "max_attempts", s.max_attempts);
    if (j.contains("separation")) {
        double sep = 0.0;
        detail::get_if_present(j, "separation", sep);
        s.separation = sep;
    }
    s.validate();
    return s;
}

/// Applies cluster keys found in `j` on top of `base`.
inline ClusterConfig cluster_config_from_json(const nlohmann::json& j, ClusterConfig base = {})
{
    detail::get_if_present(j, "k", base.k);
    detail::get_if_present(j, "max_iters", base.max_iters);
    detail::get_if_present(j, "restarts", base.restarts);
    detail::get_if_present(j, "seed", base.seed);
    detail::get_if_present(j, "workers", base.workers);
    if (j.contains("tie_policy")) {
        std::string p;
        detail::get_if_present(j, "tie_policy", p);
        base.tie_policy = parse_tie_policy(p);
    }
    return base;
}

/// {"specs": [GenSpec...], "cluster": {...}, "bins": [0,5,20,100]}.
/// When "cluster" has no "k", each spec is clustered with its own k_true.
inline ExperimentConfig experiment_from_json(const nlohmann::json& j)
{
    detail::reject_unknown_keys(j, {"specs", "cluster", "bins", "samples"}, "experiment spec");
    ExperimentConfig cfg;
    if (!j.contains("specs") || !j.at("specs").is_array() || j.at("specs").empty())
        throw config_error("experiment spec needs a non-empty 'specs' array");
    for (const auto& s : j.at("specs"))
        cfg.specs.push_back(gen_spec_from_json(s));
    if (j.contains("cluster")) {
        const auto& c = j.at("cluster");
        detail::reject_unknown_keys(c, {"k", "tie_policy", "max_iters", "restarts", "seed", "workers"},
                                    "cluster config");
        cfg.cluster = cluster_config_from_json(c);
        cfg.k_from_spec = !c.contains("k");
    }
    detail::get_if_present(j, "bins", cfg.bins.upper_bounds);
    detail::get_if_present(j, "samples", cfg.samples);
    cfg.bins.validate();
    return cfg;
}

inline nlohmann::json read_json(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw data_error("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

} // namespace edclust

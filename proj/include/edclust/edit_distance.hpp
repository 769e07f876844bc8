#pragma once

#include "cost_model.hpp"
#include "error.hpp"
#include "sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace edclust {

/// Cell (e, s) holds the cost of turning the first e+s source symbols into the
/// first s target symbols with e deletions and s substitutions.
///
/// Only e in [0, N-M], s in [0, M] is stored; cells with more deletions than
/// N-M cannot lie on a path to the answer at (N-M, M).
class DpMatrix
{
public:
    DpMatrix(std::size_t source_length, std::size_t target_length)
        : n_(source_length)
        , m_(target_length)
        , cells_((source_length - target_length + 1) * (target_length + 1), 0.0)
    {
    }

    std::size_t source_length() const noexcept { return n_; }
    std::size_t target_length() const noexcept { return m_; }
    std::size_t max_deletions() const noexcept { return n_ - m_; }

    double operator()(std::size_t e, std::size_t s) const noexcept { return cells_[e * (m_ + 1) + s]; }
    double& operator()(std::size_t e, std::size_t s) noexcept { return cells_[e * (m_ + 1) + s]; }

    /// Cell (N-M, M): the edit distance of source to target.
    double result() const noexcept { return (*this)(max_deletions(), m_); }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> cells_;
};

/// Fills W for transforming `x` into `y` with deletions and substitutions.
/// Throws precondition_error when |x| < |y|.
template <edit_cost Cost>
DpMatrix dp_matrix(const Seq& x, const Seq& y, const Cost& cost)
{
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    if (n < m)
        throw precondition_error("dp_matrix: source (" + std::to_string(n) + ") shorter than target (" +
                                 std::to_string(m) + ")");
    const std::size_t max_del = n - m;
    const double del = cost.deletion();

    DpMatrix w(n, m);
    for (std::size_t e = 1; e <= max_del; ++e)
        w(e, 0) = w(e - 1, 0) + del;
    // x[e+s-1] and y[s-1] are the 1-based X(e+s), Y(s).
    for (std::size_t s = 1; s <= m; ++s)
        w(0, s) = w(0, s - 1) + cost.substitution(x[s - 1], y[s - 1]);
    for (std::size_t e = 1; e <= max_del; ++e)
        for (std::size_t s = 1; s <= m; ++s)
            w(e, s) = std::min(w(e - 1, s) + del, w(e, s - 1) + cost.substitution(x[e + s - 1], y[s - 1]));
    return w;
}

/// Unconstrained edit distance of `x` into `y` (|x| >= |y|). Same recurrence
/// and summation order as dp_matrix, kept in a single rolling row.
template <edit_cost Cost>
double distance(const Seq& x, const Seq& y, const Cost& cost)
{
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    if (n < m)
        throw precondition_error("distance: source (" + std::to_string(n) + ") shorter than target (" +
                                 std::to_string(m) + ")");
    const std::size_t max_del = n - m;
    const double del = cost.deletion();

    thread_local std::vector<double> row;
    row.assign(m + 1, 0.0);
    for (std::size_t s = 1; s <= m; ++s)
        row[s] = row[s - 1] + cost.substitution(x[s - 1], y[s - 1]);
    for (std::size_t e = 1; e <= max_del; ++e) {
        row[0] = row[0] + del;
        for (std::size_t s = 1; s <= m; ++s)
            row[s] = std::min(row[s] + del, row[s - 1] + cost.substitution(x[e + s - 1], y[s - 1]));
    }
    return row[m];
}

/// Distance between arbitrary-length sequences: the longer one is the source.
/// Equal lengths keep the given order, which matters only for asymmetric costs.
template <edit_cost Cost>
double distance_sym(const Seq& a, const Seq& b, const Cost& cost)
{
    return a.size() >= b.size() ? distance(a, b, cost) : distance(b, a, cost);
}

/// Two aligned rows of equal length. The source row never holds a gap; a gap
/// in the target row marks a deletion, a symbol marks a substitution.
class EditSequence
{
public:
    EditSequence(std::vector<Symbol> alpha, std::vector<AlignedSymbol> beta)
        : alpha_(std::move(alpha)), beta_(std::move(beta))
    {
        if (alpha_.size() != beta_.size())
            throw invariant_error("edit sequence rows differ in length");
    }

    std::span<const Symbol> alpha() const noexcept { return alpha_; }
    std::span<const AlignedSymbol> beta() const noexcept { return beta_; }
    std::size_t size() const noexcept { return alpha_.size(); }

    std::size_t deletions() const noexcept
    {
        return static_cast<std::size_t>(std::count_if(beta_.begin(), beta_.end(), [](auto a) { return a.is_gap(); }));
    }

    friend bool operator==(const EditSequence&, const EditSequence&) = default;

private:
    std::vector<Symbol> alpha_;
    std::vector<AlignedSymbol> beta_;
};

namespace detail {

inline bool cells_equal(double a, double b, bool exact) noexcept
{
    return exact ? a == b : std::fabs(a - b) <= 1e-9;
}

} // namespace detail

/// Walks W back from (N-M, M) to (0, 0) and returns one optimal edit
/// sequence in left-to-right order. When both moves reproduce a cell the
/// deletion move wins, so the result is deterministic.
template <edit_cost Cost>
EditSequence backtrack(const Seq& x, const Seq& y, const DpMatrix& w, const Cost& cost)
{
    if (w.source_length() != x.size() || w.target_length() != y.size())
        throw invariant_error("backtrack: matrix dimensions do not match the sequences");

    const double del = cost.deletion();
    const bool exact = cost.exact();
    std::vector<Symbol> alpha(x.size());
    std::vector<AlignedSymbol> beta(x.size(), AlignedSymbol::gap());

    std::size_t e = w.max_deletions();
    std::size_t s = w.target_length();
    while (e > 0 || s > 0) {
        const std::size_t pos = e + s - 1;
        alpha[pos] = x[pos];
        if (e > 0 && detail::cells_equal(w(e, s), w(e - 1, s) + del, exact)) {
            --e;
        } else if (s > 0 && detail::cells_equal(w(e, s), w(e, s - 1) + cost.substitution(x[pos], y[s - 1]), exact)) {
            beta[pos] = y[s - 1];
            --s;
        } else {
            throw invariant_error("backtrack: cell (" + std::to_string(e) + "," + std::to_string(s) +
                                  ") matches neither predecessor");
        }
    }
    return EditSequence(std::move(alpha), std::move(beta));
}

/// dp_matrix followed by backtrack.
template <edit_cost Cost>
EditSequence align(const Seq& x, const Seq& y, const Cost& cost)
{
    return backtrack(x, y, dp_matrix(x, y, cost), cost);
}

/// Total cost of an edit sequence: per-column substitution costs, plus the
/// deletion cost for each gap.
template <edit_cost Cost>
double score_edit_sequence(const EditSequence& seq, const Cost& cost)
{
    double total = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto b = seq.beta()[i];
        total += b.is_gap() ? cost.deletion() : cost.substitution(seq.alpha()[i], b.symbol());
    }
    return total;
}

/// The target row of `seq`: the target stretched to the source length with gaps.
inline std::vector<AlignedSymbol> expanded_target(const EditSequence& seq)
{
    return {seq.beta().begin(), seq.beta().end()};
}

} // namespace edclust

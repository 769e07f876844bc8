#pragma once

#include "error.hpp"
#include "sequence.hpp"

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

namespace edclust {

/// Anything the edit-distance routines can price: a uniform deletion cost and
/// a substitution cost per symbol pair. `exact()` reports whether every cost
/// is a small integer, in which case DP sums are exact and backtracking can
/// compare cells with ==.
template <class C>
concept edit_cost = requires(const C& c, Symbol x, Symbol y) {
    { c.deletion() } -> std::convertible_to<double>;
    { c.substitution(x, y) } -> std::convertible_to<double>;
    { c.exact() } -> std::convertible_to<bool>;
};

/// Deletion cost plus a dense |A|x|A| substitution table. Immutable after
/// construction; d(x,x) = 0 and all costs are nonnegative.
class CostModel
{
public:
    /// `sub` is row-major: sub[x * n + y] = d(x, y).
    CostModel(std::size_t alphabet_size, std::vector<double> sub, double del_cost)
        : n_(alphabet_size), sub_(std::move(sub)), del_(del_cost)
    {
        if (n_ == 0)
            throw config_error("cost model needs a non-empty alphabet");
        if (sub_.size() != n_ * n_)
            throw config_error("substitution table must be " + std::to_string(n_) + "x" + std::to_string(n_));
        if (!(del_ >= 0.0) || !std::isfinite(del_))
            throw config_error("deletion cost must be finite and nonnegative");
        exact_ = is_small_integer(del_);
        for (std::size_t x = 0; x < n_; ++x) {
            for (std::size_t y = 0; y < n_; ++y) {
                double v = sub_[x * n_ + y];
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw config_error("substitution cost d(" + std::to_string(x) + "," + std::to_string(y) +
                                       ") must be finite and nonnegative");
                if (x == y && v != 0.0)
                    throw config_error("substitution cost d(x,x) must be 0 (symbol " + std::to_string(x) + ")");
                exact_ = exact_ && is_small_integer(v);
            }
        }
    }

    double deletion() const noexcept { return del_; }

    /// Precondition: both ids < alphabet_size().
    double substitution(Symbol x, Symbol y) const noexcept { return sub_[x.id * n_ + y.id]; }

    bool exact() const noexcept { return exact_; }
    std::size_t alphabet_size() const noexcept { return n_; }

private:
    static bool is_small_integer(double v) { return v == std::floor(v) && v < 1e6; }

    std::size_t n_;
    std::vector<double> sub_;
    double del_;
    bool exact_ = true;
};

static_assert(edit_cost<CostModel>);

/// Deletion cost 1; substitution cost 1 between distinct symbols, 0 otherwise.
inline CostModel make_unit_cost_model(std::size_t alphabet_size)
{
    if (alphabet_size == 0)
        throw config_error("cost model needs a non-empty alphabet");
    std::vector<double> sub(alphabet_size * alphabet_size, 1.0);
    for (std::size_t i = 0; i < alphabet_size; ++i)
        sub[i * alphabet_size + i] = 0.0;
    return CostModel(alphabet_size, std::move(sub), 1.0);
}

inline CostModel make_unit_cost_model(const Alphabet& alphabet) { return make_unit_cost_model(alphabet.size()); }

/// Builds a model from a square matrix indexed by alphabet position.
inline CostModel make_matrix_cost_model(const Alphabet& alphabet, const std::vector<std::vector<double>>& sub_matrix,
                                        double del_cost)
{
    const std::size_t n = alphabet.size();
    if (n == 0)
        throw config_error("cost model needs a non-empty alphabet");
    if (sub_matrix.size() != n)
        throw config_error("substitution matrix has " + std::to_string(sub_matrix.size()) + " rows, alphabet has " +
                           std::to_string(n) + " symbols");
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : sub_matrix) {
        if (row.size() != n)
            throw config_error("substitution matrix is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return CostModel(n, std::move(flat), del_cost);
}

} // namespace edclust

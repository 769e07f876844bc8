#pragma once

#include "error.hpp"

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace edclust {

/// An interned alphabet token. Ids are dense in [0, alphabet size).
struct Symbol
{
    std::uint32_t id = 0;

    friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

/// A symbol or the gap marker. Gaps only appear inside edit sequences and
/// expanded rows, never in a Seq.
class AlignedSymbol
{
public:
    constexpr AlignedSymbol(Symbol s) noexcept : raw_(s.id) {}

    static constexpr AlignedSymbol gap() noexcept { return AlignedSymbol(gap_raw); }

    constexpr bool is_gap() const noexcept { return raw_ == gap_raw; }

    /// Precondition: !is_gap().
    constexpr Symbol symbol() const noexcept { return Symbol{raw_}; }

    /// Symbol id, or `gap_slot` for the gap. Handy for indexing vote tables.
    constexpr std::size_t slot(std::size_t gap_slot) const noexcept
    {
        return is_gap() ? gap_slot : static_cast<std::size_t>(raw_);
    }

    friend constexpr bool operator==(AlignedSymbol, AlignedSymbol) = default;

private:
    static constexpr std::uint32_t gap_raw = std::numeric_limits<std::uint32_t>::max();

    explicit constexpr AlignedSymbol(std::uint32_t raw) noexcept : raw_(raw) {}

    std::uint32_t raw_;
};

/// A non-empty sequence of symbols; the unit being clustered.
class Seq
{
public:
    explicit Seq(std::vector<Symbol> symbols) : symbols_(std::move(symbols))
    {
        if (symbols_.empty())
            throw data_error("empty sequence");
    }

    Seq(std::initializer_list<Symbol> symbols) : Seq(std::vector<Symbol>(symbols)) {}

    /// Convenience for tests and generators: build from raw ids.
    static Seq from_ids(std::span<const std::uint32_t> ids)
    {
        std::vector<Symbol> out;
        out.reserve(ids.size());
        for (auto id : ids)
            out.push_back(Symbol{id});
        return Seq(std::move(out));
    }

    static Seq from_ids(std::initializer_list<std::uint32_t> ids)
    {
        return from_ids(std::span<const std::uint32_t>(ids.begin(), ids.size()));
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    auto begin() const noexcept { return symbols_.begin(); }
    auto end() const noexcept { return symbols_.end(); }

    friend bool operator==(const Seq&, const Seq&) = default;
    friend auto operator<=>(const Seq&, const Seq&) = default;

private:
    std::vector<Symbol> symbols_;
};

/// Drops gaps from an aligned row. Returns an empty vector if every entry is a gap.
inline std::vector<Symbol> strip_gaps(std::span<const AlignedSymbol> row)
{
    std::vector<Symbol> out;
    out.reserve(row.size());
    for (auto a : row)
        if (!a.is_gap())
            out.push_back(a.symbol());
    return out;
}

/// Ordered token list with dense interning. Declaration order defines the
/// alphabet position used by the nearest-to-first/last tie policies.
class Alphabet
{
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> tokens)
    {
        for (auto& t : tokens)
            add(std::move(t));
    }

    /// Alphabet of decimal tokens "0", "1", ..., "n-1".
    static Alphabet numeric(std::size_t n)
    {
        Alphabet a;
        for (std::size_t i = 0; i < n; ++i)
            a.add(std::to_string(i));
        return a;
    }

    Symbol add(std::string token)
    {
        if (token.empty())
            throw data_error("empty alphabet token");
        if (token.find_first_of(",;\n\r") != std::string::npos)
            throw data_error("alphabet token contains a reserved character: '" + token + "'");
        if (index_.contains(token))
            throw data_error("duplicate alphabet token '" + token + "'");
        Symbol s{static_cast<std::uint32_t>(tokens_.size())};
        index_.emplace(token, s.id);
        tokens_.push_back(std::move(token));
        return s;
    }

    /// Throws data_error for tokens outside the alphabet.
    Symbol intern(std::string_view token) const
    {
        auto it = index_.find(std::string(token));
        if (it == index_.end())
            throw data_error("token '" + std::string(token) + "' is not in the alphabet");
        return Symbol{it->second};
    }

    bool contains(std::string_view token) const { return index_.contains(std::string(token)); }

    const std::string& token(Symbol s) const { return tokens_.at(s.id); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.tokens_ == b.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

} // namespace edclust

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edclust {

/// Invalid configuration: bad cost model, k out of range, unsupported options.
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data. Carries the 1-based line number when known.
class data_error : public std::runtime_error
{
public:
    explicit data_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what)
        , line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A caller broke an operation's precondition (e.g. source shorter than target).
class precondition_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Internal state is inconsistent, e.g. a DP matrix that does not match its inputs.
class invariant_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Datagen could not satisfy the requested spec within its attempt budget.
class generation_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace edclust

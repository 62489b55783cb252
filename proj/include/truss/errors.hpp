#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace truss {

// Base class for all errors raised by the library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (bad token, bad structure). Carries a 1-based line
// number when the source is line-oriented, 0 otherwise.
class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& what)
        : error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A vertex or edge that the operation requires is absent.
class not_found_error : public error {
public:
    using error::error;
};

// Invalid argument values (generator parameters, bad budget, bad config).
class argument_error : public error {
public:
    using error::error;
};

// The memory budget cannot accommodate the computation. Carries the vertex
// that alone exceeds the budget when that is the cause.
class budget_infeasible_error : public error {
public:
    explicit budget_infeasible_error(const std::string& what) : error(what) {}
    budget_infeasible_error(std::uint32_t vertex, const std::string& what)
        : error(what), vertex_(vertex), has_vertex_(true) {}
    bool has_vertex() const { return has_vertex_; }
    std::uint32_t vertex() const { return vertex_; }

private:
    std::uint32_t vertex_ = 0;
    bool has_vertex_ = false;
};

// Input exceeds a configured size limit (oracle refusal).
class limit_error : public error {
public:
    using error::error;
};

} // namespace truss

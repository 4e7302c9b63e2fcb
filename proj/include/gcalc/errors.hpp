#pragma once

#include <stdexcept>
#include <string>

namespace gcalc {

/// Input violates a documented precondition (bad arity, open graph where a
/// closed one is required, singular metric, ...). CLI maps this to exit 1.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input; carries the 1-based line number when known.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_number(line) {}
    int line_number;
};

/// A required tensor or option is missing from an otherwise valid setup.
struct configuration_error : std::runtime_error {
    explicit configuration_error(const std::string& what) : std::runtime_error(what) {}
};

/// Two independent computations of the same quantity disagreed. Reaching this
/// means a library bug, not a user error. CLI maps this to exit 2.
struct invariant_violation : std::logic_error {
    explicit invariant_violation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gcalc

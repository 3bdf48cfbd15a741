#pragma once

#include <stdexcept>
#include <string>

#include "mil/ast.hpp"

namespace mil {

/// Syntax, type, or resolution error with its source position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, SourceLoc loc)
        : std::runtime_error(format(message, loc)), loc_(loc), message_(std::move(message)) {}

    SourceLoc where() const { return loc_; }
    const std::string& message() const { return message_; }

private:
    static std::string format(const std::string& message, SourceLoc loc) {
        return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message;
    }

    SourceLoc loc_;
    std::string message_;
};

/// Parses and type-checks one routine. Throws ParseError on any problem.
/// Node ids and loop labels are assigned deterministically from tree position.
Routine parse(const std::string& source);

/// Type-checks a transformed or hand-built routine in place (annotates
/// expression types). Throws ParseError with the offending node's location.
void typecheck(Routine& r);

} // namespace mil

#pragma once

#include <string>

#include "mil/ast.hpp"

namespace mil {

/// Canonical indented rendering; parses back to a structurally equal routine.
/// Seeded checks carry their target as a trailing comment so instrumented
/// programs survive a round trip.
std::string pretty(const Routine& r);

std::string pretty(const Expr& e);

} // namespace mil

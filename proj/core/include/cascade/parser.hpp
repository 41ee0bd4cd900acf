#pragma once

#include <string_view>

#include "cascade/ast.hpp"

namespace cascade {

// Parses a complete cascade script. Throws SyntaxError (including the
// MissingFinalAction / UnknownDirective / UndefinedSetRef / NestedConditional
// kinds) with line and column of the first problem.
Script parse_script(std::string_view source);

// Parses a standalone predicate expression (as used in decision-tree files).
// No set constants are in scope, so SetRef names are rejected; sets must be
// written as literals.
ExprPtr parse_predicate(std::string_view text);

}  // namespace cascade

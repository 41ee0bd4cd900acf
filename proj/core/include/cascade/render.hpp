#pragma once

#include <string_view>

#include "cascade/ast.hpp"

namespace cascade {

// DSL literal form of a constant value (strings double-quoted and escaped,
// reals in shortest round-trip notation).
std::string render_value(const Value& v);

std::string render_predicate(const ExprPtr& expr);

// Canonical script text. Deterministic, and parse_script(render_script(s)) is
// AST-equal to s for every valid script.
std::string render_script(const Script& script);

// 64-bit FNV-1a digest, 16 hex characters.
std::string content_hash(std::string_view text);

// Assigns statement indices and recomputes source_hash from the canonical
// rendering. Every constructor of Script values (parser, tree transforms)
// finishes through here.
void finalize_script(Script& script);

}  // namespace cascade

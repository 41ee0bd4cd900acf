#pragma once

// Umbrella header for library consumers.

#include "cascade/ast.hpp"
#include "cascade/dictionary.hpp"
#include "cascade/engine.hpp"
#include "cascade/errors.hpp"
#include "cascade/oracle.hpp"
#include "cascade/parser.hpp"
#include "cascade/record.hpp"
#include "cascade/render.hpp"
#include "cascade/tree.hpp"
#include "cascade/validate.hpp"
#include "cascade/value.hpp"

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cascade/ast.hpp"
#include "cascade/record.hpp"
#include "cascade/tree.hpp"

namespace cascade {

// Finite per-annotation value sets enumerated by the oracle. A Missing value
// in a list stands for "annotation absent from the record"; Missing is never
// added implicitly.
struct DomainSpec {
    std::map<std::string, std::vector<Value>> values;

    std::uint64_t product_size() const;  // saturating
};

struct OracleOutcome {
    bool equal = true;
    std::optional<Record> counterexample;  // first differing input
    bool outcome_a = false;
    bool outcome_b = false;
    std::uint64_t points = 0;
};

inline constexpr std::uint64_t kDefaultDomainCap = 1'000'000;

// Boundary-bracketing domain derived from the artifacts' comparison constants,
// set literals and boolean tests: for each numeric constant the domain holds
// the constant itself plus representatives strictly below and above it (truth
// of the predicates is piecewise constant between constants, so agreement on
// these points extends to the full real line); text positions get every
// mentioned value plus one guaranteed non-member; boolean positions get both
// values. Throws IncompleteDomain when no values can be derived for some
// annotation (e.g. variable-to-variable comparisons).
DomainSpec derive_domain(const std::vector<const Script*>& scripts,
                         const std::vector<const DecisionTree*>& trees);

// Exhaustive equivalence check over the Cartesian product of the domain.
// Requires every annotation of both artifacts to have a domain entry
// (IncompleteDomain otherwise) and the product to stay within cap
// (DomainTooLarge otherwise). Deterministic: points are enumerated in sorted
// annotation order and the first differing input is reported.
OracleOutcome equivalence_oracle(const Script& a, const Script& b, const DomainSpec& domain,
                                 std::uint64_t cap = kDefaultDomainCap);
OracleOutcome equivalence_oracle(const DecisionTree& a, const Script& b, const DomainSpec& domain,
                                 std::uint64_t cap = kDefaultDomainCap);
OracleOutcome equivalence_oracle(const Script& a, const DecisionTree& b, const DomainSpec& domain,
                                 std::uint64_t cap = kDefaultDomainCap);
OracleOutcome equivalence_oracle(const DecisionTree& a, const DecisionTree& b,
                                 const DomainSpec& domain,
                                 std::uint64_t cap = kDefaultDomainCap);

// Strict boolean verdict of a tree on a record (Unknown conditions follow the
// else branch). Exposed for tests and independent cross-checks.
bool tree_outcome(const DecisionTree& tree, const Record& record);

}  // namespace cascade

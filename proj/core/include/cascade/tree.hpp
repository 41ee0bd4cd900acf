#pragma once

#include <memory>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "cascade/ast.hpp"

namespace cascade {

struct DecisionTree;
using TreePtr = std::shared_ptr<const DecisionTree>;

// Binary decision tree: internal nodes test a predicate, leaves return a
// verdict. During evaluation an Unknown condition follows the else branch
// (a test only counts when it definitely holds).
struct DecisionTree {
    struct Leaf {
        bool action = false;
    };
    struct Branch {
        ExprPtr condition;
        TreePtr then_branch;
        TreePtr else_branch;
    };
    std::variant<Leaf, Branch> node;
};

TreePtr make_leaf(bool action);
TreePtr make_branch(ExprPtr condition, TreePtr then_branch, TreePtr else_branch);

// Loads the nested-object JSON form: {"if": "<predicate>", "then": <node>,
// "else": <node>} | {"return": true|false}. Throws SchemaError on shape
// problems and SyntaxError on bad predicate text.
TreePtr load_tree(std::string_view json_text);

std::set<std::string> tree_variables(const DecisionTree& tree);

// Root-to-leaf path expansion, then-edges before else-edges; else-edges
// contribute negated conditions. The final path's action becomes the script's
// default and its statement is dropped. The result is first-match equivalent
// to the tree by construction.
Script tree_to_cascade(const DecisionTree& tree);

struct DecisionListCheck {
    bool is_one_decision_list = true;
    std::vector<int> offending;  // statement indices with non-literal predicates
};

// A 1-decision list tests a single optionally negated literal per statement:
// one variable in one comparison or membership atom.
DecisionListCheck check_one_decision_list(const Script& script);

// Removes redundancy that first-match order makes invisible: statements whose
// action already equals the default, then per-statement conjuncts, each
// removal verified against the original behaviour over the derived bounded
// domain. Never increases statement count; already-minimal scripts come back
// unchanged. Throws SimplificationUnsound if the final guard check fails
// (internal bug, not user error).
Script simplify_cascade(const Script& script);

}  // namespace cascade

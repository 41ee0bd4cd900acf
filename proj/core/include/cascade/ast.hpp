#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cascade/dictionary.hpp"
#include "cascade/value.hpp"

namespace cascade {

enum class CompareOp { Less, LessEq, Greater, GreaterEq, Eq, Ne };

std::string_view compare_op_text(CompareOp op);

struct Expr;
// Expression nodes are immutable once built and safe to share across threads.
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    struct Or {
        std::vector<ExprPtr> children;
    };
    struct And {
        std::vector<ExprPtr> children;
    };
    struct Not {
        ExprPtr child;
    };
    // Chained comparison: operands.size() == ops.size() + 1. A chain of k ops
    // is the conjunction of its k pairwise comparisons (0 < QD < 4 reads as
    // 0 < QD and QD < 4). Operands are Var or Const nodes only.
    struct Compare {
        std::vector<ExprPtr> operands;
        std::vector<CompareOp> ops;
    };
    // Membership test; `set` is a SetLiteral or SetRef node.
    struct Membership {
        ExprPtr operand;
        ExprPtr set;
        bool negated = false;
    };
    struct Var {
        std::string name;
    };
    struct Const {
        Value value;
    };
    struct SetRef {
        std::string name;
    };
    // Elements are canonically sorted and deduplicated.
    struct SetLiteral {
        std::vector<Value> elements;
    };

    using Node =
        std::variant<Or, And, Not, Compare, Membership, Var, Const, SetRef, SetLiteral>;
    Node node;
};

ExprPtr make_or(std::vector<ExprPtr> children);
ExprPtr make_and(std::vector<ExprPtr> children);
ExprPtr make_not(ExprPtr child);
ExprPtr make_compare(std::vector<ExprPtr> operands, std::vector<CompareOp> ops);
ExprPtr make_membership(ExprPtr operand, ExprPtr set, bool negated);
ExprPtr make_var(std::string name);
ExprPtr make_const(Value v);
ExprPtr make_set_ref(std::string name);
ExprPtr make_set_literal(std::vector<Value> elements);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// All annotation names referenced by the expression. Set constants referenced
// through SetRef do not contribute.
std::set<std::string> extract_variables(const ExprPtr& expr);

// Structural negation: Not(x) -> x, Membership flips its negated flag,
// everything else is wrapped in Not.
ExprPtr negate_expr(const ExprPtr& expr);

// Top-level conjuncts: And children, or the expression itself.
std::vector<ExprPtr> conjuncts_of(const ExprPtr& expr);
// Inverse: one conjunct stays bare, several are joined under And.
ExprPtr make_conjunction(std::vector<ExprPtr> conjuncts);

// One `@dimension(value)` assertion from a validation block.
struct MetaPredicate {
    Dimension dimension = Dimension::Purpose;
    std::string value;        // normalized
    std::string source_text;  // verbatim text between the parentheses
    int line = 0;

    // The directive as written, e.g. `@knowledge_domain("Human Genetics")`.
    std::string directive_text() const;
};

bool meta_equal(const MetaPredicate& a, const MetaPredicate& b);

struct Statement {
    int index = 0;
    std::string label;  // nearest preceding comment, possibly empty
    std::vector<MetaPredicate> meta_predicates;
    ExprPtr predicate;
    bool action = false;  // value returned when the predicate fires

    int line_first = 0;  // first source line (validation block or if)
    int line_if = 0;
    int line_last = 0;
};

struct Script {
    // Named set constants in declaration order.
    std::vector<std::pair<std::string, ExprPtr>> constants;
    std::vector<Statement> statements;
    bool final_action = false;
    std::string source_hash;  // content digest of the canonical rendering

    const Expr::SetLiteral* find_constant(std::string_view name) const;
};

// Semantic equality: constants, statements (label, meta-predicates, predicate,
// action) and final action. Source positions and hashes are derived state and
// do not participate.
bool script_equal(const Script& a, const Script& b);

}  // namespace cascade

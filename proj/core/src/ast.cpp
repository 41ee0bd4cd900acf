#include "cascade/ast.hpp"

#include <algorithm>

namespace cascade {

std::string_view compare_op_text(CompareOp op) {
    switch (op) {
        case CompareOp::Less: return "<";
        case CompareOp::LessEq: return "<=";
        case CompareOp::Greater: return ">";
        case CompareOp::GreaterEq: return ">=";
        case CompareOp::Eq: return "==";
        default: return "!=";
    }
}

namespace {
ExprPtr wrap(Expr::Node node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }
}  // namespace

ExprPtr make_or(std::vector<ExprPtr> children) { return wrap(Expr::Or{std::move(children)}); }
ExprPtr make_and(std::vector<ExprPtr> children) { return wrap(Expr::And{std::move(children)}); }
ExprPtr make_not(ExprPtr child) { return wrap(Expr::Not{std::move(child)}); }

ExprPtr make_compare(std::vector<ExprPtr> operands, std::vector<CompareOp> ops) {
    return wrap(Expr::Compare{std::move(operands), std::move(ops)});
}

ExprPtr make_membership(ExprPtr operand, ExprPtr set, bool negated) {
    return wrap(Expr::Membership{std::move(operand), std::move(set), negated});
}

ExprPtr make_var(std::string name) { return wrap(Expr::Var{std::move(name)}); }
ExprPtr make_const(Value v) { return wrap(Expr::Const{std::move(v)}); }
ExprPtr make_set_ref(std::string name) { return wrap(Expr::SetRef{std::move(name)}); }

ExprPtr make_set_literal(std::vector<Value> elements) {
    std::sort(elements.begin(), elements.end(), Value::canonical_less);
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return wrap(Expr::SetLiteral{std::move(elements)});
}

namespace {

bool children_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!expr_equal(a[i], b[i])) return false;
    return true;
}

}  // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, Expr::Or> || std::is_same_v<T, Expr::And>) {
                return children_equal(lhs.children, rhs.children);
            } else if constexpr (std::is_same_v<T, Expr::Not>) {
                return expr_equal(lhs.child, rhs.child);
            } else if constexpr (std::is_same_v<T, Expr::Compare>) {
                return lhs.ops == rhs.ops && children_equal(lhs.operands, rhs.operands);
            } else if constexpr (std::is_same_v<T, Expr::Membership>) {
                return lhs.negated == rhs.negated && expr_equal(lhs.operand, rhs.operand) &&
                       expr_equal(lhs.set, rhs.set);
            } else if constexpr (std::is_same_v<T, Expr::Var> ||
                                 std::is_same_v<T, Expr::SetRef>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, Expr::Const>) {
                return lhs.value == rhs.value;
            } else {
                return lhs.elements == rhs.elements;
            }
        },
        a->node);
}

namespace {

void collect_variables(const ExprPtr& expr, std::set<std::string>& out) {
    if (!expr) return;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Expr::Or> || std::is_same_v<T, Expr::And>) {
                for (const auto& child : node.children) collect_variables(child, out);
            } else if constexpr (std::is_same_v<T, Expr::Not>) {
                collect_variables(node.child, out);
            } else if constexpr (std::is_same_v<T, Expr::Compare>) {
                for (const auto& operand : node.operands) collect_variables(operand, out);
            } else if constexpr (std::is_same_v<T, Expr::Membership>) {
                collect_variables(node.operand, out);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                out.insert(node.name);
            }
        },
        expr->node);
}

}  // namespace

std::set<std::string> extract_variables(const ExprPtr& expr) {
    std::set<std::string> out;
    collect_variables(expr, out);
    return out;
}

ExprPtr negate_expr(const ExprPtr& expr) {
    if (const auto* n = std::get_if<Expr::Not>(&expr->node)) return n->child;
    if (const auto* m = std::get_if<Expr::Membership>(&expr->node))
        return make_membership(m->operand, m->set, !m->negated);
    return make_not(expr);
}

std::vector<ExprPtr> conjuncts_of(const ExprPtr& expr) {
    if (const auto* a = std::get_if<Expr::And>(&expr->node)) return a->children;
    return {expr};
}

ExprPtr make_conjunction(std::vector<ExprPtr> conjuncts) {
    if (conjuncts.size() == 1) return conjuncts.front();
    return make_and(std::move(conjuncts));
}

std::string MetaPredicate::directive_text() const {
    return "@" + std::string(dimension_name(dimension)) + "(" + source_text + ")";
}

bool meta_equal(const MetaPredicate& a, const MetaPredicate& b) {
    return a.dimension == b.dimension && a.value == b.value && a.source_text == b.source_text;
}

const Expr::SetLiteral* Script::find_constant(std::string_view name) const {
    for (const auto& [constant_name, expr] : constants)
        if (constant_name == name) return std::get_if<Expr::SetLiteral>(&expr->node);
    return nullptr;
}

bool script_equal(const Script& a, const Script& b) {
    if (a.final_action != b.final_action) return false;
    if (a.constants.size() != b.constants.size()) return false;
    for (std::size_t i = 0; i < a.constants.size(); ++i) {
        if (a.constants[i].first != b.constants[i].first) return false;
        if (!expr_equal(a.constants[i].second, b.constants[i].second)) return false;
    }
    if (a.statements.size() != b.statements.size()) return false;
    for (std::size_t i = 0; i < a.statements.size(); ++i) {
        const Statement& sa = a.statements[i];
        const Statement& sb = b.statements[i];
        if (sa.label != sb.label || sa.action != sb.action) return false;
        if (sa.meta_predicates.size() != sb.meta_predicates.size()) return false;
        for (std::size_t m = 0; m < sa.meta_predicates.size(); ++m)
            if (!meta_equal(sa.meta_predicates[m], sb.meta_predicates[m])) return false;
        if (!expr_equal(sa.predicate, sb.predicate)) return false;
    }
    return true;
}

}  // namespace cascade

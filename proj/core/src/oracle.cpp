#include "cascade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "cascade/engine.hpp"
#include "cascade/errors.hpp"

namespace cascade {

std::uint64_t DomainSpec::product_size() const {
    std::uint64_t p = 1;
    for (const auto& [_, list] : values) {
        std::uint64_t n = list.size();
        if (n == 0) return 0;
        if (p > std::numeric_limits<std::uint64_t>::max() / n)
            return std::numeric_limits<std::uint64_t>::max();
        p *= n;
    }
    return p;
}

namespace {

struct VarFacts {
    std::vector<Value> numeric;
    std::set<std::string> texts;
    bool has_bool = false;
};

void note_const(VarFacts& facts, const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Integer:
        case Value::Kind::Real: facts.numeric.push_back(v); break;
        case Value::Kind::Text: facts.texts.insert(v.as_text()); break;
        case Value::Kind::Boolean: facts.has_bool = true; break;
        default: break;
    }
}

const std::vector<Value>& set_elements(const Expr& set, const Script* resolver) {
    if (const auto* lit = std::get_if<Expr::SetLiteral>(&set.node)) return lit->elements;
    const auto& ref = std::get<Expr::SetRef>(set.node);
    const Expr::SetLiteral* lit = resolver ? resolver->find_constant(ref.name) : nullptr;
    if (!lit) throw Error("unresolved set constant " + ref.name);
    return lit->elements;
}

void walk_expr(const Expr& e, const Script* resolver, std::map<std::string, VarFacts>& vars) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Expr::Or> || std::is_same_v<T, Expr::And>) {
                for (const ExprPtr& child : node.children) walk_expr(*child, resolver, vars);
            } else if constexpr (std::is_same_v<T, Expr::Not>) {
                walk_expr(*node.child, resolver, vars);
            } else if constexpr (std::is_same_v<T, Expr::Compare>) {
                for (const ExprPtr& operand : node.operands)
                    if (const auto* v = std::get_if<Expr::Var>(&operand->node)) vars[v->name];
                for (std::size_t i = 0; i < node.ops.size(); ++i) {
                    const Expr& a = *node.operands[i];
                    const Expr& b = *node.operands[i + 1];
                    const auto* av = std::get_if<Expr::Var>(&a.node);
                    const auto* bv = std::get_if<Expr::Var>(&b.node);
                    const auto* ac = std::get_if<Expr::Const>(&a.node);
                    const auto* bc = std::get_if<Expr::Const>(&b.node);
                    if (av && bc) note_const(vars[av->name], bc->value);
                    if (bv && ac) note_const(vars[bv->name], ac->value);
                }
            } else if constexpr (std::is_same_v<T, Expr::Membership>) {
                if (const auto* v = std::get_if<Expr::Var>(&node.operand->node)) {
                    VarFacts& facts = vars[v->name];
                    for (const Value& element : set_elements(*node.set, resolver))
                        note_const(facts, element);
                }
            }
            // Var/Const/SetRef/SetLiteral never appear as predicates
        },
        e.node);
}

void append_real(std::vector<Value>& out, double x) {
    if (std::isfinite(x)) out.push_back(Value::real(x));
}

// Representatives bracketing each constant: predicate truth over a numeric
// axis only changes at the mentioned constants, so one point per constant and
// one per open interval decides the whole line.
void numeric_axis(std::vector<Value>& out, std::vector<Value> consts) {
    std::sort(consts.begin(), consts.end(), [](const Value& a, const Value& b) {
        return a.as_long_double() < b.as_long_double();
    });
    consts.erase(std::unique(consts.begin(), consts.end(),
                             [](const Value& a, const Value& b) {
                                 return a.as_long_double() == b.as_long_double();
                             }),
                 consts.end());

    const double lo = static_cast<double>(consts.front().as_long_double());
    const double hi = static_cast<double>(consts.back().as_long_double());

    double below = lo - 1.0;
    if (!(below < lo)) below = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    if (below < lo) append_real(out, below);

    for (std::size_t i = 0; i < consts.size(); ++i) {
        out.push_back(consts[i]);
        if (i + 1 == consts.size()) continue;
        const double a = static_cast<double>(consts[i].as_long_double());
        const double b = static_cast<double>(consts[i + 1].as_long_double());
        double mid = a + (b - a) / 2.0;
        if (!(a < mid && mid < b)) mid = std::nextafter(a, b);
        if (a < mid && mid < b) append_real(out, mid);
    }

    double above = hi + 1.0;
    if (!(above > hi)) above = std::nextafter(hi, std::numeric_limits<double>::infinity());
    if (above > hi) append_real(out, above);
}

}  // namespace

DomainSpec derive_domain(const std::vector<const Script*>& scripts,
                         const std::vector<const DecisionTree*>& trees) {
    std::map<std::string, VarFacts> vars;
    for (const Script* script : scripts)
        for (const Statement& stmt : script->statements)
            walk_expr(*stmt.predicate, script, vars);

    std::function<void(const DecisionTree&)> walk_tree = [&](const DecisionTree& tree) {
        if (const auto* branch = std::get_if<DecisionTree::Branch>(&tree.node)) {
            walk_expr(*branch->condition, nullptr, vars);
            walk_tree(*branch->then_branch);
            walk_tree(*branch->else_branch);
        }
    };
    for (const DecisionTree* tree : trees) walk_tree(*tree);

    DomainSpec spec;
    for (const auto& [name, facts] : vars) {
        std::vector<Value> axis;
        if (!facts.numeric.empty()) numeric_axis(axis, facts.numeric);
        for (const std::string& text : facts.texts) axis.push_back(Value::text(text));
        if (!facts.texts.empty()) {
            std::string sentinel = "none";
            while (facts.texts.count(sentinel)) sentinel += "_";
            axis.push_back(Value::text(sentinel));
        }
        if (facts.has_bool) {
            axis.push_back(Value::boolean(false));
            axis.push_back(Value::boolean(true));
        }
        if (axis.empty())
            throw IncompleteDomain("no values can be derived for annotation " + name +
                                   " (it is never tested against a constant)");
        spec.values[name] = std::move(axis);
    }
    return spec;
}

namespace {

std::set<std::string> script_variables(const Script& script) {
    std::set<std::string> out;
    for (const Statement& stmt : script.statements)
        for (const std::string& name : extract_variables(stmt.predicate)) out.insert(name);
    return out;
}

using OutcomeFn = std::function<bool(const Record&)>;

OracleOutcome oracle_impl(const OutcomeFn& fa, const OutcomeFn& fb,
                          const std::set<std::string>& variables, const DomainSpec& domain,
                          std::uint64_t cap) {
    std::vector<std::pair<std::string, const std::vector<Value>*>> axes;
    std::uint64_t size = 1;
    for (const std::string& name : variables) {
        auto it = domain.values.find(name);
        if (it == domain.values.end() || it->second.empty())
            throw IncompleteDomain("annotation " + name + " has no domain entry");
        axes.emplace_back(name, &it->second);
        std::uint64_t n = it->second.size();
        size = size > std::numeric_limits<std::uint64_t>::max() / n
                   ? std::numeric_limits<std::uint64_t>::max()
                   : size * n;
    }
    if (size > cap) throw DomainTooLarge(size, cap);

    std::vector<std::size_t> idx(axes.size(), 0);
    OracleOutcome out;
    while (true) {
        Record record;
        record.id = "domain";
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const Value& v = (*axes[k].second)[idx[k]];
            if (!v.is_missing()) record.entries.emplace(axes[k].first, v);
        }
        bool a = fa(record);
        bool b = fb(record);
        ++out.points;
        if (a != b) {
            out.equal = false;
            out.outcome_a = a;
            out.outcome_b = b;
            out.counterexample = std::move(record);
            return out;
        }
        std::size_t k = 0;
        while (k < axes.size() && ++idx[k] == axes[k].second->size()) idx[k++] = 0;
        if (k == axes.size()) break;
    }
    return out;
}

OutcomeFn script_fn(const Runner& runner) {
    return [&runner](const Record& record) {
        return runner.outcome(record, EvalMode::Lenient);
    };
}

OutcomeFn tree_fn(const DecisionTree& tree) {
    return [&tree](const Record& record) { return tree_outcome(tree, record); };
}

std::set<std::string> merged(std::set<std::string> a, const std::set<std::string>& b) {
    a.insert(b.begin(), b.end());
    return a;
}

}  // namespace

OracleOutcome equivalence_oracle(const Script& a, const Script& b, const DomainSpec& domain,
                                 std::uint64_t cap) {
    Runner ra(a);
    Runner rb(b);
    return oracle_impl(script_fn(ra), script_fn(rb),
                       merged(script_variables(a), script_variables(b)), domain, cap);
}

OracleOutcome equivalence_oracle(const DecisionTree& a, const Script& b, const DomainSpec& domain,
                                 std::uint64_t cap) {
    Runner rb(b);
    return oracle_impl(tree_fn(a), script_fn(rb), merged(tree_variables(a), script_variables(b)),
                       domain, cap);
}

OracleOutcome equivalence_oracle(const Script& a, const DecisionTree& b, const DomainSpec& domain,
                                 std::uint64_t cap) {
    Runner ra(a);
    return oracle_impl(script_fn(ra), tree_fn(b), merged(script_variables(a), tree_variables(b)),
                       domain, cap);
}

OracleOutcome equivalence_oracle(const DecisionTree& a, const DecisionTree& b,
                                 const DomainSpec& domain, std::uint64_t cap) {
    return oracle_impl(tree_fn(a), tree_fn(b), merged(tree_variables(a), tree_variables(b)),
                       domain, cap);
}

bool tree_outcome(const DecisionTree& tree, const Record& record) {
    const DecisionTree* node = &tree;
    while (const auto* branch = std::get_if<DecisionTree::Branch>(&node->node)) {
        TriState t = eval_predicate(branch->condition, record, nullptr, EvalMode::Lenient);
        node = (t == TriState::True ? branch->then_branch : branch->else_branch).get();
    }
    return std::get<DecisionTree::Leaf>(node->node).action;
}

}  // namespace cascade

#include "cascade/tree.hpp"

#include <utility>

#include "cascade/errors.hpp"
#include "cascade/oracle.hpp"
#include "cascade/parser.hpp"
#include "cascade/record.hpp"
#include "cascade/render.hpp"
#include "json.hpp"

namespace cascade {

TreePtr make_leaf(bool action) {
    return std::make_shared<const DecisionTree>(DecisionTree{DecisionTree::Leaf{action}});
}

TreePtr make_branch(ExprPtr condition, TreePtr then_branch, TreePtr else_branch) {
    return std::make_shared<const DecisionTree>(DecisionTree{DecisionTree::Branch{
        std::move(condition), std::move(then_branch), std::move(else_branch)}});
}

namespace {

TreePtr node_from_json(const nlohmann::json& node) {
    if (!node.is_object())
        throw SchemaError("decision tree nodes must be objects with either an \"if\" test or a "
                          "\"return\" verdict");
    if (node.contains("return")) {
        if (node.size() != 1)
            throw SchemaError("a leaf holds only the \"return\" field");
        if (!node["return"].is_boolean())
            throw SchemaError("the \"return\" verdict must be true or false");
        return make_leaf(node["return"].get<bool>());
    }
    if (!node.contains("if"))
        throw SchemaError("decision tree nodes must be objects with either an \"if\" test or a "
                          "\"return\" verdict");
    for (const auto& [key, _] : node.items())
        if (key != "if" && key != "then" && key != "else")
            throw SchemaError("unknown field \"" + key + "\" in a decision tree node");
    if (!node.contains("then") || !node.contains("else"))
        throw SchemaError("branch nodes need both \"then\" and \"else\"");
    if (!node["if"].is_string())
        throw SchemaError("the \"if\" test must be a predicate string");
    ExprPtr condition = parse_predicate(node["if"].get<std::string>());
    return make_branch(std::move(condition), node_from_json(node["then"]),
                       node_from_json(node["else"]));
}

}  // namespace

TreePtr load_tree(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("decision tree is not valid JSON: ") + e.what());
    }
    return node_from_json(doc);
}

namespace {

void collect_tree_variables(const DecisionTree& tree, std::set<std::string>& out) {
    if (const auto* branch = std::get_if<DecisionTree::Branch>(&tree.node)) {
        for (const std::string& name : extract_variables(branch->condition)) out.insert(name);
        collect_tree_variables(*branch->then_branch, out);
        collect_tree_variables(*branch->else_branch, out);
    }
}

struct TreePath {
    std::vector<ExprPtr> conjuncts;
    bool action = false;
};

void collect_paths(const DecisionTree& tree, std::vector<ExprPtr>& conjuncts,
                   std::vector<TreePath>& out) {
    if (const auto* leaf = std::get_if<DecisionTree::Leaf>(&tree.node)) {
        out.push_back({conjuncts, leaf->action});
        return;
    }
    const auto& branch = std::get<DecisionTree::Branch>(tree.node);
    conjuncts.push_back(branch.condition);
    collect_paths(*branch.then_branch, conjuncts, out);
    conjuncts.back() = negate_expr(branch.condition);
    collect_paths(*branch.else_branch, conjuncts, out);
    conjuncts.pop_back();
}

}  // namespace

std::set<std::string> tree_variables(const DecisionTree& tree) {
    std::set<std::string> out;
    collect_tree_variables(tree, out);
    return out;
}

Script tree_to_cascade(const DecisionTree& tree) {
    std::vector<TreePath> paths;
    std::vector<ExprPtr> conjuncts;
    collect_paths(tree, conjuncts, paths);

    Script script;
    for (std::size_t i = 0; i + 1 < paths.size(); ++i) {
        Statement stmt;
        stmt.predicate = make_conjunction(std::move(paths[i].conjuncts));
        stmt.action = paths[i].action;
        script.statements.push_back(std::move(stmt));
    }
    script.final_action = paths.back().action;
    finalize_script(script);
    return script;
}

namespace {

// A literal is one variable inside one comparison or membership atom,
// optionally under a single negation.
bool is_literal(const ExprPtr& expr) {
    const Expr* e = expr.get();
    if (const auto* n = std::get_if<Expr::Not>(&e->node)) e = n->child.get();
    if (const auto* cmp = std::get_if<Expr::Compare>(&e->node)) {
        if (cmp->ops.size() != 1) return false;
        bool lhs_var = std::holds_alternative<Expr::Var>(cmp->operands[0]->node);
        bool rhs_var = std::holds_alternative<Expr::Var>(cmp->operands[1]->node);
        return lhs_var != rhs_var;
    }
    if (const auto* mem = std::get_if<Expr::Membership>(&e->node))
        return std::holds_alternative<Expr::Var>(mem->operand->node);
    return false;
}

// Comparison and membership leaves under an expression; chains count once.
int count_atoms(const Expr& expr) {
    return std::visit(
        [](const auto& node) -> int {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Expr::Or> || std::is_same_v<T, Expr::And>) {
                int n = 0;
                for (const ExprPtr& child : node.children) n += count_atoms(*child);
                return n;
            } else if constexpr (std::is_same_v<T, Expr::Not>) {
                return count_atoms(*node.child);
            } else {
                return 1;
            }
        },
        expr.node);
}

}  // namespace

DecisionListCheck check_one_decision_list(const Script& script) {
    DecisionListCheck check;
    for (const Statement& stmt : script.statements)
        if (!is_literal(stmt.predicate)) check.offending.push_back(stmt.index);
    check.is_one_decision_list = check.offending.empty();
    return check;
}

Script simplify_cascade(const Script& script) {
    const DomainSpec domain = derive_domain({&script}, {});
    Script current = script;

    // Best-gain greedy: at each round, enumerate every legal edit (delete a
    // statement whose action repeats the default, or drop one conjunct), keep
    // only the edits the oracle certifies, and adopt the one removing the
    // most atoms. Plain sweeps are order-trapped here: deleting a shared
    // guard first forces a negated copy of it into every later statement,
    // while pruning first can widen a redundant blocker until it becomes
    // load-bearing. Ranking by atom gain takes the redundant path deletions
    // before the one-atom prunes and lands on the compact form.
    for (;;) {
        Script best;
        int best_gain = 0;
        int best_rank = 0;  // conjunct drops beat deletions on equal gain

        auto consider = [&](Script&& candidate, int gain, int rank) {
            if (gain < best_gain) return;
            if (gain == best_gain && rank <= best_rank) return;
            finalize_script(candidate);
            if (!equivalence_oracle(script, candidate, domain).equal) return;
            best = std::move(candidate);
            best_gain = gain;
            best_rank = rank;
        };

        for (std::size_t i = current.statements.size(); i-- > 0;) {
            std::vector<ExprPtr> conjuncts = conjuncts_of(current.statements[i].predicate);
            for (std::size_t j = conjuncts.size(); conjuncts.size() > 1 && j-- > 0;) {
                std::vector<ExprPtr> reduced = conjuncts;
                reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(j));
                Script candidate = current;
                candidate.statements[i].predicate = make_conjunction(reduced);
                consider(std::move(candidate), count_atoms(*conjuncts[j]), 2);
            }
            if (current.statements[i].action == current.final_action) {
                Script candidate = current;
                candidate.statements.erase(candidate.statements.begin() +
                                           static_cast<std::ptrdiff_t>(i));
                consider(std::move(candidate),
                         count_atoms(*current.statements[i].predicate), 1);
            }
        }

        if (best_gain == 0) break;
        current = std::move(best);
    }

    OracleOutcome guard = equivalence_oracle(script, current, domain);
    if (!guard.equal)
        throw SimplificationUnsound("diverges on " +
                                    serialize_record(*guard.counterexample));
    return current;
}

}  // namespace cascade

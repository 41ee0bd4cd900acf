#include "cascade/render.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

namespace cascade {

namespace {

std::string quote_text(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string real_text(double d) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, p);
}

// Binding strength; a child is parenthesized when it binds no tighter than its
// parent (equal strength keeps `a or b or c` flat because Or/And children of
// the same kind are flattened at construction, so equality only arises across
// distinct nestings produced programmatically).
enum Prec { kOr = 0, kAnd = 1, kAtomish = 2 };

Prec prec_of(const Expr& e) {
    if (std::holds_alternative<Expr::Or>(e.node)) return kOr;
    if (std::holds_alternative<Expr::And>(e.node)) return kAnd;
    return kAtomish;
}

void render_expr(const Expr& e, std::string& out);

void render_child(const ExprPtr& child, Prec parent, std::string& out) {
    if (prec_of(*child) <= parent) {
        out.push_back('(');
        render_expr(*child, out);
        out.push_back(')');
    } else {
        render_expr(*child, out);
    }
}

void render_expr(const Expr& e, std::string& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Expr::Or>) {
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (i) out += " or ";
                    render_child(node.children[i], kOr, out);
                }
            } else if constexpr (std::is_same_v<T, Expr::And>) {
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (i) out += " and ";
                    render_child(node.children[i], kAnd, out);
                }
            } else if constexpr (std::is_same_v<T, Expr::Not>) {
                out += "not (";
                render_expr(*node.child, out);
                out.push_back(')');
            } else if constexpr (std::is_same_v<T, Expr::Compare>) {
                render_expr(*node.operands[0], out);
                for (std::size_t i = 0; i < node.ops.size(); ++i) {
                    out.push_back(' ');
                    out += compare_op_text(node.ops[i]);
                    out.push_back(' ');
                    render_expr(*node.operands[i + 1], out);
                }
            } else if constexpr (std::is_same_v<T, Expr::Membership>) {
                render_expr(*node.operand, out);
                out += node.negated ? " not in " : " in ";
                render_expr(*node.set, out);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                out += node.name;
            } else if constexpr (std::is_same_v<T, Expr::Const>) {
                out += render_value(node.value);
            } else if constexpr (std::is_same_v<T, Expr::SetRef>) {
                out += node.name;
            } else {
                static_assert(std::is_same_v<T, Expr::SetLiteral>);
                out.push_back('{');
                for (std::size_t i = 0; i < node.elements.size(); ++i) {
                    if (i) out += ", ";
                    out += render_value(node.elements[i]);
                }
                out.push_back('}');
            }
        },
        e.node);
}

}  // namespace

std::string render_value(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Boolean: return v.as_boolean() ? "True" : "False";
        case Value::Kind::Integer: return std::to_string(v.as_integer());
        case Value::Kind::Real: return real_text(v.as_real());
        case Value::Kind::Text: return quote_text(v.as_text());
        default: return "None";  // never produced by the parser
    }
}

std::string render_predicate(const ExprPtr& expr) {
    std::string out;
    render_expr(*expr, out);
    return out;
}

std::string render_script(const Script& script) {
    std::vector<std::string> blocks;

    if (!script.constants.empty()) {
        std::string block;
        for (std::size_t i = 0; i < script.constants.size(); ++i) {
            if (i) block.push_back('\n');
            block += script.constants[i].first;
            block += " = ";
            render_expr(*script.constants[i].second, block);
        }
        blocks.push_back(std::move(block));
    }

    for (const Statement& stmt : script.statements) {
        std::string block;
        if (!stmt.label.empty()) {
            block += "# ";
            block += stmt.label;
            block.push_back('\n');
        }
        if (!stmt.meta_predicates.empty()) {
            block += "\"\"\"\n";
            for (const MetaPredicate& meta : stmt.meta_predicates) {
                block += meta.directive_text();
                block.push_back('\n');
            }
            block += "\"\"\"\n";
        }
        block += "if ";
        block += render_predicate(stmt.predicate);
        block += ":\n    return ";
        block += stmt.action ? "True" : "False";
        blocks.push_back(std::move(block));
    }

    blocks.push_back(std::string("return ") + (script.final_action ? "True" : "False"));

    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) out += "\n\n";
        out += blocks[i];
    }
    out.push_back('\n');
    return out;
}

std::string content_hash(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    return std::string(buf, 16);
}

void finalize_script(Script& script) {
    for (std::size_t i = 0; i < script.statements.size(); ++i)
        script.statements[i].index = static_cast<int>(i);
    script.source_hash = content_hash(render_script(script));
}

}  // namespace cascade

#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"

#include "cascade/engine.hpp"
#include "cascade/errors.hpp"
#include "cascade/oracle.hpp"
#include "cascade/parser.hpp"
#include "cascade/record.hpp"
#include "cascade/tree.hpp"

#include "helpers.hpp"

using namespace cascade;

namespace {

Script script_of(const std::string& source) { return parse_script(source); }

bool domain_has(const DomainSpec& domain, const std::string& var, const Value& v) {
    auto it = domain.values.find(var);
    if (it == domain.values.end()) return false;
    return std::find(it->second.begin(), it->second.end(), v) != it->second.end();
}

}  // namespace

TEST_CASE("numeric axes bracket every comparison constant") {
    Script script = script_of(
        "if x > 10:\n    return True\nif x < 20:\n    return False\nreturn True\n");
    DomainSpec domain = derive_domain({&script}, {});

    REQUIRE(domain.values.count("x") == 1);
    // Constants themselves (as written), plus real-valued representatives for
    // the midpoint between them and the open intervals beyond each end.
    CHECK(domain_has(domain, "x", Value::integer(10)));
    CHECK(domain_has(domain, "x", Value::integer(20)));
    CHECK(domain_has(domain, "x", Value::real(9.0)));
    CHECK(domain_has(domain, "x", Value::real(21.0)));
    CHECK(domain_has(domain, "x", Value::real(15.0)));
    CHECK(domain.values.at("x").size() == 5);
    CHECK(domain.product_size() == 5);
}

TEST_CASE("text axes add a guaranteed non-member sentinel") {
    Script script = script_of(
        "if tag in {\"a\", \"b\"}:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&script}, {});
    REQUIRE(domain.values.count("tag") == 1);
    CHECK(domain_has(domain, "tag", Value::text("a")));
    CHECK(domain_has(domain, "tag", Value::text("b")));
    CHECK(domain.values.at("tag").size() == 3);
    // The sentinel is none of the mentioned values.
    for (const Value& v : domain.values.at("tag")) {
        CHECK(v.kind() == Value::Kind::Text);
    }

    // Even when "none" itself is taken, the sentinel stays distinct.
    Script occupied = script_of(
        "if tag in {\"none\", \"none_\"}:\n    return True\nreturn False\n");
    DomainSpec domain2 = derive_domain({&occupied}, {});
    CHECK(domain2.values.at("tag").size() == 3);
    std::vector<Value> vals = domain2.values.at("tag");
    CHECK(std::count(vals.begin(), vals.end(), Value::text("none")) == 1);
    CHECK(std::count(vals.begin(), vals.end(), Value::text("none_")) == 1);
}

TEST_CASE("boolean axes enumerate both truth values") {
    Script script = script_of("if flag == True:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&script}, {});
    REQUIRE(domain.values.count("flag") == 1);
    CHECK(domain_has(domain, "flag", Value::boolean(true)));
    CHECK(domain_has(domain, "flag", Value::boolean(false)));
    CHECK(domain.values.at("flag").size() == 2);
}

TEST_CASE("underivable axes raise IncompleteDomain") {
    // Variable-to-variable comparisons give no constants to bracket.
    Script script = script_of("if a > b:\n    return True\nreturn False\n");
    CHECK_THROWS_AS(derive_domain({&script}, {}), IncompleteDomain);

    // A variable with constants elsewhere does not rescue the bare one.
    Script mixed = script_of(
        "if a > 1:\n    return True\nif a > c:\n    return False\nreturn True\n");
    CHECK_THROWS_AS(derive_domain({&mixed}, {}), IncompleteDomain);
}

TEST_CASE("oracle rejects artifacts whose variables lack domain entries") {
    Script a = script_of("if x > 1:\n    return True\nreturn False\n");
    Script b = script_of("if y > 1:\n    return True\nreturn False\n");
    DomainSpec only_x = derive_domain({&a}, {});
    CHECK_THROWS_AS(equivalence_oracle(a, b, only_x), IncompleteDomain);
}

TEST_CASE("the enumeration cap guards the Cartesian product") {
    Script script = script_of(
        "if a > 1 and b > 1 and c > 1:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&script}, {});
    // Three axes, three points each (constant, below, above): 27 points.
    CHECK(domain.product_size() == 27);
    CHECK(equivalence_oracle(script, script, domain).equal);
    CHECK_THROWS_AS(equivalence_oracle(script, script, domain, 26), DomainTooLarge);
    try {
        equivalence_oracle(script, script, domain, 26);
        FAIL("expected DomainTooLarge");
    } catch (const DomainTooLarge& e) {
        CHECK(e.size() == 27);
        CHECK(e.cap() == 26);
    }
}

TEST_CASE("equivalent scripts pass over every enumerated point") {
    Script a = script_of("if x > 10:\n    return True\nreturn False\n");
    Script b = script_of("if not (x <= 10):\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&a, &b}, {});
    OracleOutcome outcome = equivalence_oracle(a, b, domain);
    CHECK(outcome.equal);
    CHECK(outcome.points == domain.product_size());
    CHECK_FALSE(outcome.counterexample.has_value());
}

TEST_CASE("divergent scripts produce a verifiable counterexample") {
    Script a = script_of("if x > 10:\n    return True\nreturn False\n");
    Script b = script_of("if x >= 10:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&a, &b}, {});

    OracleOutcome outcome = equivalence_oracle(a, b, domain);
    CHECK_FALSE(outcome.equal);
    REQUIRE(outcome.counterexample.has_value());
    CHECK(outcome.outcome_a != outcome.outcome_b);

    // Re-evaluating the counterexample reproduces the disagreement.
    const Record& witness = *outcome.counterexample;
    Runner ra(a);
    Runner rb(b);
    CHECK(ra.outcome(witness, EvalMode::Lenient) == outcome.outcome_a);
    CHECK(rb.outcome(witness, EvalMode::Lenient) == outcome.outcome_b);
    // The only disagreement point of > vs >= is the boundary itself.
    CHECK(witness.get("x") == Value::integer(10));
}

TEST_CASE("the oracle is deterministic about its first counterexample") {
    Script a = script_of("if x > 10 or y > 10:\n    return True\nreturn False\n");
    Script b = script_of("if x > 10:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&a, &b}, {});
    OracleOutcome first = equivalence_oracle(a, b, domain);
    OracleOutcome second = equivalence_oracle(a, b, domain);
    REQUIRE(first.counterexample.has_value());
    REQUIRE(second.counterexample.has_value());
    CHECK(serialize_record(*first.counterexample) == serialize_record(*second.counterexample));
}

TEST_CASE("tree overloads agree with script overloads") {
    TreePtr tree = load_tree(R"({
        "if": "x > 10",
        "then": {"return": true},
        "else": {"return": false}
    })");
    Script same = script_of("if x > 10:\n    return True\nreturn False\n");
    Script different = script_of("if x > 11:\n    return True\nreturn False\n");

    DomainSpec domain = derive_domain({&same, &different}, {tree.get()});
    CHECK(equivalence_oracle(*tree, same, domain).equal);
    CHECK(equivalence_oracle(same, *tree, domain).equal);
    CHECK(equivalence_oracle(*tree, *tree, domain).equal);
    CHECK_FALSE(equivalence_oracle(*tree, different, domain).equal);
}

TEST_CASE("midpoints split adjacent real constants") {
    Script script = script_of(
        "if 0.2 < x < 0.3:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&script}, {});
    bool has_interior = false;
    for (const Value& v : domain.values.at("x"))
        if (v.kind() == Value::Kind::Real && v.as_real() > 0.2 && v.as_real() < 0.3)
            has_interior = true;
    CHECK(has_interior);
}

TEST_CASE("set constants contribute their elements to the domain") {
    Script script = script_of(
        "LOF = {\"stop_gained\", \"stop_lost\"}\n"
        "if csq in LOF:\n    return True\nreturn False\n");
    DomainSpec domain = derive_domain({&script}, {});
    CHECK(domain_has(domain, "csq", Value::text("stop_gained")));
    CHECK(domain_has(domain, "csq", Value::text("stop_lost")));
    CHECK(domain.values.at("csq").size() == 3);
}

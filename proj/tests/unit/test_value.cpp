#include "doctest.h"

#include "cascade/dictionary.hpp"
#include "cascade/value.hpp"

using namespace cascade;

TEST_CASE("normalize_label canonical forms") {
    CHECK(normalize_label("Population Genetics") == "population genetics");
    CHECK(normalize_label("population_genetics") == "population genetics");
    CHECK(normalize_label("  Population   Genetics  ") == "population genetics");
    CHECK(normalize_label("Variant_In_Transcript") == "variant in transcript");
    CHECK(normalize_label("\"Variant\"") == "variant");
    CHECK(normalize_label("'Variant'") == "variant");
    CHECK(normalize_label("\"'Human Genetics'\"") == "human genetics");
    CHECK(normalize_label("gene") == "gene");
    CHECK(normalize_label("") == "");
    CHECK(normalize_label("   ") == "");
    CHECK(normalize_label("__a__b__") == "a b");
}

TEST_CASE("normalize_label is idempotent") {
    for (const char* raw : {"\"'Experimental, in Vivo'\"", "  A__B  ", "x", "\"\"", "_",
                            "Mixed Case_and_underscores"}) {
        std::string once = normalize_label(raw);
        CHECK(normalize_label(once) == once);
    }
}

TEST_CASE("quotes are peeled only in matching outer pairs") {
    CHECK(normalize_label("\"unbalanced") == "\"unbalanced");
    CHECK(normalize_label("trailing\"") == "trailing\"");
    CHECK(normalize_label("'mixed\"") == "'mixed\"");
    // A matching outer pair peels even when the interior holds quotes.
    CHECK(normalize_label("\"inner\" text\"") == "inner\" text");
}

TEST_CASE("value kinds and accessors") {
    CHECK(Value::integer(3).kind() == Value::Kind::Integer);
    CHECK(Value::real(3.5).as_real() == 3.5);
    CHECK(Value::boolean(true).as_boolean());
    CHECK(Value::text("x").as_text() == "x");
    CHECK(Value::missing().is_missing());

    CHECK(std::string(kind_name(Value::Kind::Integer)) == "integer");
    CHECK(std::string(kind_name(Value::Kind::Text)) == "text");
}

TEST_CASE("value equality is structural") {
    CHECK(Value::integer(1) == Value::integer(1));
    CHECK(Value::integer(1) != Value::real(1.0));  // kinds differ
    CHECK(Value::text("1") != Value::integer(1));
    CHECK(Value::missing() == Value::missing());
}

TEST_CASE("tri-state names") {
    CHECK(to_string(TriState::True) == std::string("True"));
    CHECK(to_string(TriState::False) == std::string("False"));
    CHECK(to_string(TriState::Unknown) == std::string("Unknown"));
}

#include "doctest.h"
#include "helpers.hpp"
#include "preslab/corpus.hpp"
#include "preslab/logic.hpp"

using namespace preslab;
using namespace preslab::testing;

TEST_CASE("vocabulary invariants") {
    CHECK_THROWS_AS(Vocabulary("v", {{"E", 0}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Vocabulary("v", {{"E", 2}, {"E", 1}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Vocabulary("v", {{"E", 2}}, {"E"}), std::invalid_argument);
    Vocabulary vocab("v", {{"E", 2}, {"P", 1}}, {"c0"});
    CHECK(vocab.arity_of("E") == 2);
    CHECK(vocab.arity_of("Q") == std::nullopt);
    CHECK(vocab.has_constant("c0"));
    CHECK(vocab.relation_index("P") == 1);
}

TEST_CASE("validate_structure") {
    auto graph = graph_vocabulary();

    SUBCASE("generator output is valid") {
        CHECK(validate_structure(gen_cycle(3)).ok);
    }
    SUBCASE("arity mismatch is reported with the offending symbol") {
        FiniteStructure bad(graph, "bad", {"a", "b", "c"}, {{"E", {{"a", "b", "c"}}}}, {});
        auto v = validate_structure(bad);
        CHECK_FALSE(v.ok);
        REQUIRE(v.violations.size() == 1);
        CHECK(v.violations[0] == "arity mismatch for E");
    }
    SUBCASE("empty universe") {
        FiniteStructure bad(graph, "bad", {}, {}, {});
        auto v = validate_structure(bad);
        CHECK_FALSE(v.ok);
        CHECK(v.violations[0] == "empty universe");
    }
    SUBCASE("uninterpreted constant") {
        auto vocab = std::make_shared<Vocabulary>("g", std::vector<RelationSymbol>{{"E", 2}},
                                                  std::vector<std::string>{"c0"});
        FiniteStructure bad(vocab, "bad", {"a"}, {}, {});
        auto v = validate_structure(bad);
        CHECK_FALSE(v.ok);
        CHECK(v.violations[0] == "uninterpreted constant c0");
    }
    SUBCASE("tuple entry outside the universe") {
        FiniteStructure bad(graph, "bad", {"a"}, {{"E", {{"a", "z"}}}}, {});
        CHECK_FALSE(validate_structure(bad).ok);
    }
}

TEST_CASE("free_variables") {
    CHECK(free_variables(parsed("E(x,y)")) == std::set<std::string>{"x", "y"});
    CHECK(free_variables(parsed("exists x. forall y. E(x,y)")).empty());
    CHECK(free_variables(parsed("forall y. E(x,y)")) == std::set<std::string>{"x"});
    CHECK(is_sentence(parsed("exists x. E(x,x)")));

    SUBCASE("binder removes exactly its own variable") {
        FormulaGen gen(graph_vocabulary(), test_seed());
        for (int i = 0; i < 200; ++i) {
            Formula f = gen.sample(5);
            auto inner = free_variables(f);
            inner.erase("x");
            CHECK(free_variables(Formula::forall("x", f)) == inner);
        }
    }
}

TEST_CASE("expand_with_parameters") {
    FiniteStructure c3 = gen_cycle(3);

    SUBCASE("single parameter") {
        FiniteStructure expanded = expand_with_parameters(c3, {"e0"});
        CHECK(expanded.vocabulary().constants() == std::vector<std::string>{"c1"});
        CHECK(expanded.element_name(expanded.constant_value(0)) == "e0");
        CHECK(expanded.universe() == c3.universe());
    }
    SUBCASE("empty tuple is the identity") {
        FiniteStructure expanded = expand_with_parameters(c3, {});
        CHECK(expanded == c3);
    }
    SUBCASE("repeats are allowed") {
        FiniteStructure expanded = expand_with_parameters(c3, {"e0", "e0"});
        CHECK(expanded.vocabulary().constants().size() == 2);
        CHECK(expanded.constant_value(0) == expanded.constant_value(1));
    }
    SUBCASE("unknown element") {
        CHECK_THROWS_AS(expand_with_parameters(c3, {"nope"}), std::invalid_argument);
    }
    SUBCASE("fresh names avoid collisions") {
        auto vocab = std::make_shared<Vocabulary>("g", std::vector<RelationSymbol>{{"E", 2}},
                                                  std::vector<std::string>{"c1"});
        FiniteStructure m(vocab, "m", {"a"}, {}, {{"c1", "a"}});
        FiniteStructure expanded = expand_with_parameters(m, {"a"});
        CHECK(expanded.vocabulary().constants() == std::vector<std::string>{"c1", "c1_"});
    }
    SUBCASE("dropping the fresh constants recovers the input") {
        FormulaGen unused(graph_vocabulary(), 1);  // keep seeds aligned with other cases
        for (const auto& m : {gen_cycle(4), gen_linear_order(3), gen_loop_pair()}) {
            FiniteStructure expanded = expand_with_parameters(m, {m.universe()[0],
                                                                  m.universe()[1]});
            CHECK(reduct(expanded, m.vocabulary_ptr()) == m);
        }
    }
}

TEST_CASE("close_with_constants substitutes free variables") {
    Formula phi = parsed("forall y. E(x,y)");
    auto [vocab, theory] = close_with_constants(*graph_vocabulary(), {phi});
    REQUIRE(theory.sentences.size() == 1);
    CHECK(is_sentence(theory.sentences[0]));
    CHECK(vocab->constants() == std::vector<std::string>{"c1"});
}

TEST_CASE("structure equality ignores names") {
    FiniteStructure a = gen_cycle(3);
    CHECK(a == a.with_name("other"));
    CHECK_FALSE(a == gen_cycle(4));
}

#include "doctest.h"
#include "helpers.hpp"
#include "preslab/eval.hpp"
#include "preslab/syntax.hpp"

using namespace preslab;
using namespace preslab::testing;

TEST_CASE("eval on the standard examples") {
    // No vertex of a directed 3-cycle dominates all vertices (E(x,x) fails).
    CHECK_FALSE(eval(gen_cycle(3), gen_domination()));
    // In a reflexive linear order the minimum dominates.
    CHECK(eval(gen_linear_order(3), gen_domination()));
    CHECK(eval(gen_loop_pair(), parsed("exists x. E(x,x)")));

    CHECK_THROWS_AS(eval(gen_cycle(3), parsed("forall y. E(x,y)")), std::invalid_argument);
    CHECK_THROWS_AS(eval(gen_bare_set(2), gen_domination()), std::invalid_argument);
}

TEST_CASE("eval agrees with the grounding evaluator") {
    SearchBudget budget;
    budget.max_universe_size = 3;
    budget.dedup_isomorphic = true;
    auto structures = enumerate_structures(graph_vocabulary(), budget);
    for (const auto& f : corpus20()) {
        for (const auto& m : structures) {
            CHECK(eval(m, f) == ground_eval(m, f));
        }
    }
}

TEST_CASE("eval agrees with the grounding evaluator on random size-5 digraphs") {
    std::mt19937 rng(test_seed());
    std::vector<Formula> sample = {corpus20()[0], corpus20()[1], corpus20()[11], corpus20()[16]};
    for (int i = 0; i < 30; ++i) {
        FiniteStructure m = random_structure(graph_vocabulary(), 5, rng);
        REQUIRE(validate_structure(m).ok);
        for (const auto& f : sample) {
            CHECK(eval(m, f) == ground_eval(m, f));
        }
    }
}

TEST_CASE("negation coherence") {
    SearchBudget budget;
    budget.max_universe_size = 3;
    budget.dedup_isomorphic = true;
    auto structures = enumerate_structures(graph_vocabulary(), budget);
    for (const auto& f : corpus20()) {
        for (const auto& m : structures) {
            CHECK(eval(m, Formula::negation(f)) == !eval(m, f));
        }
    }
}

TEST_CASE("witnesses") {
    SUBCASE("the minimum of a linear order is the only dominator") {
        WitnessSet w = witnesses(gen_linear_order(3), to_prenex(gen_domination()));
        REQUIRE(w.tuples.size() == 1);
        CHECK(w.tuples[0] == std::vector<std::string>{"e0"});
    }
    SUBCASE("two triangles: one witness rotation per starting vertex") {
        FiniteStructure g = gen_disjoint_cycles({3, 3});
        WitnessSet w = witnesses(g, to_prenex(gen_has_k_cycle(3)));
        // Brute-force recount with the grounding evaluator.
        size_t expected = 0;
        Formula matrix = to_prenex(gen_has_k_cycle(3)).matrix;
        const auto& prefix = to_prenex(gen_has_k_cycle(3)).prefix;
        for (const auto& a : g.universe()) {
            for (const auto& b : g.universe()) {
                for (const auto& c : g.universe()) {
                    std::map<std::string, std::string> asg{{prefix[0].second, a},
                                                           {prefix[1].second, b},
                                                           {prefix[2].second, c}};
                    if (ground_eval(g, matrix, asg)) ++expected;
                }
            }
        }
        CHECK(w.tuples.size() == expected);
        CHECK(expected == 6);  // three rotations per triangle
        // Lexicographic order of the listed tuples.
        CHECK(std::is_sorted(w.tuples.begin(), w.tuples.end()));
    }
    SUBCASE("empty witness set when nothing works") {
        WitnessSet w = witnesses(gen_linear_order(3),
                                 to_prenex(parsed("exists x. forall y. ~E(x,y)")));
        CHECK(w.tuples.empty());
    }
    SUBCASE("nonempty exactly when the sentence holds") {
        SearchBudget budget;
        budget.max_universe_size = 3;
        budget.dedup_isomorphic = true;
        PrenexForm dom = to_prenex(gen_domination());
        for (const auto& m : enumerate_structures(graph_vocabulary(), budget)) {
            CHECK(witnesses(m, dom).tuples.empty() == !eval(m, dom.to_formula()));
        }
    }
    SUBCASE("prefix must start existentially") {
        CHECK_THROWS_AS(witnesses(gen_cycle(3), to_prenex(gen_out_edge())),
                        std::invalid_argument);
    }
}

TEST_CASE("models_theory") {
    FiniteStructure lp = gen_loop_pair();
    CHECK(models_theory(lp, gen_loop_contrast()));

    FiniteStructure loop = gen_cycle(1);
    CHECK_FALSE(models_theory(loop, gen_loop_contrast()));

    CHECK(models_theory(lp, Theory{}));

    Theory open_theory{{parsed("forall y. E(x,y)")}};
    CHECK_THROWS_AS(models_theory(lp, open_theory), std::invalid_argument);
}

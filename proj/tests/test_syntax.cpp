#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "preslab/substructure.hpp"
#include "preslab/syntax.hpp"

using namespace preslab;
using namespace preslab::testing;

TEST_CASE("to_nnf") {
    CHECK(to_nnf(parsed("~(E(x,y) & E(y,x))")) == parsed("~E(x,y) | ~E(y,x)"));
    CHECK(to_nnf(parsed("~forall y. E(x,y)")) == parsed("exists y. ~E(x,y)"));
    CHECK(to_nnf(parsed("E(x,y)")) == parsed("E(x,y)"));
    // Implications disappear.
    CHECK(to_nnf(parsed("E(x,y) -> E(y,x)")) == parsed("~E(x,y) | E(y,x)"));

    SUBCASE("negations sit on atoms only") {
        FormulaGen gen(graph_vocabulary(), test_seed());
        std::function<bool(const Formula&)> nnf_shape = [&](const Formula& f) -> bool {
            switch (f.kind()) {
                case Formula::Kind::Not:
                    return f.child().kind() == Formula::Kind::Atom ||
                           f.child().kind() == Formula::Kind::Eq;
                case Formula::Kind::Implies:
                case Formula::Kind::Iff:
                    return false;
                case Formula::Kind::And:
                case Formula::Kind::Or:
                    return nnf_shape(f.left()) && nnf_shape(f.right());
                case Formula::Kind::Forall:
                case Formula::Kind::Exists:
                    return nnf_shape(f.child());
                default:
                    return true;
            }
        };
        for (int i = 0; i < 200; ++i) {
            CHECK(nnf_shape(to_nnf(gen.sample(5))));
        }
    }
}

TEST_CASE("to_prenex") {
    SUBCASE("pulls left operand first") {
        PrenexForm pf = to_prenex(parsed("(forall x. E(x,x)) & (exists y. ~E(y,y))"));
        REQUIRE(pf.prefix.size() == 2);
        CHECK(pf.prefix[0] == std::pair{Quantifier::Forall, std::string("v0")});
        CHECK(pf.prefix[1] == std::pair{Quantifier::Exists, std::string("v1")});
        CHECK(pf.matrix == parsed("E(v0,v0) & ~E(v1,v1)"));
    }
    SUBCASE("already prenex formulas keep their shape up to renaming") {
        PrenexForm pf = to_prenex(parsed("exists x. forall y. E(x,y)"));
        REQUIRE(pf.prefix.size() == 2);
        CHECK(pf.prefix[0].first == Quantifier::Exists);
        CHECK(pf.prefix[1].first == Quantifier::Forall);
        CHECK(pf.matrix == parsed("E(v0,v1)"));
    }
    SUBCASE("quantifier-free formulas have an empty prefix") {
        CHECK(to_prenex(parsed("E(x,y)")).prefix.empty());
    }
    SUBCASE("matrix is quantifier-free and binders are distinct") {
        FormulaGen gen(graph_vocabulary(), test_seed() + 1);
        std::function<bool(const Formula&)> qfree = [&](const Formula& f) -> bool {
            switch (f.kind()) {
                case Formula::Kind::Forall:
                case Formula::Kind::Exists:
                    return false;
                case Formula::Kind::Not:
                    return qfree(f.child());
                case Formula::Kind::And:
                case Formula::Kind::Or:
                case Formula::Kind::Implies:
                case Formula::Kind::Iff:
                    return qfree(f.left()) && qfree(f.right());
                default:
                    return true;
            }
        };
        for (int i = 0; i < 200; ++i) {
            PrenexForm pf = to_prenex(gen.sample(5));
            CHECK(qfree(pf.matrix));
            std::set<std::string> seen;
            for (const auto& [q, v] : pf.prefix) CHECK(seen.insert(v).second);
        }
    }
    SUBCASE("normal forms preserve truth on all graphs up to size 3") {
        SearchBudget budget;
        budget.max_universe_size = 3;
        budget.dedup_isomorphic = true;
        auto structures = enumerate_structures(graph_vocabulary(), budget);
        for (const auto& f : corpus20()) {
            Formula nnf = to_nnf(f);
            Formula pf = to_prenex(f).to_formula();
            for (const auto& m : structures) {
                bool reference = ground_eval(m, f);
                CHECK(ground_eval(m, nnf) == reference);
                CHECK(ground_eval(m, pf) == reference);
            }
        }
    }
}

TEST_CASE("classify_prefix") {
    PrefixClass sigma2 = classify_prefix(parsed("exists x1, x2. forall y. E(x1,y) & E(x2,y)"));
    CHECK(sigma2 == PrefixClass{Polarity::Sigma, 2, 2});

    PrefixClass pi1 = classify_prefix(gen_fewer_than_k(3));
    CHECK(pi1 == PrefixClass{Polarity::Pi, 1, 3});

    PrefixClass qf = classify_prefix(parsed("E(x,y)"));
    CHECK(qf.quantifier_free());
    CHECK(qf.leading_count == 0);

    SUBCASE("re-prenexing is stable") {
        FormulaGen gen(graph_vocabulary(), test_seed() + 2);
        for (int i = 0; i < 100; ++i) {
            Formula f = gen.sample(5);
            PrefixClass once = classify_prefix(f);
            PrefixClass twice = classify_prefix(to_prenex(f).to_formula());
            CHECK(once == twice);
        }
    }
}

TEST_CASE("pad_leading_universals") {
    PrenexForm pf = to_prenex(parsed("forall x. exists y. E(x,y)"));
    PrenexForm padded = pad_leading_universals(pf, 3);
    CHECK(padded.leading_block_length() == 3);
    CHECK(padded.prefix.size() == 4);
    // Still equivalent on small graphs.
    SearchBudget budget;
    budget.max_universe_size = 3;
    for (const auto& m : enumerate_structures(graph_vocabulary(), budget)) {
        CHECK(ground_eval(m, pf.to_formula()) == ground_eval(m, padded.to_formula()));
    }
    CHECK_THROWS_AS(pad_leading_universals(to_prenex(parsed("exists x. E(x,x)")), 2),
                    std::invalid_argument);
}

TEST_CASE("relativize") {
    const Vocabulary& graph = *graph_vocabulary();

    SUBCASE("one-point relativization of a universal") {
        Formula rel = relativize(parsed("forall x. E(x,x)"), {"w1"}, graph);
        CHECK(free_variables(rel) == std::set<std::string>{"w1"});
        FiniteStructure lp = gen_loop_pair();
        CHECK(eval(lp, rel, {{"w1", "a"}}));
        CHECK_FALSE(eval(lp, rel, {{"w1", "b"}}));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(relativize(parsed("forall y. E(x,y)"), {"w"}, graph),
                        std::invalid_argument);  // not a sentence
        CHECK_THROWS_AS(relativize(parsed("forall x. E(x,x)"), {"x"}, graph),
                        std::invalid_argument);  // variable occurs in the formula
        CHECK_THROWS_AS(relativize(parsed("forall x. E(x,x)"), {}, graph),
                        std::invalid_argument);  // nothing to induce on
    }
    SUBCASE("relativization law spot check at size 4") {
        SearchBudget budget;
        budget.max_universe_size = 4;
        budget.dedup_isomorphic = true;
        Formula f = corpus20()[0];
        Formula rel = relativize(f, {"w1"}, graph);
        StructureEnumerator it(graph_vocabulary(), budget);
        while (auto m = it.next()) {
            if (m->size() != 4) continue;
            for (const auto& a : m->universe()) {
                CHECK(eval(*m, rel, {{"w1", a}}) ==
                      eval(induced_substructure(*m, {a}), f));
            }
        }
    }

    SUBCASE("relativized truth is truth in the induced substructure") {
        SearchBudget budget;
        budget.max_universe_size = 3;
        budget.dedup_isomorphic = true;
        auto structures = enumerate_structures(graph_vocabulary(), budget);
        std::vector<Formula> sample = {corpus20()[0], corpus20()[1], corpus20()[11],
                                       corpus20()[15]};
        for (const auto& f : sample) {
            for (int len = 1; len <= 2; ++len) {
                std::vector<std::string> vars;
                for (int i = 0; i < len; ++i) vars.push_back("w" + std::to_string(i + 1));
                Formula rel = relativize(f, vars, graph);
                for (const auto& m : structures) {
                    std::vector<uint32_t> tuple(len, 0);
                    while (true) {
                        Assignment asg;
                        std::set<std::string> elems;
                        for (int i = 0; i < len; ++i) {
                            asg[vars[i]] = m.element_name(tuple[i]);
                            elems.insert(m.element_name(tuple[i]));
                        }
                        bool relativized = eval(m, rel, asg);
                        bool induced = ground_eval(induced_substructure(m, elems), f);
                        CHECK(relativized == induced);
                        int pos = len;
                        while (pos-- > 0) {
                            if (++tuple[pos] < m.size()) break;
                            tuple[pos] = 0;
                        }
                        if (pos < 0) break;
                    }
                }
            }
        }
    }
}

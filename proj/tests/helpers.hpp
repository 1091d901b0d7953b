#pragma once

#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "preslab/corpus.hpp"
#include "preslab/eval.hpp"
#include "preslab/logic.hpp"
#include "preslab/parse.hpp"
#include "preslab/substructure.hpp"

// Shared fixtures and independent oracles. Everything here recomputes from
// definitions (grounding, exhaustive enumeration, permutation search) so
// the library implementations are checked against a second route.

namespace preslab::testing {

inline Formula parsed(const std::string& text, const Vocabulary& vocab) {
    auto result = parse_formula(text, vocab);
    if (!result.ok()) {
        throw std::runtime_error("fixture does not parse: " + text + " — " +
                                 format_error(result.error()));
    }
    return result.take();
}

inline Formula parsed(const std::string& text) { return parsed(text, *graph_vocabulary()); }

// ---------------------------------------------------------------------------
// Grounding evaluator: the second evaluation strategy. Quantifiers are
// expanded syntactically into per-element substitutions; atoms are checked
// against the raw string tables. No Assignment machinery, no index tables.
// ---------------------------------------------------------------------------

namespace detail {

inline Formula subst_var(const Formula& f, const std::string& var, const std::string& constant) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            std::vector<Term> args;
            for (const auto& t : f.args()) {
                args.push_back(t.is_variable() && t.name == var ? Term::constant(constant) : t);
            }
            return Formula::atom(f.relation(), std::move(args));
        }
        case Formula::Kind::Eq: {
            auto fix = [&](const Term& t) {
                return t.is_variable() && t.name == var ? Term::constant(constant) : t;
            };
            return Formula::eq(fix(f.left_term()), fix(f.right_term()));
        }
        case Formula::Kind::Not:
            return Formula::negation(subst_var(f.child(), var, constant));
        case Formula::Kind::And:
            return Formula::conj(subst_var(f.left(), var, constant),
                                 subst_var(f.right(), var, constant));
        case Formula::Kind::Or:
            return Formula::disj(subst_var(f.left(), var, constant),
                                 subst_var(f.right(), var, constant));
        case Formula::Kind::Implies:
            return Formula::implies(subst_var(f.left(), var, constant),
                                    subst_var(f.right(), var, constant));
        case Formula::Kind::Iff:
            return Formula::iff(subst_var(f.left(), var, constant),
                                subst_var(f.right(), var, constant));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            if (f.bound_var() == var) return f;  // shadowed
            Formula body = subst_var(f.child(), var, constant);
            return f.kind() == Formula::Kind::Forall ? Formula::forall(f.bound_var(), body)
                                                     : Formula::exists(f.bound_var(), body);
        }
    }
    throw std::logic_error("unreachable");
}

inline bool ground_eval_rec(const FiniteStructure& m,
                            const std::map<std::string, std::string>& name_of_element,
                            const Formula& f) {
    auto value = [&](const Term& t) -> std::string {
        if (!t.is_constant()) throw std::runtime_error("unground term " + t.name);
        // Grounding constants name elements directly; vocabulary constants
        // go through the raw constant map.
        auto raw = m.raw_constants().find(t.name);
        if (raw != m.raw_constants().end()) return raw->second;
        auto it = name_of_element.find(t.name);
        if (it == name_of_element.end()) throw std::runtime_error("unknown constant " + t.name);
        return it->second;
    };
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            std::vector<std::string> tuple;
            for (const auto& t : f.args()) tuple.push_back(value(t));
            auto table = m.raw_tables().find(f.relation());
            if (table == m.raw_tables().end()) return false;
            for (const auto& row : table->second) {
                if (row == tuple) return true;
            }
            return false;
        }
        case Formula::Kind::Eq:
            return value(f.left_term()) == value(f.right_term());
        case Formula::Kind::Not:
            return !ground_eval_rec(m, name_of_element, f.child());
        case Formula::Kind::And:
            return ground_eval_rec(m, name_of_element, f.left()) &&
                   ground_eval_rec(m, name_of_element, f.right());
        case Formula::Kind::Or:
            return ground_eval_rec(m, name_of_element, f.left()) ||
                   ground_eval_rec(m, name_of_element, f.right());
        case Formula::Kind::Implies:
            return !ground_eval_rec(m, name_of_element, f.left()) ||
                   ground_eval_rec(m, name_of_element, f.right());
        case Formula::Kind::Iff:
            return ground_eval_rec(m, name_of_element, f.left()) ==
                   ground_eval_rec(m, name_of_element, f.right());
        case Formula::Kind::Forall: {
            for (const auto& [ground, elem] : name_of_element) {
                if (!ground_eval_rec(m, name_of_element, subst_var(f.child(), f.bound_var(), ground))) {
                    return false;
                }
            }
            return true;
        }
        case Formula::Kind::Exists: {
            for (const auto& [ground, elem] : name_of_element) {
                if (ground_eval_rec(m, name_of_element, subst_var(f.child(), f.bound_var(), ground))) {
                    return true;
                }
            }
            return false;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

/// Substitution-based evaluation with a free-variable assignment.
inline bool ground_eval(const FiniteStructure& m, const Formula& f,
                        const std::map<std::string, std::string>& asg = {}) {
    std::map<std::string, std::string> ground_names;
    for (size_t i = 0; i < m.universe().size(); ++i) {
        ground_names["$g" + std::to_string(i)] = m.universe()[i];
    }
    Formula grounded = f;
    for (const auto& [var, elem] : asg) {
        std::string name;
        for (const auto& [g, e] : ground_names) {
            if (e == elem) name = g;
        }
        if (name.empty()) throw std::runtime_error("assignment outside universe");
        grounded = detail::subst_var(grounded, var, name);
    }
    return detail::ground_eval_rec(m, ground_names, grounded);
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism (permutation search over universes).
// ---------------------------------------------------------------------------

inline bool isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
    if (!(a.vocabulary() == b.vocabulary())) return false;
    if (a.size() != b.size()) return false;
    std::vector<uint32_t> perm(a.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<uint32_t>(i);
    const Vocabulary& vocab = a.vocabulary();
    do {
        bool ok = true;
        for (size_t c = 0; ok && c < vocab.constants().size(); ++c) {
            if (perm[a.constant_value(static_cast<int>(c))] !=
                b.constant_value(static_cast<int>(c))) {
                ok = false;
            }
        }
        for (size_t r = 0; ok && r < vocab.relations().size(); ++r) {
            const auto& ta = a.relation_tuples(static_cast<int>(r));
            const auto& tb = b.relation_tuples(static_cast<int>(r));
            if (ta.size() != tb.size()) {
                ok = false;
                break;
            }
            for (const auto& tuple : ta) {
                FiniteStructure::IndexTuple image(tuple.size());
                for (size_t i = 0; i < tuple.size(); ++i) image[i] = perm[tuple[i]];
                if (!b.contains_tuple(static_cast<int>(r), image)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// ---------------------------------------------------------------------------
// Definition-level core check: plain bitmask loop over all subsets.
// ---------------------------------------------------------------------------

inline bool oracle_is_core(const FiniteStructure& m, const std::set<std::string>& c,
                           const Theory& s) {
    size_t n = m.size();
    uint32_t base = 0;
    for (const auto& e : c) base |= 1u << *m.element_index(e);
    for (size_t ci = 0; ci < m.vocabulary().constants().size(); ++ci) {
        base |= 1u << m.constant_value(static_cast<int>(ci));
    }
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        if ((mask & base) != base) continue;
        std::set<std::string> names;
        for (size_t b = 0; b < n; ++b) {
            if (mask >> b & 1) names.insert(m.element_name(static_cast<uint32_t>(b)));
        }
        bool all = true;
        for (const auto& sentence : s.sentences) {
            if (!ground_eval(induced_substructure(m, names), sentence)) {
                all = false;
                break;
            }
        }
        if (!all) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Existential-closure oracle: enumerates the realized existential formulas
// with at most two parameters and two quantified variables and transfers
// them from r to m.
// ---------------------------------------------------------------------------

inline bool oracle_existentially_closed(const FiniteStructure& m, const FiniteStructure& r) {
    const Vocabulary& vocab = r.vocabulary();
    std::vector<std::string> param_vars = {"p1", "p2"};
    std::vector<std::string> exist_vars = {"w1", "w2"};

    // All tuples (with repeats) of the given length over a universe.
    auto tuples_over = [](const std::vector<std::string>& universe, size_t len) {
        std::vector<std::vector<std::string>> out{{}};
        for (size_t i = 0; i < len; ++i) {
            std::vector<std::vector<std::string>> next;
            for (const auto& prefix : out) {
                for (const auto& e : universe) {
                    auto t = prefix;
                    t.push_back(e);
                    next.push_back(std::move(t));
                }
            }
            out = std::move(next);
        }
        return out;
    };

    for (size_t np = 0; np <= 2 && np <= m.size(); ++np) {
        for (const auto& params : tuples_over(m.universe(), np)) {
            for (size_t ne = 1; ne <= 2; ++ne) {
                for (const auto& wits : tuples_over(r.universe(), ne)) {
                    // The complete atomic type of (params, wits) in r.
                    std::vector<std::string> var_names;
                    std::vector<std::string> elems;
                    for (size_t i = 0; i < np; ++i) {
                        var_names.push_back(param_vars[i]);
                        elems.push_back(params[i]);
                    }
                    for (size_t i = 0; i < ne; ++i) {
                        var_names.push_back(exist_vars[i]);
                        elems.push_back(wits[i]);
                    }
                    std::vector<Formula> literals;
                    for (size_t i = 0; i < var_names.size(); ++i) {
                        for (size_t j = i + 1; j < var_names.size(); ++j) {
                            Formula eq = Formula::eq(Term::var(var_names[i]),
                                                     Term::var(var_names[j]));
                            literals.push_back(elems[i] == elems[j] ? eq
                                                                    : Formula::negation(eq));
                        }
                    }
                    for (size_t ri = 0; ri < vocab.relations().size(); ++ri) {
                        int arity = vocab.relations()[ri].arity;
                        std::vector<size_t> pos(arity, 0);
                        while (true) {
                            std::vector<Term> args;
                            FiniteStructure::IndexTuple tuple;
                            for (int i = 0; i < arity; ++i) {
                                args.push_back(Term::var(var_names[pos[i]]));
                                tuple.push_back(*r.element_index(elems[pos[i]]));
                            }
                            Formula atom = Formula::atom(vocab.relations()[ri].name, args);
                            literals.push_back(r.contains_tuple(static_cast<int>(ri), tuple)
                                                   ? atom
                                                   : Formula::negation(atom));
                            int p = arity;
                            while (p-- > 0) {
                                if (++pos[p] < var_names.size()) break;
                                pos[p] = 0;
                            }
                            if (p < 0) break;
                        }
                    }
                    Formula body = conj_all(literals);
                    for (size_t i = ne; i-- > 0;) {
                        body = Formula::exists(exist_vars[i], body);
                    }
                    Assignment asg;
                    for (size_t i = 0; i < np; ++i) asg[param_vars[i]] = params[i];
                    // True in r by construction; existential closure demands
                    // truth in m.
                    if (!eval(m, body, asg)) return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Random formula generator for round-trip and normal-form properties.
// ---------------------------------------------------------------------------

inline unsigned test_seed() {
    if (const char* env = std::getenv("PRESLAB_SEED")) {
        return static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    return 20240808u;
}

class FormulaGen {
  public:
    FormulaGen(VocabularyPtr vocab, unsigned seed) : vocab_(std::move(vocab)), rng_(seed) {}

    Formula sample(int depth) {
        if (depth <= 0) return leaf();
        switch (pick(8)) {
            case 0: return leaf();
            case 1: return Formula::negation(sample(depth - 1));
            case 2: return Formula::conj(sample(depth - 1), sample(depth - 1));
            case 3: return Formula::disj(sample(depth - 1), sample(depth - 1));
            case 4: return Formula::implies(sample(depth - 1), sample(depth - 1));
            case 5: return Formula::iff(sample(depth - 1), sample(depth - 1));
            case 6: return Formula::forall(var(), sample(depth - 1));
            default: return Formula::exists(var(), sample(depth - 1));
        }
    }

  private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::string var() {
        static const std::vector<std::string> pool = {"x", "y", "z", "w"};
        return pool[pick(static_cast<int>(pool.size()))];
    }

    Term term() {
        if (!vocab_->constants().empty() && pick(4) == 0) {
            return Term::constant(
                vocab_->constants()[pick(static_cast<int>(vocab_->constants().size()))]);
        }
        return Term::var(var());
    }

    Formula leaf() {
        if (!vocab_->relations().empty() && pick(3) != 0) {
            const auto& rel =
                vocab_->relations()[pick(static_cast<int>(vocab_->relations().size()))];
            std::vector<Term> args;
            for (int i = 0; i < rel.arity; ++i) args.push_back(term());
            return Formula::atom(rel.name, std::move(args));
        }
        Formula eq = Formula::eq(term(), term());
        return pick(2) ? eq : Formula::negation(eq);
    }

    VocabularyPtr vocab_;
    std::mt19937 rng_;
};

// ---------------------------------------------------------------------------
// Uniform random structures (seeded), for property coverage at sizes the
// exhaustive enumeration cannot reach.
// ---------------------------------------------------------------------------

inline FiniteStructure random_structure(const VocabularyPtr& vocab, int size, std::mt19937& rng) {
    std::vector<std::string> universe;
    for (int i = 0; i < size; ++i) universe.push_back("e" + std::to_string(i));
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    std::bernoulli_distribution keep(0.5);
    std::uniform_int_distribution<int> pick(0, size - 1);
    for (const auto& rel : vocab->relations()) {
        std::vector<FiniteStructure::Tuple> tuples;
        std::vector<int> idx(rel.arity, 0);
        while (true) {
            if (keep(rng)) {
                FiniteStructure::Tuple t;
                for (int i : idx) t.push_back(universe[i]);
                tuples.push_back(std::move(t));
            }
            int pos = rel.arity;
            while (pos-- > 0) {
                if (++idx[pos] < size) break;
                idx[pos] = 0;
            }
            if (pos < 0) break;
        }
        tables[rel.name] = std::move(tuples);
    }
    std::map<std::string, std::string> constants;
    for (const auto& c : vocab->constants()) constants[c] = universe[pick(rng)];
    return FiniteStructure(vocab, "rnd", std::move(universe), std::move(tables),
                           std::move(constants));
}

// ---------------------------------------------------------------------------
// The 20-sentence graph corpus used by the normal-form and relativization
// properties.
// ---------------------------------------------------------------------------

inline const std::vector<Formula>& corpus20() {
    static const std::vector<Formula> corpus = [] {
        std::vector<Formula> out;
        const std::vector<std::string> texts = {
            "exists x. forall y. E(x,y)",
            "forall x. exists y. E(x,y)",
            "exists x. E(x,x)",
            "exists x, y. x != y & E(x,y) & E(y,x)",
            "exists x, y, z. x != y & x != z & y != z & E(x,y) & E(y,z) & E(z,x)",
            "forall x. ~E(x,x)",
            "forall x, y. ~(x != y & E(x,y) & E(y,x))",
            "exists x. ~E(x,x)",
            "forall x, y. E(x,y) -> E(y,x)",
            "forall x, y. E(x,y) -> ~E(y,x)",
            "exists x. forall y. E(x,y) | E(y,x)",
            "forall x. (E(x,x) <-> exists y. E(x,y) & E(y,x))",
            "(forall x. E(x,x)) & (exists y. ~E(y,y))",
            "exists x. (forall y. E(y,x)) -> (forall z. E(x,z))",
            "~forall x. exists y. E(x,y) & ~E(y,x)",
            "forall x. exists y. forall z. E(x,y) & (E(y,z) -> E(z,x))",
            "exists x, y. forall z. z = x | z = y | E(z,x) | E(z,y)",
            "forall x. exists y. x != y | E(x,x)",
            "exists x. forall y. exists z. E(x,z) & (E(y,z) <-> E(z,y))",
            "(exists x. E(x,x)) -> (forall y. exists z. E(y,z))",
        };
        for (const auto& t : texts) out.push_back(parsed(t));
        return out;
    }();
    return corpus;
}

}  // namespace preslab::testing

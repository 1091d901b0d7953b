#include "preslab/corpus.hpp"

#include <stdexcept>

#include "preslab/syntax.hpp"

namespace preslab {

VocabularyPtr graph_vocabulary() {
    static const VocabularyPtr vocab = std::make_shared<Vocabulary>(
        "graph", std::vector<RelationSymbol>{{"E", 2}}, std::vector<std::string>{});
    return vocab;
}

VocabularyPtr bare_vocabulary() {
    static const VocabularyPtr vocab = std::make_shared<Vocabulary>(
        "bare", std::vector<RelationSymbol>{}, std::vector<std::string>{});
    return vocab;
}

namespace {

void require_positive(int n, const char* what) {
    if (n <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

std::string elem(int i) { return "e" + std::to_string(i); }

std::vector<FiniteStructure::Tuple> cycle_edges(const std::vector<std::string>& names) {
    std::vector<FiniteStructure::Tuple> edges;
    size_t n = names.size();
    for (size_t i = 0; i < n; ++i) {
        edges.push_back({names[i], names[(i + 1) % n]});
    }
    if (n == 1) edges = {{names[0], names[0]}};
    return edges;
}

}  // namespace

FiniteStructure gen_cycle(int n) {
    require_positive(n, "cycle length");
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(elem(i));
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    tables["E"] = cycle_edges(names);
    return FiniteStructure(graph_vocabulary(), "C" + std::to_string(n), std::move(names),
                           std::move(tables), {});
}

FiniteStructure gen_disjoint_cycles(const std::vector<int>& lengths) {
    if (lengths.empty()) throw std::invalid_argument("need at least one cycle length");
    std::vector<std::string> universe;
    std::vector<FiniteStructure::Tuple> edges;
    std::string name = "DC";
    for (size_t comp = 0; comp < lengths.size(); ++comp) {
        require_positive(lengths[comp], "cycle length");
        std::vector<std::string> names;
        for (int i = 0; i < lengths[comp]; ++i) {
            names.push_back("c" + std::to_string(comp) + "_e" + std::to_string(i));
        }
        auto comp_edges = cycle_edges(names);
        edges.insert(edges.end(), comp_edges.begin(), comp_edges.end());
        universe.insert(universe.end(), names.begin(), names.end());
        name += (comp ? "_" : "") + std::to_string(lengths[comp]);
    }
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    tables["E"] = std::move(edges);
    return FiniteStructure(graph_vocabulary(), std::move(name), std::move(universe),
                           std::move(tables), {});
}

FiniteStructure gen_linear_order(int n) {
    require_positive(n, "order size");
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(elem(i));
    std::vector<FiniteStructure::Tuple> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) pairs.push_back({names[i], names[j]});
    }
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    tables["E"] = std::move(pairs);
    return FiniteStructure(graph_vocabulary(), "L" + std::to_string(n), std::move(names),
                           std::move(tables), {});
}

FiniteStructure gen_bare_set(int n) {
    require_positive(n, "set size");
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(elem(i));
    return FiniteStructure(bare_vocabulary(), "S" + std::to_string(n), std::move(names), {}, {});
}

FiniteStructure gen_loop_pair() {
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    tables["E"] = {{"a", "a"}};
    return FiniteStructure(graph_vocabulary(), "loop_pair", {"a", "b"}, std::move(tables), {});
}

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

namespace {

std::string xvar(int i) { return "x" + std::to_string(i); }

Formula edge(const std::string& a, const std::string& b) {
    return Formula::atom("E", {Term::var(a), Term::var(b)});
}

Formula all_distinct(const std::vector<std::string>& vars) {
    std::vector<Formula> parts;
    for (size_t i = 0; i < vars.size(); ++i) {
        for (size_t j = i + 1; j < vars.size(); ++j) {
            parts.push_back(Formula::negation(Formula::eq(Term::var(vars[i]),
                                                          Term::var(vars[j]))));
        }
    }
    return conj_all(parts);
}

}  // namespace

Formula gen_has_k_cycle(int k) {
    require_positive(k, "cycle length");
    if (k == 1) {
        return Formula::exists(xvar(1), edge(xvar(1), xvar(1)));
    }
    std::vector<std::string> vars;
    for (int i = 1; i <= k; ++i) vars.push_back(xvar(i));
    std::vector<Formula> parts = {all_distinct(vars)};
    for (int i = 0; i < k; ++i) {
        parts.push_back(edge(vars[i], vars[(i + 1) % k]));
    }
    Formula body = conj_all(parts);
    for (int i = k; i >= 1; --i) body = Formula::exists(xvar(i), body);
    return body;
}

Formula gen_no_k_cycle(int k) {
    return to_prenex(Formula::negation(gen_has_k_cycle(k))).to_formula();
}

Formula gen_fewer_than_k(int k) {
    require_positive(k, "element bound");
    std::vector<std::string> vars;
    for (int i = 1; i <= k; ++i) vars.push_back(xvar(i));
    std::vector<Formula> pairs;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            pairs.push_back(Formula::eq(Term::var(vars[i]), Term::var(vars[j])));
        }
    }
    // k = 1 leaves the disjunction empty; x1 != x1 is the canonical
    // unsatisfiable matrix over nonempty universes.
    Formula body = pairs.empty()
                       ? Formula::negation(Formula::eq(Term::var(vars[0]), Term::var(vars[0])))
                       : disj_all(pairs);
    for (int i = k; i >= 1; --i) body = Formula::forall(xvar(i), body);
    return body;
}

Formula gen_domination() {
    return Formula::exists("x", Formula::forall("y", edge("x", "y")));
}

Formula gen_out_edge() {
    return Formula::forall("x", Formula::exists("y", edge("x", "y")));
}

namespace {

// x lies on no cycle of length exactly n (the n = 1 case is ~E(x,x)).
Formula not_on_cycle_of_length(int n) {
    if (n == 1) {
        return Formula::negation(edge("x", "x"));
    }
    int hops = n - 1;  // z1..z(n-1)
    std::vector<std::string> zs;
    for (int i = 1; i <= hops; ++i) zs.push_back("z" + std::to_string(i));
    std::vector<Formula> parts;
    for (size_t i = 0; i < zs.size(); ++i) {
        for (size_t j = i + 1; j < zs.size(); ++j) {
            parts.push_back(Formula::negation(Formula::eq(Term::var(zs[i]), Term::var(zs[j]))));
        }
    }
    for (const auto& z : zs) {
        parts.push_back(Formula::negation(Formula::eq(Term::var("x"), Term::var(z))));
    }
    parts.push_back(edge("x", zs.front()));
    parts.push_back(edge(zs.back(), "x"));
    for (size_t i = 0; i + 1 < zs.size(); ++i) {
        parts.push_back(edge(zs[i], zs[i + 1]));
    }
    Formula body = conj_all(parts);
    for (int i = hops; i >= 1; --i) body = Formula::exists(zs[i - 1], body);
    return Formula::negation(body);
}

}  // namespace

Formula gen_phi_n(int n) {
    require_positive(n, "cycle bound");
    std::vector<Formula> parts;
    for (int i = 1; i <= n; ++i) parts.push_back(not_on_cycle_of_length(i));
    return conj_all(parts);
}

Formula gen_psi_n(int n) {
    return Formula::exists("x", gen_phi_n(n));
}

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

Theory gen_loop_contrast() {
    Theory t;
    t.sentences.push_back(Formula::exists("x", edge("x", "x")));
    t.sentences.push_back(Formula::exists("y", Formula::negation(edge("y", "y"))));
    return t;
}

Theory gen_psi_prefix(int m) {
    require_positive(m, "prefix length");
    Theory t;
    for (int n = 1; n <= m; ++n) t.sentences.push_back(gen_psi_n(n));
    return t;
}

Theory gen_no_cycles(int m) {
    require_positive(m, "cycle bound");
    Theory t;
    for (int k = 1; k <= m; ++k) t.sentences.push_back(gen_no_k_cycle(k));
    return t;
}

// ---------------------------------------------------------------------------
// Name-based dispatch
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_params(const std::string& family, const char* expected) {
    throw std::invalid_argument("family " + family + " expects " + expected);
}

void want(const std::vector<int>& params, size_t n, const std::string& family,
          const char* expected) {
    if (params.size() != n) bad_params(family, expected);
}

}  // namespace

bool is_structure_family(const std::string& f) {
    return f == "cycle" || f == "disjoint_cycles" || f == "linear_order" || f == "bare_set" ||
           f == "loop_pair";
}

bool is_sentence_family(const std::string& f) {
    return f == "has_k_cycle" || f == "no_k_cycle" || f == "fewer_than_k" || f == "domination" ||
           f == "out_edge" || f == "phi_n" || f == "psi_n";
}

bool is_theory_family(const std::string& f) {
    return f == "loop_contrast" || f == "psi_prefix" || f == "no_cycles";
}

FiniteStructure gen_structure(const std::string& family, const std::vector<int>& params) {
    if (family == "cycle") {
        want(params, 1, family, "one length");
        return gen_cycle(params[0]);
    }
    if (family == "disjoint_cycles") {
        if (params.empty()) bad_params(family, "at least one length");
        return gen_disjoint_cycles(params);
    }
    if (family == "linear_order") {
        want(params, 1, family, "one size");
        return gen_linear_order(params[0]);
    }
    if (family == "bare_set") {
        want(params, 1, family, "one size");
        return gen_bare_set(params[0]);
    }
    if (family == "loop_pair") {
        want(params, 0, family, "no parameters");
        return gen_loop_pair();
    }
    throw std::invalid_argument("unknown structure family " + family);
}

Formula gen_sentence(const std::string& family, const std::vector<int>& params) {
    if (family == "has_k_cycle") {
        want(params, 1, family, "one length");
        return gen_has_k_cycle(params[0]);
    }
    if (family == "no_k_cycle") {
        want(params, 1, family, "one length");
        return gen_no_k_cycle(params[0]);
    }
    if (family == "fewer_than_k") {
        want(params, 1, family, "one bound");
        return gen_fewer_than_k(params[0]);
    }
    if (family == "domination") {
        want(params, 0, family, "no parameters");
        return gen_domination();
    }
    if (family == "out_edge") {
        want(params, 0, family, "no parameters");
        return gen_out_edge();
    }
    if (family == "phi_n") {
        want(params, 1, family, "one bound");
        return gen_phi_n(params[0]);
    }
    if (family == "psi_n") {
        want(params, 1, family, "one bound");
        return gen_psi_n(params[0]);
    }
    throw std::invalid_argument("unknown sentence family " + family);
}

Theory gen_theory(const std::string& family, const std::vector<int>& params) {
    if (family == "loop_contrast") {
        want(params, 0, family, "no parameters");
        return gen_loop_contrast();
    }
    if (family == "psi_prefix") {
        want(params, 1, family, "one length");
        return gen_psi_prefix(params[0]);
    }
    if (family == "no_cycles") {
        want(params, 1, family, "one bound");
        return gen_no_cycles(params[0]);
    }
    throw std::invalid_argument("unknown theory family " + family);
}

VocabularyPtr family_vocabulary(const std::string& family) {
    if (family == "fewer_than_k" || family == "bare_set") return bare_vocabulary();
    return graph_vocabulary();
}

}  // namespace preslab

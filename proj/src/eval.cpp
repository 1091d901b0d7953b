#include "preslab/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace preslab {

namespace {

// Environment-based recursive evaluator. The environment is a stack of
// (variable, element index) bindings; lookup walks from the back so inner
// binders shadow outer ones.
struct EvalContext {
    const FiniteStructure& m;
    std::vector<std::pair<std::string_view, uint32_t>> env;

    uint32_t value_of(const Term& t) const {
        if (t.is_constant()) {
            int ci = m.vocabulary().constant_index(t.name);
            if (ci < 0) throw std::invalid_argument("unknown constant " + t.name);
            return m.constant_value(ci);
        }
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            if (it->first == t.name) return it->second;
        }
        throw std::invalid_argument("unbound variable " + t.name);
    }

    bool run(const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Atom: {
                int ri = m.vocabulary().relation_index(f.relation());
                if (ri < 0) throw std::invalid_argument("unknown relation " + f.relation());
                FiniteStructure::IndexTuple tuple;
                tuple.reserve(f.args().size());
                for (const auto& t : f.args()) tuple.push_back(value_of(t));
                if (tuple.size() !=
                    static_cast<size_t>(m.vocabulary().relations()[ri].arity)) {
                    throw std::invalid_argument("arity mismatch for " + f.relation());
                }
                return m.contains_tuple(ri, tuple);
            }
            case Formula::Kind::Eq:
                return value_of(f.left_term()) == value_of(f.right_term());
            case Formula::Kind::Not:
                return !run(f.child());
            case Formula::Kind::And:
                return run(f.left()) && run(f.right());
            case Formula::Kind::Or:
                return run(f.left()) || run(f.right());
            case Formula::Kind::Implies:
                return !run(f.left()) || run(f.right());
            case Formula::Kind::Iff:
                return run(f.left()) == run(f.right());
            case Formula::Kind::Forall: {
                for (uint32_t e = 0; e < m.size(); ++e) {
                    env.emplace_back(f.bound_var(), e);
                    bool ok = run(f.child());
                    env.pop_back();
                    if (!ok) return false;
                }
                return true;
            }
            case Formula::Kind::Exists: {
                for (uint32_t e = 0; e < m.size(); ++e) {
                    env.emplace_back(f.bound_var(), e);
                    bool ok = run(f.child());
                    env.pop_back();
                    if (ok) return true;
                }
                return false;
            }
        }
        throw std::logic_error("unreachable");
    }
};

}  // namespace

bool eval(const FiniteStructure& m, const Formula& f, const Assignment& asg) {
    if (!m.is_valid()) throw std::invalid_argument("eval on invalid structure");
    if (auto err = well_formed_error(f, m.vocabulary())) {
        throw std::invalid_argument(*err);
    }
    EvalContext ctx{m, {}};
    for (const auto& [var, elem] : asg) {
        auto idx = m.element_index(elem);
        if (!idx) throw std::invalid_argument("assignment maps " + var + " to unknown element " +
                                              elem);
        ctx.env.emplace_back(var, *idx);
    }
    for (const auto& v : free_variables(f)) {
        if (!asg.count(v)) throw std::invalid_argument("free variable " + v + " not assigned");
    }
    return ctx.run(f);
}

WitnessSet witnesses(const FiniteStructure& m, const PrenexForm& pf) {
    if (!m.is_valid()) throw std::invalid_argument("witnesses on invalid structure");
    if (pf.prefix.empty() || pf.prefix[0].first != Quantifier::Exists) {
        throw std::invalid_argument("prefix does not start with an existential quantifier");
    }
    int k = pf.leading_block_length();

    PrenexForm rest{{pf.prefix.begin() + k, pf.prefix.end()}, pf.matrix};
    Formula rest_formula = rest.to_formula();

    WitnessSet out{pf, {}};
    size_t n = m.size();
    std::vector<uint32_t> tuple(static_cast<size_t>(k), 0);
    while (true) {
        Assignment asg;
        for (int i = 0; i < k; ++i) {
            asg[pf.prefix[i].second] = m.element_name(tuple[i]);
        }
        if (eval(m, rest_formula, asg)) {
            std::vector<std::string> named;
            named.reserve(tuple.size());
            for (uint32_t idx : tuple) named.push_back(m.element_name(idx));
            out.tuples.push_back(std::move(named));
        }
        // Odometer over universe indices; rightmost position fastest, so
        // tuples come out in lexicographic element order.
        int pos = k - 1;
        while (pos >= 0 && tuple[pos] + 1 == n) {
            tuple[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++tuple[pos];
    }
    return out;
}

bool models_theory(const FiniteStructure& m, const Theory& t) {
    for (const auto& sentence : t.sentences) {
        if (!is_sentence(sentence)) {
            throw std::invalid_argument("theory member has free variables: " +
                                        *free_variables(sentence).begin());
        }
    }
    return std::all_of(t.sentences.begin(), t.sentences.end(),
                       [&](const Formula& s) { return eval(m, s); });
}

}  // namespace preslab

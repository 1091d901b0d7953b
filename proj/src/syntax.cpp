#include "preslab/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace preslab {

std::string to_string(const PrefixClass& c) {
    if (c.quantifier_free()) return "quantifier-free";
    std::string out = c.polarity == Polarity::Sigma ? "Sigma^0_" : "Pi^0_";
    out += std::to_string(c.n);
    out += " (leading ";
    out += std::to_string(c.leading_count);
    out += ")";
    return out;
}

Formula PrenexForm::to_formula() const {
    Formula f = matrix;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
        f = it->first == Quantifier::Forall ? Formula::forall(it->second, f)
                                            : Formula::exists(it->second, f);
    }
    return f;
}

int PrenexForm::leading_block_length() const {
    if (prefix.empty()) return 0;
    int count = 1;
    for (size_t i = 1; i < prefix.size() && prefix[i].first == prefix[0].first; ++i) ++count;
    return count;
}

// ---------------------------------------------------------------------------
// NNF
// ---------------------------------------------------------------------------

namespace {

Formula nnf_rec(const Formula& f, bool negate) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            return negate ? Formula::negation(f) : f;
        case Formula::Kind::Not:
            return nnf_rec(f.child(), !negate);
        case Formula::Kind::And: {
            Formula l = nnf_rec(f.left(), negate);
            Formula r = nnf_rec(f.right(), negate);
            return negate ? Formula::disj(l, r) : Formula::conj(l, r);
        }
        case Formula::Kind::Or: {
            Formula l = nnf_rec(f.left(), negate);
            Formula r = nnf_rec(f.right(), negate);
            return negate ? Formula::conj(l, r) : Formula::disj(l, r);
        }
        case Formula::Kind::Implies: {
            // a -> b  ==  ~a | b
            if (negate) {
                return Formula::conj(nnf_rec(f.left(), false), nnf_rec(f.right(), true));
            }
            return Formula::disj(nnf_rec(f.left(), true), nnf_rec(f.right(), false));
        }
        case Formula::Kind::Iff: {
            // Two-implication expansion: (a -> b) & (b -> a).
            Formula expanded = Formula::conj(Formula::implies(f.left(), f.right()),
                                             Formula::implies(f.right(), f.left()));
            return nnf_rec(expanded, negate);
        }
        case Formula::Kind::Forall: {
            Formula body = nnf_rec(f.child(), negate);
            return negate ? Formula::exists(f.bound_var(), body)
                          : Formula::forall(f.bound_var(), body);
        }
        case Formula::Kind::Exists: {
            Formula body = nnf_rec(f.child(), negate);
            return negate ? Formula::forall(f.bound_var(), body)
                          : Formula::exists(f.bound_var(), body);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf_rec(f, false); }

// ---------------------------------------------------------------------------
// Prenexing
// ---------------------------------------------------------------------------

namespace {

class FreshNamer {
  public:
    explicit FreshNamer(std::set<std::string> taken) : taken_(std::move(taken)) {}

    std::string fresh() {
        while (true) {
            std::string candidate = "v" + std::to_string(next_++);
            if (!taken_.count(candidate)) {
                taken_.insert(candidate);
                return candidate;
            }
        }
    }

  private:
    std::set<std::string> taken_;
    int next_ = 0;
};

// Renames every binder to a fresh name, left-to-right.
Formula rename_apart(const Formula& f, FreshNamer& namer,
                     std::vector<std::pair<std::string, std::string>>& scope) {
    auto rename_term = [&](const Term& t) -> Term {
        if (t.is_variable()) {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
                if (it->first == t.name) return Term::var(it->second);
            }
        }
        return t;
    };
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            std::vector<Term> args;
            args.reserve(f.args().size());
            for (const auto& t : f.args()) args.push_back(rename_term(t));
            return Formula::atom(f.relation(), std::move(args));
        }
        case Formula::Kind::Eq:
            return Formula::eq(rename_term(f.left_term()), rename_term(f.right_term()));
        case Formula::Kind::Not:
            return Formula::negation(rename_apart(f.child(), namer, scope));
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
        case Formula::Kind::Iff: {
            Formula l = rename_apart(f.left(), namer, scope);
            Formula r = rename_apart(f.right(), namer, scope);
            switch (f.kind()) {
                case Formula::Kind::And: return Formula::conj(l, r);
                case Formula::Kind::Or: return Formula::disj(l, r);
                case Formula::Kind::Implies: return Formula::implies(l, r);
                default: return Formula::iff(l, r);
            }
        }
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            std::string name = namer.fresh();
            scope.emplace_back(f.bound_var(), name);
            Formula body = rename_apart(f.child(), namer, scope);
            scope.pop_back();
            return f.kind() == Formula::Kind::Forall ? Formula::forall(name, body)
                                                     : Formula::exists(name, body);
        }
    }
    throw std::logic_error("unreachable");
}

// Pulls quantifiers out of an NNF formula with all binders distinct.
PrenexForm pull_quantifiers(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Forall: {
            PrenexForm inner = pull_quantifiers(f.child());
            inner.prefix.insert(inner.prefix.begin(), {Quantifier::Forall, f.bound_var()});
            return inner;
        }
        case Formula::Kind::Exists: {
            PrenexForm inner = pull_quantifiers(f.child());
            inner.prefix.insert(inner.prefix.begin(), {Quantifier::Exists, f.bound_var()});
            return inner;
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            PrenexForm l = pull_quantifiers(f.left());
            PrenexForm r = pull_quantifiers(f.right());
            PrenexForm out{std::move(l.prefix),
                           f.kind() == Formula::Kind::And ? Formula::conj(l.matrix, r.matrix)
                                                          : Formula::disj(l.matrix, r.matrix)};
            out.prefix.insert(out.prefix.end(), r.prefix.begin(), r.prefix.end());
            return out;
        }
        default:
            // NNF leaves: atoms, equalities, negated atoms/equalities.
            return PrenexForm{{}, f};
    }
}

}  // namespace

PrenexForm to_prenex(const Formula& f) {
    Formula nnf = to_nnf(f);
    FreshNamer namer(collect_identifiers(f));
    std::vector<std::pair<std::string, std::string>> scope;
    Formula renamed = rename_apart(nnf, namer, scope);
    return pull_quantifiers(renamed);
}

PrefixClass classify_prefix(const Formula& f) {
    PrenexForm pf = to_prenex(f);
    PrefixClass out;
    if (pf.prefix.empty()) {
        return out;  // quantifier-free convention
    }
    out.polarity = pf.prefix[0].first == Quantifier::Exists ? Polarity::Sigma : Polarity::Pi;
    out.n = 1;
    for (size_t i = 1; i < pf.prefix.size(); ++i) {
        if (pf.prefix[i].first != pf.prefix[i - 1].first) ++out.n;
    }
    out.leading_count = pf.leading_block_length();
    return out;
}

PrenexForm pad_leading_universals(const PrenexForm& pf, int k) {
    if (!pf.prefix.empty() && pf.prefix[0].first != Quantifier::Forall) {
        throw std::invalid_argument("prefix does not start with a universal quantifier");
    }
    int have = pf.leading_block_length();
    if (have >= k) return pf;

    std::set<std::string> taken = collect_identifiers(pf.matrix);
    for (const auto& [q, v] : pf.prefix) taken.insert(v);
    FreshNamer namer(std::move(taken));
    PrenexForm out = pf;
    for (int i = 0; i < k - have; ++i) {
        out.prefix.insert(out.prefix.begin(), {Quantifier::Forall, namer.fresh()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Relativization
// ---------------------------------------------------------------------------

namespace {

Formula membership_guard(const std::string& z, const std::vector<std::string>& vars,
                         const Vocabulary& vocab) {
    std::vector<Formula> cases;
    for (const auto& v : vars) {
        cases.push_back(Formula::eq(Term::var(z), Term::var(v)));
    }
    for (const auto& c : vocab.constants()) {
        cases.push_back(Formula::eq(Term::var(z), Term::constant(c)));
    }
    return disj_all(cases);
}

Formula relativize_rec(const Formula& f, const std::vector<std::string>& vars,
                       const Vocabulary& vocab) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            return f;
        case Formula::Kind::Not:
            return Formula::negation(relativize_rec(f.child(), vars, vocab));
        case Formula::Kind::And:
            return Formula::conj(relativize_rec(f.left(), vars, vocab),
                                 relativize_rec(f.right(), vars, vocab));
        case Formula::Kind::Or:
            return Formula::disj(relativize_rec(f.left(), vars, vocab),
                                 relativize_rec(f.right(), vars, vocab));
        case Formula::Kind::Implies:
            return Formula::implies(relativize_rec(f.left(), vars, vocab),
                                    relativize_rec(f.right(), vars, vocab));
        case Formula::Kind::Iff:
            return Formula::iff(relativize_rec(f.left(), vars, vocab),
                                relativize_rec(f.right(), vars, vocab));
        case Formula::Kind::Forall: {
            Formula body = relativize_rec(f.child(), vars, vocab);
            Formula guard = membership_guard(f.bound_var(), vars, vocab);
            return Formula::forall(f.bound_var(), Formula::implies(guard, body));
        }
        case Formula::Kind::Exists: {
            Formula body = relativize_rec(f.child(), vars, vocab);
            Formula guard = membership_guard(f.bound_var(), vars, vocab);
            return Formula::exists(f.bound_var(), Formula::conj(guard, body));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Formula relativize(const Formula& f, const std::vector<std::string>& vars,
                   const Vocabulary& vocab) {
    if (!is_sentence(f)) {
        throw std::invalid_argument("relativize requires a sentence");
    }
    if (vars.empty() && vocab.constants().empty()) {
        throw std::invalid_argument(
            "relativize with no variables and no constants (induced substructure could be empty)");
    }
    std::set<std::string> ids = collect_identifiers(f);
    for (const auto& v : vars) {
        if (ids.count(v)) {
            throw std::invalid_argument("relativization variable " + v + " occurs in formula");
        }
        if (vocab.has_symbol(v)) {
            throw std::invalid_argument("relativization variable " + v +
                                        " collides with a vocabulary symbol");
        }
    }
    return relativize_rec(f, vars, vocab);
}

}  // namespace preslab

#include "preslab/logic.hpp"

#include <algorithm>
#include <stdexcept>

namespace preslab {

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

Vocabulary::Vocabulary(std::string name, std::vector<RelationSymbol> relations,
                       std::vector<std::string> constants)
    : name_(std::move(name)), relations_(std::move(relations)), constants_(std::move(constants)) {
    std::set<std::string> seen;
    for (const auto& rel : relations_) {
        if (rel.arity < 1) {
            throw std::invalid_argument("relation " + rel.name + " has arity < 1");
        }
        if (!seen.insert(rel.name).second) {
            throw std::invalid_argument("duplicate symbol name: " + rel.name);
        }
    }
    for (const auto& c : constants_) {
        if (!seen.insert(c).second) {
            throw std::invalid_argument("duplicate symbol name: " + c);
        }
    }
}

std::optional<int> Vocabulary::arity_of(std::string_view relation) const {
    for (const auto& rel : relations_) {
        if (rel.name == relation) return rel.arity;
    }
    return std::nullopt;
}

bool Vocabulary::has_relation(std::string_view name) const {
    return arity_of(name).has_value();
}

bool Vocabulary::has_constant(std::string_view name) const {
    return std::find(constants_.begin(), constants_.end(), name) != constants_.end();
}

bool Vocabulary::has_symbol(std::string_view name) const {
    return has_relation(name) || has_constant(name);
}

int Vocabulary::relation_index(std::string_view name) const {
    for (size_t i = 0; i < relations_.size(); ++i) {
        if (relations_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int Vocabulary::constant_index(std::string_view name) const {
    for (size_t i = 0; i < constants_.size(); ++i) {
        if (constants_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

Formula Formula::atom(std::string relation, std::vector<Term> args) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Atom;
    node->symbol = std::move(relation);
    node->terms = std::move(args);
    return Formula(std::move(node));
}

Formula Formula::eq(Term lhs, Term rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Eq;
    node->terms = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::negation(Formula f) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Not;
    node->kids = {std::move(f)};
    return Formula(std::move(node));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::And;
    node->kids = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Or;
    node->kids = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Implies;
    node->kids = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::iff(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Iff;
    node->kids = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(node));
}

Formula Formula::forall(std::string var, Formula body) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Forall;
    node->symbol = std::move(var);
    node->kids = {std::move(body)};
    return Formula(std::move(node));
}

Formula Formula::exists(std::string var, Formula body) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Exists;
    node->symbol = std::move(var);
    node->kids = {std::move(body)};
    return Formula(std::move(node));
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (node_->kind != other.node_->kind) return false;
    if (node_->symbol != other.node_->symbol) return false;
    if (node_->terms != other.node_->terms) return false;
    if (node_->kids.size() != other.node_->kids.size()) return false;
    for (size_t i = 0; i < node_->kids.size(); ++i) {
        if (node_->kids[i] != other.node_->kids[i]) return false;
    }
    return true;
}

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) throw std::invalid_argument("conj_all of empty list");
    Formula acc = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
    return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) throw std::invalid_argument("disj_all of empty list");
    Formula acc = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) acc = Formula::disj(acc, fs[i]);
    return acc;
}

namespace {

void free_vars_rec(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            for (const auto& t : f.args()) {
                if (t.is_variable() && !bound.count(t.name)) out.insert(t.name);
            }
            break;
        case Formula::Kind::Eq:
            for (const Term* t : {&f.left_term(), &f.right_term()}) {
                if (t->is_variable() && !bound.count(t->name)) out.insert(t->name);
            }
            break;
        case Formula::Kind::Not:
            free_vars_rec(f.child(), bound, out);
            break;
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
        case Formula::Kind::Iff:
            free_vars_rec(f.left(), bound, out);
            free_vars_rec(f.right(), bound, out);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            bool inserted = bound.insert(f.bound_var()).second;
            free_vars_rec(f.child(), bound, out);
            if (inserted) bound.erase(f.bound_var());
            break;
        }
    }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars_rec(f, bound, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

namespace {
void collect_rec(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            out.insert(f.relation());
            for (const auto& t : f.args()) out.insert(t.name);
            break;
        case Formula::Kind::Eq:
            out.insert(f.left_term().name);
            out.insert(f.right_term().name);
            break;
        case Formula::Kind::Not:
            collect_rec(f.child(), out);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            out.insert(f.bound_var());
            collect_rec(f.child(), out);
            break;
        default:
            collect_rec(f.left(), out);
            collect_rec(f.right(), out);
            break;
    }
}
}  // namespace

std::set<std::string> collect_identifiers(const Formula& f) {
    std::set<std::string> out;
    collect_rec(f, out);
    return out;
}

namespace {
Formula substitute_rec(const Formula& f, const std::map<std::string, Term>& subst,
                       std::set<std::string>& shadowed) {
    auto apply_term = [&](const Term& t) -> Term {
        if (t.is_variable() && !shadowed.count(t.name)) {
            auto it = subst.find(t.name);
            if (it != subst.end()) return it->second;
        }
        return t;
    };
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            std::vector<Term> args;
            args.reserve(f.args().size());
            for (const auto& t : f.args()) args.push_back(apply_term(t));
            return Formula::atom(f.relation(), std::move(args));
        }
        case Formula::Kind::Eq:
            return Formula::eq(apply_term(f.left_term()), apply_term(f.right_term()));
        case Formula::Kind::Not:
            return Formula::negation(substitute_rec(f.child(), subst, shadowed));
        case Formula::Kind::And:
            return Formula::conj(substitute_rec(f.left(), subst, shadowed),
                                 substitute_rec(f.right(), subst, shadowed));
        case Formula::Kind::Or:
            return Formula::disj(substitute_rec(f.left(), subst, shadowed),
                                 substitute_rec(f.right(), subst, shadowed));
        case Formula::Kind::Implies:
            return Formula::implies(substitute_rec(f.left(), subst, shadowed),
                                    substitute_rec(f.right(), subst, shadowed));
        case Formula::Kind::Iff:
            return Formula::iff(substitute_rec(f.left(), subst, shadowed),
                                substitute_rec(f.right(), subst, shadowed));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            for (const auto& [from, to] : subst) {
                if (to.is_variable() && to.name == f.bound_var() && !shadowed.count(from)) {
                    throw std::invalid_argument("substitution target " + to.name +
                                                " would be captured");
                }
            }
            bool inserted = shadowed.insert(f.bound_var()).second;
            Formula body = substitute_rec(f.child(), subst, shadowed);
            if (inserted) shadowed.erase(f.bound_var());
            return f.kind() == Formula::Kind::Forall ? Formula::forall(f.bound_var(), body)
                                                     : Formula::exists(f.bound_var(), body);
        }
    }
    throw std::logic_error("unreachable");
}
}  // namespace

Formula substitute_free(const Formula& f, const std::map<std::string, Term>& subst) {
    std::set<std::string> shadowed;
    return substitute_rec(f, subst, shadowed);
}

namespace {
std::optional<std::string> wf_rec(const Formula& f, const Vocabulary& vocab,
                                  std::set<std::string>& bound) {
    auto check_term = [&](const Term& t) -> std::optional<std::string> {
        if (t.is_constant() && !vocab.has_constant(t.name)) {
            return "unknown constant " + t.name;
        }
        if (t.is_variable() && vocab.has_symbol(t.name) && !bound.count(t.name)) {
            // Free variables sharing a symbol name would not survive a
            // print/parse round trip; reject them.
            return "identifier " + t.name + " collides with a vocabulary symbol";
        }
        return std::nullopt;
    };
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            auto arity = vocab.arity_of(f.relation());
            if (!arity) return "unknown relation " + f.relation();
            if (static_cast<size_t>(*arity) != f.args().size()) {
                return "arity mismatch for " + f.relation();
            }
            for (const auto& t : f.args()) {
                if (auto err = check_term(t)) return err;
            }
            return std::nullopt;
        }
        case Formula::Kind::Eq: {
            if (auto err = check_term(f.left_term())) return err;
            return check_term(f.right_term());
        }
        case Formula::Kind::Not:
            return wf_rec(f.child(), vocab, bound);
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            bool inserted = bound.insert(f.bound_var()).second;
            auto err = wf_rec(f.child(), vocab, bound);
            if (inserted) bound.erase(f.bound_var());
            return err;
        }
        default: {
            if (auto err = wf_rec(f.left(), vocab, bound)) return err;
            return wf_rec(f.right(), vocab, bound);
        }
    }
}
}  // namespace

std::optional<std::string> well_formed_error(const Formula& f, const Vocabulary& vocab) {
    std::set<std::string> bound;
    return wf_rec(f, vocab, bound);
}

// ---------------------------------------------------------------------------
// Theories with free variables
// ---------------------------------------------------------------------------

std::pair<VocabularyPtr, Theory> close_with_constants(const Vocabulary& vocab,
                                                      const std::vector<Formula>& formulas) {
    std::set<std::string> frees;
    std::set<std::string> used;
    for (const auto& f : formulas) {
        auto fv = free_variables(f);
        frees.insert(fv.begin(), fv.end());
        auto ids = collect_identifiers(f);
        used.insert(ids.begin(), ids.end());
    }
    for (const auto& rel : vocab.relations()) used.insert(rel.name);
    for (const auto& c : vocab.constants()) used.insert(c);

    std::vector<std::string> new_constants = vocab.constants();
    std::map<std::string, Term> subst;
    int next = 1;
    for (const auto& v : frees) {
        std::string candidate = "c" + std::to_string(next++);
        while (used.count(candidate)) candidate += "_";
        used.insert(candidate);
        new_constants.push_back(candidate);
        subst[v] = Term::constant(candidate);
    }
    auto closed_vocab = std::make_shared<Vocabulary>(vocab.name(), vocab.relations(),
                                                     std::move(new_constants));
    Theory theory;
    for (const auto& f : formulas) theory.sentences.push_back(substitute_free(f, subst));
    return {closed_vocab, std::move(theory)};
}

// ---------------------------------------------------------------------------
// FiniteStructure
// ---------------------------------------------------------------------------

FiniteStructure::FiniteStructure(VocabularyPtr vocab, std::string name,
                                 std::vector<std::string> universe,
                                 std::map<std::string, std::vector<Tuple>> tables,
                                 std::map<std::string, std::string> constant_map)
    : vocab_(std::move(vocab)),
      name_(std::move(name)),
      universe_(std::move(universe)),
      raw_tables_(std::move(tables)),
      raw_constants_(std::move(constant_map)) {
    auto violate = [&](std::string msg) {
        validation_.ok = false;
        validation_.violations.push_back(std::move(msg));
    };

    if (universe_.empty()) violate("empty universe");
    {
        std::set<std::string> seen;
        for (const auto& e : universe_) {
            if (!seen.insert(e).second) violate("duplicate universe element " + e);
        }
    }
    std::sort(universe_.begin(), universe_.end());
    universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());

    auto in_universe = [&](const std::string& e) {
        return std::binary_search(universe_.begin(), universe_.end(), e);
    };

    for (const auto& [rel, tuples] : raw_tables_) {
        auto arity = vocab_->arity_of(rel);
        if (!arity) {
            violate("undeclared relation " + rel);
            continue;
        }
        for (const auto& tuple : tuples) {
            if (tuple.size() != static_cast<size_t>(*arity)) {
                violate("arity mismatch for " + rel);
                continue;
            }
            for (const auto& e : tuple) {
                if (!in_universe(e)) violate("tuple entry " + e + " not in universe (" + rel + ")");
            }
        }
    }
    for (const auto& c : vocab_->constants()) {
        auto it = raw_constants_.find(c);
        if (it == raw_constants_.end()) {
            violate("uninterpreted constant " + c);
        } else if (!in_universe(it->second)) {
            violate("constant " + c + " interpreted outside universe");
        }
    }
    for (const auto& [c, _] : raw_constants_) {
        if (!vocab_->has_constant(c)) violate("undeclared constant " + c);
    }

    if (!validation_.ok) return;

    // Compile to index form.
    tables_.resize(vocab_->relations().size());
    for (const auto& [rel, tuples] : raw_tables_) {
        int ri = vocab_->relation_index(rel);
        for (const auto& tuple : tuples) {
            IndexTuple idx;
            idx.reserve(tuple.size());
            for (const auto& e : tuple) idx.push_back(*element_index(e));
            tables_[ri].push_back(std::move(idx));
        }
    }
    for (auto& table : tables_) {
        std::sort(table.begin(), table.end());
        table.erase(std::unique(table.begin(), table.end()), table.end());
    }
    constant_values_.reserve(vocab_->constants().size());
    for (const auto& c : vocab_->constants()) {
        constant_values_.push_back(*element_index(raw_constants_.at(c)));
    }
}

std::optional<uint32_t> FiniteStructure::element_index(std::string_view name) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), name);
    if (it == universe_.end() || *it != name) return std::nullopt;
    return static_cast<uint32_t>(it - universe_.begin());
}

const std::vector<FiniteStructure::IndexTuple>& FiniteStructure::relation_tuples(
    int relation_index) const {
    if (!is_valid()) throw std::logic_error("relation_tuples on invalid structure");
    return tables_.at(relation_index);
}

bool FiniteStructure::contains_tuple(int relation_index, const IndexTuple& tuple) const {
    const auto& table = relation_tuples(relation_index);
    return std::binary_search(table.begin(), table.end(), tuple);
}

uint32_t FiniteStructure::constant_value(int constant_index) const {
    if (!is_valid()) throw std::logic_error("constant_value on invalid structure");
    return constant_values_.at(constant_index);
}

FiniteStructure FiniteStructure::with_name(std::string name) const {
    FiniteStructure copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

bool FiniteStructure::operator==(const FiniteStructure& other) const {
    if (!(*vocab_ == *other.vocab_)) return false;
    if (universe_ != other.universe_) return false;
    if (is_valid() != other.is_valid()) return false;
    if (is_valid()) {
        return tables_ == other.tables_ && constant_values_ == other.constant_values_;
    }
    return raw_tables_ == other.raw_tables_ && raw_constants_ == other.raw_constants_;
}

Validation validate_structure(const FiniteStructure& s) { return s.validation(); }

FiniteStructure expand_with_parameters(const FiniteStructure& m,
                                       const std::vector<std::string>& elems) {
    if (!m.is_valid()) throw std::invalid_argument("expand_with_parameters on invalid structure");
    for (const auto& e : elems) {
        if (!m.element_index(e)) {
            throw std::invalid_argument("element " + e + " not in universe");
        }
    }
    const Vocabulary& vocab = m.vocabulary();
    std::set<std::string> used;
    for (const auto& rel : vocab.relations()) used.insert(rel.name);
    for (const auto& c : vocab.constants()) used.insert(c);

    std::vector<std::string> constants = vocab.constants();
    std::map<std::string, std::string> constant_map = m.raw_constants();
    for (size_t i = 0; i < elems.size(); ++i) {
        std::string candidate = "c" + std::to_string(i + 1);
        while (used.count(candidate)) candidate += "_";
        used.insert(candidate);
        constants.push_back(candidate);
        constant_map[candidate] = elems[i];
    }
    auto new_vocab =
        std::make_shared<Vocabulary>(vocab.name(), vocab.relations(), std::move(constants));
    return FiniteStructure(new_vocab, m.name(), m.universe(), m.raw_tables(),
                           std::move(constant_map));
}

FiniteStructure reduct(const FiniteStructure& m, VocabularyPtr vocab) {
    if (!m.is_valid()) throw std::invalid_argument("reduct of invalid structure");
    const Vocabulary& from = m.vocabulary();
    for (const auto& rel : vocab->relations()) {
        auto arity = from.arity_of(rel.name);
        if (!arity || *arity != rel.arity) {
            throw std::invalid_argument("relation " + rel.name + " not in source vocabulary");
        }
    }
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    for (const auto& rel : vocab->relations()) {
        auto it = m.raw_tables().find(rel.name);
        if (it != m.raw_tables().end()) tables[rel.name] = it->second;
    }
    std::map<std::string, std::string> constants;
    for (const auto& c : vocab->constants()) {
        auto it = m.raw_constants().find(c);
        if (it == m.raw_constants().end()) {
            throw std::invalid_argument("constant " + c + " not in source vocabulary");
        }
        constants[c] = it->second;
    }
    return FiniteStructure(std::move(vocab), m.name(), m.universe(), std::move(tables),
                           std::move(constants));
}

}  // namespace preslab

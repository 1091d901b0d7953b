#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Shared data model: vocabularies, finite structures, formula ASTs and
// theories. Everything here is immutable after construction and safe to
// share across threads.

namespace preslab {

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

struct RelationSymbol {
    std::string name;
    int arity = 1;

    bool operator==(const RelationSymbol&) const = default;
};

/// A finite relational vocabulary: relation symbols with arities plus
/// constant symbols. Function symbols are not supported; arities must be
/// at least 1. Symbol names must be pairwise distinct across relations
/// and constants. Violations throw std::invalid_argument.
class Vocabulary {
  public:
    Vocabulary(std::string name, std::vector<RelationSymbol> relations,
               std::vector<std::string> constants);

    const std::string& name() const { return name_; }
    const std::vector<RelationSymbol>& relations() const { return relations_; }
    const std::vector<std::string>& constants() const { return constants_; }

    std::optional<int> arity_of(std::string_view relation) const;
    bool has_relation(std::string_view name) const;
    bool has_constant(std::string_view name) const;
    bool has_symbol(std::string_view name) const;

    /// Position of a relation/constant in declaration order, or -1.
    int relation_index(std::string_view name) const;
    int constant_index(std::string_view name) const;

    /// Structural equality (name, relations and constants, in order).
    bool operator==(const Vocabulary&) const = default;

  private:
    std::string name_;
    std::vector<RelationSymbol> relations_;
    std::vector<std::string> constants_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

// ---------------------------------------------------------------------------
// Terms and formulas
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind { Variable, Constant };

    Kind kind = Kind::Variable;
    std::string name;

    static Term var(std::string name) { return {Kind::Variable, std::move(name)}; }
    static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }

    bool is_variable() const { return kind == Kind::Variable; }
    bool is_constant() const { return kind == Kind::Constant; }

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

/// Immutable first-order formula AST with shared subtrees. Construct via
/// the static factories; structural equality via operator==.
class Formula {
  public:
    enum class Kind { Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists };

    static Formula atom(std::string relation, std::vector<Term> args);
    static Formula eq(Term lhs, Term rhs);
    static Formula negation(Formula f);
    static Formula conj(Formula lhs, Formula rhs);
    static Formula disj(Formula lhs, Formula rhs);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula iff(Formula lhs, Formula rhs);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);

    Kind kind() const { return node_->kind; }
    bool is_quantifier() const { return kind() == Kind::Forall || kind() == Kind::Exists; }

    /// Atom accessors.
    const std::string& relation() const { return node_->symbol; }
    const std::vector<Term>& args() const { return node_->terms; }

    /// Eq accessors.
    const Term& left_term() const { return node_->terms[0]; }
    const Term& right_term() const { return node_->terms[1]; }

    /// Not and quantifier body.
    const Formula& child() const { return node_->kids[0]; }

    /// Binary connective operands.
    const Formula& left() const { return node_->kids[0]; }
    const Formula& right() const { return node_->kids[1]; }

    /// Quantified variable name.
    const std::string& bound_var() const { return node_->symbol; }

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

  private:
    struct Node {
        Kind kind;
        std::string symbol;         // relation name or bound variable
        std::vector<Term> terms;    // atom arguments, or both sides of Eq
        std::vector<Formula> kids;  // 1 for Not/quantifiers, 2 for binaries
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Left fold of a nonempty list under And / Or.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

/// Free variables under the standard FO rules; sentences yield {}.
std::set<std::string> free_variables(const Formula& f);

bool is_sentence(const Formula& f);

/// Every identifier occurring in f: variables (free or bound), constant
/// names and relation names. Used when inventing fresh names.
std::set<std::string> collect_identifiers(const Formula& f);

/// Capture-avoiding substitution of free variable occurrences. Only
/// constant and variable targets are possible, so capture can only arise
/// from variable targets; callers must pass targets that are not bound
/// in f (checked, throws std::invalid_argument).
Formula substitute_free(const Formula& f, const std::map<std::string, Term>& subst);

/// Well-formedness of a formula over a vocabulary: every atom uses a
/// declared relation at its declared arity and every constant term is
/// declared. Returns an explanation for the first violation.
std::optional<std::string> well_formed_error(const Formula& f, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

/// A finite list of sentences.
struct Theory {
    std::vector<Formula> sentences;

    bool operator==(const Theory&) const = default;
};

/// The device for theories with free variables: replaces each free
/// variable (in lexicographic order) by a fresh constant and returns the
/// extended vocabulary together with the closed theory.
std::pair<VocabularyPtr, Theory> close_with_constants(const Vocabulary& vocab,
                                                      const std::vector<Formula>& formulas);

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

/// Partial map from variable names to universe element names.
using Assignment = std::map<std::string, std::string>;

// ---------------------------------------------------------------------------
// Finite structures
// ---------------------------------------------------------------------------

struct Validation {
    bool ok = true;
    std::vector<std::string> violations;
};

/// A finite structure over a relational vocabulary. The constructor
/// accepts arbitrary raw data so that invalid structures are representable
/// and reportable; validate_structure() explains what is wrong. All
/// semantic operations require a valid structure.
///
/// Universe elements are opaque strings with lexicographic order; the
/// stored universe is sorted and all enumeration order below derives from
/// it. When valid, relation tables are compiled to sorted tuples of
/// element indices for fast lookup.
class FiniteStructure {
  public:
    using Tuple = std::vector<std::string>;
    using IndexTuple = std::vector<uint32_t>;

    FiniteStructure(VocabularyPtr vocab, std::string name, std::vector<std::string> universe,
                    std::map<std::string, std::vector<Tuple>> tables,
                    std::map<std::string, std::string> constant_map);

    const Vocabulary& vocabulary() const { return *vocab_; }
    const VocabularyPtr& vocabulary_ptr() const { return vocab_; }
    const std::string& name() const { return name_; }

    bool is_valid() const { return validation_.ok; }
    const Validation& validation() const { return validation_; }

    /// Sorted universe (deduplicated when valid; raw order preserved in
    /// validation messages only).
    const std::vector<std::string>& universe() const { return universe_; }
    size_t size() const { return universe_.size(); }

    std::optional<uint32_t> element_index(std::string_view name) const;
    const std::string& element_name(uint32_t index) const { return universe_[index]; }

    /// Compiled relation tables, aligned with vocabulary().relations().
    /// Tuples are sorted; requires is_valid().
    const std::vector<IndexTuple>& relation_tuples(int relation_index) const;
    bool contains_tuple(int relation_index, const IndexTuple& tuple) const;

    /// Interpretation of the i-th vocabulary constant; requires is_valid().
    uint32_t constant_value(int constant_index) const;

    /// Raw data as given to the constructor (for validation reporting and
    /// printing).
    const std::map<std::string, std::vector<Tuple>>& raw_tables() const { return raw_tables_; }
    const std::map<std::string, std::string>& raw_constants() const { return raw_constants_; }

    FiniteStructure with_name(std::string name) const;

    /// Structural equality: same vocabulary (by value), universe, tables
    /// and constant interpretations. Names are labels and do not count.
    bool operator==(const FiniteStructure& other) const;

  private:
    VocabularyPtr vocab_;
    std::string name_;
    std::vector<std::string> universe_;
    std::map<std::string, std::vector<Tuple>> raw_tables_;
    std::map<std::string, std::string> raw_constants_;
    Validation validation_;

    // Compiled form, present when valid.
    std::vector<std::vector<IndexTuple>> tables_;
    std::vector<uint32_t> constant_values_;
};

/// Checks all FiniteStructure invariants; violations are data, not faults.
Validation validate_structure(const FiniteStructure& s);

/// Expands m with fresh constants c1..cr interpreted as elems. Fresh names
/// are deterministic: "c1", "c2", ... with '_' suffixed until the name is
/// unused. Elements outside the universe throw std::invalid_argument.
FiniteStructure expand_with_parameters(const FiniteStructure& m,
                                       const std::vector<std::string>& elems);

/// Reduct to a sub-vocabulary (relations and constants must be declared in
/// m's vocabulary with matching arities; throws otherwise).
FiniteStructure reduct(const FiniteStructure& m, VocabularyPtr vocab);

}  // namespace preslab

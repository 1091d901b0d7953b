#pragma once

#include <string>
#include <vector>

#include "preslab/logic.hpp"

// Normal forms and prefix-class bookkeeping.

namespace preslab {

enum class Quantifier { Forall, Exists };

enum class Polarity { Sigma, Pi };

/// Prefix class of a sentence in prenex normal form: polarity of the first
/// quantifier, alternation index n (number of maximal quantifier blocks)
/// and the length of the leading block. Quantifier-free formulas are
/// reported as n = 0, leading_count = 0, with polarity Sigma by convention.
struct PrefixClass {
    Polarity polarity = Polarity::Sigma;
    int n = 0;
    int leading_count = 0;

    bool quantifier_free() const { return n == 0; }
    bool operator==(const PrefixClass&) const = default;
};

std::string to_string(const PrefixClass& c);

struct PrenexForm {
    std::vector<std::pair<Quantifier, std::string>> prefix;
    Formula matrix;

    Formula to_formula() const;

    /// Length of the first maximal quantifier block (0 when prefix empty).
    int leading_block_length() const;

    bool operator==(const PrenexForm&) const = default;
};

/// Negation normal form: negations pushed to atoms, Implies and Iff
/// eliminated (Iff by the two-implication expansion). Logically equivalent
/// to the input.
Formula to_nnf(const Formula& f);

/// Prenex normal form. Bound variables are renamed apart deterministically
/// (v0, v1, ... in left-to-right binder order of the NNF form, skipping
/// identifiers that occur in the input); quantifiers are pulled over
/// And/Or left operand first.
PrenexForm to_prenex(const Formula& f);

/// Prefix class of f's prenex form (prenexes internally first).
PrefixClass classify_prefix(const Formula& f);

/// Prepends redundant universal quantifiers (fresh variables) so that the
/// leading block has length at least k. The prefix must be empty or start
/// with a universal quantifier.
PrenexForm pad_leading_universals(const PrenexForm& pf, int k);

/// Relativization f|_vars: guards every quantifier so that the sentence is
/// evaluated in the substructure induced by the values of vars together
/// with the vocabulary constants. f must be a sentence and vars must not
/// occur in f; vars may be empty only if the vocabulary has constants.
Formula relativize(const Formula& f, const std::vector<std::string>& vars,
                   const Vocabulary& vocab);

}  // namespace preslab

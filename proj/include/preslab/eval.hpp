#pragma once

#include <vector>

#include "preslab/logic.hpp"
#include "preslab/syntax.hpp"

// Tarskian satisfaction on finite structures, witness extraction and
// theory satisfaction. Naive recursive evaluation; quantifiers range over
// the structure's universe.

namespace preslab {

/// m |= f under asg. asg must cover the free variables of f, f must be
/// well formed over m's vocabulary and m must be valid; violations throw
/// std::invalid_argument.
bool eval(const FiniteStructure& m, const Formula& f, const Assignment& asg = {});

/// All tuples for the leading existential block of pf (length k >= 1) that
/// make the remainder of pf true in m, in lexicographic element order.
/// The enumeration is exhaustive, not first-found.
struct WitnessSet {
    PrenexForm formula;
    std::vector<std::vector<std::string>> tuples;
};

WitnessSet witnesses(const FiniteStructure& m, const PrenexForm& pf);

/// Conjunction of eval over the members; members must be sentences.
bool models_theory(const FiniteStructure& m, const Theory& t);

}  // namespace preslab

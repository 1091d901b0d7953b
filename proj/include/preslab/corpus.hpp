#pragma once

#include <vector>

#include "preslab/logic.hpp"

// Deterministic generators for the structure, sentence and theory families
// used throughout the test corpus. Generated names are stable so golden
// tests can byte-compare output.

namespace preslab {

/// Directed-graph vocabulary {E/2}, no constants.
VocabularyPtr graph_vocabulary();

/// Vocabulary with no relations and no constants.
VocabularyPtr bare_vocabulary();

/// Structure families:
///   cycle(n)            directed n-cycle over e0..e(n-1); n = 1 is a
///                       self-loop, n = 2 a mutual edge pair
///   disjoint_cycles(ls) disjoint union of cycles; component i of length
///                       ls[i] uses elements c{i}_e{j}
///   linear_order(n)     e0..e(n-1) with E interpreted as <=
///   bare_set(n)         n naked elements over the bare vocabulary
///   loop_pair           universe {a, b} with E = {(a,a)}
FiniteStructure gen_cycle(int n);
FiniteStructure gen_disjoint_cycles(const std::vector<int>& lengths);
FiniteStructure gen_linear_order(int n);
FiniteStructure gen_bare_set(int n);
FiniteStructure gen_loop_pair();

/// Sentence families over the graph vocabulary unless noted:
///   has_k_cycle(k)   some k distinct vertices form a directed k-cycle
///   no_k_cycle(k)    its negation, prenexed
///   fewer_than_k(k)  over the bare vocabulary: every model has fewer than
///                    k elements (forall x1..xk, some xi = xj; for k = 1
///                    the empty disjunction is rendered as x1 != x1)
///   domination       exists x. forall y. E(x,y)
///   out_edge         forall x. exists y. E(x,y)
///   phi_n(n)         free variable x: x lies on no cycle of length <= n
///   psi_n(n)         exists x. phi_n(x)
Formula gen_has_k_cycle(int k);
Formula gen_no_k_cycle(int k);
Formula gen_fewer_than_k(int k);
Formula gen_domination();
Formula gen_out_edge();
Formula gen_phi_n(int n);
Formula gen_psi_n(int n);

/// Theory families:
///   loop_contrast   { exists x. E(x,x), exists y. ~E(y,y) }
///   psi_prefix(m)   { psi_1 .. psi_m }
///   no_cycles(m)    { no_k_cycle(k) : 1 <= k <= m }
Theory gen_loop_contrast();
Theory gen_psi_prefix(int m);
Theory gen_no_cycles(int m);

/// Name-based dispatch used by the CLI: "cycle(3)", "loop_pair",
/// "disjoint_cycles(1,2,3)", "psi_prefix(2)", ... Throws
/// std::invalid_argument for unknown families or bad parameters.
FiniteStructure gen_structure(const std::string& family, const std::vector<int>& params);
Formula gen_sentence(const std::string& family, const std::vector<int>& params);
Theory gen_theory(const std::string& family, const std::vector<int>& params);

bool is_structure_family(const std::string& family);
bool is_sentence_family(const std::string& family);
bool is_theory_family(const std::string& family);

/// Vocabulary a named sentence/theory family is written over.
VocabularyPtr family_vocabulary(const std::string& family);

}  // namespace preslab

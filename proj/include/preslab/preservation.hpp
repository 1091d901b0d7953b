#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "preslab/eval.hpp"
#include "preslab/logic.hpp"
#include "preslab/substructure.hpp"
#include "preslab/syntax.hpp"

// Cores, covers, bounded PSC(k)/PCE(k) membership searches, the
// per-structure duality check, bounded equivalence and finite existential
// closure.
//
// Search conventions:
//  - k < 0 means the finitary bound ("k = finite"): each structure is
//    checked against k = |universe|. Over finite structures the full
//    universe is always a core, so finitary searches cannot fail; the
//    option exists for symmetry with the bounded variants.
//  - Reports always name the canonically first counterexample; results are
//    independent of the parallelism degree.

namespace preslab {

struct CoreReport {
    std::string structure_name;
    std::vector<std::string> theory_text;
    int k = 0;
    std::vector<std::vector<std::string>> cores;          // size then lex order
    std::vector<std::vector<std::string>> minimal_cores;  // inclusion-minimal cores
    bool is_psc_witness_failure = false;  // models the theory but has no core of size <= k
    double elapsed_ms = 0.0;
    bool search_complete = true;
};

struct CoverReport {
    std::string structure_name;
    std::string sentence_text;
    int k = 0;
    bool models_sentence = false;
    /// Universes of the cover members, present iff the structure is a
    /// PCE(k) counterexample for the sentence.
    std::optional<std::vector<std::vector<std::string>>> cover;
    bool complete = true;
    double elapsed_ms = 0.0;
};

struct CounterexampleReport {
    enum class Kind { Psc, Pce, Duality, Equiv };
    enum class Status { Found, NoneUpTo, BudgetExhausted };

    Kind kind = Kind::Psc;
    Status status = Status::NoneUpTo;
    std::vector<std::string> sentence_text;
    std::optional<int> k;
    SearchBudget budget;
    int bound_reached = 0;  // largest size fully scanned (or witness size)
    std::optional<FiniteStructure> witness;
    std::optional<std::vector<std::vector<std::string>>> cover;  // pce detail
    std::string detail;
    double elapsed_ms = 0.0;

    bool found() const { return status == Status::Found; }
    bool search_complete() const { return status != Status::BudgetExhausted; }
};

/// Bounded-equivalence results are counterexample reports of kind Equiv.
using EquivReport = CounterexampleReport;

/// True iff every induced substructure of m whose universe contains
/// c ∪ constants models s. Defined only for m |= s; querying a non-member
/// throws ("core undefined for non-members"). Exhaustive with early exit,
/// in substructure_universes order.
bool is_core(const FiniteStructure& m, const std::set<std::string>& c, const Theory& s);

/// All cores of size <= k_max (k_max < 0 means |universe|), by size then
/// lexicographic order, plus the inclusion-minimal ones.
CoreReport minimal_cores(const FiniteStructure& m, const Theory& s, int k_max);

/// Checks the witness-core theorem instance: every witness tuple of the
/// leading existential block forms a core. pf must be an exists^k forall*
/// prenex form and m must model it. Always true; returning false would
/// expose a defect in either the evaluator or the core checker.
bool witness_sets_are_cores(const FiniteStructure& m, const PrenexForm& pf);

/// True iff every member of r is a substructure of m and every subset of
/// m's universe of size <= k is contained in some member's universe.
bool is_k_ary_covered_extension(const FiniteStructure& m, const std::vector<FiniteStructure>& r,
                                int k);

/// The canonical cover construction: if m does not model phi, looks for an
/// N_A (first in subset order) containing each A of size <= k with
/// N_A |= phi. If every A has one, the deduplicated {N_A} universes form
/// the reported cover; otherwise no k-ary cover of m by models of phi
/// exists (any valid cover member could be shrunk to such an N_A).
CoverReport pce_counterexample_at(const Formula& phi, int k, const FiniteStructure& m);

/// Scans enumerate_structures for the first M with M |= phi that has no
/// core of size <= k.
CounterexampleReport psc_counterexample_search(VocabularyPtr vocab, const Theory& theory, int k,
                                               const SearchBudget& budget, unsigned jobs = 1);
CounterexampleReport psc_counterexample_search(VocabularyPtr vocab, const Formula& phi, int k,
                                               const SearchBudget& budget, unsigned jobs = 1);

/// Scans for the first M where pce_counterexample_at finds a cover.
CounterexampleReport pce_counterexample_search(VocabularyPtr vocab, const Formula& phi, int k,
                                               const SearchBudget& budget, unsigned jobs = 1);

/// Per-structure duality (the constructive content of the PSC/PCE duality
/// proof): [M |= phi and no <=k core] iff [~phi admits a k-ary cover of M
/// by models of ~phi]. Reports the first violating structure, or none.
CounterexampleReport duality_check(VocabularyPtr vocab, const Formula& phi, int k,
                                   const SearchBudget& budget, unsigned jobs = 1);

/// First structure (canonical order) on which f and g disagree.
EquivReport bounded_equiv(VocabularyPtr vocab, const Formula& f, const Formula& g,
                          const SearchBudget& budget, unsigned jobs = 1);

/// Decides M ⪯₁ R for finite substructure pairs via the partial-embedding
/// characterization: for every A ⊆ |M| and every set B of elements of
/// R ∖ M, the substructure of R induced by A ∪ B (∪ constants) embeds into
/// M fixing A and the constants pointwise.
bool is_existentially_closed_in(const FiniteStructure& m, const FiniteStructure& r);

}  // namespace preslab

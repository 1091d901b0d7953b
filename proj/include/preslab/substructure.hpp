#pragma once

#include <cstdint>
#include <optional>
#include <set>

#include "preslab/logic.hpp"

// Induced substructures, subset enumeration and exhaustive generation of
// all structures over a vocabulary up to a size bound. Substructure means
// induced substructure throughout: for relational-plus-constants
// vocabularies the model-theoretic substructure relation coincides with
// induced restriction on constant-containing subsets.

namespace preslab {

struct SearchBudget {
    int max_universe_size = 4;
    std::optional<double> max_seconds;  // wall clock, searches only
    bool dedup_isomorphic = true;
};

/// Restriction of m to elements ∪ constant interpretations. Throws if an
/// element is outside the universe or the result universe would be empty.
FiniteStructure induced_substructure(const FiniteStructure& m,
                                     const std::set<std::string>& elements);

/// Deterministic enumeration of all X with must_contain ∪ constants ⊆ X ⊆
/// universe, X nonempty, by size ascending then lexicographically.
class SubsetEnumerator {
  public:
    SubsetEnumerator(const FiniteStructure& m, const std::set<std::string>& must_contain);

    std::optional<std::set<std::string>> next();

    /// 2^(|universe| - |must_contain ∪ constants|), minus the empty set
    /// when the base is empty.
    uint64_t total_count() const;

  private:
    std::vector<std::string> base_;
    std::vector<std::string> free_;
    size_t take_ = 0;               // current subset size over free_
    std::vector<size_t> combo_;     // ascending indices into free_
    bool fresh_level_ = true;
    bool done_ = false;
};

/// Eager form of SubsetEnumerator, for small universes.
std::vector<std::set<std::string>> substructure_universes(const FiniteStructure& m,
                                                          const std::set<std::string>& must_contain);

/// True iff n's universe is contained in m's and n equals the induced
/// substructure of m on it (constants included). Vocabularies must match.
bool is_substructure(const FiniteStructure& n, const FiniteStructure& m);

/// All labeled structures of one size over a vocabulary, with universe
/// {e0..e(size-1)}, in a fixed canonical order: constant assignments
/// ascending (first constant most significant), then relation tables as
/// binary counters (declaration order, last relation fastest; bit i of a
/// table is the i-th tuple in lexicographic order).
class StructureSpace {
  public:
    StructureSpace(VocabularyPtr vocab, int size);

    int size() const { return size_; }

    /// Number of labeled structures, if it fits in uint64 (2^62 cap).
    std::optional<uint64_t> count() const { return count_; }

    /// Decodes the structure at a position of the canonical order.
    FiniteStructure at(uint64_t index) const;

    /// True iff the structure at index is the canonical (first-in-order)
    /// representative of its isomorphism class. Brute-force permutation
    /// minimization; size must be at most 7.
    bool canonical_at(uint64_t index) const;

    /// Builds the permutation tables canonical_at needs. Call once before
    /// querying canonical_at from multiple threads.
    void prepare_canonical() const { ensure_permutations(); }

  private:
    struct Key {
        std::vector<uint32_t> constants;
        std::vector<std::vector<uint64_t>> masks;  // per relation, little-endian words
    };
    Key decode(uint64_t index) const;
    bool key_less(const Key& a, const Key& b) const;

    VocabularyPtr vocab_;
    int size_;
    std::vector<uint64_t> tuple_counts_;                 // per relation: size^arity
    std::optional<uint64_t> count_;
    mutable std::vector<std::vector<uint32_t>> permutations_;  // built on first canonical_at
    mutable std::vector<std::vector<std::vector<uint32_t>>> tuple_maps_;  // [perm][relation]
    void ensure_permutations() const;
};

/// Deterministic iterator over every structure with universe sizes
/// 1..budget.max_universe_size; honors budget.dedup_isomorphic. The time
/// budget is ignored here (it belongs to searches).
class StructureEnumerator {
  public:
    StructureEnumerator(VocabularyPtr vocab, SearchBudget budget);

    std::optional<FiniteStructure> next();

  private:
    VocabularyPtr vocab_;
    SearchBudget budget_;
    int current_size_ = 0;
    uint64_t index_ = 0;
    std::optional<StructureSpace> space_;
    bool advance_size();
};

/// Eager convenience over StructureEnumerator; intended for small budgets.
std::vector<FiniteStructure> enumerate_structures(VocabularyPtr vocab,
                                                  const SearchBudget& budget);

}  // namespace preslab

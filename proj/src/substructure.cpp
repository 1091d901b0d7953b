#include "preslab/substructure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace preslab {

// ---------------------------------------------------------------------------
// Induced substructures
// ---------------------------------------------------------------------------

FiniteStructure induced_substructure(const FiniteStructure& m,
                                     const std::set<std::string>& elements) {
    if (!m.is_valid()) throw std::invalid_argument("induced_substructure on invalid structure");
    std::set<std::string> keep = elements;
    for (const auto& e : elements) {
        if (!m.element_index(e)) throw std::invalid_argument("element " + e + " not in universe");
    }
    const Vocabulary& vocab = m.vocabulary();
    for (size_t c = 0; c < vocab.constants().size(); ++c) {
        keep.insert(m.element_name(m.constant_value(static_cast<int>(c))));
    }
    if (keep.empty()) throw std::invalid_argument("empty result universe");

    std::vector<std::string> universe(keep.begin(), keep.end());
    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    for (size_t r = 0; r < vocab.relations().size(); ++r) {
        std::vector<FiniteStructure::Tuple> kept;
        for (const auto& tuple : m.relation_tuples(static_cast<int>(r))) {
            bool inside = std::all_of(tuple.begin(), tuple.end(), [&](uint32_t idx) {
                return keep.count(m.element_name(idx)) != 0;
            });
            if (!inside) continue;
            FiniteStructure::Tuple named;
            named.reserve(tuple.size());
            for (uint32_t idx : tuple) named.push_back(m.element_name(idx));
            kept.push_back(std::move(named));
        }
        tables[vocab.relations()[r].name] = std::move(kept);
    }
    std::map<std::string, std::string> constants;
    for (size_t c = 0; c < vocab.constants().size(); ++c) {
        constants[vocab.constants()[c]] = m.element_name(m.constant_value(static_cast<int>(c)));
    }
    return FiniteStructure(m.vocabulary_ptr(), m.name(), std::move(universe), std::move(tables),
                           std::move(constants));
}

// ---------------------------------------------------------------------------
// SubsetEnumerator
// ---------------------------------------------------------------------------

SubsetEnumerator::SubsetEnumerator(const FiniteStructure& m,
                                   const std::set<std::string>& must_contain) {
    if (!m.is_valid()) throw std::invalid_argument("subset enumeration on invalid structure");
    std::set<std::string> base = must_contain;
    for (const auto& e : must_contain) {
        if (!m.element_index(e)) throw std::invalid_argument("element " + e + " not in universe");
    }
    const Vocabulary& vocab = m.vocabulary();
    for (size_t c = 0; c < vocab.constants().size(); ++c) {
        base.insert(m.element_name(m.constant_value(static_cast<int>(c))));
    }
    base_.assign(base.begin(), base.end());
    for (const auto& e : m.universe()) {
        if (!base.count(e)) free_.push_back(e);
    }
    take_ = base_.empty() ? 1 : 0;  // never yield the empty set
    if (take_ > free_.size()) done_ = true;
}

uint64_t SubsetEnumerator::total_count() const {
    if (free_.size() >= 63) throw std::invalid_argument("subset space too large to count");
    uint64_t total = 1ull << free_.size();
    if (base_.empty()) --total;
    return total;
}

std::optional<std::set<std::string>> SubsetEnumerator::next() {
    while (!done_) {
        if (fresh_level_) {
            combo_.resize(take_);
            std::iota(combo_.begin(), combo_.end(), 0);
            fresh_level_ = false;
        } else {
            // Next combination of take_ indices out of free_, lexicographic.
            size_t i = take_;
            while (i > 0) {
                --i;
                if (combo_[i] + (take_ - i) < free_.size()) {
                    ++combo_[i];
                    for (size_t j = i + 1; j < take_; ++j) combo_[j] = combo_[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    ++take_;
                    fresh_level_ = true;
                    if (take_ > free_.size()) done_ = true;
                    break;
                }
            }
            if (take_ == 0) {  // single empty combination was already yielded
                ++take_;
                fresh_level_ = true;
                if (take_ > free_.size()) done_ = true;
            }
            if (fresh_level_ || done_) continue;
        }
        std::set<std::string> out(base_.begin(), base_.end());
        for (size_t idx : combo_) out.insert(free_[idx]);
        return out;
    }
    return std::nullopt;
}

std::vector<std::set<std::string>> substructure_universes(const FiniteStructure& m,
                                                          const std::set<std::string>& must_contain) {
    SubsetEnumerator it(m, must_contain);
    std::vector<std::set<std::string>> out;
    while (auto x = it.next()) out.push_back(std::move(*x));
    return out;
}

bool is_substructure(const FiniteStructure& n, const FiniteStructure& m) {
    if (!n.is_valid() || !m.is_valid()) {
        throw std::invalid_argument("is_substructure on invalid structure");
    }
    if (!(n.vocabulary() == m.vocabulary())) {
        throw std::invalid_argument("vocabulary mismatch");
    }
    for (const auto& e : n.universe()) {
        if (!m.element_index(e)) return false;
    }
    std::set<std::string> x(n.universe().begin(), n.universe().end());
    return n == induced_substructure(m, x);
}

// ---------------------------------------------------------------------------
// StructureSpace
// ---------------------------------------------------------------------------

namespace {

uint64_t ipow(uint64_t base, int exp) {
    uint64_t out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

std::string element_name_for(int i) { return "e" + std::to_string(i); }

}  // namespace

StructureSpace::StructureSpace(VocabularyPtr vocab, int size)
    : vocab_(std::move(vocab)), size_(size) {
    if (size_ < 1) throw std::invalid_argument("structure size must be at least 1");
    if (size_ > 10) {
        // Single-digit element names keep lexicographic and numeric order
        // aligned; larger spaces are unenumerable anyway.
        throw std::invalid_argument("structure enumeration capped at size 10");
    }
    using u128 = unsigned __int128;
    const u128 cap = u128{1} << 62;
    u128 count = 1;
    bool fits = true;
    for (const auto& rel : vocab_->relations()) {
        double bits_est = rel.arity * std::log2(static_cast<double>(size_));
        if (bits_est > 26) throw std::invalid_argument("relation table space too large");
        uint64_t tuples = ipow(static_cast<uint64_t>(size_), rel.arity);
        tuple_counts_.push_back(tuples);
        if (tuples >= 62 || !fits) {
            fits = false;
        } else {
            count *= (u128{1} << tuples);
            if (count > cap) fits = false;
        }
    }
    for (size_t c = 0; c < vocab_->constants().size() && fits; ++c) {
        count *= static_cast<unsigned>(size_);
        if (count > cap) fits = false;
    }
    if (fits) count_ = static_cast<uint64_t>(count);
}

StructureSpace::Key StructureSpace::decode(uint64_t index) const {
    if (!count_) throw std::invalid_argument("structure space too large for indexed access");
    Key key;
    key.masks.resize(tuple_counts_.size());
    uint64_t rest = index;
    for (size_t r = tuple_counts_.size(); r-- > 0;) {
        uint64_t bits = tuple_counts_[r];
        size_t words = static_cast<size_t>((bits + 63) / 64);
        key.masks[r].assign(words, 0);
        if (bits >= 64) {
            key.masks[r][0] = rest;
            rest = 0;
        } else {
            key.masks[r][0] = rest & ((1ull << bits) - 1);
            rest >>= bits;
        }
    }
    size_t nconst = vocab_->constants().size();
    key.constants.assign(nconst, 0);
    for (size_t c = nconst; c-- > 0;) {
        key.constants[c] = static_cast<uint32_t>(rest % size_);
        rest /= size_;
    }
    return key;
}

bool StructureSpace::key_less(const Key& a, const Key& b) const {
    if (a.constants != b.constants) return a.constants < b.constants;
    for (size_t r = 0; r < a.masks.size(); ++r) {
        // Numeric comparison, high word first.
        for (size_t w = a.masks[r].size(); w-- > 0;) {
            if (a.masks[r][w] != b.masks[r][w]) return a.masks[r][w] < b.masks[r][w];
        }
    }
    return false;
}

FiniteStructure StructureSpace::at(uint64_t index) const {
    Key key = decode(index);
    std::vector<std::string> universe;
    for (int i = 0; i < size_; ++i) universe.push_back(element_name_for(i));

    std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
    for (size_t r = 0; r < vocab_->relations().size(); ++r) {
        const auto& rel = vocab_->relations()[r];
        std::vector<FiniteStructure::Tuple> tuples;
        for (uint64_t t = 0; t < tuple_counts_[r]; ++t) {
            if (!(key.masks[r][t / 64] >> (t % 64) & 1)) continue;
            FiniteStructure::Tuple tuple(rel.arity);
            uint64_t code = t;
            for (int pos = rel.arity; pos-- > 0;) {
                tuple[pos] = element_name_for(static_cast<int>(code % size_));
                code /= size_;
            }
            tuples.push_back(std::move(tuple));
        }
        tables[rel.name] = std::move(tuples);
    }
    std::map<std::string, std::string> constants;
    for (size_t c = 0; c < vocab_->constants().size(); ++c) {
        constants[vocab_->constants()[c]] = element_name_for(static_cast<int>(key.constants[c]));
    }
    return FiniteStructure(vocab_, "g" + std::to_string(size_) + "_" + std::to_string(index),
                           std::move(universe), std::move(tables), std::move(constants));
}

void StructureSpace::ensure_permutations() const {
    if (!permutations_.empty()) return;
    std::vector<uint32_t> perm(size_);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        permutations_.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // tuple_maps_[p][r][t] = index of the componentwise image of tuple t.
    tuple_maps_.resize(permutations_.size());
    for (size_t p = 0; p < permutations_.size(); ++p) {
        tuple_maps_[p].resize(vocab_->relations().size());
        for (size_t r = 0; r < vocab_->relations().size(); ++r) {
            int arity = vocab_->relations()[r].arity;
            uint64_t total = tuple_counts_[r];
            auto& map = tuple_maps_[p][r];
            map.resize(total);
            for (uint64_t t = 0; t < total; ++t) {
                uint64_t code = t;
                uint64_t image = 0;
                uint64_t factor = 1;
                for (int pos = 0; pos < arity; ++pos) factor *= size_;
                for (int pos = 0; pos < arity; ++pos) {
                    factor /= size_;
                    uint64_t digit = (code / factor) % size_;
                    image = image * size_ + permutations_[p][digit];
                }
                map[t] = static_cast<uint32_t>(image);
            }
        }
    }
}

bool StructureSpace::canonical_at(uint64_t index) const {
    if (size_ > 7) throw std::invalid_argument("isomorphism dedup supported up to size 7");
    ensure_permutations();
    Key key = decode(index);
    Key image;
    image.masks.resize(key.masks.size());
    for (size_t p = 1; p < permutations_.size(); ++p) {  // skip identity
        const auto& perm = permutations_[p];
        image.constants.resize(key.constants.size());
        for (size_t c = 0; c < key.constants.size(); ++c) {
            image.constants[c] = perm[key.constants[c]];
        }
        for (size_t r = 0; r < key.masks.size(); ++r) {
            image.masks[r].assign(key.masks[r].size(), 0);
            const auto& map = tuple_maps_[p][r];
            for (uint64_t t = 0; t < tuple_counts_[r]; ++t) {
                if (key.masks[r][t / 64] >> (t % 64) & 1) {
                    uint32_t img = map[t];
                    image.masks[r][img / 64] |= 1ull << (img % 64);
                }
            }
        }
        if (key_less(image, key)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// StructureEnumerator
// ---------------------------------------------------------------------------

StructureEnumerator::StructureEnumerator(VocabularyPtr vocab, SearchBudget budget)
    : vocab_(std::move(vocab)), budget_(budget) {
    if (budget_.max_universe_size < 1) {
        throw std::invalid_argument("max_universe_size must be at least 1");
    }
}

bool StructureEnumerator::advance_size() {
    if (current_size_ >= budget_.max_universe_size) return false;
    ++current_size_;
    space_.emplace(vocab_, current_size_);
    if (!space_->count()) {
        throw std::invalid_argument("structure space too large to enumerate");
    }
    index_ = 0;
    return true;
}

std::optional<FiniteStructure> StructureEnumerator::next() {
    while (true) {
        if (!space_ || index_ >= *space_->count()) {
            if (!advance_size()) return std::nullopt;
            continue;
        }
        uint64_t index = index_++;
        if (budget_.dedup_isomorphic && !space_->canonical_at(index)) continue;
        return space_->at(index);
    }
}

std::vector<FiniteStructure> enumerate_structures(VocabularyPtr vocab,
                                                  const SearchBudget& budget) {
    StructureEnumerator it(std::move(vocab), budget);
    std::vector<FiniteStructure> out;
    while (auto s = it.next()) out.push_back(std::move(*s));
    return out;
}

}  // namespace preslab

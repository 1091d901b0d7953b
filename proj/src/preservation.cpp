#include "preslab/preservation.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <stdexcept>
#include <thread>

#include "preslab/parse.hpp"

namespace preslab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int normalized_k(int k, size_t universe_size) {
    if (k < 0) return static_cast<int>(universe_size);
    return std::min<int>(k, static_cast<int>(universe_size));
}

// Calls fn for every subset of {0..n-1} with at most k elements, by size
// ascending then lexicographically; stops early when fn returns false.
bool for_each_subset_upto(size_t n, int k, const std::function<bool(const std::vector<size_t>&)>& fn) {
    std::vector<size_t> combo;
    for (int take = 0; take <= k && take <= static_cast<int>(n); ++take) {
        combo.resize(take);
        for (int i = 0; i < take; ++i) combo[i] = i;
        while (true) {
            if (!fn(combo)) return false;
            int i = take;
            bool advanced = false;
            while (i-- > 0) {
                if (combo[i] + (take - i) < n) {
                    ++combo[i];
                    for (int j = i + 1; j < take; ++j) combo[j] = combo[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
    return true;
}

std::set<std::string> names_for(const FiniteStructure& m, const std::vector<size_t>& indices) {
    std::set<std::string> out;
    for (size_t i : indices) out.insert(m.element_name(static_cast<uint32_t>(i)));
    return out;
}

void require_models(const FiniteStructure& m, const Theory& s) {
    if (!models_theory(m, s)) {
        throw std::invalid_argument("core undefined for non-members");
    }
}

// is_core without the membership precheck, for internal loops.
bool is_core_unchecked(const FiniteStructure& m, const std::set<std::string>& c, const Theory& s) {
    SubsetEnumerator it(m, c);
    while (auto x = it.next()) {
        if (!models_theory(induced_substructure(m, *x), s)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Core table: truth of a theory on every constant-closed nonempty subset,
// folded into core_ok[mask] = "every X ⊇ mask (∪ constants) models s" via a
// superset-AND sweep. Usable when the universe fits in 20 bits.
// ---------------------------------------------------------------------------

struct CoreTable {
    uint32_t consts_mask = 0;
    std::vector<char> core_ok;

    bool is_core_mask(uint32_t c_mask) const { return core_ok[c_mask | consts_mask] != 0; }
};

std::optional<CoreTable> build_core_table(const FiniteStructure& m, const Theory& s) {
    size_t n = m.size();
    if (n > 20) return std::nullopt;
    uint32_t full = static_cast<uint32_t>((1ull << n) - 1);

    CoreTable table;
    for (size_t c = 0; c < m.vocabulary().constants().size(); ++c) {
        table.consts_mask |= 1u << m.constant_value(static_cast<int>(c));
    }

    // sat[X] for valid X; skipped masks stay true and never affect a valid
    // query (supersets of a constant-closed mask are constant-closed, and
    // the empty mask is excluded from the quantification by design).
    std::vector<char> sat(full + 1, 1);
    for (uint32_t mask = 1; mask <= full; ++mask) {
        if ((mask & table.consts_mask) != table.consts_mask) continue;
        std::set<std::string> names;
        for (size_t b = 0; b < n; ++b) {
            if (mask >> b & 1) names.insert(m.element_name(static_cast<uint32_t>(b)));
        }
        sat[mask] = models_theory(induced_substructure(m, names), s) ? 1 : 0;
    }

    table.core_ok = std::move(sat);
    for (size_t b = 0; b < n; ++b) {
        for (uint32_t mask = 0; mask <= full; ++mask) {
            if (!(mask >> b & 1)) {
                table.core_ok[mask] =
                    table.core_ok[mask] && table.core_ok[mask | (1u << b)];
            }
        }
    }
    return table;
}

uint32_t mask_of(const std::vector<size_t>& indices) {
    uint32_t mask = 0;
    for (size_t i : indices) mask |= 1u << i;
    return mask;
}

// Membership test used by searches; assumes m |= s.
bool has_core_within(const FiniteStructure& m, const Theory& s, int k) {
    int kk = normalized_k(k, m.size());
    if (auto table = build_core_table(m, s)) {
        bool found = false;
        for_each_subset_upto(m.size(), kk, [&](const std::vector<size_t>& combo) {
            if (table->is_core_mask(mask_of(combo))) {
                found = true;
                return false;
            }
            return true;
        });
        return found;
    }
    bool found = false;
    for_each_subset_upto(m.size(), kk, [&](const std::vector<size_t>& combo) {
        if (is_core_unchecked(m, names_for(m, combo), s)) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

std::vector<std::string> printed(const Theory& s) {
    std::vector<std::string> out;
    out.reserve(s.sentences.size());
    for (const auto& f : s.sentences) out.push_back(print_formula(f));
    return out;
}

void check_sentence_over(const Formula& phi, const Vocabulary& vocab) {
    if (!is_sentence(phi)) throw std::invalid_argument("expected a sentence");
    if (auto err = well_formed_error(phi, vocab)) {
        throw std::invalid_argument("vocabulary mismatch: " + *err);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Cores
// ---------------------------------------------------------------------------

bool is_core(const FiniteStructure& m, const std::set<std::string>& c, const Theory& s) {
    for (const auto& e : c) {
        if (!m.element_index(e)) throw std::invalid_argument("element " + e + " not in universe");
    }
    require_models(m, s);
    return is_core_unchecked(m, c, s);
}

CoreReport minimal_cores(const FiniteStructure& m, const Theory& s, int k_max) {
    auto start = Clock::now();
    require_models(m, s);

    CoreReport report;
    report.structure_name = m.name();
    report.theory_text = printed(s);
    report.k = k_max;

    int kk = normalized_k(k_max, m.size());
    auto table = build_core_table(m, s);

    std::vector<std::set<std::string>> core_sets;
    for_each_subset_upto(m.size(), kk, [&](const std::vector<size_t>& combo) {
        bool core = table ? table->is_core_mask(mask_of(combo))
                          : is_core_unchecked(m, names_for(m, combo), s);
        if (core) core_sets.push_back(names_for(m, combo));
        return true;
    });

    for (const auto& c : core_sets) {
        report.cores.emplace_back(c.begin(), c.end());
    }
    for (size_t i = 0; i < core_sets.size(); ++i) {
        bool minimal = true;
        for (size_t j = 0; j < core_sets.size() && minimal; ++j) {
            if (i != j && core_sets[j].size() < core_sets[i].size() &&
                std::includes(core_sets[i].begin(), core_sets[i].end(), core_sets[j].begin(),
                              core_sets[j].end())) {
                minimal = false;
            }
        }
        if (minimal) report.minimal_cores.push_back(report.cores[i]);
    }
    report.is_psc_witness_failure = report.cores.empty();
    report.elapsed_ms = ms_since(start);
    return report;
}

bool witness_sets_are_cores(const FiniteStructure& m, const PrenexForm& pf) {
    int lead = pf.leading_block_length();
    if (lead == 0 || pf.prefix[0].first != Quantifier::Exists) {
        throw std::invalid_argument("prefix does not start with an existential block");
    }
    for (size_t i = lead; i < pf.prefix.size(); ++i) {
        if (pf.prefix[i].first != Quantifier::Forall) {
            throw std::invalid_argument("not an exists^k forall* prenex form");
        }
    }
    Theory s{{pf.to_formula()}};
    require_models(m, s);

    WitnessSet w = witnesses(m, pf);
    for (const auto& tuple : w.tuples) {
        std::set<std::string> c(tuple.begin(), tuple.end());
        if (!is_core_unchecked(m, c, s)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Covers
// ---------------------------------------------------------------------------

bool is_k_ary_covered_extension(const FiniteStructure& m, const std::vector<FiniteStructure>& r,
                                int k) {
    if (r.empty()) throw std::invalid_argument("cover collection is empty");
    for (const auto& n : r) {
        if (!is_substructure(n, m)) return false;
    }
    std::vector<std::set<std::string>> member_universes;
    member_universes.reserve(r.size());
    for (const auto& n : r) {
        member_universes.emplace_back(n.universe().begin(), n.universe().end());
    }
    int kk = normalized_k(k, m.size());
    return for_each_subset_upto(m.size(), kk, [&](const std::vector<size_t>& combo) {
        for (const auto& u : member_universes) {
            bool inside = std::all_of(combo.begin(), combo.end(), [&](size_t i) {
                return u.count(m.element_name(static_cast<uint32_t>(i))) != 0;
            });
            if (inside) return true;  // this subset is covered, move on
        }
        return false;  // uncovered subset found
    });
}

CoverReport pce_counterexample_at(const Formula& phi, int k, const FiniteStructure& m) {
    auto start = Clock::now();
    check_sentence_over(phi, m.vocabulary());

    CoverReport report;
    report.structure_name = m.name();
    report.sentence_text = print_formula(phi);
    report.k = k;
    report.models_sentence = eval(m, phi);
    if (report.models_sentence) {
        report.elapsed_ms = ms_since(start);
        return report;
    }

    int kk = normalized_k(k, m.size());
    std::vector<std::vector<std::string>> members;
    bool all_found = for_each_subset_upto(m.size(), kk, [&](const std::vector<size_t>& combo) {
        SubsetEnumerator it(m, names_for(m, combo));
        while (auto x = it.next()) {
            if (eval(induced_substructure(m, *x), phi)) {
                members.emplace_back(x->begin(), x->end());
                return true;
            }
        }
        return false;  // no N_A for this A: no cover exists at m
    });
    if (all_found) {
        std::sort(members.begin(), members.end(),
                  [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
                      if (a.size() != b.size()) return a.size() < b.size();
                      return a < b;
                  });
        members.erase(std::unique(members.begin(), members.end()), members.end());
        report.cover = std::move(members);
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

// ---------------------------------------------------------------------------
// Bounded searches
// ---------------------------------------------------------------------------

namespace {

struct ScanResult {
    CounterexampleReport::Status status = CounterexampleReport::Status::NoneUpTo;
    int bound_reached = 0;
    std::optional<FiniteStructure> witness;
};

template <typename Pred>
ScanResult scan_structures(const VocabularyPtr& vocab, const SearchBudget& budget, unsigned jobs,
                           const Pred& pred) {
    if (budget.max_universe_size < 1) {
        throw std::invalid_argument("max_universe_size must be at least 1");
    }
    jobs = std::max(1u, jobs);
    auto start = Clock::now();
    auto expired = [&] {
        return budget.max_seconds &&
               std::chrono::duration<double>(Clock::now() - start).count() > *budget.max_seconds;
    };

    for (int size = 1; size <= budget.max_universe_size; ++size) {
        if (expired()) {
            return {CounterexampleReport::Status::BudgetExhausted, size - 1, std::nullopt};
        }
        StructureSpace space(vocab, size);
        if (!space.count()) throw std::invalid_argument("search space too large");
        if (budget.dedup_isomorphic) space.prepare_canonical();
        uint64_t total = *space.count();
        uint64_t chunk = std::clamp<uint64_t>(total / (jobs * 4) + 1, 1, 4096);

        uint64_t pos = 0;
        while (pos < total) {
            if (expired()) {
                return {CounterexampleReport::Status::BudgetExhausted, size - 1, std::nullopt};
            }
            // One wave of up to `jobs` consecutive chunks. Workers report
            // the first hit inside their chunk; the wave minimum is the
            // canonically first hit overall, independent of scheduling.
            std::vector<std::pair<uint64_t, uint64_t>> ranges;
            for (unsigned j = 0; j < jobs && pos < total; ++j) {
                uint64_t end = std::min(total, pos + chunk);
                ranges.emplace_back(pos, end);
                pos = end;
            }
            std::vector<std::optional<uint64_t>> hits(ranges.size());
            std::vector<std::exception_ptr> errors(ranges.size());
            auto work = [&](size_t w) {
                try {
                    for (uint64_t i = ranges[w].first; i < ranges[w].second; ++i) {
                        if (budget.dedup_isomorphic && !space.canonical_at(i)) continue;
                        if (pred(space.at(i))) {
                            hits[w] = i;
                            return;
                        }
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            };
            if (ranges.size() == 1) {
                work(0);
            } else {
                std::vector<std::thread> threads;
                threads.reserve(ranges.size());
                for (size_t w = 0; w < ranges.size(); ++w) threads.emplace_back(work, w);
                for (auto& t : threads) t.join();
            }
            for (auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
            std::optional<uint64_t> best;
            for (const auto& h : hits) {
                if (h && (!best || *h < *best)) best = *h;
            }
            if (best) {
                return {CounterexampleReport::Status::Found, size, space.at(*best)};
            }
        }
    }
    return {CounterexampleReport::Status::NoneUpTo, budget.max_universe_size, std::nullopt};
}

CounterexampleReport make_report(CounterexampleReport::Kind kind,
                                 std::vector<std::string> sentence_text, std::optional<int> k,
                                 const SearchBudget& budget, const ScanResult& scan,
                                 double elapsed_ms) {
    CounterexampleReport report;
    report.kind = kind;
    report.status = scan.status;
    report.sentence_text = std::move(sentence_text);
    report.k = k;
    report.budget = budget;
    report.bound_reached = scan.bound_reached;
    report.witness = scan.witness;
    report.elapsed_ms = elapsed_ms;
    return report;
}

}  // namespace

CounterexampleReport psc_counterexample_search(VocabularyPtr vocab, const Theory& theory, int k,
                                               const SearchBudget& budget, unsigned jobs) {
    auto start = Clock::now();
    for (const auto& s : theory.sentences) check_sentence_over(s, *vocab);

    auto pred = [&](const FiniteStructure& m) {
        return models_theory(m, theory) && !has_core_within(m, theory, k);
    };
    ScanResult scan = scan_structures(vocab, budget, jobs, pred);
    if (scan.witness) {
        // Re-verify through the definitional route before reporting.
        bool verified = models_theory(*scan.witness, theory);
        if (verified) {
            int kk = normalized_k(k, scan.witness->size());
            for_each_subset_upto(scan.witness->size(), kk, [&](const std::vector<size_t>& combo) {
                if (is_core_unchecked(*scan.witness, names_for(*scan.witness, combo), theory)) {
                    verified = false;
                    return false;
                }
                return true;
            });
        }
        if (!verified) {
            throw std::logic_error("psc search result failed re-verification");
        }
    }
    auto report = make_report(CounterexampleReport::Kind::Psc, printed(theory), k, budget, scan,
                              ms_since(start));
    if (report.witness) report.witness = report.witness->with_name("counterexample");
    return report;
}

CounterexampleReport psc_counterexample_search(VocabularyPtr vocab, const Formula& phi, int k,
                                               const SearchBudget& budget, unsigned jobs) {
    return psc_counterexample_search(std::move(vocab), Theory{{phi}}, k, budget, jobs);
}

CounterexampleReport pce_counterexample_search(VocabularyPtr vocab, const Formula& phi, int k,
                                               const SearchBudget& budget, unsigned jobs) {
    auto start = Clock::now();
    check_sentence_over(phi, *vocab);

    auto pred = [&](const FiniteStructure& m) {
        return pce_counterexample_at(phi, k, m).cover.has_value();
    };
    ScanResult scan = scan_structures(vocab, budget, jobs, pred);
    auto report = make_report(CounterexampleReport::Kind::Pce, {print_formula(phi)}, k, budget,
                              scan, 0.0);
    if (report.witness) {
        report.witness = report.witness->with_name("counterexample");
        CoverReport at = pce_counterexample_at(phi, k, *report.witness);
        if (!at.cover) {
            throw std::logic_error("pce search result failed re-verification");
        }
        report.cover = at.cover;
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

CounterexampleReport duality_check(VocabularyPtr vocab, const Formula& phi, int k,
                                   const SearchBudget& budget, unsigned jobs) {
    auto start = Clock::now();
    check_sentence_over(phi, *vocab);
    Formula negated = Formula::negation(phi);
    Theory phi_theory{{phi}};

    auto pred = [&](const FiniteStructure& m) {
        bool lacks_core = eval(m, phi) && !has_core_within(m, phi_theory, k);
        bool complement_covered = pce_counterexample_at(negated, k, m).cover.has_value();
        return lacks_core != complement_covered;
    };
    ScanResult scan = scan_structures(vocab, budget, jobs, pred);
    auto report = make_report(CounterexampleReport::Kind::Duality, {print_formula(phi)}, k,
                              budget, scan, 0.0);
    if (report.witness) {
        report.witness = report.witness->with_name("violation");
        bool lacks_core =
            eval(*report.witness, phi) && !has_core_within(*report.witness, phi_theory, k);
        report.detail = lacks_core
                            ? "structure models the sentence without a small core, yet the "
                              "negation admits no cover"
                            : "negation admits a cover, yet the structure has a small core or "
                              "fails the sentence";
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

EquivReport bounded_equiv(VocabularyPtr vocab, const Formula& f, const Formula& g,
                          const SearchBudget& budget, unsigned jobs) {
    auto start = Clock::now();
    check_sentence_over(f, *vocab);
    check_sentence_over(g, *vocab);

    auto pred = [&](const FiniteStructure& m) { return eval(m, f) != eval(m, g); };
    ScanResult scan = scan_structures(vocab, budget, jobs, pred);
    auto report = make_report(CounterexampleReport::Kind::Equiv,
                              {print_formula(f), print_formula(g)}, std::nullopt, budget, scan,
                              0.0);
    if (report.witness) {
        report.witness = report.witness->with_name("separator");
        report.detail = eval(*report.witness, f) ? "first sentence true, second false"
                                                 : "first sentence false, second true";
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

// ---------------------------------------------------------------------------
// Existential closure
// ---------------------------------------------------------------------------

namespace {

// Searches for an injective map of `movable` into m avoiding `fixed` such
// that membership of every tuple over n's universe is preserved exactly.
bool embedding_exists(const FiniteStructure& n, const FiniteStructure& m,
                      const std::vector<std::string>& movable,
                      std::map<std::string, std::string>& image) {
    if (movable.empty()) {
        const Vocabulary& vocab = n.vocabulary();
        auto mapped = [&](uint32_t idx) -> uint32_t {
            const std::string& name = n.element_name(idx);
            auto it = image.find(name);
            const std::string& target = it == image.end() ? name : it->second;
            return *m.element_index(target);
        };
        size_t universe = n.size();
        for (size_t r = 0; r < vocab.relations().size(); ++r) {
            int arity = vocab.relations()[r].arity;
            std::vector<uint32_t> tuple(arity, 0);
            while (true) {
                FiniteStructure::IndexTuple target(arity);
                for (int i = 0; i < arity; ++i) target[i] = mapped(tuple[i]);
                bool in_n = n.contains_tuple(static_cast<int>(r), tuple);
                if (in_n != m.contains_tuple(static_cast<int>(r), target)) return false;
                int pos = arity;
                while (pos-- > 0) {
                    if (++tuple[pos] < universe) break;
                    tuple[pos] = 0;
                }
                if (pos < 0) break;
            }
        }
        return true;
    }
    std::vector<std::string> rest(movable.begin() + 1, movable.end());
    std::set<std::string> taken;
    for (const auto& [from, to] : image) taken.insert(to);
    for (const auto& candidate : m.universe()) {
        if (n.element_index(candidate)) continue;  // reserved for the fixed part
        if (taken.count(candidate)) continue;
        image[movable.front()] = candidate;
        if (embedding_exists(n, m, rest, image)) {
            image.erase(movable.front());
            return true;
        }
        image.erase(movable.front());
    }
    return false;
}

}  // namespace

bool is_existentially_closed_in(const FiniteStructure& m, const FiniteStructure& r) {
    if (!is_substructure(m, r)) {
        throw std::invalid_argument("not a substructure pair");
    }
    if (m.size() == r.size()) return true;  // equal structures

    std::vector<std::string> outside;
    for (const auto& e : r.universe()) {
        if (!m.element_index(e)) outside.push_back(e);
    }

    // Every A ⊆ |M| and nonempty B ⊆ |R| ∖ |M|.
    bool ok = for_each_subset_upto(m.size(), static_cast<int>(m.size()),
                                   [&](const std::vector<size_t>& a_combo) {
        std::set<std::string> a_names = names_for(m, a_combo);
        return for_each_subset_upto(outside.size(), static_cast<int>(outside.size()),
                                    [&](const std::vector<size_t>& b_combo) {
            if (b_combo.empty()) return true;  // identity embedding
            std::set<std::string> selected = a_names;
            for (size_t i : b_combo) selected.insert(outside[i]);
            FiniteStructure induced = induced_substructure(r, selected);

            std::vector<std::string> movable;
            for (const auto& e : induced.universe()) {
                if (!m.element_index(e)) movable.push_back(e);
            }
            std::map<std::string, std::string> image;
            return embedding_exists(induced, m, movable, image);
        });
    });
    return ok;
}

}  // namespace preslab

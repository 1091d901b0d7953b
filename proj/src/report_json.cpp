#include "preslab/report_json.hpp"

#include <sstream>

#include "json.hpp"
#include "preslab/parse.hpp"

namespace preslab {

namespace {

using Json = nlohmann::ordered_json;

Json k_value(int k) {
    if (k < 0) return "finite";
    return k;
}

std::string query_name(CounterexampleReport::Kind kind) {
    switch (kind) {
        case CounterexampleReport::Kind::Psc: return "psc-search";
        case CounterexampleReport::Kind::Pce: return "pce-search";
        case CounterexampleReport::Kind::Duality: return "duality-test";
        case CounterexampleReport::Kind::Equiv: return "equiv";
    }
    return "?";
}

std::string outcome_name(CounterexampleReport::Status status) {
    switch (status) {
        case CounterexampleReport::Status::Found: return "found";
        case CounterexampleReport::Status::NoneUpTo: return "none_up_to";
        case CounterexampleReport::Status::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string core_report_json(const CoreReport& report, bool include_timing) {
    Json j;
    j["query"] = "cores";
    j["params"] = {{"structure", report.structure_name},
                   {"theory", report.theory_text},
                   {"k", k_value(report.k)}};
    j["outcome"] = report.cores.empty() ? "no_core_within_k" : "cores_found";
    j["cores"] = report.cores;
    j["minimal_cores"] = report.minimal_cores;
    j["is_psc_witness_failure"] = report.is_psc_witness_failure;
    if (include_timing) j["elapsed_ms"] = report.elapsed_ms;
    j["search_complete"] = report.search_complete;
    return dump(j);
}

std::string cover_report_json(const CoverReport& report, bool include_timing) {
    Json j;
    j["query"] = "covers";
    j["params"] = {{"structure", report.structure_name},
                   {"sentence", report.sentence_text},
                   {"k", k_value(report.k)}};
    j["outcome"] = report.models_sentence ? "models_sentence"
                                          : (report.cover ? "cover_found" : "no_cover");
    if (report.cover) j["cover"] = *report.cover;
    if (include_timing) j["elapsed_ms"] = report.elapsed_ms;
    j["search_complete"] = report.complete;
    return dump(j);
}

std::string counterexample_report_json(const CounterexampleReport& report, bool include_timing) {
    Json j;
    j["query"] = query_name(report.kind);
    Json params;
    if (report.kind == CounterexampleReport::Kind::Equiv) {
        params["sentences"] = report.sentence_text;
    } else if (report.sentence_text.size() == 1) {
        params["sentence"] = report.sentence_text.front();
    } else {
        params["theory"] = report.sentence_text;
    }
    if (report.k) params["k"] = k_value(*report.k);
    params["max_size"] = report.budget.max_universe_size;
    params["dedup"] = report.budget.dedup_isomorphic;
    j["params"] = std::move(params);
    j["outcome"] = outcome_name(report.status);
    j["bound"] = report.bound_reached;
    if (report.witness) {
        j["witness_structure"] = print_structure_file(*report.witness);
    }
    if (report.cover) j["cover"] = *report.cover;
    if (!report.detail.empty()) j["detail"] = report.detail;
    if (include_timing) j["elapsed_ms"] = report.elapsed_ms;
    j["search_complete"] = report.search_complete();
    return dump(j);
}

// ---------------------------------------------------------------------------
// Text rendering: stable line-oriented output.
// ---------------------------------------------------------------------------

namespace {

std::string join_set(const std::vector<std::string>& xs) {
    std::string out = "{";
    for (size_t i = 0; i < xs.size(); ++i) {
        out += (i ? ", " : "") + xs[i];
    }
    out += "}";
    return out;
}

}  // namespace

std::string core_report_text(const CoreReport& report) {
    std::ostringstream out;
    out << "structure " << report.structure_name << ", k = ";
    if (report.k < 0) {
        out << "finite";
    } else {
        out << report.k;
    }
    out << "\n";
    if (report.cores.empty()) {
        out << "no core of size <= k (witness failure for bounded preservation)\n";
        return out.str();
    }
    out << "cores:";
    for (const auto& c : report.cores) out << " " << join_set(c);
    out << "\nminimal cores:";
    for (const auto& c : report.minimal_cores) out << " " << join_set(c);
    out << "\n";
    return out.str();
}

std::string cover_report_text(const CoverReport& report) {
    std::ostringstream out;
    out << "structure " << report.structure_name << ", k = " << report.k << "\n";
    if (report.models_sentence) {
        out << "structure models the sentence; no counterexample here\n";
    } else if (report.cover) {
        out << "cover found:";
        for (const auto& c : *report.cover) out << " " << join_set(c);
        out << "\n";
    } else {
        out << "no cover by models of the sentence exists\n";
    }
    return out.str();
}

std::string counterexample_report_text(const CounterexampleReport& report) {
    std::ostringstream out;
    switch (report.status) {
        case CounterexampleReport::Status::NoneUpTo:
            out << "no counterexample up to size " << report.bound_reached
                << " (search complete)\n";
            break;
        case CounterexampleReport::Status::BudgetExhausted:
            out << "time budget exhausted; sizes up to " << report.bound_reached
                << " fully scanned\n";
            break;
        case CounterexampleReport::Status::Found:
            out << (report.kind == CounterexampleReport::Kind::Duality
                        ? "duality violation found:\n"
                        : "counterexample found:\n");
            out << print_structure_file(*report.witness);
            if (report.cover) {
                out << "cover:";
                for (const auto& c : *report.cover) out << " " << join_set(c);
                out << "\n";
            }
            if (!report.detail.empty()) out << report.detail << "\n";
            break;
    }
    return out.str();
}

}  // namespace preslab

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "preslab/cli.hpp"
#include "preslab/corpus.hpp"
#include "preslab/eval.hpp"
#include "preslab/logic.hpp"
#include "preslab/parse.hpp"
#include "preslab/preservation.hpp"
#include "preslab/report_json.hpp"
#include "preslab/substructure.hpp"
#include "preslab/syntax.hpp"

namespace py = pybind11;
using namespace preslab;

namespace {

VocabularyPtr share(const Vocabulary& vocab) { return std::make_shared<Vocabulary>(vocab); }

Formula parse_formula_py(const std::string& text, const Vocabulary& vocab) {
    auto result = parse_formula(text, vocab);
    if (!result.ok()) throw py::value_error(format_error(result.error()));
    return result.take();
}

StructureFile parse_structures_py(const std::string& text) {
    auto result = parse_structures(text);
    if (!result.ok()) throw py::value_error(format_error(result.error()));
    return result.take();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-structure laboratory for preservation properties of FO sentences";

    py::class_<Vocabulary>(m, "Vocabulary")
        .def(py::init([](const std::string& name,
                         const std::vector<std::pair<std::string, int>>& relations,
                         const std::vector<std::string>& constants) {
                 std::vector<RelationSymbol> rels;
                 for (const auto& [n, a] : relations) rels.push_back({n, a});
                 return Vocabulary(name, rels, constants);
             }),
             py::arg("name"), py::arg("relations") = std::vector<std::pair<std::string, int>>{},
             py::arg("constants") = std::vector<std::string>{})
        .def_property_readonly("name", &Vocabulary::name)
        .def("__repr__", [](const Vocabulary& v) { return print_vocabulary(v); });

    py::class_<Formula>(m, "Formula")
        .def("__str__", [](const Formula& f) { return print_formula(f); })
        .def("__repr__", [](const Formula& f) { return "Formula(" + print_formula(f) + ")"; })
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
        .def("free_variables", [](const Formula& f) { return free_variables(f); })
        .def("is_sentence", [](const Formula& f) { return is_sentence(f); });

    py::class_<Theory>(m, "Theory")
        .def(py::init([](const std::vector<Formula>& sentences) {
                 return Theory{sentences};
             }),
             py::arg("sentences"))
        .def_property_readonly("sentences",
                               [](const Theory& t) { return t.sentences; })
        .def("__repr__", [](const Theory& t) {
            std::string out = "Theory{";
            for (size_t i = 0; i < t.sentences.size(); ++i) {
                out += (i ? "; " : "") + print_formula(t.sentences[i]);
            }
            return out + "}";
        });

    py::class_<FiniteStructure>(m, "FiniteStructure")
        .def_property_readonly("name", &FiniteStructure::name)
        .def_property_readonly("universe", &FiniteStructure::universe)
        .def_property_readonly("vocabulary",
                               [](const FiniteStructure& s) { return s.vocabulary(); })
        .def("is_valid", &FiniteStructure::is_valid)
        .def("__eq__",
             [](const FiniteStructure& a, const FiniteStructure& b) { return a == b; })
        .def("__repr__", [](const FiniteStructure& s) { return print_structure(s); });

    py::class_<PrenexForm>(m, "PrenexForm")
        .def("to_formula", &PrenexForm::to_formula)
        .def_property_readonly("leading_block_length", &PrenexForm::leading_block_length)
        .def("__repr__",
             [](const PrenexForm& pf) { return print_formula(pf.to_formula()); });

    py::class_<PrefixClass>(m, "PrefixClass")
        .def_property_readonly("polarity",
                               [](const PrefixClass& c) {
                                   return c.polarity == Polarity::Sigma ? "Sigma" : "Pi";
                               })
        .def_readonly("n", &PrefixClass::n)
        .def_readonly("leading_count", &PrefixClass::leading_count)
        .def("__repr__", [](const PrefixClass& c) { return to_string(c); });

    py::class_<SearchBudget>(m, "SearchBudget")
        .def(py::init([](int max_size, std::optional<double> max_seconds, bool dedup) {
                 SearchBudget b;
                 b.max_universe_size = max_size;
                 b.max_seconds = max_seconds;
                 b.dedup_isomorphic = dedup;
                 return b;
             }),
             py::arg("max_size") = 4, py::arg("max_seconds") = std::nullopt,
             py::arg("dedup") = true);

    py::class_<CoreReport>(m, "CoreReport")
        .def_readonly("structure_name", &CoreReport::structure_name)
        .def_readonly("k", &CoreReport::k)
        .def_readonly("cores", &CoreReport::cores)
        .def_readonly("minimal_cores", &CoreReport::minimal_cores)
        .def_readonly("is_psc_witness_failure", &CoreReport::is_psc_witness_failure)
        .def("to_json", [](const CoreReport& r) { return core_report_json(r); })
        .def("__repr__", [](const CoreReport& r) { return core_report_text(r); });

    py::class_<CoverReport>(m, "CoverReport")
        .def_readonly("structure_name", &CoverReport::structure_name)
        .def_readonly("k", &CoverReport::k)
        .def_readonly("models_sentence", &CoverReport::models_sentence)
        .def_readonly("cover", &CoverReport::cover)
        .def("to_json", [](const CoverReport& r) { return cover_report_json(r); })
        .def("__repr__", [](const CoverReport& r) { return cover_report_text(r); });

    py::class_<CounterexampleReport>(m, "CounterexampleReport")
        .def_property_readonly("found", &CounterexampleReport::found)
        .def_readonly("bound_reached", &CounterexampleReport::bound_reached)
        .def_readonly("witness", &CounterexampleReport::witness)
        .def_readonly("cover", &CounterexampleReport::cover)
        .def_property_readonly("search_complete", &CounterexampleReport::search_complete)
        .def("to_json", [](const CounterexampleReport& r) {
            return counterexample_report_json(r);
        })
        .def("__repr__", [](const CounterexampleReport& r) {
            return counterexample_report_text(r);
        });

    py::class_<WitnessSet>(m, "WitnessSet")
        .def_readonly("tuples", &WitnessSet::tuples);

    // Vocabularies and parsing.
    m.def("graph_vocabulary", [] { return *graph_vocabulary(); });
    m.def("bare_vocabulary", [] { return *bare_vocabulary(); });
    m.def("parse_formula", &parse_formula_py, py::arg("text"), py::arg("vocab"));
    m.def("print_formula", &print_formula);
    m.def("parse_structures", [](const std::string& text) {
        StructureFile file = parse_structures_py(text);
        return std::make_pair(*file.vocab, file.structures);
    });
    m.def("print_structure", &print_structure);
    m.def("print_structure_file", &print_structure_file);

    // Structure model.
    m.def("make_structure",
          [](const Vocabulary& vocab, const std::string& name,
             const std::vector<std::string>& universe,
             const std::map<std::string, std::vector<std::vector<std::string>>>& tables,
             const std::map<std::string, std::string>& constants) {
              return FiniteStructure(share(vocab), name, universe, tables, constants);
          },
          py::arg("vocab"), py::arg("name"), py::arg("universe"),
          py::arg("tables") = std::map<std::string, std::vector<std::vector<std::string>>>{},
          py::arg("constants") = std::map<std::string, std::string>{});
    m.def("validate_structure", [](const FiniteStructure& s) {
        Validation v = validate_structure(s);
        return std::make_pair(v.ok, v.violations);
    });
    m.def("expand_with_parameters", &expand_with_parameters);

    // Syntax.
    m.def("to_nnf", &to_nnf);
    m.def("to_prenex", &to_prenex);
    m.def("classify_prefix", &classify_prefix);
    m.def("relativize", [](const Formula& f, const std::vector<std::string>& vars,
                           const Vocabulary& vocab) { return relativize(f, vars, vocab); });

    // Evaluation.
    m.def("evaluate", [](const FiniteStructure& m, const Formula& f,
                         const Assignment& asg) { return eval(m, f, asg); },
          py::arg("structure"), py::arg("formula"), py::arg("assignment") = Assignment{});
    m.def("witnesses", &witnesses);
    m.def("models_theory", &models_theory);

    // Substructures and enumeration.
    m.def("induced_substructure", [](const FiniteStructure& m,
                                     const std::set<std::string>& elements) {
        return induced_substructure(m, elements);
    });
    m.def("substructure_universes", &substructure_universes);
    m.def("is_substructure", &is_substructure);
    m.def("enumerate_structures",
          [](const Vocabulary& vocab, const SearchBudget& budget) {
              return enumerate_structures(share(vocab), budget);
          });

    // Preservation analysis.
    m.def("is_core", &is_core);
    m.def("minimal_cores", &minimal_cores);
    m.def("witness_sets_are_cores", &witness_sets_are_cores);
    m.def("is_k_ary_covered_extension", &is_k_ary_covered_extension);
    m.def("pce_counterexample_at", &pce_counterexample_at);
    m.def("psc_counterexample_search",
          [](const Vocabulary& vocab, const Formula& phi, int k, const SearchBudget& budget,
             unsigned jobs) {
              return psc_counterexample_search(share(vocab), phi, k, budget, jobs);
          },
          py::arg("vocab"), py::arg("sentence"), py::arg("k"), py::arg("budget"),
          py::arg("jobs") = 1);
    m.def("psc_counterexample_search_theory",
          [](const Vocabulary& vocab, const Theory& t, int k, const SearchBudget& budget,
             unsigned jobs) {
              return psc_counterexample_search(share(vocab), t, k, budget, jobs);
          },
          py::arg("vocab"), py::arg("theory"), py::arg("k"), py::arg("budget"),
          py::arg("jobs") = 1);
    m.def("pce_counterexample_search",
          [](const Vocabulary& vocab, const Formula& phi, int k, const SearchBudget& budget,
             unsigned jobs) {
              return pce_counterexample_search(share(vocab), phi, k, budget, jobs);
          },
          py::arg("vocab"), py::arg("sentence"), py::arg("k"), py::arg("budget"),
          py::arg("jobs") = 1);
    m.def("duality_check",
          [](const Vocabulary& vocab, const Formula& phi, int k, const SearchBudget& budget,
             unsigned jobs) { return duality_check(share(vocab), phi, k, budget, jobs); },
          py::arg("vocab"), py::arg("sentence"), py::arg("k"), py::arg("budget"),
          py::arg("jobs") = 1);
    m.def("bounded_equiv",
          [](const Vocabulary& vocab, const Formula& f, const Formula& g,
             const SearchBudget& budget, unsigned jobs) {
              return bounded_equiv(share(vocab), f, g, budget, jobs);
          },
          py::arg("vocab"), py::arg("f"), py::arg("g"), py::arg("budget"),
          py::arg("jobs") = 1);
    m.def("is_existentially_closed_in", &is_existentially_closed_in);

    // Corpus generators.
    m.def("gen_structure", &gen_structure, py::arg("family"),
          py::arg("params") = std::vector<int>{});
    m.def("gen_sentence", &gen_sentence, py::arg("family"),
          py::arg("params") = std::vector<int>{});
    m.def("gen_theory", &gen_theory, py::arg("family"), py::arg("params") = std::vector<int>{});

    // CLI entry point, for driving the tool from python.
    m.def("cli_run", [](const std::vector<std::string>& args) {
        std::vector<std::string> argv = {"preslab"};
        argv.insert(argv.end(), args.begin(), args.end());
        return preslab::cli::run(argv);
    });
}

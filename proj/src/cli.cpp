#include "preslab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "preslab/corpus.hpp"
#include "preslab/parse.hpp"
#include "preslab/preservation.hpp"
#include "preslab/report_json.hpp"

namespace preslab::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string structure;
    std::string extension;
    std::string pick_name;
    std::string sentence;
    std::string sentence2;
    std::string theory;
    std::string assign;
    std::string vars;
    std::string k_text = "3";
    std::string out_file;
    std::string family;
    int max_size = 4;
    double max_seconds = 0.0;
    bool no_dedup = false;
    unsigned jobs = 1;
    std::string format = "text";
    bool timing = false;
};

int parse_k(const std::string& text) {
    if (text == "finite") return -1;
    try {
        size_t used = 0;
        int k = std::stoi(text, &used);
        if (used != text.size() || k < 0) throw UsageError("bad k");
        return k;
    } catch (const UsageError&) {
        throw;
    } catch (...) {
        throw UsageError("--k expects a nonnegative integer or 'finite'");
    }
}

SearchBudget budget_of(const Options& opt) {
    SearchBudget budget;
    budget.max_universe_size = opt.max_size;
    if (opt.max_seconds > 0) budget.max_seconds = opt.max_seconds;
    budget.dedup_isomorphic = !opt.no_dedup;
    return budget;
}

// "family(1,2,3)" or "family" -> name + integer parameters.
std::optional<std::pair<std::string, std::vector<int>>> parse_family_expr(
    const std::string& text) {
    std::string name = text;
    std::vector<int> params;
    auto open = text.find('(');
    if (open != std::string::npos) {
        if (text.back() != ')') return std::nullopt;
        name = text.substr(0, open);
        std::string inner = text.substr(open + 1, text.size() - open - 2);
        std::stringstream ss(inner);
        std::string piece;
        while (std::getline(ss, piece, ',')) {
            try {
                size_t used = 0;
                params.push_back(std::stoi(piece, &used));
                if (used != piece.size()) return std::nullopt;
            } catch (...) {
                return std::nullopt;
            }
        }
        if (inner.empty()) params.clear();
    }
    if (name.empty()) return std::nullopt;
    return std::make_pair(name, params);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

FiniteStructure resolve_structure(const std::string& expr, const std::string& pick_name) {
    if (auto fam = parse_family_expr(expr)) {
        if (is_structure_family(fam->first)) {
            return gen_structure(fam->first, fam->second);
        }
    }
    if (!std::filesystem::exists(expr)) {
        throw UsageError("unknown structure family or missing file: " + expr);
    }
    auto parsed = parse_structures(slurp(expr));
    if (!parsed.ok()) {
        throw UsageError(expr + ": " + format_error(parsed.error()));
    }
    const auto& structures = parsed.value().structures;
    if (structures.empty()) throw UsageError(expr + ": file declares no structures");
    if (pick_name.empty()) return structures.front();
    for (const auto& s : structures) {
        if (s.name() == pick_name) return s;
    }
    throw UsageError(expr + ": no structure named " + pick_name);
}

Formula resolve_sentence(const std::string& expr, const VocabularyPtr& vocab) {
    if (auto fam = parse_family_expr(expr)) {
        if (is_sentence_family(fam->first)) {
            return gen_sentence(fam->first, fam->second);
        }
    }
    auto parsed = parse_formula(expr, *vocab);
    if (!parsed.ok()) {
        throw UsageError("cannot parse sentence: " + format_error(parsed.error()));
    }
    return parsed.take();
}

Theory resolve_theory(const std::string& expr, const VocabularyPtr& vocab) {
    if (auto fam = parse_family_expr(expr)) {
        if (is_theory_family(fam->first)) {
            return gen_theory(fam->first, fam->second);
        }
    }
    // Inline theory: sentences separated by ';'.
    Theory t;
    std::stringstream ss(expr);
    std::string piece;
    while (std::getline(ss, piece, ';')) {
        if (piece.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        t.sentences.push_back(resolve_sentence(piece, vocab));
    }
    if (t.sentences.empty()) throw UsageError("empty theory: " + expr);
    return t;
}

// Vocabulary for sentence parsing: the structure's when present, otherwise
// the family's, otherwise the graph vocabulary.
VocabularyPtr ambient_vocabulary(const Options& opt,
                                 const std::optional<FiniteStructure>& structure) {
    if (structure) return structure->vocabulary_ptr();
    for (const std::string* expr : {&opt.sentence, &opt.theory, &opt.sentence2}) {
        if (expr->empty()) continue;
        if (auto fam = parse_family_expr(*expr)) {
            if (is_sentence_family(fam->first) || is_theory_family(fam->first)) {
                return family_vocabulary(fam->first);
            }
        }
    }
    return graph_vocabulary();
}

Assignment parse_assignment(const std::string& text) {
    Assignment asg;
    if (text.empty()) return asg;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        auto eq = piece.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--assign expects var=element pairs separated by commas");
        }
        asg[piece.substr(0, eq)] = piece.substr(eq + 1);
    }
    return asg;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (!piece.empty()) out.push_back(piece);
    }
    return out;
}

void emit(const Options& opt, const std::string& text_form, const Json& json_form) {
    if (opt.format == "json") {
        std::cout << json_form.dump(2) << "\n";
    } else {
        std::cout << text_form;
    }
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

int cmd_eval(const Options& opt) {
    FiniteStructure m = resolve_structure(opt.structure, opt.pick_name);
    Formula f = resolve_sentence(opt.sentence, m.vocabulary_ptr());
    bool value = eval(m, f, parse_assignment(opt.assign));
    emit(opt, std::string(value ? "true" : "false") + "\n",
         Json{{"query", "eval"},
              {"structure", m.name()},
              {"sentence", print_formula(f)},
              {"value", value}});
    return 0;
}

int cmd_classify(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    Formula f = resolve_sentence(opt.sentence, vocab);
    PrefixClass c = classify_prefix(f);
    Json j{{"query", "classify"},
           {"sentence", print_formula(f)},
           {"polarity", c.polarity == Polarity::Sigma ? "Sigma" : "Pi"},
           {"n", c.n},
           {"leading", c.leading_count}};
    emit(opt, to_string(c) + "\n", j);
    return 0;
}

int cmd_prenex(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    Formula f = resolve_sentence(opt.sentence, vocab);
    PrenexForm pf = to_prenex(f);
    std::string printed = print_formula(pf.to_formula());
    emit(opt, printed + "\n",
         Json{{"query", "prenex"}, {"sentence", print_formula(f)}, {"prenex", printed}});
    return 0;
}

int cmd_relativize(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    Formula f = resolve_sentence(opt.sentence, vocab);
    auto vars = split_csv(opt.vars);
    Formula rel = relativize(f, vars, *vocab);
    std::string printed = print_formula(rel);
    emit(opt, printed + "\n",
         Json{{"query", "relativize"}, {"sentence", print_formula(f)}, {"relativized", printed}});
    return 0;
}

int cmd_cores(const Options& opt) {
    FiniteStructure m = resolve_structure(opt.structure, opt.pick_name);
    Theory t;
    if (!opt.theory.empty()) {
        t = resolve_theory(opt.theory, m.vocabulary_ptr());
    } else if (!opt.sentence.empty()) {
        t.sentences.push_back(resolve_sentence(opt.sentence, m.vocabulary_ptr()));
    } else {
        throw UsageError("cores needs --theory or --sentence");
    }
    CoreReport report = minimal_cores(m, t, parse_k(opt.k_text));
    if (opt.format == "json") {
        std::cout << core_report_json(report, opt.timing);
    } else {
        std::cout << core_report_text(report);
    }
    return report.cores.empty() ? 1 : 0;
}

int cmd_covers(const Options& opt) {
    FiniteStructure m = resolve_structure(opt.structure, opt.pick_name);
    Formula f = resolve_sentence(opt.sentence, m.vocabulary_ptr());
    CoverReport report = pce_counterexample_at(f, parse_k(opt.k_text), m);
    if (opt.format == "json") {
        std::cout << cover_report_json(report, opt.timing);
    } else {
        std::cout << cover_report_text(report);
    }
    return report.cover ? 1 : 0;
}

int emit_search(const Options& opt, const CounterexampleReport& report) {
    if (opt.format == "json") {
        std::cout << counterexample_report_json(report, opt.timing);
    } else {
        std::cout << counterexample_report_text(report);
    }
    return report.found() ? 1 : 0;
}

int cmd_psc_search(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    CounterexampleReport report;
    if (!opt.theory.empty()) {
        Theory t = resolve_theory(opt.theory, vocab);
        report = psc_counterexample_search(vocab, t, parse_k(opt.k_text), budget_of(opt),
                                           opt.jobs);
    } else {
        Formula f = resolve_sentence(opt.sentence, vocab);
        report = psc_counterexample_search(vocab, f, parse_k(opt.k_text), budget_of(opt),
                                           opt.jobs);
    }
    return emit_search(opt, report);
}

int cmd_pce_search(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    Formula f = resolve_sentence(opt.sentence, vocab);
    auto report =
        pce_counterexample_search(vocab, f, parse_k(opt.k_text), budget_of(opt), opt.jobs);
    return emit_search(opt, report);
}

int cmd_duality_test(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    Formula f = resolve_sentence(opt.sentence, vocab);
    auto report = duality_check(vocab, f, parse_k(opt.k_text), budget_of(opt), opt.jobs);
    return emit_search(opt, report);
}

int cmd_equiv(const Options& opt) {
    VocabularyPtr vocab = ambient_vocabulary(opt, std::nullopt);
    Formula f = resolve_sentence(opt.sentence, vocab);
    Formula g = resolve_sentence(opt.sentence2, vocab);
    auto report = bounded_equiv(vocab, f, g, budget_of(opt), opt.jobs);
    return emit_search(opt, report);
}

int cmd_ec_check(const Options& opt) {
    FiniteStructure m = resolve_structure(opt.structure, opt.pick_name);
    FiniteStructure r = resolve_structure(opt.extension, "");
    bool ec = is_existentially_closed_in(m, r);
    emit(opt, std::string(ec ? "true" : "false") + "\n",
         Json{{"query", "ec-check"},
              {"structure", m.name()},
              {"extension", r.name()},
              {"existentially_closed", ec}});
    return ec ? 0 : 1;
}

int cmd_gen(const Options& opt) {
    auto fam = parse_family_expr(opt.family);
    if (!fam) throw UsageError("cannot parse family expression: " + opt.family);
    std::string output;
    if (is_structure_family(fam->first)) {
        output = print_structure_file(gen_structure(fam->first, fam->second));
    } else if (is_sentence_family(fam->first)) {
        output = print_formula(gen_sentence(fam->first, fam->second)) + "\n";
    } else if (is_theory_family(fam->first)) {
        for (const auto& s : gen_theory(fam->first, fam->second).sentences) {
            output += print_formula(s) + "\n";
        }
    } else {
        throw UsageError("unknown family: " + fam->first);
    }
    if (!opt.out_file.empty()) {
        std::ofstream out(opt.out_file, std::ios::binary);
        if (!out) throw UsageError("cannot write " + opt.out_file);
        out << output;
    } else {
        std::cout << output;
    }
    return 0;
}

void add_format_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--format", opt.format, "Output format (text|json)")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_flag("--timing", opt.timing, "Include elapsed_ms in JSON output");
}

void add_search_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--k", opt.k_text, "Core/cover size bound (integer or 'finite')");
    cmd->add_option("--max-size", opt.max_size, "Largest universe size to scan")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-seconds", opt.max_seconds, "Wall-clock budget for the search");
    cmd->add_flag("--no-dedup", opt.no_dedup, "Scan labeled structures instead of one per "
                                              "isomorphism class");
    cmd->add_option("--jobs", opt.jobs, "Parallel workers (results are identical for any value)")
        ->check(CLI::PositiveNumber);
    add_format_options(cmd, opt);
}

}  // namespace

int run(const std::vector<std::string>& args) {
    Options opt;
    CLI::App app{"finite-structure laboratory for preservation properties of first-order "
                 "sentences"};
    app.require_subcommand(1);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a sentence on a structure");
    eval_cmd->add_option("--structure", opt.structure, "Structure family or file")->required();
    eval_cmd->add_option("--name", opt.pick_name, "Structure name inside the file");
    eval_cmd->add_option("--sentence", opt.sentence, "Sentence family or formula text")
        ->required();
    eval_cmd->add_option("--assign", opt.assign, "Assignment var=elem,... for free variables");
    add_format_options(eval_cmd, opt);

    auto* classify_cmd = app.add_subcommand("classify", "Prefix class of a sentence");
    classify_cmd->add_option("--sentence", opt.sentence)->required();
    add_format_options(classify_cmd, opt);

    auto* prenex_cmd = app.add_subcommand("prenex", "Prenex normal form of a sentence");
    prenex_cmd->add_option("--sentence", opt.sentence)->required();
    add_format_options(prenex_cmd, opt);

    auto* rel_cmd = app.add_subcommand("relativize", "Relativize a sentence to fresh variables");
    rel_cmd->add_option("--sentence", opt.sentence)->required();
    rel_cmd->add_option("--vars", opt.vars, "Comma-separated fresh variables")->required();
    add_format_options(rel_cmd, opt);

    auto* cores_cmd = app.add_subcommand("cores", "Cores of a structure w.r.t. a theory");
    cores_cmd->add_option("--structure", opt.structure)->required();
    cores_cmd->add_option("--name", opt.pick_name);
    cores_cmd->add_option("--theory", opt.theory, "Theory family or ';'-separated sentences");
    cores_cmd->add_option("--sentence", opt.sentence);
    cores_cmd->add_option("--k", opt.k_text);
    add_format_options(cores_cmd, opt);

    auto* covers_cmd = app.add_subcommand("covers", "Cover construction at one structure");
    covers_cmd->add_option("--structure", opt.structure)->required();
    covers_cmd->add_option("--name", opt.pick_name);
    covers_cmd->add_option("--sentence", opt.sentence)->required();
    covers_cmd->add_option("--k", opt.k_text);
    add_format_options(covers_cmd, opt);

    auto* psc_cmd = app.add_subcommand("psc-search",
                                       "Search for a model without a small core");
    psc_cmd->add_option("--sentence", opt.sentence);
    psc_cmd->add_option("--theory", opt.theory);
    add_search_options(psc_cmd, opt);

    auto* pce_cmd = app.add_subcommand("pce-search",
                                       "Search for a covered extension counterexample");
    pce_cmd->add_option("--sentence", opt.sentence)->required();
    add_search_options(pce_cmd, opt);

    auto* dual_cmd = app.add_subcommand("duality-test",
                                        "Check the core/cover duality structure by structure");
    dual_cmd->add_option("--sentence", opt.sentence)->required();
    add_search_options(dual_cmd, opt);

    auto* equiv_cmd = app.add_subcommand("equiv", "Search for a structure separating two "
                                                  "sentences");
    equiv_cmd->add_option("--sentence", opt.sentence)->required();
    equiv_cmd->add_option("--sentence2", opt.sentence2)->required();
    add_search_options(equiv_cmd, opt);

    auto* ec_cmd = app.add_subcommand("ec-check", "Existential closure of a substructure pair");
    ec_cmd->add_option("--structure", opt.structure)->required();
    ec_cmd->add_option("--name", opt.pick_name);
    ec_cmd->add_option("--extension", opt.extension)->required();
    add_format_options(ec_cmd, opt);

    auto* gen_cmd = app.add_subcommand("gen", "Emit a generated structure, sentence or theory");
    gen_cmd->add_option("family", opt.family, "e.g. cycle(4), loop_pair, psi_prefix(2)")
        ->required();
    gen_cmd->add_option("--out", opt.out_file, "Write to a file instead of stdout");

    std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
    try {
        // CLI11 wants reversed argument order when parsing from a vector.
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, returns 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the diagnostic
        return 2;
    }

    try {
        if (eval_cmd->parsed()) return cmd_eval(opt);
        if (classify_cmd->parsed()) return cmd_classify(opt);
        if (prenex_cmd->parsed()) return cmd_prenex(opt);
        if (rel_cmd->parsed()) return cmd_relativize(opt);
        if (cores_cmd->parsed()) return cmd_cores(opt);
        if (covers_cmd->parsed()) return cmd_covers(opt);
        if (psc_cmd->parsed()) return cmd_psc_search(opt);
        if (pce_cmd->parsed()) return cmd_pce_search(opt);
        if (dual_cmd->parsed()) return cmd_duality_test(opt);
        if (equiv_cmd->parsed()) return cmd_equiv(opt);
        if (ec_cmd->parsed()) return cmd_ec_check(opt);
        if (gen_cmd->parsed()) return cmd_gen(opt);
        std::cerr << "no command given\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace preslab::cli

#include "preslab/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace preslab {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    Ident,
    Integer,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semicolon,
    Colon,
    Slash,
    Eq,       // =
    Neq,      // !=
    Tilde,    // ~
    Amp,      // &
    Pipe,     // |
    Arrow,    // ->
    DArrow,   // <->
    End,
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Integer: return "integer";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Semicolon: return "';'";
        case Tok::Colon: return "':'";
        case Tok::Slash: return "'/'";
        case Tok::Eq: return "'='";
        case Tok::Neq: return "'!='";
        case Tok::Tilde: return "'~'";
        case Tok::Amp: return "'&'";
        case Tok::Pipe: return "'|'";
        case Tok::Arrow: return "'->'";
        case Tok::DArrow: return "'<->'";
        case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

struct LexFail {
    ParseError error;
};

class Lexer {
  public:
    explicit Lexer(const std::string& input) : input_(input) {}

    // Tokenizes the whole input; returns false and sets error on a bad byte.
    bool run(std::vector<Token>& out, ParseError& error) {
        while (true) {
            skip_trivia();
            SourceSpan span{line_, col_, pos_, 0};
            if (pos_ >= input_.size()) {
                out.push_back({Tok::End, "", span});
                return true;
            }
            char c = input_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = pos_;
                while (pos_ < input_.size() && is_ident_char(input_[pos_])) advance();
                span.length = pos_ - start;
                out.push_back({Tok::Ident, input_.substr(start, pos_ - start), span});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = pos_;
                while (pos_ < input_.size() &&
                       std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
                    advance();
                }
                span.length = pos_ - start;
                out.push_back({Tok::Integer, input_.substr(start, pos_ - start), span});
                continue;
            }
            auto emit = [&](Tok t, size_t len) {
                for (size_t i = 0; i < len; ++i) advance();
                span.length = len;
                out.push_back({t, input_.substr(span.offset, len), span});
            };
            switch (c) {
                case '(': emit(Tok::LParen, 1); continue;
                case ')': emit(Tok::RParen, 1); continue;
                case '{': emit(Tok::LBrace, 1); continue;
                case '}': emit(Tok::RBrace, 1); continue;
                case ',': emit(Tok::Comma, 1); continue;
                case '.': emit(Tok::Dot, 1); continue;
                case ';': emit(Tok::Semicolon, 1); continue;
                case ':': emit(Tok::Colon, 1); continue;
                case '/': emit(Tok::Slash, 1); continue;
                case '=': emit(Tok::Eq, 1); continue;
                case '~': emit(Tok::Tilde, 1); continue;
                case '&': emit(Tok::Amp, 1); continue;
                case '|': emit(Tok::Pipe, 1); continue;
                case '!':
                    if (peek(1) == '=') { emit(Tok::Neq, 2); continue; }
                    break;
                case '-':
                    if (peek(1) == '>') { emit(Tok::Arrow, 2); continue; }
                    break;
                case '<':
                    if (peek(1) == '-' && peek(2) == '>') { emit(Tok::DArrow, 3); continue; }
                    break;
                default: break;
            }
            span.length = 1;
            error = {std::string("unexpected character '") + c + "'", span, {}};
            return false;
        }
    }

  private:
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    char peek(size_t ahead) const {
        return pos_ + ahead < input_.size() ? input_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (input_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < input_.size()) {
            char c = input_[pos_];
            if (c == '#') {
                while (pos_ < input_.size() && input_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& input_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------
// Token stream with error reporting helpers
// ---------------------------------------------------------------------------

class TokenStream {
  public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at(Tok kind) const { return peek().kind == kind; }
    bool accept(Tok kind) {
        if (!at(kind)) return false;
        next();
        return true;
    }

    [[noreturn]] void fail(std::string message, std::vector<std::string> expected = {}) const {
        throw LexFail{ParseError{std::move(message), peek().span, std::move(expected)}};
    }

    Token expect(Tok kind) {
        if (!at(kind)) {
            fail(std::string("expected ") + tok_name(kind), {tok_name(kind)});
        }
        return next();
    }

  private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

bool is_keyword(const std::string& s) { return s == "forall" || s == "exists"; }

// ---------------------------------------------------------------------------
// Formula parser
// ---------------------------------------------------------------------------

class FormulaParser {
  public:
    FormulaParser(TokenStream& ts, const Vocabulary& vocab) : ts_(ts), vocab_(vocab) {}

    Formula parse() {
        Formula f = parse_iff();
        if (!ts_.at(Tok::End)) {
            ts_.fail("trailing input after formula", {"end of input"});
        }
        return f;
    }

  private:
    Formula parse_iff() {
        Formula lhs = parse_imp();
        while (ts_.accept(Tok::DArrow)) {
            Formula rhs = parse_imp();
            lhs = Formula::iff(lhs, rhs);
        }
        return lhs;
    }

    Formula parse_imp() {
        Formula lhs = parse_or();
        if (ts_.accept(Tok::Arrow)) {
            Formula rhs = parse_imp();  // right-associative
            return Formula::implies(lhs, rhs);
        }
        return lhs;
    }

    Formula parse_or() {
        Formula lhs = parse_and();
        while (ts_.accept(Tok::Pipe)) {
            lhs = Formula::disj(lhs, parse_and());
        }
        return lhs;
    }

    Formula parse_and() {
        Formula lhs = parse_unary();
        while (ts_.accept(Tok::Amp)) {
            lhs = Formula::conj(lhs, parse_unary());
        }
        return lhs;
    }

    Formula parse_unary() {
        if (ts_.accept(Tok::Tilde)) {
            return Formula::negation(parse_unary());
        }
        if (ts_.at(Tok::Ident) && is_keyword(ts_.peek().text)) {
            return parse_quantifier();
        }
        if (ts_.accept(Tok::LParen)) {
            Formula f = parse_iff();
            ts_.expect(Tok::RParen);
            return f;
        }
        if (ts_.at(Tok::Ident)) {
            return parse_atom();
        }
        ts_.fail("expected a formula",
                 {"'~'", "'forall'", "'exists'", "'('", "identifier"});
    }

    Formula parse_quantifier() {
        Token kw = ts_.next();
        bool universal = kw.text == "forall";
        std::vector<Token> vars;
        vars.push_back(expect_variable());
        while (ts_.accept(Tok::Comma)) {
            vars.push_back(expect_variable());
        }
        ts_.expect(Tok::Dot);
        for (const auto& v : vars) bound_.push_back(v.text);
        Formula body = parse_iff();
        for (size_t i = 0; i < vars.size(); ++i) bound_.pop_back();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
            body = universal ? Formula::forall(it->text, body) : Formula::exists(it->text, body);
        }
        return body;
    }

    Token expect_variable() {
        Token t = ts_.expect(Tok::Ident);
        if (is_keyword(t.text)) {
            throw LexFail{ParseError{"keyword cannot be used as a variable", t.span, {}}};
        }
        if (vocab_.has_symbol(t.text)) {
            throw LexFail{ParseError{
                "variable " + t.text + " collides with a vocabulary symbol", t.span, {}}};
        }
        return t;
    }

    bool is_bound(const std::string& name) const {
        return std::find(bound_.rbegin(), bound_.rend(), name) != bound_.rend();
    }

    Term resolve_term(const Token& t) {
        if (is_keyword(t.text)) {
            throw LexFail{ParseError{"keyword in term position", t.span, {}}};
        }
        if (is_bound(t.text)) return Term::var(t.text);
        if (vocab_.has_constant(t.text)) return Term::constant(t.text);
        if (vocab_.has_relation(t.text)) {
            throw LexFail{ParseError{
                "relation symbol " + t.text + " used as a term", t.span, {}}};
        }
        return Term::var(t.text);
    }

    Formula parse_atom() {
        Token head = ts_.next();
        if (ts_.at(Tok::LParen)) {
            auto arity = vocab_.arity_of(head.text);
            if (!arity) {
                throw LexFail{ParseError{"unknown relation " + head.text, head.span, {}}};
            }
            ts_.expect(Tok::LParen);
            std::vector<Term> args;
            args.push_back(resolve_term(ts_.expect(Tok::Ident)));
            while (ts_.accept(Tok::Comma)) {
                args.push_back(resolve_term(ts_.expect(Tok::Ident)));
            }
            Token close = ts_.expect(Tok::RParen);
            if (args.size() != static_cast<size_t>(*arity)) {
                throw LexFail{ParseError{"arity mismatch for " + head.text +
                                             " (expected " + std::to_string(*arity) + ", got " +
                                             std::to_string(args.size()) + ")",
                                         head.span, {}}};
            }
            (void)close;
            return Formula::atom(head.text, std::move(args));
        }
        Term lhs = resolve_term(head);
        if (ts_.accept(Tok::Eq)) {
            Term rhs = resolve_term(ts_.expect(Tok::Ident));
            return Formula::eq(lhs, rhs);
        }
        if (ts_.accept(Tok::Neq)) {
            Term rhs = resolve_term(ts_.expect(Tok::Ident));
            return Formula::negation(Formula::eq(lhs, rhs));
        }
        ts_.fail("expected '(' or '=' or '!=' after identifier", {"'('", "'='", "'!='"});
    }

    TokenStream& ts_;
    const Vocabulary& vocab_;
    std::vector<std::string> bound_;
};

// ---------------------------------------------------------------------------
// Structure file parser
// ---------------------------------------------------------------------------

const std::set<std::string> kReservedNames = {"vocab", "structure", "relation", "constant",
                                              "universe", "forall", "exists"};

class StructureFileParser {
  public:
    explicit StructureFileParser(TokenStream& ts) : ts_(ts) {}

    StructureFile parse() {
        StructureFile out;
        out.vocab = parse_vocab();
        std::set<std::string> names;
        while (!ts_.at(Tok::End)) {
            FiniteStructure s = parse_structure(out.vocab);
            if (!names.insert(s.name()).second) {
                ts_.fail("duplicate structure name " + s.name());
            }
            out.structures.push_back(std::move(s));
        }
        return out;
    }

  private:
    Token expect_ident(const char* what) {
        Token t = ts_.expect(Tok::Ident);
        if (kReservedNames.count(t.text)) {
            throw LexFail{ParseError{std::string("reserved identifier ") + t.text +
                                         " cannot be used as " + what,
                                     t.span, {}}};
        }
        return t;
    }

    void expect_word(const char* word) {
        Token t = ts_.expect(Tok::Ident);
        if (t.text != word) {
            throw LexFail{ParseError{std::string("expected '") + word + "'", t.span,
                                     {std::string("'") + word + "'"}}};
        }
    }

    VocabularyPtr parse_vocab() {
        expect_word("vocab");
        Token name = expect_ident("a vocabulary name");
        ts_.expect(Tok::LBrace);
        std::vector<RelationSymbol> relations;
        std::vector<std::string> constants;
        std::set<std::string> seen;
        while (!ts_.accept(Tok::RBrace)) {
            Token kw = ts_.expect(Tok::Ident);
            if (kw.text == "relation") {
                Token rel = expect_ident("a relation name");
                ts_.expect(Tok::Slash);
                Token arity = ts_.expect(Tok::Integer);
                if (arity.text.size() > 2) {
                    throw LexFail{ParseError{"unreasonable relation arity", arity.span, {}}};
                }
                int a = std::stoi(arity.text);
                if (a < 1) {
                    throw LexFail{ParseError{"relation arity must be at least 1", arity.span, {}}};
                }
                if (!seen.insert(rel.text).second) {
                    throw LexFail{ParseError{"duplicate symbol " + rel.text, rel.span, {}}};
                }
                relations.push_back({rel.text, a});
                ts_.expect(Tok::Semicolon);
            } else if (kw.text == "constant") {
                Token c = expect_ident("a constant name");
                if (!seen.insert(c.text).second) {
                    throw LexFail{ParseError{"duplicate symbol " + c.text, c.span, {}}};
                }
                constants.push_back(c.text);
                ts_.expect(Tok::Semicolon);
            } else {
                throw LexFail{ParseError{"expected 'relation' or 'constant'", kw.span,
                                         {"'relation'", "'constant'", "'}'"}}};
            }
        }
        return std::make_shared<Vocabulary>(name.text, std::move(relations),
                                            std::move(constants));
    }

    FiniteStructure parse_structure(const VocabularyPtr& vocab) {
        expect_word("structure");
        Token name = expect_ident("a structure name");
        ts_.expect(Tok::Colon);
        Token vocab_ref = ts_.expect(Tok::Ident);
        if (vocab_ref.text != vocab->name()) {
            throw LexFail{ParseError{"unknown vocabulary " + vocab_ref.text, vocab_ref.span, {}}};
        }
        ts_.expect(Tok::LBrace);

        // Universe must come first so that tuples can be checked in place.
        expect_word("universe");
        ts_.expect(Tok::Eq);
        ts_.expect(Tok::LBrace);
        std::vector<std::string> universe;
        std::set<std::string> universe_set;
        if (!ts_.at(Tok::RBrace)) {
            do {
                Token e = expect_ident("a universe element");
                if (!universe_set.insert(e.text).second) {
                    throw LexFail{ParseError{"duplicate universe element " + e.text, e.span, {}}};
                }
                universe.push_back(e.text);
            } while (ts_.accept(Tok::Comma));
        }
        ts_.expect(Tok::RBrace);
        ts_.expect(Tok::Semicolon);
        if (universe.empty()) {
            throw LexFail{ParseError{"empty universe", name.span, {}}};
        }

        std::map<std::string, std::vector<FiniteStructure::Tuple>> tables;
        std::map<std::string, std::string> constant_map;
        while (!ts_.accept(Tok::RBrace)) {
            Token sym = ts_.expect(Tok::Ident);
            ts_.expect(Tok::Eq);
            if (auto arity = vocab->arity_of(sym.text)) {
                if (tables.count(sym.text)) {
                    throw LexFail{ParseError{"duplicate table for " + sym.text, sym.span, {}}};
                }
                tables[sym.text] = parse_table(*arity, sym.text, universe_set);
            } else if (vocab->has_constant(sym.text)) {
                if (constant_map.count(sym.text)) {
                    throw LexFail{ParseError{"duplicate assignment for " + sym.text, sym.span, {}}};
                }
                Token value = ts_.expect(Tok::Ident);
                if (!universe_set.count(value.text)) {
                    throw LexFail{ParseError{"element " + value.text + " not in universe",
                                             value.span, {}}};
                }
                constant_map[sym.text] = value.text;
                ts_.expect(Tok::Semicolon);
            } else {
                throw LexFail{ParseError{"undeclared symbol " + sym.text, sym.span, {}}};
            }
        }
        for (const auto& c : vocab->constants()) {
            if (!constant_map.count(c)) {
                throw LexFail{ParseError{"uninterpreted constant " + c, name.span, {}}};
            }
        }
        FiniteStructure s(vocab, name.text, std::move(universe), std::move(tables),
                          std::move(constant_map));
        // The inline checks above make this unreachable, but a structure
        // that somehow fails validation must never escape the parser.
        if (!s.is_valid()) {
            throw LexFail{ParseError{"invalid structure: " + s.validation().violations.front(),
                                     name.span, {}}};
        }
        return s;
    }

    std::vector<FiniteStructure::Tuple> parse_table(int arity, const std::string& rel,
                                                    const std::set<std::string>& universe) {
        ts_.expect(Tok::LBrace);
        std::vector<FiniteStructure::Tuple> tuples;
        if (!ts_.at(Tok::RBrace)) {
            do {
                tuples.push_back(parse_tuple(arity, rel, universe));
            } while (ts_.accept(Tok::Comma));
        }
        ts_.expect(Tok::RBrace);
        ts_.expect(Tok::Semicolon);
        return tuples;
    }

    FiniteStructure::Tuple parse_tuple(int arity, const std::string& rel,
                                       const std::set<std::string>& universe) {
        FiniteStructure::Tuple tuple;
        SourceSpan span = ts_.peek().span;
        if (ts_.accept(Tok::LParen)) {
            do {
                tuple.push_back(expect_element(universe));
            } while (ts_.accept(Tok::Comma));
            ts_.expect(Tok::RParen);
        } else {
            tuple.push_back(expect_element(universe));
        }
        if (tuple.size() != static_cast<size_t>(arity)) {
            throw LexFail{ParseError{"arity mismatch for " + rel, span, {}}};
        }
        return tuple;
    }

    std::string expect_element(const std::set<std::string>& universe) {
        Token e = ts_.expect(Tok::Ident);
        if (!universe.count(e.text)) {
            throw LexFail{ParseError{"element " + e.text + " not in universe", e.span, {}}};
        }
        return e.text;
    }

    TokenStream& ts_;
};

template <typename T, typename Fn>
ParseResult<T> run_parser(const std::string& text, Fn body) {
    std::vector<Token> tokens;
    ParseError lex_error;
    Lexer lexer(text);
    if (!lexer.run(tokens, lex_error)) {
        return ParseResult<T>(std::move(lex_error));
    }
    TokenStream ts(std::move(tokens));
    try {
        return ParseResult<T>(body(ts));
    } catch (const LexFail& f) {
        return ParseResult<T>(f.error);
    }
}

}  // namespace

ParseResult<Formula> parse_formula(const std::string& text, const Vocabulary& vocab) {
    return run_parser<Formula>(text, [&](TokenStream& ts) {
        FormulaParser parser(ts, vocab);
        return parser.parse();
    });
}

ParseResult<StructureFile> parse_structures(const std::string& text) {
    return run_parser<StructureFile>(text, [&](TokenStream& ts) {
        StructureFileParser parser(ts);
        return parser.parse();
    });
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Precedence: <-> 1, -> 2, | 3, & 4, ~ 5, atoms 6. Quantifiers take their
// maximal right scope and are printed bare only on the right edge of the
// current (sub)expression.
int prec_of(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Iff: return 1;
        case Formula::Kind::Implies: return 2;
        case Formula::Kind::Or: return 3;
        case Formula::Kind::And: return 4;
        case Formula::Kind::Not: return 5;
        default: return 6;
    }
}

void print_rec(const Formula& f, int min_prec, bool right_edge, std::string& out) {
    // "t1 != t2" sugar.
    if (f.kind() == Formula::Kind::Not && f.child().kind() == Formula::Kind::Eq) {
        const Formula& eq = f.child();
        out += eq.left_term().name;
        out += " != ";
        out += eq.right_term().name;
        return;
    }
    if (f.is_quantifier()) {
        bool parens = !right_edge;
        if (parens) out += '(';
        out += f.kind() == Formula::Kind::Forall ? "forall " : "exists ";
        out += f.bound_var();
        out += ". ";
        print_rec(f.child(), 0, true, out);
        if (parens) out += ')';
        return;
    }
    int p = prec_of(f);
    bool parens = p < min_prec;
    if (parens) out += '(';
    bool inner_right = right_edge || parens;
    switch (f.kind()) {
        case Formula::Kind::Atom:
            out += f.relation();
            out += '(';
            for (size_t i = 0; i < f.args().size(); ++i) {
                if (i) out += ',';
                out += f.args()[i].name;
            }
            out += ')';
            break;
        case Formula::Kind::Eq:
            out += f.left_term().name;
            out += " = ";
            out += f.right_term().name;
            break;
        case Formula::Kind::Not:
            out += '~';
            print_rec(f.child(), p, inner_right, out);
            break;
        case Formula::Kind::And:
            print_rec(f.left(), p, false, out);
            out += " & ";
            print_rec(f.right(), p + 1, inner_right, out);
            break;
        case Formula::Kind::Or:
            print_rec(f.left(), p, false, out);
            out += " | ";
            print_rec(f.right(), p + 1, inner_right, out);
            break;
        case Formula::Kind::Implies:
            print_rec(f.left(), p + 1, false, out);
            out += " -> ";
            print_rec(f.right(), p, inner_right, out);
            break;
        case Formula::Kind::Iff:
            print_rec(f.left(), p, false, out);
            out += " <-> ";
            print_rec(f.right(), p + 1, inner_right, out);
            break;
        default:
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string print_formula(const Formula& f) {
    std::string out;
    print_rec(f, 0, true, out);
    return out;
}

std::string print_vocabulary(const Vocabulary& vocab) {
    std::ostringstream out;
    out << "vocab " << vocab.name() << " {";
    for (const auto& rel : vocab.relations()) {
        out << " relation " << rel.name << "/" << rel.arity << ";";
    }
    for (const auto& c : vocab.constants()) {
        out << " constant " << c << ";";
    }
    out << " }\n";
    return out.str();
}

std::string print_structure(const FiniteStructure& s) {
    std::ostringstream out;
    out << "structure " << s.name() << " : " << s.vocabulary().name() << " {\n";
    out << "  universe = { ";
    for (size_t i = 0; i < s.universe().size(); ++i) {
        if (i) out << ", ";
        out << s.universe()[i];
    }
    out << " };\n";
    for (size_t r = 0; r < s.vocabulary().relations().size(); ++r) {
        const auto& rel = s.vocabulary().relations()[r];
        out << "  " << rel.name << " = { ";
        const auto& tuples = s.relation_tuples(static_cast<int>(r));
        for (size_t i = 0; i < tuples.size(); ++i) {
            if (i) out << ", ";
            out << "(";
            for (size_t j = 0; j < tuples[i].size(); ++j) {
                if (j) out << ",";
                out << s.element_name(tuples[i][j]);
            }
            out << ")";
        }
        out << (tuples.empty() ? "};\n" : " };\n");
    }
    for (size_t c = 0; c < s.vocabulary().constants().size(); ++c) {
        out << "  " << s.vocabulary().constants()[c] << " = "
            << s.element_name(s.constant_value(static_cast<int>(c))) << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string print_structure_file(const FiniteStructure& s) {
    return print_vocabulary(s.vocabulary()) + print_structure(s);
}

std::string format_error(const ParseError& error) {
    std::ostringstream out;
    out << "line " << error.span.line << ", column " << error.span.column << ": "
        << error.message;
    if (!error.expected.empty()) {
        out << " (expected ";
        for (size_t i = 0; i < error.expected.size(); ++i) {
            if (i) out << ", ";
            out << error.expected[i];
        }
        out << ")";
    }
    return out.str();
}

}  // namespace preslab

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "preslab/logic.hpp"

// Concrete syntax for formulas and structure files.
//
// Formula grammar (operator precedence ~ > & > | > -> > <->, with ->
// right-associative and quantifier scope extending maximally right):
//
//   formula := iff
//   iff     := imp ("<->" imp)*
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | quant | atom | "(" formula ")"
//   quant   := ("forall"|"exists") var ("," var)* "." formula
//   atom    := rel "(" term ("," term)* ")" | term ("="|"!=") term
//
// Identifiers are [A-Za-z_][A-Za-z0-9_']*; `forall` and `exists` are
// keywords; `t1 != t2` is sugar for ~(t1 = t2); `#` starts a line comment.
//
// Structure file format:
//
//   vocab graph { relation E/2; constant c0; }
//   structure C3 : graph {
//     universe = { a, b, c };
//     E = { (a,b), (b,c), (c,a) };
//     c0 = a;
//   }

namespace preslab {

struct SourceSpan {
    int line = 1;        // 1-based
    int column = 1;      // 1-based
    size_t offset = 0;   // byte offset into the input
    size_t length = 0;

    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    std::string message;
    SourceSpan span;
    std::vector<std::string> expected;  // token descriptions, may be empty
};

/// Value-or-error result; parsing never throws across the API boundary.
template <typename T>
class ParseResult {
  public:
    ParseResult(T value) : v_(std::move(value)) {}
    ParseResult(ParseError error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const { return std::get<T>(v_); }
    T&& take() { return std::move(std::get<T>(v_)); }
    const ParseError& error() const { return std::get<ParseError>(v_); }

  private:
    std::variant<T, ParseError> v_;
};

ParseResult<Formula> parse_formula(const std::string& text, const Vocabulary& vocab);

struct StructureFile {
    VocabularyPtr vocab;
    std::vector<FiniteStructure> structures;
};

/// Parses a vocabulary declaration followed by structure blocks. All
/// returned structures validate.
ParseResult<StructureFile> parse_structures(const std::string& text);

/// Prints with minimal parenthesization; output re-parses to a structurally
/// equal AST.
std::string print_formula(const Formula& f);

std::string print_vocabulary(const Vocabulary& vocab);
std::string print_structure(const FiniteStructure& s);

/// Vocabulary block plus one structure block; re-parsable by
/// parse_structures.
std::string print_structure_file(const FiniteStructure& s);

/// "line L, column C" rendering plus the message, for diagnostics.
std::string format_error(const ParseError& error);

}  // namespace preslab

#pragma once

// Concrete syntax: lexer, recursive-descent parser and pretty-printer.
//
//   type  := "iota" | type "-o" type | "(" type ")" | "!" type      (! in ext mode)
//   term  := atom+
//   atom  := nat | "succ" | "pred" | ident | "$" ident
//          | "\" ident ":" type "." term
//          | "mu" "$" ident ":" type "." term
//          | "lif" term "then" term "else" term
//          | "(" term ")"
//   ext   := "promote!" atom ["as" ident "in" term] | "derelict" atom
//          | "discard" term "in" term
//          | "copy" term "as" ident "," ident [":" type] "in" term

#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "sllam/syntax.hpp"

namespace sllam {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  enum class Code { Syntax, DuplicateBasisName, ExtensionDisabled };

  ParseError(Code code, SourceSpan span, std::string message, std::set<std::string> expected = {});

  Code code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  const std::set<std::string>& expected() const { return expected_; }
  const std::string& message() const { return message_; }

  /// `file:line:col: message`
  std::string render(const std::string& file = "<input>") const;

 private:
  Code code_;
  SourceSpan span_;
  std::string message_;
  std::set<std::string> expected_;
};

struct ParseOptions {
  bool extensions = false;
  /// Resolves the kind of free plain identifiers; unresolved ones are ground.
  const Basis* free = nullptr;
};

Term parse_term(const std::string& text, const ParseOptions& opts = {});
Type parse_type(const std::string& text, bool extensions = false);

struct Judgment {
  Basis basis;
  Term term;
  Type type;
};

Judgment parse_judgment(const std::string& text, bool extensions = false);

std::string pretty(const Term& t);
std::string pretty(const Type& t);

}  // namespace sllam

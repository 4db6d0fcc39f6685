#pragma once

// Text syntax:
//   formula := "false" | "true" | atom | "~" formula | formula "&" formula
//            | formula "|" formula | formula "->" formula
//            | "[a]" formula | "[b]" formula | "<a>" formula | "<b>" formula
//            | "(" formula ")"
// Binding, tightest first: unary (~, [x], <x>); &; |; -> (right-associative).
// & and | associate to the left.

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "formula.hpp"

namespace wdsat {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = implication();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  Formula implication() {
    Formula lhs = disjunction();
    if (accept("->")) return Formula::implies(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek_is("|")) {
      accept("|");
      f = Formula::disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (peek_is("&")) {
      accept("&");
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    skip_space();
    if (accept("~")) return Formula::neg(unary());
    if (accept("[a]")) return Formula::box(Modality::a, unary());
    if (accept("[b]")) return Formula::box(Modality::b, unary());
    if (accept("<a>")) return Formula::diamond(Modality::a, unary());
    if (accept("<b>")) return Formula::diamond(Modality::b, unary());
    if (accept("(")) {
      Formula f = implication();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    if (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word == "false") return Formula::falsum();
      if (word == "true") return Formula::top();
      return Formula::atom(word);
    }
    if (pos_ >= text_.size()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + text_[pos_] + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_is(std::string_view tok) {
    skip_space();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek_is(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Precedence levels used by the printer.
constexpr int kImplies = 1;
constexpr int kOr = 2;
constexpr int kAnd = 3;
constexpr int kUnary = 4;

inline void print_into(Formula f, int context, std::string& out);

inline void print_binary(Formula l, const char* op, Formula r, int level, int left_level,
                         int right_level, int context, std::string& out) {
  bool parens = level < context;
  if (parens) out += '(';
  print_into(l, left_level, out);
  out += op;
  print_into(r, right_level, out);
  if (parens) out += ')';
}

// Derived forms are recovered on output so that parse(print(f)) == f.
inline void print_into(Formula f, int context, std::string& out) {
  switch (f.kind()) {
    case Kind::atom:
      out += f.name();
      return;
    case Kind::falsum:
      out += "false";
      return;
    case Kind::box_a:
    case Kind::box_b:
      out += f.kind() == Kind::box_a ? "[a]" : "[b]";
      print_into(f.child(), kUnary, out);
      return;
    case Kind::conj:
      print_binary(f.left(), " & ", f.right(), kAnd, kAnd, kUnary, context, out);
      return;
    case Kind::neg:
      break;
  }
  Formula g = f.child();
  if (g.is_falsum()) {
    out += "true";
    return;
  }
  if (g.is_box() && g.child().is_neg()) {
    out += g.is_box(Modality::a) ? "<a>" : "<b>";
    print_into(g.child().child(), kUnary, out);
    return;
  }
  if (g.is_conj() && g.left().is_neg() && g.right().is_neg()) {
    print_binary(g.left().child(), " | ", g.right().child(), kOr, kOr, kAnd, context, out);
    return;
  }
  if (g.is_conj() && g.right().is_neg()) {
    print_binary(g.left(), " -> ", g.right().child(), kImplies, kOr, kImplies, context, out);
    return;
  }
  out += '~';
  print_into(g, kUnary, out);
}

}  // namespace detail

/// Parses a formula, eliminating derived connectives. Throws ParseError.
inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Prints with minimal parentheses; derived connectives are re-sugared.
inline std::string to_string(Formula f) {
  std::string out;
  detail::print_into(f, 0, out);
  return out;
}

inline std::string to_string(const FormulaSet& w) {
  std::string out = "{";
  bool first = true;
  for (Formula f : w) {
    if (!first) out += ", ";
    first = false;
    out += to_string(f);
  }
  out += "}";
  return out;
}

}  // namespace wdsat

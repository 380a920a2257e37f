#include "isummary/term.hpp"

#include <algorithm>
#include <cctype>

namespace isummary {

namespace {

bool isNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool isNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool isWellFormed(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri:
      return !term.lexical.empty() &&
             std::none_of(term.lexical.begin(), term.lexical.end(),
                          [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    case TermKind::Variable:
      return !term.lexical.empty() && isNameStart(term.lexical.front()) &&
             std::all_of(term.lexical.begin(), term.lexical.end(), isNameChar);
    case TermKind::Blank:
      return !term.lexical.empty();
    case TermKind::Literal:
      return true;
  }
  return false;
}

std::string escapeLiteral(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string toNTriples(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri:
      return "<" + term.lexical + ">";
    case TermKind::Blank:
      return "_:" + term.lexical;
    case TermKind::Variable:
      return "?" + term.lexical;
    case TermKind::Literal: {
      std::string out = "\"" + escapeLiteral(term.lexical) + "\"";
      if (!term.datatypeOrLang.empty()) {
        if (term.datatypeOrLang.front() == '@') {
          out += term.datatypeOrLang;
        } else {
          out += "^^<" + term.datatypeOrLang + ">";
        }
      }
      return out;
    }
  }
  return {};
}

bool isValidPattern(const TriplePattern& pattern) {
  return !pattern.subject.isLiteral() &&
         (pattern.predicate.kind == TermKind::Iri ||
          pattern.predicate.kind == TermKind::Variable);
}

}  // namespace isummary

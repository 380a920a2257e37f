#include "isummary/sparql.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <unordered_map>

namespace isummary {

namespace {

//---------------------------------------------------------------------------
// Lexer
//---------------------------------------------------------------------------

enum class Tok {
  IriRef,       // <...>, text without brackets
  PName,        // prefix:local
  Var,          // ?x, text without sigil
  String,       // decoded literal body
  Number,       // numeric literal text
  LangTag,      // @en, text without '@'
  DoubleCaret,  // ^^
  Blank,        // _:label, text without '_:'
  Name,         // bare word (keywords, 'a', undeclared identifiers)
  Punct,        // single character
  End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

bool isNameStartByte(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool isNameByte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

void appendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void skipSpaceAndComments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::optional<std::size_t> iriRefEnd() const {
    for (std::size_t i = pos_ + 1; i < src_.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(src_[i]);
      if (c == '>') return i;
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`' || c == '\\')
        return std::nullopt;
    }
    return std::nullopt;
  }

  std::string readName() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (isNameByte(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    // A trailing '.' terminates the triple, it is not part of the name.
    while (pos_ > start && src_[pos_ - 1] == '.') --pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string readLocalPart() {
    std::size_t start = pos_;
    while (pos_ < src_.size()) {
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (isNameByte(c) || c == '.' || c == ':' || c == '%') {
        ++pos_;
      } else {
        break;
      }
    }
    while (pos_ > start && src_[pos_ - 1] == '.') --pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string readString(std::size_t start) {
    char quote = src_[pos_];
    bool longForm = peek(1) == quote && peek(2) == quote;
    pos_ += longForm ? 3 : 1;
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError(start, "unterminated string literal");
      char c = src_[pos_];
      if (longForm) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          return out;
        }
      } else if (c == quote) {
        ++pos_;
        return out;
      } else if (c == '\n' || c == '\r') {
        throw ParseError(pos_, "newline in short string literal");
      }
      if (c == '\\') {
        char e = peek(1);
        pos_ += 2;
        switch (e) {
          case 't': out += '\t'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u':
          case 'U': {
            std::size_t len = e == 'u' ? 4 : 8;
            if (pos_ + len > src_.size()) throw ParseError(pos_, "truncated unicode escape");
            std::uint32_t cp = 0;
            for (std::size_t i = 0; i < len; ++i) {
              char h = src_[pos_ + i];
              if (!std::isxdigit(static_cast<unsigned char>(h)))
                throw ParseError(pos_ + i, "bad unicode escape");
              cp = cp * 16 + static_cast<std::uint32_t>(
                                 std::isdigit(static_cast<unsigned char>(h))
                                     ? h - '0'
                                     : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
            }
            appendUtf8(out, cp);
            pos_ += len;
            break;
          }
          default:
            throw ParseError(pos_ - 2, "unknown escape sequence");
        }
        continue;
      }
      out += c;
      ++pos_;
    }
  }

  bool startsNumber() const {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    if ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(peek(1)))) return true;
    return false;
  }

  std::string readNumber() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') &&
          std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      pos_ += 2;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  Token next() {
    skipSpaceAndComments();
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (c == '<') {
      if (auto end = iriRefEnd()) {
        t.kind = Tok::IriRef;
        t.text = std::string(src_.substr(pos_ + 1, *end - pos_ - 1));
        pos_ = *end + 1;
        return t;
      }
    } else if ((c == '?' || c == '$') && isNameStartByte(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_' ||
                                    static_cast<unsigned char>(src_[pos_]) >= 0x80))
        ++pos_;
      t.kind = Tok::Var;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    } else if (c == '"' || c == '\'') {
      t.kind = Tok::String;
      t.text = readString(pos_);
      return t;
    } else if (c == '@' && std::isalpha(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '-'))
        ++pos_;
      t.kind = Tok::LangTag;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    } else if (c == '^' && peek(1) == '^') {
      pos_ += 2;
      t.kind = Tok::DoubleCaret;
      return t;
    } else if (c == '_' && peek(1) == ':') {
      pos_ += 2;
      t.kind = Tok::Blank;
      t.text = readName();
      if (t.text.empty()) throw ParseError(t.offset, "empty blank node label");
      return t;
    } else if (startsNumber()) {
      t.kind = Tok::Number;
      t.text = readNumber();
      return t;
    } else if (c == ':') {
      ++pos_;
      t.kind = Tok::PName;
      t.text = ":" + readLocalPart();
      return t;
    } else if (isNameStartByte(static_cast<unsigned char>(c))) {
      std::string name = readName();
      if (peek() == ':') {
        ++pos_;
        t.kind = Tok::PName;
        t.text = name + ":" + readLocalPart();
      } else {
        t.kind = Tok::Name;
        t.text = std::move(name);
      }
      return t;
    }
    t.kind = Tok::Punct;
    t.text = std::string(1, c);
    ++pos_;
    return t;
  }
};

//---------------------------------------------------------------------------
// Parser
//---------------------------------------------------------------------------

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

constexpr std::array<std::string_view, 34> kKeywords = {
    "PREFIX", "BASE",   "SELECT",   "DISTINCT", "REDUCED",  "WHERE",   "FROM",
    "NAMED",  "OPTIONAL", "UNION",  "FILTER",   "GRAPH",    "SERVICE", "MINUS",
    "BIND",   "VALUES", "LIMIT",    "OFFSET",   "ORDER",    "BY",      "GROUP",
    "HAVING", "ASK",    "CONSTRUCT", "DESCRIBE", "AS",      "NOT",     "EXISTS",
    "ASC",    "DESC",   "UNDEF",    "SILENT",   "INSERT",   "DELETE"};

bool isKeyword(std::string_view name) {
  std::string u = upper(name);
  return std::find(kKeywords.begin(), kKeywords.end(), u) != kKeywords.end();
}

const std::unordered_map<std::string, std::string>& builtinPrefixes() {
  static const std::unordered_map<std::string, std::string> prefixes = {
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"xsd", std::string(kXsd)},
      {"owl", "http://www.w3.org/2002/07/owl#"},
  };
  return prefixes;
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& options)
      : tokens_(Lexer(src).run()), options_(options) {}

  std::vector<TriplePattern> parseQuery() {
    parsePrologue();
    if (!isKeywordToken(peek(), "SELECT")) {
      if (peek().kind == Tok::Name) {
        std::string kw = upper(peek().text);
        if (kw == "ASK" || kw == "CONSTRUCT" || kw == "DESCRIBE" || kw == "INSERT" ||
            kw == "DELETE")
          fail(peek(), "unsupported query form " + kw);
      }
      fail(peek(), "expected SELECT");
    }
    advance();
    parseProjection();
    while (isKeywordToken(peek(), "FROM")) {
      advance();
      if (isKeywordToken(peek(), "NAMED")) advance();
      parseIri();
    }
    if (isKeywordToken(peek(), "WHERE")) advance();
    const Token& open = peek();
    expectPunct("{");
    parseGroup(0);
    if (patterns_.empty()) fail(open, "empty basic graph pattern");
    return std::move(patterns_);
  }

  Term parseSingleTerm() {
    Term t = parseObject();
    if (peek().kind != Tok::End) fail(peek(), "trailing input after term");
    return t;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
  std::unordered_map<std::string, std::string> prefixes_;
  std::vector<TriplePattern> patterns_;
  int anonCounter_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] static void fail(const Token& t, const std::string& reason) {
    throw ParseError(t.offset, reason);
  }

  static bool isPunct(const Token& t, std::string_view p) {
    return t.kind == Tok::Punct && t.text == p;
  }
  static bool isKeywordToken(const Token& t, std::string_view kw) {
    return t.kind == Tok::Name && upper(t.text) == kw;
  }

  void expectPunct(std::string_view p) {
    if (!isPunct(peek(), p)) {
      fail(peek(), "expected '" + std::string(p) + "'" +
                       (peek().kind == Tok::End ? " before end of query" : ""));
    }
    advance();
  }

  void parsePrologue() {
    while (true) {
      if (isKeywordToken(peek(), "PREFIX")) {
        advance();
        const Token& name = peek();
        if (name.kind != Tok::PName || name.text.back() != ':')
          fail(name, "expected prefix name in PREFIX declaration");
        std::string prefix = name.text.substr(0, name.text.size() - 1);
        advance();
        if (peek().kind != Tok::IriRef) fail(peek(), "expected IRI in PREFIX declaration");
        prefixes_[prefix] = advance().text;
      } else if (isKeywordToken(peek(), "BASE")) {
        advance();
        if (peek().kind != Tok::IriRef) fail(peek(), "expected IRI in BASE declaration");
        advance();
      } else {
        return;
      }
    }
  }

  void parseProjection() {
    if (isKeywordToken(peek(), "DISTINCT") || isKeywordToken(peek(), "REDUCED")) advance();
    if (isPunct(peek(), "*")) {
      advance();
      return;
    }
    int count = 0;
    while (true) {
      if (peek().kind == Tok::Var) {
        advance();
        ++count;
      } else if (isPunct(peek(), "(")) {
        skipBalanced("(", ")");
        ++count;
      } else {
        break;
      }
    }
    if (count == 0) fail(peek(), "expected projection variables or '*'");
  }

  void skipBalanced(std::string_view open, std::string_view close) {
    const Token& start = peek();
    expectPunct(open);
    int depth = 1;
    while (depth > 0) {
      const Token& t = peek();
      if (t.kind == Tok::End) fail(start, "unbalanced '" + std::string(open) + "'");
      if (isPunct(t, open)) ++depth;
      if (isPunct(t, close)) --depth;
      advance();
    }
  }

  void skipConstraint() {
    if (isPunct(peek(), "(")) {
      skipBalanced("(", ")");
      return;
    }
    if (isKeywordToken(peek(), "NOT")) {
      advance();
      if (!isKeywordToken(peek(), "EXISTS")) fail(peek(), "expected EXISTS after NOT");
    }
    if (isKeywordToken(peek(), "EXISTS")) {
      advance();
      skipBalanced("{", "}");
      return;
    }
    if (peek().kind == Tok::Name || peek().kind == Tok::PName || peek().kind == Tok::IriRef) {
      advance();
      skipBalanced("(", ")");
      return;
    }
    fail(peek(), "malformed FILTER");
  }

  void skipValues() {
    if (peek().kind == Tok::Var) {
      advance();
    } else if (isPunct(peek(), "(")) {
      skipBalanced("(", ")");
    } else {
      fail(peek(), "malformed VALUES");
    }
    skipBalanced("{", "}");
  }

  // Parses the body of a group whose '{' has been consumed, including the
  // closing '}'.
  void parseGroup(int depth) {
    if (isKeywordToken(peek(), "SELECT")) fail(peek(), "subqueries are not supported");
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::End) fail(t, "expected '}' before end of query");
      if (isPunct(t, "}")) {
        advance();
        return;
      }
      if (isPunct(t, ".")) {
        advance();
        continue;
      }
      if (isPunct(t, "{")) {
        advance();
        parseGroup(depth + 1);
        while (isKeywordToken(peek(), "UNION")) {
          advance();
          expectPunct("{");
          parseGroup(depth + 1);
        }
        continue;
      }
      if (t.kind == Tok::Name && isKeyword(t.text)) {
        std::string kw = upper(t.text);
        advance();
        if (kw == "OPTIONAL") {
          expectPunct("{");
          parseGroup(depth + 1);
        } else if (kw == "GRAPH") {
          parseVarOrIri();
          expectPunct("{");
          parseGroup(depth + 1);
        } else if (kw == "FILTER") {
          skipConstraint();
        } else if (kw == "MINUS") {
          skipBalanced("{", "}");
        } else if (kw == "BIND") {
          skipBalanced("(", ")");
        } else if (kw == "VALUES") {
          skipValues();
        } else if (kw == "SERVICE") {
          fail(t, "SERVICE is not supported");
        } else {
          fail(t, "unexpected keyword " + kw);
        }
        continue;
      }
      parseTriplesSameSubject();
    }
  }

  void parseVarOrIri() {
    if (peek().kind == Tok::Var) {
      advance();
      return;
    }
    parseIri();
  }

  Term parseIri() {
    const Token& t = peek();
    if (t.kind == Tok::IriRef) {
      advance();
      return makeIri(t, t.text);
    }
    if (t.kind == Tok::PName) {
      advance();
      return expandPName(t);
    }
    if (t.kind == Tok::Name && !isKeyword(t.text)) {
      advance();
      return makeIri(t, options_.basePrefix + t.text);
    }
    fail(t, "expected IRI");
  }

  static Term makeIri(const Token& at, std::string value) {
    Term term = Term::iri(std::move(value));
    if (!isWellFormed(term)) fail(at, "malformed IRI");
    return term;
  }

  Term expandPName(const Token& t) const {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    std::string local = t.text.substr(colon + 1);
    if (auto it = prefixes_.find(prefix); it != prefixes_.end())
      return makeIri(t, it->second + local);
    if (auto it = builtinPrefixes().find(prefix); it != builtinPrefixes().end())
      return makeIri(t, it->second + local);
    return makeIri(t, t.text);
  }

  Term parseSubject() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
        return variable(advance());
      case Tok::Blank:
        advance();
        return Term::blank(t.text);
      case Tok::String:
      case Tok::Number:
        fail(t, "literal in subject position");
      case Tok::Punct:
        if (t.text == "[") return parseAnon();
        if (t.text == "(") fail(t, "RDF collections are not supported");
        fail(t, "unexpected '" + t.text + "' in subject position");
      case Tok::Name:
        if (upper(t.text) == "TRUE" || upper(t.text) == "FALSE")
          fail(t, "literal in subject position");
        return parseIri();
      default:
        return parseIri();
    }
  }

  Term parseAnon() {
    const Token& open = advance();
    if (!isPunct(peek(), "]")) fail(open, "blank node property lists are not supported");
    advance();
    return Term::blank("anon" + std::to_string(anonCounter_++));
  }

  static Term variable(const Token& t) {
    Term v = Term::variable(t.text);
    if (!isWellFormed(v)) fail(t, "malformed variable name");
    return v;
  }

  Term parseVerb() {
    const Token& t = peek();
    if (t.kind == Tok::Punct && (t.text == "^" || t.text == "!" || t.text == "(")) {
      fail(t, "property paths are not supported");
    }
    Term verb;
    if (t.kind == Tok::Var) {
      verb = variable(advance());
    } else if (t.kind == Tok::Name && t.text == "a") {
      advance();
      verb = Term::iri(std::string(kRdfType));
    } else if (t.kind == Tok::IriRef || t.kind == Tok::PName ||
               (t.kind == Tok::Name && !isKeyword(t.text))) {
      verb = parseIri();
    } else {
      fail(t, "expected predicate");
    }
    const Token& after = peek();
    if (after.kind == Tok::Punct &&
        (after.text == "/" || after.text == "|" || after.text == "*" || after.text == "+" ||
         after.text == "?")) {
      fail(after, "property paths are not supported");
    }
    return verb;
  }

  Term parseObject() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
        return variable(advance());
      case Tok::Blank:
        advance();
        return Term::blank(t.text);
      case Tok::String: {
        advance();
        std::string body = t.text;
        if (peek().kind == Tok::LangTag) {
          return Term::literal(std::move(body), "@" + advance().text);
        }
        if (peek().kind == Tok::DoubleCaret) {
          advance();
          Term dt = parseIri();
          return Term::literal(std::move(body), dt.lexical);
        }
        return Term::literal(std::move(body));
      }
      case Tok::Number: {
        advance();
        const std::string& n = t.text;
        std::string dt = n.find_first_of("eE") != std::string::npos ? "double"
                         : n.find('.') != std::string::npos        ? "decimal"
                                                                   : "integer";
        return Term::literal(n, std::string(kXsd) + dt);
      }
      case Tok::Punct:
        if (t.text == "[") return parseAnon();
        if (t.text == "(") fail(t, "RDF collections are not supported");
        fail(t, "unexpected '" + t.text + "' in object position");
      case Tok::Name: {
        std::string u = upper(t.text);
        if (u == "TRUE" || u == "FALSE") {
          advance();
          std::string lex = u == "TRUE" ? "true" : "false";
          return Term::literal(lex, std::string(kXsd) + "boolean");
        }
        return parseIri();
      }
      default:
        return parseIri();
    }
  }

  void parseTriplesSameSubject() {
    Term subject = parseSubject();
    while (true) {
      Term verb = parseVerb();
      while (true) {
        Term object = parseObject();
        patterns_.push_back({subject, verb, std::move(object)});
        if (!isPunct(peek(), ",")) break;
        advance();
      }
      if (!isPunct(peek(), ";")) break;
      while (isPunct(peek(), ";")) advance();
      const Token& n = peek();
      if (isPunct(n, ".") || isPunct(n, "}")) break;
    }
  }
};

}  // namespace

ParsedQuery parseQuery(std::string_view text, const ParseOptions& options) {
  Parser parser(text, options);
  ParsedQuery q;
  q.patterns = parser.parseQuery();
  q.raw = std::string(text);
  return q;
}

Term parseTerm(std::string_view text, const ParseOptions& options) {
  Parser parser(text, options);
  return parser.parseSingleTerm();
}

std::string toCanonicalText(const std::vector<TriplePattern>& patterns) {
  std::string out = "SELECT * WHERE {";
  for (const auto& p : patterns) {
    out += ' ';
    out += toNTriples(p.subject);
    out += ' ';
    out += toNTriples(p.predicate);
    out += ' ';
    out += toNTriples(p.object);
    out += " .";
  }
  out += " }";
  return out;
}

}  // namespace isummary

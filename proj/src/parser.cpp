#include "sllam/parser.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <vector>

namespace sllam {

ParseError::ParseError(Code code, SourceSpan span, std::string message,
                       std::set<std::string> expected)
    : std::runtime_error(message),
      code_(code),
      span_(span),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

std::string ParseError::render(const std::string& file) const {
  std::string out = file + ":" + std::to_string(span_.line) + ":" +
                    std::to_string(span_.column) + ": " + message_;
  if (!expected_.empty()) {
    out += " (expected";
    bool first = true;
    for (const auto& e : expected_) {
      out += first ? " " : ", ";
      out += e;
      first = false;
    }
    out += ")";
  }
  return out;
}

namespace {

enum class Tok {
  Ident,
  Number,
  Backslash,
  Colon,
  Dot,
  LParen,
  RParen,
  Dollar,
  Comma,
  Lolli,      // -o
  Turnstile,  // |-
  Bang,       // !
  PromoteBang,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const std::set<std::string> kCoreKeywords = {"iota", "succ", "pred", "mu", "lif", "then", "else"};
const std::set<std::string> kExtKeywords = {"discard", "copy", "as", "in", "derelict", "promote"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceSpan sp = here();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "<end of input>", sp});
        return out;
      }
      char c = text_[pos_];
      auto single = [&](Tok k) {
        advance(1);
        out.push_back({k, std::string(1, c), close(sp)});
      };
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t b = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '\''))
          advance(1);
        std::string word = text_.substr(b, pos_ - b);
        if (word == "promote" && pos_ < text_.size() && text_[pos_] == '!') {
          advance(1);
          out.push_back({Tok::PromoteBang, "promote!", close(sp)});
        } else {
          out.push_back({Tok::Ident, word, close(sp)});
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t b = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          advance(1);
        out.push_back({Tok::Number, text_.substr(b, pos_ - b), close(sp)});
      } else if (c == '\\') {
        single(Tok::Backslash);
      } else if (c == ':') {
        single(Tok::Colon);
      } else if (c == '.') {
        single(Tok::Dot);
      } else if (c == '(') {
        single(Tok::LParen);
      } else if (c == ')') {
        single(Tok::RParen);
      } else if (c == '$') {
        single(Tok::Dollar);
      } else if (c == ',') {
        single(Tok::Comma);
      } else if (c == '!') {
        single(Tok::Bang);
      } else if (c == '-' && peek(1) == 'o') {
        advance(2);
        out.push_back({Tok::Lolli, "-o", close(sp)});
      } else if (c == '|' && peek(1) == '-') {
        advance(2);
        out.push_back({Tok::Turnstile, "|-", close(sp)});
      } else {
        advance(1);
        throw ParseError(ParseError::Code::Syntax, close(sp),
                         std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  char peek(std::size_t off) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance(1);
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }
  SourceSpan here() const { return {pos_, pos_, line_, col_}; }
  SourceSpan close(SourceSpan sp) const {
    sp.end = pos_;
    return sp;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Scope {
  std::string name;
  VarKind kind;
};

class Parser {
 public:
  Parser(const std::string& text, ParseOptions opts)
      : opts_(opts), toks_(Lexer(text).run()), text_size_(text.size()) {}

  Term whole_term() {
    Term t = term();
    expect_end();
    return t;
  }

  Type whole_type() {
    Type t = type();
    expect_end();
    return t;
  }

  Judgment judgment() {
    std::vector<BasisEntry> entries;
    if (!at(Tok::Turnstile)) {
      for (;;) {
        SourceSpan sp = cur().span;
        bool stable = accept(Tok::Dollar);
        std::string name = ident("variable name");
        expect(Tok::Colon, "':'");
        Type ty = type();
        for (const auto& e : entries)
          if (e.name == name)
            throw ParseError(ParseError::Code::DuplicateBasisName, sp,
                             "duplicate basis name '" + name + "'");
        VarKind kind = stable ? VarKind::Stable : kind_for_binder(ty);
        entries.push_back({name, kind, ty});
        if (!accept(Tok::Comma)) break;
      }
    }
    expect(Tok::Turnstile, "'|-'");
    Basis basis(entries);
    opts_.free = &basis;
    Term t = term();
    expect(Tok::Colon, "':'");
    Type ty = type();
    expect_end();
    return {basis, t, ty};
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(const char* w) const { return at(Tok::Ident) && cur().text == w; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(const char* w) {
    if (!at_word(w)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    SourceSpan sp = cur().span;
    if (sp.start >= text_size_ && text_size_ > 0) {
      sp.start = text_size_ - 1;
      sp.end = text_size_;
    }
    throw ParseError(ParseError::Code::Syntax, sp, "unexpected " + describe(cur()),
                     std::move(expected));
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return t.text;
    return "'" + t.text + "'";
  }

  void expect(Tok k, const std::string& what) {
    if (!accept(k)) fail({what});
  }
  void expect_word(const char* w) {
    if (!accept_word(w)) fail({std::string("'") + w + "'"});
  }
  void expect_end() {
    if (!at(Tok::End)) fail({"end of input"});
  }

  void require_ext(const Token& t) const {
    if (!opts_.extensions)
      throw ParseError(ParseError::Code::ExtensionDisabled, t.span,
                       "'" + t.text + "' requires extension mode");
  }

  bool is_reserved(const std::string& w) const {
    return kCoreKeywords.count(w) || kExtKeywords.count(w);
  }

  std::string ident(const std::string& what) {
    if (!at(Tok::Ident) || is_reserved(cur().text)) fail({what});
    return toks_[pos_++].text;
  }

  // -- types ---------------------------------------------------------------

  Type type() {
    Type left = type_atom();
    if (accept(Tok::Lolli)) return Type::arrow(left, type());
    return left;
  }

  Type type_atom() {
    if (accept_word("iota")) return Type::ground();
    if (at(Tok::Bang)) {
      require_ext(cur());
      ++pos_;
      return Type::bang(type_atom());
    }
    if (accept(Tok::LParen)) {
      Type t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail({"'iota'", "'('"});
  }

  // -- terms ---------------------------------------------------------------

  bool starts_atom() const {
    switch (cur().kind) {
      case Tok::Number:
      case Tok::Dollar:
      case Tok::Backslash:
      case Tok::LParen:
      case Tok::PromoteBang:
        return true;
      case Tok::Ident: {
        const auto& w = cur().text;
        if (w == "then" || w == "else" || w == "in" || w == "as" || w == "iota") return false;
        return true;
      }
      default:
        return false;
    }
  }

  Term term() {
    if (!starts_atom())
      fail({"term"});
    Term t = atom();
    while (starts_atom()) t = Term::app(t, atom());
    return t;
  }

  VarKind resolve(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->name == name) return it->kind;
    if (opts_.free)
      if (const auto* e = opts_.free->find(name)) return e->kind;
    return VarKind::Ground;
  }

  template <class F>
  Term with_scope(std::vector<Scope> bound, F&& body) {
    for (auto& b : bound) scopes_.push_back(b);
    Term t = body();
    scopes_.resize(scopes_.size() - bound.size());
    return t;
  }

  Term atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Number: {
        ++pos_;
        std::uint64_t k = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), k);
        if (ec != std::errc() || k > 100000)
          throw ParseError(ParseError::Code::Syntax, t.span, "numeral literal too large");
        return numeral(k);
      }
      case Tok::Dollar: {
        ++pos_;
        return Term::var(ident("stable variable name"), VarKind::Stable);
      }
      case Tok::Backslash: {
        ++pos_;
        std::string name = ident("binder name");
        expect(Tok::Colon, "':'");
        Type ann = type();
        expect(Tok::Dot, "'.'");
        return Term::lam(name, ann, with_scope({{name, kind_for_binder(ann)}}, [&] { return term(); }));
      }
      case Tok::LParen: {
        ++pos_;
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::PromoteBang: {
        require_ext(t);
        ++pos_;
        Term arg = atom();
        if (accept_word("as")) {
          std::string z = ident("binder name");
          expect_word("in");
          Term body = with_scope({{z, VarKind::Higher}}, [&] { return term(); });
          return Term::promote_as(arg, z, body);
        }
        return Term::promote(arg);
      }
      case Tok::Ident:
        break;
      default:
        fail({"term"});
    }

    const std::string& w = t.text;
    if (w == "succ") {
      ++pos_;
      return Term::succ();
    }
    if (w == "pred") {
      ++pos_;
      return Term::pred();
    }
    if (w == "mu") {
      ++pos_;
      expect(Tok::Dollar, "'$'");
      std::string name = ident("stable binder name");
      expect(Tok::Colon, "':'");
      Type ann = type();
      expect(Tok::Dot, "'.'");
      return Term::mu(name, ann, with_scope({{name, VarKind::Stable}}, [&] { return term(); }));
    }
    if (w == "lif") {
      ++pos_;
      Term c = term();
      expect_word("then");
      Term l = term();
      expect_word("else");
      Term r = term();
      return Term::lif(c, l, r);
    }
    if (w == "derelict") {
      require_ext(t);
      ++pos_;
      return Term::derelict(atom());
    }
    if (w == "discard") {
      require_ext(t);
      ++pos_;
      Term m = term();
      expect_word("in");
      Term n = term();
      return Term::discard(m, n);
    }
    if (w == "copy") {
      require_ext(t);
      ++pos_;
      Term m = term();
      expect_word("as");
      std::string x1 = ident("binder name");
      expect(Tok::Comma, "','");
      std::string x2 = ident("binder name");
      bool bang = false;
      if (accept(Tok::Colon)) {
        SourceSpan sp = cur().span;
        Type ann = type();
        if (ann.is_bang() && ann.inner().is_ground())
          bang = true;
        else if (!ann.is_ground())
          throw ParseError(ParseError::Code::Syntax, sp, "copy binders must be iota or !iota");
      }
      expect_word("in");
      VarKind k = bang ? VarKind::Higher : VarKind::Ground;
      Term n = with_scope({{x1, k}, {x2, k}}, [&] { return term(); });
      return Term::copy(m, x1, x2, n, bang);
    }
    if (kExtKeywords.count(w)) {
      require_ext(t);
      fail({"term"});
    }
    std::string name = ident("term");
    return Term::var(name, resolve(name));
  }

  ParseOptions opts_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t text_size_;
  std::vector<Scope> scopes_;
};

// -- pretty printing -------------------------------------------------------

enum class Ctx { Top, Fun, Arg };

bool ends_with_promote(const Term& t) {
  switch (t.kind()) {
    case TermKind::Promote: return true;
    case TermKind::App: return ends_with_promote(t.child(1));
    case TermKind::Derelict: return ends_with_promote(t.child(0));
    default: return false;
  }
}

void pp(const Term& t, Ctx ctx, std::string& out);

void pp_binder_like(const Term& t, Ctx ctx, std::string& out, const std::function<void()>& body) {
  bool paren = ctx != Ctx::Top;
  if (paren) out += '(';
  body();
  if (paren) out += ')';
}

void pp(const Term& t, Ctx ctx, std::string& out) {
  if (auto k = numeral_of(t)) {
    out += std::to_string(*k);
    return;
  }
  switch (t.kind()) {
    case TermKind::Zero: out += '0'; return;
    case TermKind::Succ: out += "succ"; return;
    case TermKind::Pred: out += "pred"; return;
    case TermKind::Var:
      if (t.var_kind() == VarKind::Stable) out += '$';
      out += t.name();
      return;
    case TermKind::App: {
      bool paren = ctx == Ctx::Arg;
      if (paren) out += '(';
      pp(t.child(0), Ctx::Fun, out);
      out += ' ';
      pp(t.child(1), Ctx::Arg, out);
      if (paren) out += ')';
      return;
    }
    case TermKind::Lam:
      pp_binder_like(t, ctx, out, [&] {
        out += "\\" + t.name() + ":" + t.annotation().str() + ". ";
        pp(t.child(0), Ctx::Top, out);
      });
      return;
    case TermKind::Mu:
      pp_binder_like(t, ctx, out, [&] {
        out += "mu $" + t.name() + ":" + t.annotation().str() + ". ";
        pp(t.child(0), Ctx::Top, out);
      });
      return;
    case TermKind::LIf:
      pp_binder_like(t, ctx, out, [&] {
        out += "lif ";
        pp(t.child(0), Ctx::Top, out);
        out += " then ";
        pp(t.child(1), Ctx::Top, out);
        out += " else ";
        pp(t.child(2), Ctx::Top, out);
      });
      return;
    case TermKind::Promote:
      out += "promote!";
      out += '(';
      pp(t.child(0), Ctx::Top, out);
      out += ')';
      return;
    case TermKind::Derelict: {
      bool paren = ctx == Ctx::Arg;
      if (paren) out += '(';
      out += "derelict ";
      pp(t.child(0), Ctx::Arg, out);
      if (paren) out += ')';
      return;
    }
    case TermKind::Discard:
      pp_binder_like(t, ctx, out, [&] {
        out += "discard ";
        pp(t.child(0), Ctx::Top, out);
        out += " in ";
        pp(t.child(1), Ctx::Top, out);
      });
      return;
    case TermKind::Copy:
      pp_binder_like(t, ctx, out, [&] {
        out += "copy ";
        // `promote!(M) as` would read as a general promotion.
        bool wrap = ends_with_promote(t.child(0));
        if (wrap) out += '(';
        pp(t.child(0), Ctx::Top, out);
        if (wrap) out += ')';
        out += " as " + t.name() + "," + t.second_name();
        if (t.bang_copy()) out += " : !iota";
        out += " in ";
        pp(t.child(1), Ctx::Top, out);
      });
      return;
    case TermKind::PromoteAs:
      pp_binder_like(t, ctx, out, [&] {
        out += "promote!(";
        pp(t.child(0), Ctx::Top, out);
        out += ") as " + t.name() + " in ";
        pp(t.child(1), Ctx::Top, out);
      });
      return;
  }
}

}  // namespace

Term parse_term(const std::string& text, const ParseOptions& opts) {
  return Parser(text, opts).whole_term();
}

Type parse_type(const std::string& text, bool extensions) {
  ParseOptions opts;
  opts.extensions = extensions;
  return Parser(text, opts).whole_type();
}

Judgment parse_judgment(const std::string& text, bool extensions) {
  ParseOptions opts;
  opts.extensions = extensions;
  return Parser(text, opts).judgment();
}

std::string pretty(const Term& t) {
  std::string out;
  pp(t, Ctx::Top, out);
  return out;
}

std::string pretty(const Type& t) { return t.str(); }

}  // namespace sllam

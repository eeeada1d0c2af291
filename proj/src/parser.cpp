#include "causalprobe/parser.hpp"

#include <cctype>
#include <charconv>
#include <map>

#include "causalprobe/errors.hpp"

namespace causalprobe {

namespace {

struct Token {
  enum class Kind {
    End, Ident, Number, True, False,
    LParen, RParen, Comma,
    Plus, Minus, Star,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or, Not,
  } kind = Kind::End;
  std::size_t offset = 0;
  std::string ident;
  double number = 0.0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word == "true") current_.kind = Token::Kind::True;
      else if (word == "false") current_.kind = Token::Kind::False;
      else if (word == "and") current_.kind = Token::Kind::And;
      else if (word == "or") current_.kind = Token::Kind::Or;
      else if (word == "not") current_.kind = Token::Kind::Not;
      else {
        current_.kind = Token::Kind::Ident;
        current_.ident = std::move(word);
      }
      return;
    }
    switch (c) {
      case '(': current_.kind = Token::Kind::LParen; ++pos_; return;
      case ')': current_.kind = Token::Kind::RParen; ++pos_; return;
      case ',': current_.kind = Token::Kind::Comma; ++pos_; return;
      case '+': current_.kind = Token::Kind::Plus; ++pos_; return;
      case '-': current_.kind = Token::Kind::Minus; ++pos_; return;
      case '*': current_.kind = Token::Kind::Star; ++pos_; return;
      case '=':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          current_.kind = Token::Kind::Eq;
          pos_ += 2;
          return;
        }
        throw ParseError(pos_, "'==' (single '=' is not an operator)");
      case '!':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          current_.kind = Token::Kind::Ne;
          pos_ += 2;
          return;
        }
        throw ParseError(pos_, "'!='");
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          current_.kind = Token::Kind::Le;
          pos_ += 2;
        } else {
          current_.kind = Token::Kind::Lt;
          ++pos_;
        }
        return;
      case '>':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          current_.kind = Token::Kind::Ge;
          pos_ += 2;
        } else {
          current_.kind = Token::Kind::Gt;
          ++pos_;
        }
        return;
      default:
        throw ParseError(pos_, "a token");
    }
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError(pos_, "a digit after '.'");
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        // "2e" could be a number followed by identifier; reject plainly.
        throw ParseError(mark + 1, "an exponent digit");
      }
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ParseError(start, "a decimal number");
    current_.kind = Token::Kind::Number;
    current_.number = v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Expr parse() {
    Expr e = parse_or();
    if (lex_.peek().kind != Token::Kind::End)
      throw ParseError(lex_.peek().offset, "end of input");
    return e;
  }

 private:
  Expr parse_or() {
    Expr e = parse_and();
    while (lex_.peek().kind == Token::Kind::Or) {
      lex_.take();
      e = Expr::binary(BinaryOp::Or, std::move(e), parse_and());
    }
    return e;
  }

  Expr parse_and() {
    Expr e = parse_cmp();
    while (lex_.peek().kind == Token::Kind::And) {
      lex_.take();
      e = Expr::binary(BinaryOp::And, std::move(e), parse_cmp());
    }
    return e;
  }

  Expr parse_cmp() {
    Expr e = parse_add();
    for (;;) {
      BinaryOp op;
      switch (lex_.peek().kind) {
        case Token::Kind::Eq: op = BinaryOp::Eq; break;
        case Token::Kind::Ne: op = BinaryOp::Ne; break;
        case Token::Kind::Lt: op = BinaryOp::Lt; break;
        case Token::Kind::Le: op = BinaryOp::Le; break;
        case Token::Kind::Gt: op = BinaryOp::Gt; break;
        case Token::Kind::Ge: op = BinaryOp::Ge; break;
        default: return e;
      }
      lex_.take();
      e = Expr::binary(op, std::move(e), parse_add());
    }
  }

  Expr parse_add() {
    Expr e = parse_mul();
    for (;;) {
      if (lex_.peek().kind == Token::Kind::Plus) {
        lex_.take();
        e = Expr::binary(BinaryOp::Add, std::move(e), parse_mul());
      } else if (lex_.peek().kind == Token::Kind::Minus) {
        lex_.take();
        e = Expr::binary(BinaryOp::Sub, std::move(e), parse_mul());
      } else {
        return e;
      }
    }
  }

  Expr parse_mul() {
    Expr e = parse_unary();
    while (lex_.peek().kind == Token::Kind::Star) {
      lex_.take();
      e = Expr::binary(BinaryOp::Mul, std::move(e), parse_unary());
    }
    return e;
  }

  Expr parse_unary() {
    if (lex_.peek().kind == Token::Kind::Minus) {
      lex_.take();
      return Expr::unary(UnaryOp::Neg, parse_unary());
    }
    if (lex_.peek().kind == Token::Kind::Not) {
      Token t = lex_.take();
      // "not(x)" and "not x" build the same tree.
      if (lex_.peek().kind == Token::Kind::LParen) {
        lex_.take();
        Expr arg = parse_or();
        expect_rparen();
        return Expr::unary(UnaryOp::Not, std::move(arg));
      }
      (void)t;
      return Expr::unary(UnaryOp::Not, parse_unary());
    }
    return parse_primary();
  }

  Expr parse_primary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Token::Kind::Number:
        lex_.take();
        return Expr::literal(Value(t.number));
      case Token::Kind::True:
        lex_.take();
        return Expr::literal(Value(true));
      case Token::Kind::False:
        lex_.take();
        return Expr::literal(Value(false));
      case Token::Kind::LParen: {
        lex_.take();
        Expr e = parse_or();
        expect_rparen();
        return e;
      }
      case Token::Kind::And:
      case Token::Kind::Or: {
        // Call form: or(a, b) / and(a, b).
        Token kw = lex_.take();
        expect_lparen();
        Expr a = parse_or();
        expect_comma();
        Expr b = parse_or();
        expect_rparen();
        return Expr::binary(
            kw.kind == Token::Kind::And ? BinaryOp::And : BinaryOp::Or,
            std::move(a), std::move(b));
      }
      case Token::Kind::Ident: {
        lex_.take();
        if (lex_.peek().kind == Token::Kind::LParen)
          return parse_call(t);
        return Expr::var(t.ident);
      }
      default:
        throw ParseError(t.offset, "an expression");
    }
  }

  Expr parse_call(const Token& name) {
    static const std::map<std::string, FuncOp, std::less<>> unary_fns = {
        {"relu", FuncOp::Relu},
        {"logistic", FuncOp::Logistic},
        {"tanh", FuncOp::Tanh},
        {"abs", FuncOp::Abs},
    };
    lex_.take();  // '('
    if (auto it = unary_fns.find(name.ident); it != unary_fns.end()) {
      Expr a = parse_or();
      expect_rparen();
      return Expr::call(it->second, {std::move(a)});
    }
    if (name.ident == "min" || name.ident == "max") {
      Expr a = parse_or();
      expect_comma();
      Expr b = parse_or();
      expect_rparen();
      return Expr::binary(
          name.ident == "min" ? BinaryOp::Min : BinaryOp::Max,
          std::move(a), std::move(b));
    }
    if (name.ident == "ite") {
      Expr c = parse_or();
      expect_comma();
      Expr a = parse_or();
      expect_comma();
      Expr b = parse_or();
      expect_rparen();
      return Expr::call(FuncOp::Ite, {std::move(c), std::move(a), std::move(b)});
    }
    throw UnknownFunctionError(name.offset, name.ident);
  }

  void expect_lparen() {
    if (lex_.peek().kind != Token::Kind::LParen)
      throw ParseError(lex_.peek().offset, "'('");
    lex_.take();
  }

  void expect_rparen() {
    if (lex_.peek().kind != Token::Kind::RParen)
      throw ParseError(lex_.peek().offset, "')'");
    lex_.take();
  }

  void expect_comma() {
    if (lex_.peek().kind != Token::Kind::Comma)
      throw ParseError(lex_.peek().offset, "','");
    lex_.take();
  }

  Lexer lex_;
};

}  // namespace

Expr parse_expression(std::string_view text) {
  Parser p(text);
  Expr e = p.parse();
  // Reject mismatches that are definite without knowing variable domains
  // ("1.5 and x", "not(2)"). Domain-aware checks run at graph build time.
  infer_type(e, {});
  return e;
}

}  // namespace causalprobe

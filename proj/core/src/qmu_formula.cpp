#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gamet/qmu.hpp"

namespace gamet {

namespace {

std::shared_ptr<FormulaNode> make(FormulaKind kind) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = kind;
  return node;
}

// True when every free occurrence of `var` in `f` sits under an even
// number of negations (parity = 0 at the top).
bool polarity_even(const Formula& f, const std::string& var, int parity) {
  switch (f->kind) {
    case FormulaKind::CalcVar:
      return f->name != var || parity % 2 == 0;
    case FormulaKind::Neg:
      return polarity_even(f->left, var, parity + 1);
    case FormulaKind::Mu:
    case FormulaKind::Nu:
      if (f->name == var) return true;  // shadowed
      return polarity_even(f->left, var, parity);
    case FormulaKind::Or:
    case FormulaKind::And:
      return polarity_even(f->left, var, parity) && polarity_even(f->right, var, parity);
    case FormulaKind::ShiftUp:
    case FormulaKind::ShiftDown:
    case FormulaKind::Pre:
      return polarity_even(f->left, var, parity);
    default:
      return true;
  }
}

void require_unit(double c, const char* what) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

}  // namespace

Formula FormulaNode::constant(double c) {
  require_unit(c, "constant");
  auto node = make(FormulaKind::Constant);
  node->value = c;
  return node;
}

Formula FormulaNode::obs(std::string name) {
  auto node = make(FormulaKind::ObsVar);
  node->name = std::move(name);
  return node;
}

Formula FormulaNode::var(std::string name) {
  auto node = make(FormulaKind::CalcVar);
  auto& n = *node;
  n.name = std::move(name);
  n.has_calc_var = true;
  return node;
}

Formula FormulaNode::neg(Formula f) {
  auto node = make(FormulaKind::Neg);
  auto& n = *node;
  n.left = std::move(f);
  n.has_calc_var = n.left->has_calc_var;
  return node;
}

Formula FormulaNode::disj(Formula a, Formula b) {
  auto node = make(FormulaKind::Or);
  auto& n = *node;
  n.left = std::move(a);
  n.right = std::move(b);
  n.has_calc_var = n.left->has_calc_var || n.right->has_calc_var;
  return node;
}

Formula FormulaNode::conj(Formula a, Formula b) {
  auto node = make(FormulaKind::And);
  auto& n = *node;
  n.left = std::move(a);
  n.right = std::move(b);
  n.has_calc_var = n.left->has_calc_var || n.right->has_calc_var;
  return node;
}

Formula FormulaNode::shift_up(Formula f, double c) {
  require_unit(c, "shift");
  auto node = make(FormulaKind::ShiftUp);
  auto& n = *node;
  n.left = std::move(f);
  n.value = c;
  n.has_calc_var = n.left->has_calc_var;
  return node;
}

Formula FormulaNode::shift_down(Formula f, double c) {
  require_unit(c, "shift");
  auto node = make(FormulaKind::ShiftDown);
  auto& n = *node;
  n.left = std::move(f);
  n.value = c;
  n.has_calc_var = n.left->has_calc_var;
  return node;
}

Formula FormulaNode::shift(Formula f, double c) {
  if (c >= 0.0) return shift_up(std::move(f), std::min(c, 1.0));
  return shift_down(std::move(f), std::min(-c, 1.0));
}

Formula FormulaNode::pre_op(int player, Formula f) {
  if (player != 1 && player != 2) throw std::invalid_argument("pre player must be 1 or 2");
  auto node = make(FormulaKind::Pre);
  auto& n = *node;
  n.left = std::move(f);
  n.player = player;
  n.has_calc_var = n.left->has_calc_var;
  return node;
}

Formula FormulaNode::mu(std::string var, Formula body) {
  if (!polarity_even(body, var, 0))
    throw std::invalid_argument("bound variable " + var + " under an odd number of negations");
  auto node = make(FormulaKind::Mu);
  auto& n = *node;
  n.name = std::move(var);
  n.left = std::move(body);
  n.has_calc_var = true;
  return node;
}

Formula FormulaNode::nu(std::string var, Formula body) {
  if (!polarity_even(body, var, 0))
    throw std::invalid_argument("bound variable " + var + " under an odd number of negations");
  auto node = make(FormulaKind::Nu);
  auto& n = *node;
  n.name = std::move(var);
  n.left = std::move(body);
  n.has_calc_var = true;
  return node;
}

// --- printing ---------------------------------------------------------

namespace {

int precedence(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Mu:
    case FormulaKind::Nu:
      return 0;
    case FormulaKind::Or:
      return 1;
    case FormulaKind::And:
      return 2;
    case FormulaKind::ShiftUp:
    case FormulaKind::ShiftDown:
      return 3;
    case FormulaKind::Neg:
      return 4;
    default:
      return 5;
  }
}

std::string number_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

void print_into(const Formula& f, std::string& out);

// Children are parenthesized whenever their precedence does not strictly
// dominate the parent's; this keeps print/parse a strict round trip for
// every tree shape (including right-nested chains).
void print_child(const Formula& child, int parent_prec, bool strict, std::string& out) {
  int prec = precedence(child);
  bool parens = strict ? prec <= parent_prec : prec < parent_prec;
  if (parens) out.push_back('(');
  print_into(child, out);
  if (parens) out.push_back(')');
}

void print_into(const Formula& f, std::string& out) {
  switch (f->kind) {
    case FormulaKind::Constant:
      out += number_text(f->value);
      break;
    case FormulaKind::ObsVar:
    case FormulaKind::CalcVar:
      out += f->name;
      break;
    case FormulaKind::Neg:
      out.push_back('~');
      print_child(f->left, 4, false, out);
      break;
    case FormulaKind::Or:
      print_child(f->left, 1, false, out);
      out += " | ";
      print_child(f->right, 1, true, out);
      break;
    case FormulaKind::And:
      print_child(f->left, 2, false, out);
      out += " & ";
      print_child(f->right, 2, true, out);
      break;
    case FormulaKind::ShiftUp:
      print_child(f->left, 3, false, out);
      out += " (+) ";
      out += number_text(f->value);
      break;
    case FormulaKind::ShiftDown:
      print_child(f->left, 3, false, out);
      out += " (-) ";
      out += number_text(f->value);
      break;
    case FormulaKind::Pre:
      out += f->player == 1 ? "pre1(" : "pre2(";
      print_into(f->left, out);
      out.push_back(')');
      break;
    case FormulaKind::Mu:
    case FormulaKind::Nu:
      out += f->kind == FormulaKind::Mu ? "mu " : "nu ";
      out += f->name;
      out += ". ";
      print_into(f->left, out);
      break;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

bool formula_equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name ||
      a->player != b->player)
    return false;
  if ((a->left == nullptr) != (b->left == nullptr)) return false;
  if ((a->right == nullptr) != (b->right == nullptr)) return false;
  if (a->left && !formula_equal(a->left, b->left)) return false;
  if (a->right && !formula_equal(a->right, b->right)) return false;
  return true;
}

namespace {
void collect_nodes(const Formula& f, std::set<const FormulaNode*>& seen) {
  if (!f || !seen.insert(f.get()).second) return;
  collect_nodes(f->left, seen);
  collect_nodes(f->right, seen);
}
}  // namespace

size_t formula_dag_size(const Formula& f) {
  std::set<const FormulaNode*> seen;
  collect_nodes(f, seen);
  return seen.size();
}

// --- wellformedness ---------------------------------------------------

namespace {

void scan(const Formula& f, std::set<std::string>& bound, bool& closed, bool& positive,
          bool& has_pre1, bool& has_pre2) {
  switch (f->kind) {
    case FormulaKind::Constant:
    case FormulaKind::ObsVar:
      break;
    case FormulaKind::CalcVar:
      if (!bound.count(f->name)) closed = false;
      break;
    case FormulaKind::Neg:
      if (f->left->kind != FormulaKind::ObsVar) positive = false;
      scan(f->left, bound, closed, positive, has_pre1, has_pre2);
      break;
    case FormulaKind::Pre:
      (f->player == 1 ? has_pre1 : has_pre2) = true;
      scan(f->left, bound, closed, positive, has_pre1, has_pre2);
      break;
    case FormulaKind::Or:
    case FormulaKind::And:
      scan(f->left, bound, closed, positive, has_pre1, has_pre2);
      scan(f->right, bound, closed, positive, has_pre1, has_pre2);
      break;
    case FormulaKind::ShiftUp:
    case FormulaKind::ShiftDown:
      scan(f->left, bound, closed, positive, has_pre1, has_pre2);
      break;
    case FormulaKind::Mu:
    case FormulaKind::Nu: {
      bool inserted = bound.insert(f->name).second;
      scan(f->left, bound, closed, positive, has_pre1, has_pre2);
      if (inserted) bound.erase(f->name);
      break;
    }
  }
}

}  // namespace

WellformednessReport check_wellformed(const Formula& f) {
  WellformednessReport r;
  bool closed = true, positive = true, has_pre1 = false, has_pre2 = false;
  std::set<std::string> bound;
  scan(f, bound, closed, positive, has_pre1, has_pre2);
  r.is_closed = closed;
  r.is_positive = positive;
  if (has_pre1 && has_pre2)
    r.player_restriction = PlayerRestriction::None;
  else if (has_pre1)
    r.player_restriction = PlayerRestriction::Player1;
  else if (has_pre2)
    r.player_restriction = PlayerRestriction::Player2;
  else
    r.player_restriction = PlayerRestriction::Both;
  return r;
}

// --- parser -----------------------------------------------------------

namespace {

enum class Tok {
  Num,
  LowerIdent,
  UpperIdent,
  Tilde,
  Pipe,
  Amp,
  ShiftUp,
  ShiftDown,
  LParen,
  RParen,
  Dot,
  KwMu,
  KwNu,
  KwPre1,
  KwPre2,
  End,
};

struct Token {
  Tok kind = Tok::End;
  size_t pos = 0;
  double number = 0.0;
  std::string text;

  Token() = default;
  Token(Tok k, size_t p) : kind(k), pos(p) {}
  Token(Tok k, size_t p, double n) : kind(k), pos(p), number(n) {}
};

struct Lexer {
  std::string_view src;
  size_t at = 0;

  [[noreturn]] void fail(const std::string& message, size_t pos) const {
    throw FormulaParseError(message + " at position " + std::to_string(pos), pos);
  }

  Token next() {
    while (at < src.size() && std::isspace(static_cast<unsigned char>(src[at]))) ++at;
    size_t pos = at;
    if (at >= src.size()) return {Tok::End, pos};
    char c = src[at];
    if (c == '~') return ++at, Token{Tok::Tilde, pos};
    if (c == '|') return ++at, Token{Tok::Pipe, pos};
    if (c == '&') return ++at, Token{Tok::Amp, pos};
    if (c == ')') return ++at, Token{Tok::RParen, pos};
    if (c == '.') return ++at, Token{Tok::Dot, pos};
    if (c == '(') {
      if (at + 2 < src.size() && src[at + 2] == ')' && (src[at + 1] == '+' || src[at + 1] == '-')) {
        Tok k = src[at + 1] == '+' ? Tok::ShiftUp : Tok::ShiftDown;
        at += 3;
        return {k, pos};
      }
      return ++at, Token{Tok::LParen, pos};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end = at;
      while (end < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[end])) || src[end] == '.'))
        ++end;
      double v = 0.0;
      auto res = std::from_chars(src.data() + at, src.data() + end, v);
      if (res.ec != std::errc() || res.ptr != src.data() + end) fail("malformed number", pos);
      at = end;
      return {Tok::Num, pos, v};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = at;
      while (end < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
        ++end;
      std::string word(src.substr(at, end - at));
      at = end;
      if (word == "mu") return {Tok::KwMu, pos};
      if (word == "nu") return {Tok::KwNu, pos};
      if (word == "pre1") return {Tok::KwPre1, pos};
      if (word == "pre2") return {Tok::KwPre2, pos};
      bool upper = std::isupper(static_cast<unsigned char>(word[0]));
      Token t{upper ? Tok::UpperIdent : Tok::LowerIdent, pos};
      t.text = std::move(word);
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }
};

struct Parser {
  Lexer lex;
  Token look;

  explicit Parser(std::string_view src) : lex{src} { look = lex.next(); }

  Token take() {
    Token t = look;
    look = lex.next();
    return t;
  }

  void expect(Tok kind, const char* what) {
    if (look.kind != kind) lex.fail(std::string("expected ") + what, look.pos);
    take();
  }

  double unit_number(const char* what) {
    if (look.kind != Tok::Num) lex.fail(std::string("expected number after ") + what, look.pos);
    Token t = take();
    if (t.number < 0.0 || t.number > 1.0)
      lex.fail("constant " + std::to_string(t.number) + " outside [0,1]", t.pos);
    return t.number;
  }

  Formula formula() { return disjunction(); }

  Formula disjunction() {
    Formula f = conjunction();
    while (look.kind == Tok::Pipe) {
      take();
      f = FormulaNode::disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = shifted();
    while (look.kind == Tok::Amp) {
      take();
      f = FormulaNode::conj(f, shifted());
    }
    return f;
  }

  Formula shifted() {
    Formula f = negated();
    while (look.kind == Tok::ShiftUp || look.kind == Tok::ShiftDown) {
      Token t = take();
      double c = unit_number(t.kind == Tok::ShiftUp ? "(+)" : "(-)");
      f = t.kind == Tok::ShiftUp ? FormulaNode::shift_up(f, c) : FormulaNode::shift_down(f, c);
    }
    return f;
  }

  Formula negated() {
    if (look.kind == Tok::Tilde) {
      take();
      return FormulaNode::neg(negated());
    }
    return primary();
  }

  Formula binder(bool is_mu) {
    Token pos = look;
    if (look.kind != Tok::UpperIdent)
      lex.fail("expected an uppercase calculus variable after binder", look.pos);
    std::string var = take().text;
    expect(Tok::Dot, "'.'");
    Formula body = formula();  // binders extend maximally to the right
    try {
      return is_mu ? FormulaNode::mu(var, body) : FormulaNode::nu(var, body);
    } catch (const std::invalid_argument& e) {
      lex.fail(e.what(), pos.pos);
    }
  }

  Formula primary() {
    switch (look.kind) {
      case Tok::Num: {
        Token t = take();
        if (t.number < 0.0 || t.number > 1.0)
          lex.fail("constant " + std::to_string(t.number) + " outside [0,1]", t.pos);
        return FormulaNode::constant(t.number);
      }
      case Tok::LowerIdent:
        return FormulaNode::obs(take().text);
      case Tok::UpperIdent:
        return FormulaNode::var(take().text);
      case Tok::KwPre1:
      case Tok::KwPre2: {
        int player = look.kind == Tok::KwPre1 ? 1 : 2;
        take();
        expect(Tok::LParen, "'('");
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return FormulaNode::pre_op(player, f);
      }
      case Tok::KwMu:
        take();
        return binder(true);
      case Tok::KwNu:
        take();
        return binder(false);
      case Tok::LParen: {
        take();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        lex.fail("expected a formula", look.pos);
    }
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  if (p.look.kind != Tok::End)
    throw FormulaParseError("trailing input at position " + std::to_string(p.look.pos),
                            p.look.pos);
  return f;
}

}  // namespace gamet

#include "gfgq/formula.hpp"

#include <cctype>
#include <sstream>

namespace gfgq {

PropSet PropSet::of(std::initializer_list<std::string> names) {
  PropSet s;
  for (auto& n : names) s.props.insert(Proposition{n});
  return s;
}

PropSet PropSet::unite(const PropSet& o) const {
  if (all || o.all) return everything();
  PropSet r = *this;
  r.props.insert(o.props.begin(), o.props.end());
  return r;
}

QuantSpec spec_union(const QuantSpec& a, const QuantSpec& b) {
  return {a.behavioral.unite(b.behavioral),
          a.strongly_behavioral.unite(b.strongly_behavioral)};
}

std::set<Proposition> Prefix::props() const {
  std::set<Proposition> r;
  for (auto& q : quantifiers) r.insert(q.prop);
  return r;
}

// ---------------------------------------------------------------------------
// LTL constructors

static LtlPtr mk(LtlOp op, LtlPtr l = nullptr, LtlPtr r = nullptr) {
  auto n = std::make_shared<Ltl>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

LtlPtr ltl_true() { return mk(LtlOp::True); }
LtlPtr ltl_false() { return mk(LtlOp::False); }
LtlPtr ltl_atom(const std::string& name) {
  auto n = std::make_shared<Ltl>();
  n->op = LtlOp::Atom;
  n->atom = Proposition{name};
  return n;
}
LtlPtr ltl_not(LtlPtr a) { return mk(LtlOp::Not, std::move(a)); }
LtlPtr ltl_and(LtlPtr a, LtlPtr b) { return mk(LtlOp::And, std::move(a), std::move(b)); }
LtlPtr ltl_or(LtlPtr a, LtlPtr b) { return mk(LtlOp::Or, std::move(a), std::move(b)); }
LtlPtr ltl_implies(LtlPtr a, LtlPtr b) { return mk(LtlOp::Implies, std::move(a), std::move(b)); }
LtlPtr ltl_iff(LtlPtr a, LtlPtr b) { return mk(LtlOp::Iff, std::move(a), std::move(b)); }
LtlPtr ltl_next(LtlPtr a) { return mk(LtlOp::Next, std::move(a)); }
LtlPtr ltl_future(LtlPtr a) { return mk(LtlOp::Future, std::move(a)); }
LtlPtr ltl_globally(LtlPtr a) { return mk(LtlOp::Globally, std::move(a)); }
LtlPtr ltl_until(LtlPtr a, LtlPtr b) { return mk(LtlOp::Until, std::move(a), std::move(b)); }
LtlPtr ltl_release(LtlPtr a, LtlPtr b) { return mk(LtlOp::Release, std::move(a), std::move(b)); }

bool ltl_eq(const LtlPtr& a, const LtlPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == LtlOp::Atom) return a->atom == b->atom;
  return ltl_eq(a->lhs, b->lhs) && ltl_eq(a->rhs, b->rhs);
}

static void collect_props(const LtlPtr& f, std::set<Proposition>& out) {
  if (!f) return;
  if (f->op == LtlOp::Atom) out.insert(f->atom);
  collect_props(f->lhs, out);
  collect_props(f->rhs, out);
}

std::set<Proposition> ltl_props(const LtlPtr& f) {
  std::set<Proposition> r;
  collect_props(f, r);
  return r;
}

LtlPtr expand_core(const LtlPtr& f) {
  switch (f->op) {
    case LtlOp::True:
    case LtlOp::False:
    case LtlOp::Atom:
      return f;
    case LtlOp::Not: {
      auto a = expand_core(f->lhs);
      if (a->op == LtlOp::Not) return a->lhs;  // collapse !!
      return ltl_not(a);
    }
    case LtlOp::And: return ltl_and(expand_core(f->lhs), expand_core(f->rhs));
    case LtlOp::Or: return ltl_or(expand_core(f->lhs), expand_core(f->rhs));
    case LtlOp::Implies:
      return ltl_or(expand_core(ltl_not(f->lhs)), expand_core(f->rhs));
    case LtlOp::Iff: {
      auto a = expand_core(f->lhs), b = expand_core(f->rhs);
      auto na = expand_core(ltl_not(f->lhs)), nb = expand_core(ltl_not(f->rhs));
      return ltl_or(ltl_and(a, b), ltl_and(na, nb));
    }
    case LtlOp::Next: return ltl_next(expand_core(f->lhs));
    case LtlOp::Future: return ltl_until(ltl_true(), expand_core(f->lhs));
    case LtlOp::Globally:
      return ltl_not(ltl_until(ltl_true(), expand_core(ltl_not(f->lhs))));
    case LtlOp::Until: return ltl_until(expand_core(f->lhs), expand_core(f->rhs));
    case LtlOp::Release:
      return ltl_not(ltl_until(expand_core(ltl_not(f->lhs)),
                               expand_core(ltl_not(f->rhs))));
  }
  throw std::logic_error("expand_core: bad op");
}

LtlPtr nnf(const LtlPtr& f) {
  switch (f->op) {
    case LtlOp::True:
    case LtlOp::False:
    case LtlOp::Atom:
      return f;
    case LtlOp::Not: return nnf_not(f->lhs);
    case LtlOp::And: return ltl_and(nnf(f->lhs), nnf(f->rhs));
    case LtlOp::Or: return ltl_or(nnf(f->lhs), nnf(f->rhs));
    case LtlOp::Implies: return ltl_or(nnf_not(f->lhs), nnf(f->rhs));
    case LtlOp::Iff:
      return ltl_or(ltl_and(nnf(f->lhs), nnf(f->rhs)),
                    ltl_and(nnf_not(f->lhs), nnf_not(f->rhs)));
    case LtlOp::Next: return ltl_next(nnf(f->lhs));
    case LtlOp::Future: return ltl_future(nnf(f->lhs));
    case LtlOp::Globally: return ltl_globally(nnf(f->lhs));
    case LtlOp::Until: return ltl_until(nnf(f->lhs), nnf(f->rhs));
    case LtlOp::Release: return ltl_release(nnf(f->lhs), nnf(f->rhs));
  }
  throw std::logic_error("nnf: bad op");
}

LtlPtr nnf_not(const LtlPtr& f) {
  switch (f->op) {
    case LtlOp::True: return ltl_false();
    case LtlOp::False: return ltl_true();
    case LtlOp::Atom: return ltl_not(f);
    case LtlOp::Not: return nnf(f->lhs);
    case LtlOp::And: return ltl_or(nnf_not(f->lhs), nnf_not(f->rhs));
    case LtlOp::Or: return ltl_and(nnf_not(f->lhs), nnf_not(f->rhs));
    case LtlOp::Implies: return ltl_and(nnf(f->lhs), nnf_not(f->rhs));
    case LtlOp::Iff:
      return ltl_or(ltl_and(nnf(f->lhs), nnf_not(f->rhs)),
                    ltl_and(nnf_not(f->lhs), nnf(f->rhs)));
    case LtlOp::Next: return ltl_next(nnf_not(f->lhs));
    case LtlOp::Future: return ltl_globally(nnf_not(f->lhs));
    case LtlOp::Globally: return ltl_future(nnf_not(f->lhs));
    case LtlOp::Until: return ltl_release(nnf_not(f->lhs), nnf_not(f->rhs));
    case LtlOp::Release: return ltl_until(nnf_not(f->lhs), nnf_not(f->rhs));
  }
  throw std::logic_error("nnf_not: bad op");
}

int x_depth(const LtlPtr& f) {
  if (!f) return 0;
  int d = std::max(x_depth(f->lhs), x_depth(f->rhs));
  return f->op == LtlOp::Next ? d + 1 : d;
}

bool has_temporal_ops(const LtlPtr& f) {
  if (!f) return false;
  switch (f->op) {
    case LtlOp::Future:
    case LtlOp::Globally:
    case LtlOp::Until:
    case LtlOp::Release:
      return true;
    default:
      return has_temporal_ops(f->lhs) || has_temporal_ops(f->rhs);
  }
}

bool is_x_bounded(const LtlPtr& f, int h) {
  return !has_temporal_ops(f) && x_depth(f) < h;
}

// ---------------------------------------------------------------------------
// Formula AST

FormulaPtr f_leaf(LtlPtr m) {
  auto n = std::make_shared<Formula>();
  n->op = FormulaOp::Leaf;
  n->leaf = std::move(m);
  return n;
}
FormulaPtr f_not(FormulaPtr a) {
  auto n = std::make_shared<Formula>();
  n->op = FormulaOp::Not;
  n->lhs = std::move(a);
  return n;
}
static FormulaPtr f_bin(FormulaOp op, FormulaPtr a, FormulaPtr b) {
  auto n = std::make_shared<Formula>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return f_bin(FormulaOp::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return f_bin(FormulaOp::Or, std::move(a), std::move(b)); }
FormulaPtr f_quant(Quantifier q, FormulaPtr body) {
  auto n = std::make_shared<Formula>();
  n->op = FormulaOp::Quant;
  n->quant = std::move(q);
  n->lhs = std::move(body);
  return n;
}
FormulaPtr from_prenex(const Prefix& p, LtlPtr matrix) {
  FormulaPtr f = f_leaf(std::move(matrix));
  for (auto it = p.quantifiers.rbegin(); it != p.quantifiers.rend(); ++it)
    f = f_quant(*it, f);
  return f;
}

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case FormulaOp::Leaf: return ltl_eq(a->leaf, b->leaf);
    case FormulaOp::Quant:
      if (a->quant != b->quant) return false;
      return formula_eq(a->lhs, b->lhs);
    default:
      return formula_eq(a->lhs, b->lhs) && formula_eq(a->rhs, b->rhs);
  }
}

std::optional<PrenexView> to_prenex(const FormulaPtr& f) {
  PrenexView v;
  FormulaPtr cur = f;
  while (cur->op == FormulaOp::Quant) {
    v.prefix.quantifiers.push_back(cur->quant);
    cur = cur->lhs;
  }
  if (cur->op != FormulaOp::Leaf) return std::nullopt;
  v.matrix = cur->leaf;
  return v;
}

std::set<Proposition> free_props(const FormulaPtr& f) {
  switch (f->op) {
    case FormulaOp::Leaf: return ltl_props(f->leaf);
    case FormulaOp::Not: return free_props(f->lhs);
    case FormulaOp::Quant: {
      auto r = free_props(f->lhs);
      r.erase(f->quant.prop);
      return r;
    }
    default: {
      auto r = free_props(f->lhs);
      auto r2 = free_props(f->rhs);
      r.insert(r2.begin(), r2.end());
      return r;
    }
  }
}

static void collect_quantified(const FormulaPtr& f, std::set<Proposition>& out) {
  if (!f) return;
  if (f->op == FormulaOp::Quant) out.insert(f->quant.prop);
  if (f->op != FormulaOp::Leaf) {
    collect_quantified(f->lhs, out);
    collect_quantified(f->rhs, out);
  }
}

Classification classify(const FormulaPtr& f) {
  Classification c{};
  auto pv = to_prenex(f);
  c.is_prenex = pv.has_value();
  c.free_props = free_props(f);
  collect_quantified(f, c.quantified_props);
  c.is_behavioral = c.is_prenex;
  c.is_strongly_behavioral = c.is_prenex;
  if (pv) {
    for (auto& q : pv->prefix.quantifiers) {
      if (!q.spec.is_B()) c.is_behavioral = false;
      if (!q.spec.is_S()) c.is_strongly_behavioral = false;
    }
  } else {
    c.is_behavioral = c.is_strongly_behavioral = false;
  }
  return c;
}

FormulaPtr negate_prenex(const FormulaPtr& f) {
  auto pv = to_prenex(f);
  if (!pv) throw std::invalid_argument("negate_prenex: formula is not prenex");
  Prefix neg;
  for (auto q : pv->prefix.quantifiers) {
    q.kind = flip(q.kind);
    neg.quantifiers.push_back(q);
  }
  return from_prenex(neg, nnf_not(pv->matrix));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum Kind { Ident, Punct, End } kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  Token cur;

  explicit Lexer(const std::string& s) : src(s) { advance(); }

  void bump(char c) {
    if (c == '\n') { line++; col = 1; } else { col++; }
    pos++;
  }

  void advance() {
    while (pos < src.size() && std::isspace((unsigned char)src[pos])) bump(src[pos]);
    cur.line = line;
    cur.col = col;
    if (pos >= src.size()) { cur.kind = Token::End; cur.text.clear(); return; }
    char c = src[pos];
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::string t;
      while (pos < src.size() &&
             (std::isalnum((unsigned char)src[pos]) || src[pos] == '_')) {
        t += src[pos];
        bump(src[pos]);
      }
      cur.kind = Token::Ident;
      cur.text = t;
      return;
    }
    // multi-char operators
    if (src.compare(pos, 3, "<->") == 0) { cur = {Token::Punct, "<->", line, col}; bump('<'); bump('-'); bump('>'); return; }
    if (src.compare(pos, 2, "->") == 0) { cur = {Token::Punct, "->", line, col}; bump('-'); bump('>'); return; }
    static const std::string singles = "()!&|<>;:.*";
    if (singles.find(c) != std::string::npos) {
      cur = {Token::Punct, std::string(1, c), line, col};
      bump(c);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
};

const std::set<std::string> kReserved = {"true", "false", "X", "F", "G",
                                        "U", "R", "E", "A"};

struct Parser {
  Lexer lx;
  explicit Parser(const std::string& s) : lx(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lx.cur.line, lx.cur.col);
  }

  bool at_punct(const std::string& p) {
    return lx.cur.kind == Token::Punct && lx.cur.text == p;
  }
  bool at_ident(const std::string& t) {
    return lx.cur.kind == Token::Ident && lx.cur.text == t;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    lx.advance();
  }
  std::string expect_name() {
    if (lx.cur.kind != Token::Ident) fail("expected identifier");
    if (kReserved.count(lx.cur.text)) fail("reserved word '" + lx.cur.text + "' cannot name a proposition");
    auto t = lx.cur.text;
    lx.advance();
    return t;
  }

  PropSet parse_props_until(const std::string& stop) {
    PropSet s;
    if (at_punct("*")) {
      lx.advance();
      s = PropSet::everything();
    } else {
      while (lx.cur.kind == Token::Ident) s.props.insert(Proposition{expect_name()});
    }
    if (!at_punct(stop)) fail("expected '" + stop + "' in quantifier spec");
    lx.advance();
    return s;
  }

  QuantSpec parse_spec() {
    if (at_ident("B")) { lx.advance(); return QuantSpec::B(); }
    if (at_ident("S")) { lx.advance(); return QuantSpec::S(); }
    if (at_punct("<")) {
      lx.advance();
      QuantSpec s;
      s.behavioral = parse_props_until(";");
      s.strongly_behavioral = parse_props_until(">");
      return s;
    }
    fail("expected quantifier spec (B, S or <..; ..>)");
  }

  Prefix parse_prefix() {
    Prefix p;
    std::set<Proposition> seen;
    while ((at_ident("E") || at_ident("A")) && peek_is_quantifier()) {
      QuantKind k = at_ident("E") ? QuantKind::Exists : QuantKind::Forall;
      lx.advance();
      Proposition prop{expect_name()};
      if (!seen.insert(prop).second)
        fail("proposition '" + prop.name + "' quantified twice");
      QuantSpec spec = QuantSpec::vanilla();
      if (at_punct(":")) {
        lx.advance();
        spec = parse_spec();
      }
      expect_punct(".");
      p.quantifiers.push_back({k, prop, spec});
    }
    return p;
  }

  bool peek_is_quantifier() {
    // after E/A a quantified proposition name must follow
    return true;  // E/A are reserved, so they always start a quantifier
  }

  // precedence: unary > U,R > & > | > -> > <->
  LtlPtr parse_ltl() { return parse_iff(); }

  LtlPtr parse_iff() {
    auto l = parse_implies();
    if (at_punct("<->")) {
      lx.advance();
      return ltl_iff(l, parse_iff());
    }
    return l;
  }
  LtlPtr parse_implies() {
    auto l = parse_or();
    if (at_punct("->")) {
      lx.advance();
      return ltl_implies(l, parse_implies());
    }
    return l;
  }
  LtlPtr parse_or() {
    auto l = parse_and();
    while (at_punct("|")) {
      lx.advance();
      l = ltl_or(l, parse_and());
    }
    return l;
  }
  LtlPtr parse_and() {
    auto l = parse_until();
    while (at_punct("&")) {
      lx.advance();
      l = ltl_and(l, parse_until());
    }
    return l;
  }
  LtlPtr parse_until() {
    auto l = parse_unary();
    if (at_ident("U")) {
      lx.advance();
      return ltl_until(l, parse_until());
    }
    if (at_ident("R")) {
      lx.advance();
      return ltl_release(l, parse_until());
    }
    return l;
  }
  LtlPtr parse_unary() {
    if (at_punct("!")) { lx.advance(); return ltl_not(parse_unary()); }
    if (at_ident("X")) { lx.advance(); return ltl_next(parse_unary()); }
    if (at_ident("F")) { lx.advance(); return ltl_future(parse_unary()); }
    if (at_ident("G")) { lx.advance(); return ltl_globally(parse_unary()); }
    if (at_punct("(")) {
      lx.advance();
      auto f = parse_ltl();
      expect_punct(")");
      return f;
    }
    if (at_ident("true")) { lx.advance(); return ltl_true(); }
    if (at_ident("false")) { lx.advance(); return ltl_false(); }
    if (lx.cur.kind == Token::Ident) return ltl_atom(expect_name());
    fail("expected LTL formula");
  }

  FormulaPtr parse_sentence() {
    Prefix p = parse_prefix();
    LtlPtr m = parse_ltl();
    if (lx.cur.kind != Token::End) fail("trailing input after formula");
    return from_prenex(p, m);
  }
};

}  // namespace

FormulaPtr parse(const std::string& text) { return Parser(text).parse_sentence(); }

// ---------------------------------------------------------------------------
// Rendering: parse(render(f)) == f structurally.

static void render_ltl(const LtlPtr& f, std::ostringstream& o) {
  auto paren = [&](const LtlPtr& g) {
    o << "(";
    render_ltl(g, o);
    o << ")";
  };
  switch (f->op) {
    case LtlOp::True: o << "true"; return;
    case LtlOp::False: o << "false"; return;
    case LtlOp::Atom: o << f->atom.name; return;
    case LtlOp::Not: o << "!"; paren(f->lhs); return;
    case LtlOp::Next: o << "X "; paren(f->lhs); return;
    case LtlOp::Future: o << "F "; paren(f->lhs); return;
    case LtlOp::Globally: o << "G "; paren(f->lhs); return;
    case LtlOp::And: paren(f->lhs); o << " & "; paren(f->rhs); return;
    case LtlOp::Or: paren(f->lhs); o << " | "; paren(f->rhs); return;
    case LtlOp::Implies: paren(f->lhs); o << " -> "; paren(f->rhs); return;
    case LtlOp::Iff: paren(f->lhs); o << " <-> "; paren(f->rhs); return;
    case LtlOp::Until: paren(f->lhs); o << " U "; paren(f->rhs); return;
    case LtlOp::Release: paren(f->lhs); o << " R "; paren(f->rhs); return;
  }
}

std::string render(const LtlPtr& f) {
  std::ostringstream o;
  render_ltl(f, o);
  return o.str();
}

static std::string render_props(const PropSet& s) {
  if (s.all) return "*";
  std::string r;
  for (auto& p : s.props) {
    if (!r.empty()) r += " ";
    r += p.name;
  }
  return r;
}

std::string render(const QuantSpec& s) {
  if (s.is_vanilla()) return "";
  if (s.is_B()) return ":B";
  if (s.is_S()) return ":S";
  return ":<" + render_props(s.behavioral) + "; " +
         render_props(s.strongly_behavioral) + ">";
}

std::string render(const Quantifier& q) {
  return std::string(q.kind == QuantKind::Exists ? "E " : "A ") + q.prop.name +
         render(q.spec) + ".";
}

std::string render(const Prefix& p) {
  std::string r;
  for (auto& q : p.quantifiers) {
    if (!r.empty()) r += " ";
    r += render(q);
  }
  return r;
}

std::string render(const FormulaPtr& f) {
  auto pv = to_prenex(f);
  if (!pv) throw std::invalid_argument("render: non-prenex formula has no concrete syntax");
  std::string pre = render(pv->prefix);
  std::string m = render(pv->matrix);
  return pre.empty() ? m : pre + " " + m;
}

}  // namespace gfgq

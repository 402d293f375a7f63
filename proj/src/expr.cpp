#include "fla/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

namespace fla {

namespace {

enum class Op { constant, variable, add, mul, div, pow, neg, sqrt, exp, log, sin, cos };

int var_key(Var v) { return (v.kind == VarKind::fiber ? 0x10000 : 0) + v.index; }

}  // namespace

class ExprNode {
 public:
  Op op{Op::constant};
  double value{0.0};           // constant
  Var var{};                   // variable
  std::vector<ExprPtr> kids;   // n-ary for add/mul, 1-2 otherwise

  mutable std::mutex cache_mutex;
  mutable std::map<int, ExprPtr> diff_cache;
};

namespace {

ExprPtr make_node(Op op, std::vector<ExprPtr> kids) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->kids = std::move(kids);
  return n;
}

ExprPtr make_const(double c) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->value = c;
  return n;
}

ExprPtr make_var(Var v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::variable;
  n->var = v;
  return n;
}

bool is_const(const ExprPtr& e, double* v = nullptr) {
  if (e->op != Op::constant) return false;
  if (v) *v = e->value;
  return true;
}

bool is_const_eq(const ExprPtr& e, double c) {
  double v;
  return is_const(e, &v) && v == c;
}

ExprPtr add_ptrs(std::vector<ExprPtr> terms);
ExprPtr mul_ptrs(std::vector<ExprPtr> factors);
ExprPtr div_ptrs(ExprPtr a, ExprPtr b);
ExprPtr pow_ptrs(ExprPtr a, ExprPtr b);
ExprPtr neg_ptr(ExprPtr a);
ExprPtr func_ptr(Op op, ExprPtr a);

ExprPtr add_ptrs(std::vector<ExprPtr> terms) {
  std::vector<ExprPtr> flat;
  double acc = 0.0;
  for (auto& t : terms) {
    if (t->op == Op::add) {
      for (auto& k : t->kids) {
        double v;
        if (is_const(k, &v)) acc += v;
        else flat.push_back(k);
      }
    } else {
      double v;
      if (is_const(t, &v)) acc += v;
      else flat.push_back(std::move(t));
    }
  }
  if (acc != 0.0) flat.push_back(make_const(acc));
  if (flat.empty()) return make_const(0.0);
  if (flat.size() == 1) return flat[0];
  return make_node(Op::add, std::move(flat));
}

ExprPtr mul_ptrs(std::vector<ExprPtr> factors) {
  std::vector<ExprPtr> flat;
  double acc = 1.0;
  for (auto& f : factors) {
    if (f->op == Op::mul) {
      for (auto& k : f->kids) {
        double v;
        if (is_const(k, &v)) acc *= v;
        else flat.push_back(k);
      }
    } else {
      double v;
      if (is_const(f, &v)) acc *= v;
      else flat.push_back(std::move(f));
    }
  }
  if (acc == 0.0) return make_const(0.0);
  if (flat.empty()) return make_const(acc);
  if (acc != 1.0) flat.insert(flat.begin(), make_const(acc));
  if (flat.size() == 1) return flat[0];
  return make_node(Op::mul, std::move(flat));
}

ExprPtr div_ptrs(ExprPtr a, ExprPtr b) {
  double av, bv;
  if (is_const(a, &av) && av == 0.0) return make_const(0.0);
  if (is_const(b, &bv)) {
    if (bv == 1.0) return a;
    if (is_const(a, &av)) return make_const(av / bv);
  }
  return make_node(Op::div, {std::move(a), std::move(b)});
}

ExprPtr pow_ptrs(ExprPtr a, ExprPtr b) {
  double av, bv;
  if (is_const(b, &bv)) {
    if (bv == 0.0) return make_const(1.0);
    if (bv == 1.0) return a;
    if (is_const(a, &av)) return make_const(std::pow(av, bv));
  }
  if (is_const(a, &av) && av == 1.0) return make_const(1.0);
  return make_node(Op::pow, {std::move(a), std::move(b)});
}

ExprPtr neg_ptr(ExprPtr a) {
  double v;
  if (is_const(a, &v)) return make_const(-v);
  if (a->op == Op::neg) return a->kids[0];
  return make_node(Op::neg, {std::move(a)});
}

ExprPtr func_ptr(Op op, ExprPtr a) {
  double v;
  if (is_const(a, &v)) {
    switch (op) {
      case Op::sqrt: return make_const(std::sqrt(v));
      case Op::exp: return make_const(std::exp(v));
      case Op::log: return make_const(std::log(v));
      case Op::sin: return make_const(std::sin(v));
      case Op::cos: return make_const(std::cos(v));
      default: break;
    }
  }
  return make_node(op, {std::move(a)});
}

double eval_node(const ExprNode& n, const Point& p) {
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable: {
      const auto& coords = n.var.kind == VarKind::base ? p.x : p.y;
      if (n.var.index < 0 || n.var.index >= static_cast<int>(coords.size()))
        throw DomainError("variable index outside point dimensions");
      return coords[static_cast<std::size_t>(n.var.index)];
    }
    case Op::add: {
      double s = 0.0;
      for (const auto& k : n.kids) s += eval_node(*k, p);
      return s;
    }
    case Op::mul: {
      double s = 1.0;
      for (const auto& k : n.kids) s *= eval_node(*k, p);
      return s;
    }
    case Op::div: {
      double b = eval_node(*n.kids[1], p);
      if (b == 0.0) throw DomainError("division by zero");
      return eval_node(*n.kids[0], p) / b;
    }
    case Op::pow:
      return std::pow(eval_node(*n.kids[0], p), eval_node(*n.kids[1], p));
    case Op::neg:
      return -eval_node(*n.kids[0], p);
    case Op::sqrt: {
      double a = eval_node(*n.kids[0], p);
      if (a < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(a);
    }
    case Op::exp:
      return std::exp(eval_node(*n.kids[0], p));
    case Op::log: {
      double a = eval_node(*n.kids[0], p);
      if (a <= 0.0) throw DomainError("log of non-positive value");
      return std::log(a);
    }
    case Op::sin:
      return std::sin(eval_node(*n.kids[0], p));
    case Op::cos:
      return std::cos(eval_node(*n.kids[0], p));
  }
  throw std::logic_error("unreachable expression op");
}

ExprPtr diff_node(const ExprPtr& e, Var v);

ExprPtr diff_uncached(const ExprPtr& e, Var v) {
  const ExprNode& n = *e;
  switch (n.op) {
    case Op::constant:
      return make_const(0.0);
    case Op::variable:
      return make_const(n.var == v ? 1.0 : 0.0);
    case Op::add: {
      std::vector<ExprPtr> parts;
      parts.reserve(n.kids.size());
      for (const auto& k : n.kids) parts.push_back(diff_node(k, v));
      return add_ptrs(std::move(parts));
    }
    case Op::mul: {
      std::vector<ExprPtr> terms;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        std::vector<ExprPtr> factors;
        for (std::size_t j = 0; j < n.kids.size(); ++j)
          factors.push_back(j == i ? diff_node(n.kids[j], v) : n.kids[j]);
        terms.push_back(mul_ptrs(std::move(factors)));
      }
      return add_ptrs(std::move(terms));
    }
    case Op::div: {
      const auto& a = n.kids[0];
      const auto& b = n.kids[1];
      auto da = diff_node(a, v);
      auto db = diff_node(b, v);
      // (a/b)' = a'/b - a b'/b^2
      auto t1 = div_ptrs(da, b);
      auto t2 = div_ptrs(mul_ptrs({a, db}), mul_ptrs({b, b}));
      return add_ptrs({t1, neg_ptr(t2)});
    }
    case Op::pow: {
      const auto& a = n.kids[0];
      const auto& b = n.kids[1];
      double bv;
      if (is_const(b, &bv)) {
        // (a^c)' = c a^(c-1) a'
        auto da = diff_node(a, v);
        return mul_ptrs({make_const(bv), pow_ptrs(a, make_const(bv - 1.0)), da});
      }
      // general: a^b (b' log a + b a'/a)
      auto da = diff_node(a, v);
      auto db = diff_node(b, v);
      auto inner = add_ptrs({mul_ptrs({db, func_ptr(Op::log, a)}),
                             div_ptrs(mul_ptrs({b, da}), a)});
      return mul_ptrs({pow_ptrs(a, b), inner});
    }
    case Op::neg:
      return neg_ptr(diff_node(n.kids[0], v));
    case Op::sqrt: {
      auto da = diff_node(n.kids[0], v);
      return div_ptrs(da, mul_ptrs({make_const(2.0), func_ptr(Op::sqrt, n.kids[0])}));
    }
    case Op::exp:
      return mul_ptrs({func_ptr(Op::exp, n.kids[0]), diff_node(n.kids[0], v)});
    case Op::log:
      return div_ptrs(diff_node(n.kids[0], v), n.kids[0]);
    case Op::sin:
      return mul_ptrs({func_ptr(Op::cos, n.kids[0]), diff_node(n.kids[0], v)});
    case Op::cos:
      return neg_ptr(mul_ptrs({func_ptr(Op::sin, n.kids[0]), diff_node(n.kids[0], v)}));
  }
  throw std::logic_error("unreachable expression op");
}

ExprPtr diff_node(const ExprPtr& e, Var v) {
  const int key = var_key(v);
  {
    std::lock_guard<std::mutex> lock(e->cache_mutex);
    auto it = e->diff_cache.find(key);
    if (it != e->diff_cache.end()) return it->second;
  }
  ExprPtr d = diff_uncached(e, v);
  std::lock_guard<std::mutex> lock(e->cache_mutex);
  return e->diff_cache.emplace(key, std::move(d)).first->second;
}

bool depends_node(const ExprNode& n, const Var* v, VarKind* kind) {
  switch (n.op) {
    case Op::constant:
      return false;
    case Op::variable:
      if (v) return n.var == *v;
      return n.var.kind == *kind;
    default:
      for (const auto& k : n.kids)
        if (depends_node(*k, v, kind)) return true;
      return false;
  }
}

ExprPtr simplify_node(const ExprPtr& e) {
  const ExprNode& n = *e;
  switch (n.op) {
    case Op::constant:
    case Op::variable:
      return e;
    case Op::add: {
      std::vector<ExprPtr> kids;
      for (const auto& k : n.kids) kids.push_back(simplify_node(k));
      return add_ptrs(std::move(kids));
    }
    case Op::mul: {
      std::vector<ExprPtr> kids;
      for (const auto& k : n.kids) kids.push_back(simplify_node(k));
      return mul_ptrs(std::move(kids));
    }
    case Op::div:
      return div_ptrs(simplify_node(n.kids[0]), simplify_node(n.kids[1]));
    case Op::pow:
      return pow_ptrs(simplify_node(n.kids[0]), simplify_node(n.kids[1]));
    case Op::neg:
      return neg_ptr(simplify_node(n.kids[0]));
    default:
      return func_ptr(n.op, simplify_node(n.kids[0]));
  }
}

int precedence(Op op) {
  switch (op) {
    case Op::add: return 1;
    case Op::neg: return 2;
    case Op::mul:
    case Op::div: return 3;
    case Op::pow: return 4;
    default: return 5;
  }
}

void print_node(const ExprNode& n, std::ostream& os, int parent_prec) {
  const int prec = precedence(n.op);
  const bool paren = prec < parent_prec;
  if (paren) os << '(';
  switch (n.op) {
    case Op::constant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", n.value);
      if (n.value < 0) os << '(' << buf << ')';
      else os << buf;
      break;
    }
    case Op::variable:
      os << (n.var.kind == VarKind::base ? 'x' : 'y') << (n.var.index + 1);
      break;
    case Op::add:
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        const ExprNode& kid = *n.kids[i];
        double cv;
        if (kid.op == Op::neg) {
          os << (i ? " - " : "-");
          print_node(*kid.kids[0], os, precedence(Op::neg) + 1);
        } else if (is_const(n.kids[i], &cv) && cv < 0) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.17g", -cv);
          os << (i ? " - " : "-") << buf;
        } else {
          if (i) os << " + ";
          print_node(kid, os, prec);
        }
      }
      break;
    case Op::mul:
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) os << "*";
        print_node(*n.kids[i], os, prec + 1);
      }
      break;
    case Op::div:
      print_node(*n.kids[0], os, prec);
      os << "/";
      print_node(*n.kids[1], os, prec + 1);
      break;
    case Op::pow:
      print_node(*n.kids[0], os, prec + 1);
      os << "^";
      print_node(*n.kids[1], os, prec + 1);
      break;
    case Op::neg:
      os << "-";
      print_node(*n.kids[0], os, prec + 1);
      break;
    case Op::sqrt: os << "sqrt("; print_node(*n.kids[0], os, 0); os << ')'; break;
    case Op::exp: os << "exp("; print_node(*n.kids[0], os, 0); os << ')'; break;
    case Op::log: os << "log("; print_node(*n.kids[0], os, 0); os << ')'; break;
    case Op::sin: os << "sin("; print_node(*n.kids[0], os, 0); os << ')'; break;
    case Op::cos: os << "cos("; print_node(*n.kids[0], os, 0); os << ')'; break;
  }
  if (paren) os << ')';
}

}  // namespace

Expr::Expr() : node_(make_const(0.0)) {}
Expr::Expr(double c) : node_(make_const(c)) {}
Expr::Expr(ExprPtr node) : node_(std::move(node)) {}

Expr Expr::constant(double c) { return Expr(make_const(c)); }
Expr Expr::variable(Var v) { return Expr(make_var(v)); }

double Expr::eval(const Point& p) const { return eval_node(*node_, p); }

Expr Expr::diff(Var v) const { return Expr(diff_node(node_, v)); }

Expr Expr::simplified() const { return Expr(simplify_node(node_)); }

bool Expr::is_constant(double* value) const { return is_const(node_, value); }

bool Expr::is_zero() const { return is_const_eq(node_, 0.0); }

bool Expr::depends_on(Var v) const { return depends_node(*node_, &v, nullptr); }

bool Expr::depends_on_fiber() const {
  VarKind k = VarKind::fiber;
  return depends_node(*node_, nullptr, &k);
}

bool Expr::depends_on_base() const {
  VarKind k = VarKind::base;
  return depends_node(*node_, nullptr, &k);
}

std::string Expr::str() const {
  std::ostringstream os;
  print_node(*node_, os, 0);
  return os.str();
}

Expr diff(const Expr& e, Var v) { return e.diff(v); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(add_ptrs({a.node(), b.node()})); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(add_ptrs({a.node(), neg_ptr(b.node())})); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul_ptrs({a.node(), b.node()})); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(div_ptrs(a.node(), b.node())); }
Expr operator-(const Expr& a) { return Expr(neg_ptr(a.node())); }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }

Expr pow(const Expr& base, const Expr& exponent) { return Expr(pow_ptrs(base.node(), exponent.node())); }
Expr pow(const Expr& base, double exponent) { return pow(base, Expr::constant(exponent)); }
Expr sqrt(const Expr& a) { return Expr(func_ptr(Op::sqrt, a.node())); }
Expr exp(const Expr& a) { return Expr(func_ptr(Op::exp, a.node())); }
Expr log(const Expr& a) { return Expr(func_ptr(Op::log, a.node())); }
Expr sin(const Expr& a) { return Expr(func_ptr(Op::sin, a.node())); }
Expr cos(const Expr& a) { return Expr(func_ptr(Op::cos, a.node())); }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, Dims dims) : text_(text), dims_(dims) {}

  Expr parse() {
    skip_ws();
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& text_;
  Dims dims_;
  std::size_t pos_{0};

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_expr() {
    bool negate = false;
    skip_ws();
    if (peek() == '+') eat('+');
    else if (peek() == '-') { eat('-'); negate = true; }
    Expr e = parse_term();
    if (negate) e = -e;
    for (;;) {
      if (eat('+')) e = e + parse_term();
      else if (eat('-')) e = e - parse_term();
      else break;
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (eat('*')) e = e * parse_factor();
      else if (eat('/')) e = e / parse_factor();
      else break;
    }
    return e;
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (eat('^')) return pow(base, parse_factor());
    return base;
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else; numbers never end mid-token here
      }
    }
    try {
      return Expr::constant(std::stod(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
  }

  Expr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "sqrt" || name == "exp" || name == "log" || name == "sin" || name == "cos") {
      if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
      Expr arg = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      if (name == "sqrt") return sqrt(arg);
      if (name == "exp") return exp(arg);
      if (name == "log") return log(arg);
      if (name == "sin") return sin(arg);
      return cos(arg);
    }
    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      int idx = std::stoi(name.substr(1));
      int limit = name[0] == 'x' ? dims_.m : dims_.n;
      if (idx < 1 || idx > limit)
        throw ParseError("index out of range: " + name, start);
      return Expr::variable(Var{name[0] == 'x' ? VarKind::base : VarKind::fiber, idx - 1});
    }
    throw ParseError("unknown identifier: " + name, start);
  }
};

}  // namespace

Expr parse_expr(const std::string& text, Dims dims) {
  return Parser(text, dims).parse();
}

}  // namespace fla

#ifndef FLA_EXPR_HPP
#define FLA_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fla {

/// Which coordinate family a variable belongs to: base coordinates x1..xm or
/// fiber coordinates y1..yn.
enum class VarKind { base, fiber };

struct Var {
  VarKind kind{VarKind::base};
  int index{0};  // 0-based

  friend bool operator==(const Var& a, const Var& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

inline Var bx(int i) { return Var{VarKind::base, i}; }
inline Var fy(int a) { return Var{VarKind::fiber, a}; }

struct Dims {
  int m{0};
  int n{0};
};

/// Evaluation point (x, y) on the total space.
struct Point {
  std::vector<double> x;
  std::vector<double> y;
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t off)
      : std::runtime_error(what), offset(off) {}
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable symbolic scalar in the coordinates (x1..xm, y1..yn).
///
/// Construction goes through smart constructors that fold constants, strip
/// 0/1 identities and flatten nested sums/products, so trees stay small under
/// repeated differentiation. Evaluation is plain double arithmetic on a fixed
/// tree: same tree and point give a bit-identical result.
class Expr {
 public:
  Expr();  // zero
  explicit Expr(double c);
  explicit Expr(ExprPtr node);

  static Expr constant(double c);
  static Expr variable(Var v);

  double eval(const Point& p) const;
  Expr diff(Var v) const;  // exact symbolic partial, memoized per node
  Expr simplified() const;

  bool is_constant(double* value = nullptr) const;
  bool is_zero() const;
  bool depends_on(Var v) const;
  bool depends_on_fiber() const;
  bool depends_on_base() const;

  std::string str() const;

  const ExprPtr& node() const { return node_; }

 private:
  ExprPtr node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator-(double a, const Expr& b);

Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);
Expr sqrt(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);

/// Parses the scenario expression grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' factor)?
///   base   := NUMBER | IDENT | '(' expr ')' | FUNC '(' expr ')'
/// with FUNC in {sqrt, exp, log, sin, cos} and IDENT in {x1..xm, y1..yn}.
/// Errors carry the byte offset of the offending token.
Expr parse_expr(const std::string& text, Dims dims);

Expr diff(const Expr& e, Var v);

}  // namespace fla

#endif  // FLA_EXPR_HPP

#include "fla/field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace fla {

namespace {
int var_key(Var v) { return (v.kind == VarKind::fiber ? 0x10000 : 0) + v.index; }
}  // namespace

// Per-evaluation memo. Derivative DAGs share nodes aggressively (derivatives
// are cached per node), so a single point evaluation revisits the same nodes
// many times; inverse-matrix cores in particular must be factored once per
// point, not once per entry occurrence.
struct EvalCtx {
  const Point& p;
  std::unordered_map<const FieldImpl*, double> node_memo;
  std::unordered_map<const void*, std::vector<std::vector<double>>> inverse_memo;
};

class FieldImpl : public std::enable_shared_from_this<FieldImpl> {
 public:
  virtual ~FieldImpl() = default;
  virtual double value_uncached(EvalCtx& ctx) const = 0;
  virtual Field derivative_uncached(Var v) const = 0;

  double value(EvalCtx& ctx) const {
    auto it = ctx.node_memo.find(this);
    if (it != ctx.node_memo.end()) return it->second;
    const double v = value_uncached(ctx);
    ctx.node_memo.emplace(this, v);
    return v;
  }

  Field derivative(Var v) const {
    const int key = var_key(v);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Field d = derivative_uncached(v);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, std::move(d)).first->second;
  }

 private:
  mutable std::mutex mutex_;
  mutable std::map<int, Field> cache_;
};

namespace {

class ExprFieldImpl final : public FieldImpl {
 public:
  explicit ExprFieldImpl(Expr e) : expr_(std::move(e)) {}
  double value_uncached(EvalCtx& ctx) const override { return expr_.eval(ctx.p); }
  Field derivative_uncached(Var v) const override { return Field(expr_.diff(v)); }
  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
};

const ExprFieldImpl* as_expr(const Field& f) {
  return dynamic_cast<const ExprFieldImpl*>(f.impl().get());
}

class SumFieldImpl final : public FieldImpl {
 public:
  explicit SumFieldImpl(std::vector<Field> terms) : terms_(std::move(terms)) {}
  double value_uncached(EvalCtx& ctx) const override {
    double s = 0.0;
    for (const auto& t : terms_) s += t.impl()->value(ctx);
    return s;
  }
  Field derivative_uncached(Var v) const override;

 private:
  std::vector<Field> terms_;
};

class ProductFieldImpl final : public FieldImpl {
 public:
  ProductFieldImpl(Field a, Field b) : a_(std::move(a)), b_(std::move(b)) {}
  double value_uncached(EvalCtx& ctx) const override {
    return a_.impl()->value(ctx) * b_.impl()->value(ctx);
  }
  Field derivative_uncached(Var v) const override;

 private:
  Field a_, b_;
};

class QuotientFieldImpl final : public FieldImpl {
 public:
  QuotientFieldImpl(Field a, Field b) : a_(std::move(a)), b_(std::move(b)) {}
  double value_uncached(EvalCtx& ctx) const override {
    double b = b_.impl()->value(ctx);
    if (b == 0.0) throw DomainError("division by zero in field");
    return a_.impl()->value(ctx) / b;
  }
  Field derivative_uncached(Var v) const override;

 private:
  Field a_, b_;
};

Field fsum(std::vector<Field> terms) {
  std::vector<Field> live;
  bool all_expr = true;
  for (auto& t : terms) {
    if (t.is_zero()) continue;
    if (!as_expr(t)) all_expr = false;
    live.push_back(std::move(t));
  }
  if (live.empty()) return Field();
  if (live.size() == 1) return live[0];
  if (all_expr) {
    Expr e = as_expr(live[0])->expr();
    for (std::size_t i = 1; i < live.size(); ++i) e = e + as_expr(live[i])->expr();
    return Field(e);
  }
  return Field(std::make_shared<SumFieldImpl>(std::move(live)));
}

Field fmul(const Field& a, const Field& b) {
  if (a.is_zero() || b.is_zero()) return Field();
  const auto* ea = as_expr(a);
  const auto* eb = as_expr(b);
  if (ea && eb) return Field(ea->expr() * eb->expr());
  if (ea) {
    double c;
    if (ea->expr().is_constant(&c) && c == 1.0) return b;
  }
  if (eb) {
    double c;
    if (eb->expr().is_constant(&c) && c == 1.0) return a;
  }
  return Field(std::make_shared<ProductFieldImpl>(a, b));
}

Field fdiv(const Field& a, const Field& b) {
  if (a.is_zero()) return Field();
  const auto* ea = as_expr(a);
  const auto* eb = as_expr(b);
  if (ea && eb) return Field(ea->expr() / eb->expr());
  return Field(std::make_shared<QuotientFieldImpl>(a, b));
}

Field fneg(const Field& a) { return fmul(Field(-1.0), a); }

Field SumFieldImpl::derivative_uncached(Var v) const {
  std::vector<Field> parts;
  parts.reserve(terms_.size());
  for (const auto& t : terms_) parts.push_back(t.d(v));
  return fsum(std::move(parts));
}

Field ProductFieldImpl::derivative_uncached(Var v) const {
  return fsum({fmul(a_.d(v), b_), fmul(a_, b_.d(v))});
}

Field QuotientFieldImpl::derivative_uncached(Var v) const {
  // (a/b)' = a'/b - a b' / b^2
  return fsum({fdiv(a_.d(v), b_), fneg(fdiv(fmul(a_, b_.d(v)), fmul(b_, b_)))});
}

// --------------------------------------------------------------------------
// Matrix inverse node
// --------------------------------------------------------------------------

struct InverseCore {
  MatF g;
  double cond_limit;
  int n;
};

// Partial-pivot LU inversion for the small matrices used here (n <= 4 in
// practice, but the code is size-generic). Throws when the infinity-norm
// condition estimate exceeds the configured limit.
std::vector<std::vector<double>> invert_numeric(const std::vector<std::vector<double>>& a,
                                                double cond_limit) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<double>> lu = a;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(lu[col][col]);
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(lu[r][col]) > best) {
        best = std::abs(lu[r][col]);
        piv = r;
      }
    }
    if (best == 0.0) throw SingularMatrixError("matrix is numerically singular");
    std::swap(lu[col], lu[piv]);
    std::swap(perm[col], perm[piv]);
    for (int r = col + 1; r < n; ++r) {
      lu[r][col] /= lu[col][col];
      for (int c = col + 1; c < n; ++c) lu[r][c] -= lu[r][col] * lu[col][c];
    }
  }

  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (int col = 0; col < n; ++col) {
    std::vector<double> e(n, 0.0);
    e[col] = 1.0;
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) {
      z[i] = e[perm[i]];
      for (int j = 0; j < i; ++j) z[i] -= lu[i][j] * z[j];
    }
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) z[i] -= lu[i][j] * z[j];
      z[i] /= lu[i][i];
    }
    for (int i = 0; i < n; ++i) inv[i][col] = z[i];
  }

  double norm_a = 0.0, norm_inv = 0.0;
  for (int i = 0; i < n; ++i) {
    double ra = 0.0, ri = 0.0;
    for (int j = 0; j < n; ++j) {
      ra += std::abs(a[i][j]);
      ri += std::abs(inv[i][j]);
    }
    norm_a = std::max(norm_a, ra);
    norm_inv = std::max(norm_inv, ri);
  }
  if (norm_a * norm_inv > cond_limit)
    throw SingularMatrixError("matrix condition number exceeds admissibility limit");
  return inv;
}

class InverseEntryFieldImpl final : public FieldImpl {
 public:
  InverseEntryFieldImpl(std::shared_ptr<const InverseCore> core, int i, int j)
      : core_(std::move(core)), i_(i), j_(j) {}

  double value_uncached(EvalCtx& ctx) const override {
    auto it = ctx.inverse_memo.find(core_.get());
    if (it == ctx.inverse_memo.end()) {
      const int n = core_->n;
      std::vector<std::vector<double>> a(n, std::vector<double>(n));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a[r][c] = core_->g[r][c].impl()->value(ctx);
      it = ctx.inverse_memo.emplace(core_.get(), invert_numeric(a, core_->cond_limit)).first;
    }
    return it->second[static_cast<std::size_t>(i_)][static_cast<std::size_t>(j_)];
  }

  // d(G^-1)_{ij} = -(G^-1 dG G^-1)_{ij}
  Field derivative_uncached(Var v) const override {
    const int n = core_->n;
    std::vector<Field> terms;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        Field dg = core_->g[k][l].d(v);
        if (dg.is_zero()) continue;
        Field inv_ik(std::make_shared<InverseEntryFieldImpl>(core_, i_, k));
        Field inv_lj(std::make_shared<InverseEntryFieldImpl>(core_, l, j_));
        terms.push_back(fneg(fmul(fmul(inv_ik, dg), inv_lj)));
      }
    }
    return fsum(std::move(terms));
  }

 private:
  std::shared_ptr<const InverseCore> core_;
  int i_, j_;
};

}  // namespace

Field::Field() : impl_(std::make_shared<ExprFieldImpl>(Expr())) {}
Field::Field(double c) : impl_(std::make_shared<ExprFieldImpl>(Expr::constant(c))) {}
Field::Field(const Expr& e) : impl_(std::make_shared<ExprFieldImpl>(e)) {}
Field::Field(FieldImplPtr impl) : impl_(std::move(impl)) {}

double Field::operator()(const Point& p) const {
  EvalCtx ctx{p, {}, {}};
  return impl_->value(ctx);
}
Field Field::d(Var v) const { return impl_->derivative(v); }

bool Field::is_zero() const {
  const auto* e = dynamic_cast<const ExprFieldImpl*>(impl_.get());
  return e != nullptr && e->expr().is_zero();
}

Field operator+(const Field& a, const Field& b) { return fsum({a, b}); }
Field operator-(const Field& a, const Field& b) { return fsum({a, fneg(b)}); }
Field operator*(const Field& a, const Field& b) { return fmul(a, b); }
Field operator/(const Field& a, const Field& b) { return fdiv(a, b); }
Field operator-(const Field& a) { return fneg(a); }

VecF zero_vec(int n) { return VecF(static_cast<std::size_t>(n)); }

MatF zero_mat(int r, int c) {
  return MatF(static_cast<std::size_t>(r), VecF(static_cast<std::size_t>(c)));
}

MatF identity_mat(int n) {
  MatF m = zero_mat(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = Field(1.0);
  return m;
}

Ten3F zero_ten3(int a, int b, int c) {
  return Ten3F(static_cast<std::size_t>(a), zero_mat(b, c));
}

Ten4F zero_ten4(int a, int b, int c, int d) {
  return Ten4F(static_cast<std::size_t>(a), zero_ten3(b, c, d));
}

MatF mat_mul(const MatF& a, const MatF& b) {
  const std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  MatF out = zero_mat(static_cast<int>(r), static_cast<int>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      std::vector<Field> terms;
      for (std::size_t t = 0; t < k; ++t) terms.push_back(a[i][t] * b[t][j]);
      out[i][j] = fsum(std::move(terms));
    }
  return out;
}

MatF mat_add(const MatF& a, const MatF& b) {
  MatF out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = a[i][j] + b[i][j];
  return out;
}

MatF mat_sub(const MatF& a, const MatF& b) {
  MatF out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

MatF mat_scale(const Field& s, const MatF& a) {
  MatF out = a;
  for (auto& row : out)
    for (auto& e : row) e = s * e;
  return out;
}

VecF mat_apply(const MatF& a, const VecF& v) {
  VecF out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<Field> terms;
    for (std::size_t j = 0; j < v.size(); ++j) terms.push_back(a[i][j] * v[j]);
    out[i] = fsum(std::move(terms));
  }
  return out;
}

VecF vec_add(const VecF& a, const VecF& b) {
  VecF out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

VecF vec_sub(const VecF& a, const VecF& b) {
  VecF out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

VecF vec_scale(const Field& s, const VecF& v) {
  VecF out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

MatF matrix_inverse(const MatF& g, double cond_limit) {
  const int n = static_cast<int>(g.size());
  for (const auto& row : g)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix_inverse: matrix must be square");
  auto core = std::make_shared<InverseCore>(InverseCore{g, cond_limit, n});
  MatF out = zero_mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i][j] = Field(std::make_shared<InverseEntryFieldImpl>(core, i, j));
  return out;
}

Field matrix_det(const MatF& g) {
  const int n = static_cast<int>(g.size());
  if (n == 1) return g[0][0];
  if (n == 2) return g[0][0] * g[1][1] - g[0][1] * g[1][0];
  std::vector<Field> terms;
  for (int j = 0; j < n; ++j) {
    MatF minor = zero_mat(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = g[r][c];
      }
    }
    Field term = g[0][j] * matrix_det(minor);
    terms.push_back(j % 2 == 0 ? term : -term);
  }
  Field out;
  for (const auto& t : terms) out = out + t;
  return out;
}

double eval_field(const Field& f, const Point& p) { return f(p); }

double eval_with_partials(const Field& f, const Point& p, const std::vector<Var>& multi_index) {
  Field g = f;
  for (const Var& v : multi_index) g = g.d(v);
  return g(p);
}

}  // namespace fla

#include "msf/smooth_fn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>

#include "msf/errors.hpp"
#include "msf/quadrature.hpp"

namespace msf {
namespace detail {

namespace {
std::mutex g_deriv_mutex;
}

class Node : public std::enable_shared_from_this<Node> {
 public:
  Node(Kind kind, Interval dom) : kind_(kind), dom_(dom) {}
  virtual ~Node() = default;

  Kind kind() const { return kind_; }
  const Interval& domain() const { return dom_; }

  double eval_checked(double r) const {
    if (!dom_.contains(r))
      throw DomainError("evaluation outside domain of " + name(), r);
    double v = eval_impl(r);
    if (!std::isfinite(v))
      throw EvalError("non-finite value from " + name(), r);
    return v;
  }

  SmoothFn derivative_cached() const {
    std::lock_guard<std::mutex> lock(g_deriv_mutex);
    if (!deriv_) deriv_ = make_derivative().node();
    return SmoothFn(deriv_);
  }

  virtual std::string name() const = 0;
  virtual SmoothFn substituted(const SmoothFn&, const Interval&) const {
    throw AlgebraError("substitution through a " + name() + " node is not supported");
  }

 protected:
  virtual double eval_impl(double r) const = 0;
  virtual SmoothFn make_derivative() const = 0;

 private:
  Kind kind_;
  Interval dom_;
  mutable NodePtr deriv_;
};

namespace {

bool is_constant(const NodePtr& n, double* value);
bool is_identity(const NodePtr& n);

class PolynomialNode final : public Node {
 public:
  PolynomialNode(std::vector<double> coeffs, SmoothFn inner, Interval dom)
      : Node(Kind::Polynomial, dom), coeffs_(std::move(coeffs)), inner_(std::move(inner)) {}

  const std::vector<double>& coeffs() const { return coeffs_; }
  bool has_inner() const { return static_cast<bool>(inner_.node()); }
  const SmoothFn& inner() const { return inner_; }

  std::string name() const override { return "polynomial"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    if (!has_inner()) return fn::poly_of(g, coeffs_);
    return fn::poly_of(fn::substitute(inner_, g, rdom), coeffs_);
  }

 protected:
  double eval_impl(double r) const override {
    double u = has_inner() ? inner_(r) : r;
    double v = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * u + *it;
    return v;
  }

  SmoothFn make_derivative() const override {
    std::vector<double> d;
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
      d.push_back(static_cast<double>(k) * coeffs_[k]);
    if (d.empty()) d.push_back(0.0);
    if (!has_inner()) return fn::poly(std::move(d));
    return fn::prod({fn::poly_of(inner_, std::move(d)), inner_.derivative()});
  }

 private:
  std::vector<double> coeffs_;  // ascending
  SmoothFn inner_;              // empty handle means the identity
};

class PowerNode final : public Node {
 public:
  PowerNode(SmoothFn base, double p, Interval dom)
      : Node(Kind::Power, dom), base_(std::move(base)), p_(p) {}

  std::string name() const override { return "power"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    return fn::power_of(fn::substitute(base_, g, rdom), p_, rdom);
  }

 protected:
  double eval_impl(double r) const override {
    double u = base_(r);
    if (u <= 0.0)
      throw DomainError("power node base not positive", r);
    return std::pow(u, p_);
  }

  SmoothFn make_derivative() const override {
    // p u^{p-1} u'
    return fn::scale(p_, fn::prod({fn::power_of(base_, p_ - 1.0, domain()),
                                   base_.derivative()}));
  }

 private:
  SmoothFn base_;
  double p_;
};

class ExpNode final : public Node {
 public:
  ExpNode(SmoothFn inner, Interval dom)
      : Node(Kind::Exp, dom), inner_(std::move(inner)) {}

  std::string name() const override { return "exp"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    return fn::exp_of(fn::substitute(inner_, g, rdom));
  }

 protected:
  double eval_impl(double r) const override { return std::exp(inner_(r)); }

  SmoothFn make_derivative() const override {
    SmoothFn self(shared_from_this());
    return fn::prod({inner_.derivative(), self});
  }

 private:
  SmoothFn inner_;
};

class SumNode final : public Node {
 public:
  SumNode(std::vector<SmoothFn> terms, Interval dom)
      : Node(Kind::Sum, dom), terms_(std::move(terms)) {}

  const std::vector<SmoothFn>& terms() const { return terms_; }
  std::string name() const override { return "sum"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    std::vector<SmoothFn> t;
    t.reserve(terms_.size());
    for (const auto& f : terms_) t.push_back(fn::substitute(f, g, rdom));
    return fn::sum(std::move(t));
  }

 protected:
  double eval_impl(double r) const override {
    double v = 0.0;
    for (const auto& f : terms_) v += f(r);
    return v;
  }

  SmoothFn make_derivative() const override {
    std::vector<SmoothFn> t;
    t.reserve(terms_.size());
    for (const auto& f : terms_) t.push_back(f.derivative());
    return fn::sum(std::move(t));
  }

 private:
  std::vector<SmoothFn> terms_;
};

class ProductNode final : public Node {
 public:
  ProductNode(std::vector<SmoothFn> factors, Interval dom)
      : Node(Kind::Product, dom), factors_(std::move(factors)) {}

  const std::vector<SmoothFn>& factors() const { return factors_; }
  std::string name() const override { return "product"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    std::vector<SmoothFn> t;
    t.reserve(factors_.size());
    for (const auto& f : factors_) t.push_back(fn::substitute(f, g, rdom));
    return fn::prod(std::move(t));
  }

 protected:
  double eval_impl(double r) const override {
    double v = 1.0;
    for (const auto& f : factors_) v *= f(r);
    return v;
  }

  SmoothFn make_derivative() const override {
    std::vector<SmoothFn> terms;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      std::vector<SmoothFn> fs = factors_;
      fs[i] = factors_[i].derivative();
      terms.push_back(fn::prod(std::move(fs)));
    }
    return fn::sum(std::move(terms));
  }

 private:
  std::vector<SmoothFn> factors_;
};

class ScaleNode final : public Node {
 public:
  ScaleNode(double c, SmoothFn child)
      : Node(Kind::Scale, child.domain()), c_(c), child_(std::move(child)) {}

  double factor() const { return c_; }
  const SmoothFn& child() const { return child_; }
  std::string name() const override { return "scale"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    return fn::scale(c_, fn::substitute(child_, g, rdom));
  }

 protected:
  double eval_impl(double r) const override { return c_ * child_(r); }
  SmoothFn make_derivative() const override {
    return fn::scale(c_, child_.derivative());
  }

 private:
  double c_;
  SmoothFn child_;
};

class ReciprocalNode final : public Node {
 public:
  explicit ReciprocalNode(SmoothFn child)
      : Node(Kind::Reciprocal, child.domain()), child_(std::move(child)) {}

  const SmoothFn& child() const { return child_; }
  std::string name() const override { return "reciprocal"; }

  SmoothFn substituted(const SmoothFn& g, const Interval& rdom) const override {
    return fn::reciprocal(fn::substitute(child_, g, rdom), true);
  }

 protected:
  double eval_impl(double r) const override {
    double u = child_(r);
    if (u == 0.0) throw EvalError("reciprocal of zero", r);
    return 1.0 / u;
  }

  SmoothFn make_derivative() const override {
    // -u'/u^2; u^2 stays nonvanishing wherever u does
    return fn::scale(-1.0, fn::prod({child_.derivative(),
                                     fn::reciprocal(fn::prod({child_, child_}), true)}));
  }

 private:
  SmoothFn child_;
};

class AntiderivNode final : public Node {
 public:
  AntiderivNode(SmoothFn f, double r0, double tol)
      : Node(Kind::Antiderivative, f.domain()), f_(std::move(f)), r0_(r0), tol_(tol) {}

  std::string name() const override { return "antiderivative"; }
  const SmoothFn& integrand() const { return f_; }
  double base_point() const { return r0_; }

 protected:
  double eval_impl(double r) const override {
    if (r == r0_) return 0.0;
    const int sgn = r >= r0_ ? 1 : -1;
    const auto k = static_cast<long>(std::floor(std::fabs(r - r0_) / kStep));
    const double base = checkpoint(sgn, k);
    const double from = r0_ + sgn * static_cast<double>(k) * kStep;
    const auto f = [this](double s) { return f_(s); };
    return base + integrate(f, from, r, tol_ / 8.0);
  }

  SmoothFn make_derivative() const override { return f_; }

 private:
  // Cumulative integral over the first k fixed panels in direction sgn.
  // Panels are always the same intervals, so values are independent of the
  // query history.
  double checkpoint(int sgn, long k) const {
    if (k == 0) return 0.0;
    std::lock_guard<std::mutex> lock(mu_);
    auto& v = sgn > 0 ? up_ : down_;
    const auto f = [this](double s) { return f_(s); };
    while (static_cast<long>(v.size()) < k) {
      const auto i = static_cast<long>(v.size());
      const double a = r0_ + sgn * static_cast<double>(i) * kStep;
      const double b = r0_ + sgn * static_cast<double>(i + 1) * kStep;
      const double prev = i == 0 ? 0.0 : v.back();
      v.push_back(prev + integrate(f, a, b, tol_ / 128.0));
    }
    return v[k - 1];
  }

  static constexpr double kStep = 0.5;
  SmoothFn f_;
  double r0_;
  double tol_;
  mutable std::mutex mu_;
  mutable std::vector<double> up_, down_;
};

class RiccatiNode final : public Node {
 public:
  RiccatiNode(SmoothFn W, double C, double r0, SmoothFn G, SmoothFn Q)
      : Node(Kind::RiccatiLambda,
             W.domain().intersect(G.domain()).intersect(Q.domain())),
        W_(std::move(W)), C_(C), r0_(r0), G_(std::move(G)), Q_(std::move(Q)) {}

  std::string name() const override { return "riccati-lambda"; }
  const SmoothFn& superpotential() const { return W_; }
  double C() const { return C_; }
  double base_point() const { return r0_; }

 protected:
  double eval_impl(double r) const override {
    const double denom = C_ + Q_(r);
    if (denom == 0.0) throw EvalError("riccati-lambda denominator vanished", r);
    return G_(r) / denom;
  }

  SmoothFn make_derivative() const override {
    SmoothFn self(shared_from_this());
    return fn::scale(-1.0, fn::sum({fn::prod({self, self}),
                                    fn::scale(2.0, fn::prod({W_, self}))}));
  }

 private:
  SmoothFn W_;
  double C_, r0_;
  SmoothFn G_, Q_;
};

class MonotoneInverseNode final : public Node {
 public:
  MonotoneInverseNode(SmoothFn r_of_x, std::vector<double> acoeffs, double r0,
                      double x0, Interval xdom, Interval rdom)
      : Node(Kind::MonotoneInverse, rdom), F_(std::move(r_of_x)),
        acoeffs_(std::move(acoeffs)), r0_(r0), x0_(x0), xdom_(xdom) {}

  std::string name() const override { return "monotone-inverse"; }

 protected:
  double eval_impl(double r) const override {
    const double target = r - r0_;
    // bracket [xa, xb] with F(xa) <= target <= F(xb); F strictly increasing
    double xa = x0_, xb = x0_;
    double fa = 0.0, fb = 0.0;
    double step = 0.5;
    if (target >= 0.0) {
      for (int it = 0;; ++it) {
        xb = std::min(xa + step, std::nextafter(xdom_.hi, xdom_.lo));
        fb = F_(xb);
        if (fb >= target) break;
        xa = xb;
        fa = fb;
        step *= 2.0;
        if (it > 200 || xb >= xdom_.hi)
          throw DomainError("monotone inverse target beyond range", r);
      }
    } else {
      for (int it = 0;; ++it) {
        xa = std::max(xb - step, std::nextafter(xdom_.lo, xdom_.hi));
        fa = F_(xa);
        if (fa <= target) break;
        xb = xa;
        fb = fa;
        step *= 2.0;
        if (it > 200 || xa <= xdom_.lo)
          throw DomainError("monotone inverse target beyond range", r);
      }
    }
    double x = 0.5 * (xa + xb);
    for (int it = 0; it < 200; ++it) {
      const double fx = F_(x) - target;
      if (std::fabs(fx) <= 1e-13 * (1.0 + std::fabs(target))) return x;
      if (fx > 0.0) xb = x; else xa = x;
      // Newton with F' = A^{-1/2}
      double a = 0.0;
      for (auto it2 = acoeffs_.rbegin(); it2 != acoeffs_.rend(); ++it2) a = a * x + *it2;
      double xn = a > 0.0 ? x - fx * std::sqrt(a) : xa - 1.0;
      if (!(xn > xa && xn < xb)) xn = 0.5 * (xa + xb);
      if (xb - xa <= 1e-15 * (1.0 + std::fabs(x))) return x;
      x = xn;
    }
    return x;
  }

  SmoothFn make_derivative() const override {
    SmoothFn self(shared_from_this());
    return fn::power_of(fn::poly_of(self, acoeffs_), 0.5, domain());
  }

 private:
  SmoothFn F_;  // r(x) - r0 as a function of x, F(x0) = 0
  std::vector<double> acoeffs_;
  double r0_, x0_;
  Interval xdom_;
};

bool is_constant(const NodePtr& n, double* value) {
  if (!n || n->kind() != Kind::Polynomial) return false;
  const auto* p = static_cast<const PolynomialNode*>(n.get());
  if (p->coeffs().size() != 1) return false;
  if (value) *value = p->coeffs()[0];
  return true;
}

bool is_identity(const NodePtr& n) {
  if (!n || n->kind() != Kind::Polynomial) return false;
  const auto* p = static_cast<const PolynomialNode*>(n.get());
  return !p->has_inner() && p->coeffs().size() == 2 && p->coeffs()[0] == 0.0 &&
         p->coeffs()[1] == 1.0;
}

}  // namespace
}  // namespace detail

using detail::Kind;

SmoothFn::SmoothFn() : SmoothFn(fn::constant(0.0).node()) {}
SmoothFn::SmoothFn(detail::NodePtr node) : node_(std::move(node)) {}

double SmoothFn::operator()(double r) const { return node_->eval_checked(r); }
SmoothFn SmoothFn::derivative() const { return node_->derivative_cached(); }
SmoothFn SmoothFn::derivative(int k) const {
  SmoothFn f = *this;
  for (int i = 0; i < k; ++i) f = f.derivative();
  return f;
}
const Interval& SmoothFn::domain() const { return node_->domain(); }
Kind SmoothFn::kind() const { return node_->kind(); }
std::string SmoothFn::describe() const { return node_->name(); }

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b) { return fn::sum({a, b}); }
SmoothFn operator-(const SmoothFn& a, const SmoothFn& b) {
  return fn::sum({a, fn::scale(-1.0, b)});
}
SmoothFn operator*(const SmoothFn& a, const SmoothFn& b) { return fn::prod({a, b}); }
SmoothFn operator*(double c, const SmoothFn& f) { return fn::scale(c, f); }
SmoothFn operator-(const SmoothFn& f) { return fn::scale(-1.0, f); }

namespace fn {

using detail::NodePtr;

SmoothFn constant(double c) {
  return SmoothFn(std::make_shared<detail::PolynomialNode>(
      std::vector<double>{c}, SmoothFn(nullptr), Interval::all()));
}

SmoothFn identity() { return poly({0.0, 1.0}); }

SmoothFn poly(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  return SmoothFn(std::make_shared<detail::PolynomialNode>(
      std::move(coeffs), SmoothFn(nullptr), Interval::all()));
}

SmoothFn poly_of(const SmoothFn& inner, std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (coeffs.size() == 1) return constant(coeffs[0]);
  if (detail::is_identity(inner.node())) return poly(std::move(coeffs));
  double cv = 0.0;
  if (detail::is_constant(inner.node(), &cv)) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * cv + *it;
    return constant(v);
  }
  return SmoothFn(std::make_shared<detail::PolynomialNode>(
      std::move(coeffs), inner, inner.domain()));
}

SmoothFn power_of(const SmoothFn& inner, double exponent, const Interval& dom) {
  if (exponent == 0.0) return constant(1.0);
  double cv = 0.0;
  if (detail::is_constant(inner.node(), &cv)) {
    if (cv <= 0.0) throw AlgebraError("power of a non-positive constant");
    return constant(std::pow(cv, exponent));
  }
  if (exponent == 1.0) return inner;
  return SmoothFn(std::make_shared<detail::PowerNode>(
      inner, exponent, dom.intersect(inner.domain())));
}

SmoothFn exp_of(const SmoothFn& inner) {
  double cv = 0.0;
  if (detail::is_constant(inner.node(), &cv)) return constant(std::exp(cv));
  return SmoothFn(std::make_shared<detail::ExpNode>(inner, inner.domain()));
}

SmoothFn sum(std::vector<SmoothFn> terms) {
  std::vector<SmoothFn> flat;
  double c = 0.0;
  Interval dom = Interval::all();
  const auto absorb = [&](auto&& self, const SmoothFn& f) -> void {
    double cv = 0.0;
    if (detail::is_constant(f.node(), &cv)) {
      c += cv;
      return;
    }
    if (f.kind() == Kind::Sum) {
      const auto* s = static_cast<const detail::SumNode*>(f.node().get());
      for (const auto& t : s->terms()) self(self, t);
      return;
    }
    dom = dom.intersect(f.domain());
    flat.push_back(f);
  };
  for (const auto& f : terms) absorb(absorb, f);
  if (c != 0.0 || flat.empty()) flat.push_back(constant(c));
  if (flat.size() == 1) return flat[0];
  return SmoothFn(std::make_shared<detail::SumNode>(std::move(flat), dom));
}

SmoothFn prod(std::vector<SmoothFn> factors) {
  std::vector<SmoothFn> flat;
  double c = 1.0;
  Interval dom = Interval::all();
  const auto absorb = [&](auto&& self, const SmoothFn& f) -> void {
    double cv = 0.0;
    if (detail::is_constant(f.node(), &cv)) {
      c *= cv;
      return;
    }
    if (f.kind() == Kind::Product) {
      const auto* p = static_cast<const detail::ProductNode*>(f.node().get());
      for (const auto& t : p->factors()) self(self, t);
      return;
    }
    if (f.kind() == Kind::Scale) {
      const auto* s = static_cast<const detail::ScaleNode*>(f.node().get());
      c *= s->factor();
      self(self, s->child());
      return;
    }
    dom = dom.intersect(f.domain());
    flat.push_back(f);
  };
  for (const auto& f : factors) absorb(absorb, f);
  if (c == 0.0) return constant(0.0);
  if (flat.empty()) return constant(c);
  SmoothFn core = flat.size() == 1
                      ? flat[0]
                      : SmoothFn(std::make_shared<detail::ProductNode>(std::move(flat), dom));
  return scale(c, core);
}

SmoothFn scale(double c, const SmoothFn& f) {
  if (c == 0.0) return constant(0.0);
  if (c == 1.0) return f;
  double cv = 0.0;
  if (detail::is_constant(f.node(), &cv)) return constant(c * cv);
  if (f.kind() == Kind::Scale) {
    const auto* s = static_cast<const detail::ScaleNode*>(f.node().get());
    return scale(c * s->factor(), s->child());
  }
  if (f.kind() == Kind::Polynomial) {
    const auto* p = static_cast<const detail::PolynomialNode*>(f.node().get());
    std::vector<double> coeffs = p->coeffs();
    for (auto& x : coeffs) x *= c;
    return p->has_inner() ? poly_of(p->inner(), std::move(coeffs))
                          : poly(std::move(coeffs));
  }
  return SmoothFn(std::make_shared<detail::ScaleNode>(c, f));
}

SmoothFn reciprocal(const SmoothFn& f, bool certified) {
  double cv = 0.0;
  if (detail::is_constant(f.node(), &cv)) {
    if (cv == 0.0) throw AlgebraError("reciprocal of the zero function");
    return constant(1.0 / cv);
  }
  if (f.kind() == Kind::Reciprocal)
    return static_cast<const detail::ReciprocalNode*>(f.node().get())->child();
  if (!certified) {
    const Interval w = f.domain().finite_window(8.0, 1e-3);
    const int n = 1281;
    int sign = 0;
    for (int i = 0; i < n; ++i) {
      const double r = w.lo + (w.hi - w.lo) * (i + 0.5) / n;
      const double v = f(r);
      const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign))
        throw AlgebraError("reciprocal of a function with a detected sign change near r = "
                           + std::to_string(r));
      sign = s;
    }
  }
  return SmoothFn(std::make_shared<detail::ReciprocalNode>(f));
}

SmoothFn antiderivative(const SmoothFn& f, double r0, double abs_tol) {
  if (!f.domain().contains(r0))
    throw DomainError("antiderivative base point outside integrand domain", r0);
  const double tol = abs_tol > 0 ? abs_tol : default_quad_tol();
  return SmoothFn(std::make_shared<detail::AntiderivNode>(f, r0, tol));
}

SmoothFn riccati_lambda(const SmoothFn& W, double C, double r0,
                        const SmoothFn& G, const SmoothFn& Q) {
  return SmoothFn(std::make_shared<detail::RiccatiNode>(W, C, r0, G, Q));
}

SmoothFn monotone_inverse(const SmoothFn& r_of_x, std::vector<double> acoeffs,
                          double r0, double x0, const Interval& xdom,
                          const Interval& rdom) {
  return SmoothFn(std::make_shared<detail::MonotoneInverseNode>(
      r_of_x, std::move(acoeffs), r0, x0, xdom, rdom));
}

SmoothFn substitute(const SmoothFn& f, const SmoothFn& g, const Interval& rdom) {
  return f.node()->substituted(g, rdom);
}

}  // namespace fn
}  // namespace msf

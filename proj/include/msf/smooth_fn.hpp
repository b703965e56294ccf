#pragma once

#include <memory>
#include <string>
#include <vector>

#include "msf/interval.hpp"

namespace msf {

class SmoothFn;

namespace detail {

class Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind {
  Polynomial,
  Power,
  Exp,
  Sum,
  Product,
  Scale,
  Reciprocal,
  Antiderivative,
  RiccatiLambda,
  MonotoneInverse,
};

}  // namespace detail

/// Value-semantic handle into a derivative-closed algebra of smooth
/// real-valued functions of one variable. Every node produces its exact
/// derivative as another node; evaluation outside the declared domain or a
/// non-finite intermediate is an error, never a NaN.
///
/// Nodes are immutable after construction; eval and derivative are
/// re-entrant (antiderivative checkpoints are mutex-guarded and computed by
/// a history-independent panel decomposition, so concurrent use cannot
/// change observable values).
class SmoothFn {
 public:
  SmoothFn();  // the zero function
  explicit SmoothFn(detail::NodePtr node);

  double operator()(double r) const;
  SmoothFn derivative() const;
  SmoothFn derivative(int k) const;

  const Interval& domain() const;
  detail::Kind kind() const;
  std::string describe() const;

  /// Same underlying node (pointer identity).
  bool identical_to(const SmoothFn& o) const { return node_ == o.node_; }

  const detail::NodePtr& node() const { return node_; }

 private:
  detail::NodePtr node_;
};

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator-(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator*(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator*(double c, const SmoothFn& f);
SmoothFn operator-(const SmoothFn& f);

namespace fn {

SmoothFn constant(double c);
SmoothFn identity();

/// c0 + c1 r + c2 r^2 + ...  (or the same polynomial in `inner`).
SmoothFn poly(std::vector<double> coeffs);
SmoothFn poly_of(const SmoothFn& inner, std::vector<double> coeffs);

/// inner(r)^p on a domain where the base stays positive.
SmoothFn power_of(const SmoothFn& inner, double exponent, const Interval& dom);

SmoothFn exp_of(const SmoothFn& inner);

SmoothFn sum(std::vector<SmoothFn> terms);
SmoothFn prod(std::vector<SmoothFn> factors);
SmoothFn scale(double c, const SmoothFn& f);

/// 1/f. Unless `certified`, nonvanishing is checked by dense sampling
/// (>= 1024 points over the domain window); a detected sign change or
/// near-zero is an error.
SmoothFn reciprocal(const SmoothFn& f, bool certified = false);

/// F with F(r0) = 0 and derivative(F) == f exactly. Values are produced by
/// adaptive Gauss-Kronrod quadrature accumulated over a fixed checkpoint
/// grid, so repeated evaluation is O(1) amortized and history-independent.
SmoothFn antiderivative(const SmoothFn& f, double r0, double abs_tol = -1.0);

/// lambda(r) = e^{-2 int_{r0}^r W} / (C + int_{r0}^r e^{-2 int W}).
/// Its derivative node is -lambda^2 - 2 W lambda (the Riccati identity),
/// never a numerical difference. G and Q are the shared exponential and
/// cumulative-integral nodes (see deformation for the admissibility gate).
SmoothFn riccati_lambda(const SmoothFn& W, double C, double r0,
                        const SmoothFn& G, const SmoothFn& Q);

/// x(r) defined by inverting the strictly increasing map r(x) = r0 + F(x),
/// F(x0) = 0, F' = A(x)^{-1/2} for the quadratic A given by `acoeffs`.
/// derivative(x) = sqrt(A(x(r))) by the chain rule.
SmoothFn monotone_inverse(const SmoothFn& r_of_x, std::vector<double> acoeffs,
                          double r0, double x0, const Interval& xdom,
                          const Interval& rdom);

/// Structural substitution r -> g(r) through polynomial/power/exp/sum/
/// product/scale/reciprocal nodes. `rdom` is the domain of the result.
SmoothFn substitute(const SmoothFn& f, const SmoothFn& g, const Interval& rdom);

}  // namespace fn
}  // namespace msf

#pragma once

// Univariate masks and Laurent-symbol algebra.
//
// A symbol a(z) = sum_i a_i z^i is stored as its coefficient run plus the
// exponent of the first coefficient. All smoothing-factor bookkeeping uses the
// normalized ((1+z)/2)^m form; the plain (1+z) difference-scheme convention
// appears only inside difference_symbol().

#include <pnsubd/error.hpp>

#include <span>
#include <vector>

namespace pnsubd {

class LaurentSymbol {
 public:
  /// The constant symbol 1.
  LaurentSymbol();
  /// Trims exact zeros at both ends; an all-zero input is rejected.
  LaurentSymbol(std::vector<double> coefficients, int offset);

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  int offset() const noexcept { return offset_; }
  /// Exponent of the last stored coefficient.
  int last() const noexcept { return offset_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t support() const noexcept { return coeffs_.size(); }

  /// Coefficient of z^i (zero outside the support).
  double operator[](int i) const noexcept;
  double evaluate(double z) const;

  friend LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b);
  friend LaurentSymbol operator*(double s, const LaurentSymbol& a);

  /// a(z) -> a(z^k).
  LaurentSymbol dilate(int k) const;

 private:
  std::vector<double> coeffs_;
  int offset_ = 0;
};

/// ((1+z)/2)^m with offset 0.
LaurentSymbol smoothing_factor(int m);

class Mask {
 public:
  explicit Mask(LaurentSymbol symbol);

  const LaurentSymbol& symbol() const noexcept { return symbol_; }
  double even_sum() const noexcept { return even_sum_; }
  double odd_sum() const noexcept { return odd_sum_; }
  /// even_sum = odd_sum = 1 within 1e-12.
  bool affine() const noexcept;
  /// a_0 = 1 and every other even coefficient vanishes.
  bool interpolatory() const noexcept;
  double operator[](int i) const noexcept { return symbol_[i]; }

 private:
  LaurentSymbol symbol_;
  double even_sum_ = 0.0;
  double odd_sum_ = 0.0;
};

/// Degree-d uniform B-spline mask 2((1+z)/2)^(d+1), centered so the even rule
/// is the vertex rule for odd degrees.
Mask bspline_mask(int degree);

/// Dubuc-Deslauriers 2n-point interpolatory mask; reproduces degree 2n-1 polynomials.
Mask dd_interpolatory_mask(int n);

/// Lagrange weights at t = 1/2 for nodes -n+1..n.
std::vector<double> dd_midpoint_weights(int n);

/// b(z) with s(z) = ((1+z)/2)^m b(z). Throws NotDivisible when the remainder
/// of the synthetic division exceeds tolerance.
LaurentSymbol divide_smoothing_factor(const LaurentSymbol& s, int m, double tolerance = 1e-10);

/// q(z) with s(z) = (1+z) q(z): the symbol of the difference scheme.
LaurentSymbol difference_symbol(const LaurentSymbol& s, double tolerance = 1e-10);

/// ||S_s^L||_inf^(1/L): max over residue classes mod 2^L of the summed
/// absolute coefficients of s(z)s(z^2)...s(z^(2^(L-1))).
double contractivity_factor(const LaurentSymbol& s, int iterations);

struct SmoothnessCertificate {
  /// Largest certified derivative order, or -1 when not even C^0 is certified.
  int order = -1;
  /// Iteration count L whose norm certified the order (0 if none).
  int iterations = 0;
  /// Contractivity factor at that L.
  double factor = 0.0;
};

SmoothnessCertificate smoothness_certificate(const Mask& mask, int max_order, int max_iterations = 8);

/// Largest k <= max_order with a = ((1+z)/2)^k b and S_b convergent, certified by
/// contractivity of b's difference scheme for some L <= max_iterations.
/// Returns 0 when nothing is certified.
int certify_smoothness(const Mask& mask, int max_order, int max_iterations = 8);

}  // namespace pnsubd

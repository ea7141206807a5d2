#include <pnsubd/symbol.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace pnsubd {

LaurentSymbol::LaurentSymbol() : coeffs_{1.0}, offset_(0) {}

LaurentSymbol::LaurentSymbol(std::vector<double> coefficients, int offset)
    : coeffs_(std::move(coefficients)), offset_(offset) {
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  if (first == coeffs_.end()) {
    throw Error(ErrorCode::InvalidArgument, "symbol has no nonzero coefficient");
  }
  offset_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(coeffs_.begin(), first);
  while (coeffs_.back() == 0.0) coeffs_.pop_back();
}

double LaurentSymbol::operator[](int i) const noexcept {
  const int k = i - offset_;
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

double LaurentSymbol::evaluate(double z) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, offset_);
}

LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b) {
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return LaurentSymbol(std::move(out), a.offset_ + b.offset_);
}

LaurentSymbol operator*(double s, const LaurentSymbol& a) {
  std::vector<double> out = a.coeffs_;
  for (double& c : out) c *= s;
  return LaurentSymbol(std::move(out), a.offset_);
}

LaurentSymbol LaurentSymbol::dilate(int k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive");
  std::vector<double> out((coeffs_.size() - 1) * static_cast<std::size_t>(k) + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i * static_cast<std::size_t>(k)] = coeffs_[i];
  return LaurentSymbol(std::move(out), offset_ * k);
}

LaurentSymbol smoothing_factor(int m) {
  LaurentSymbol out;
  const LaurentSymbol half_binomial({0.5, 0.5}, 0);
  for (int i = 0; i < m; ++i) out = out * half_binomial;
  return out;
}

Mask::Mask(LaurentSymbol symbol) : symbol_(std::move(symbol)) {
  for (int i = symbol_.offset(); i <= symbol_.last(); ++i) {
    // ((i % 2) + 2) % 2 keeps negative exponents in the right class.
    if (((i % 2) + 2) % 2 == 0) even_sum_ += symbol_[i];
    else odd_sum_ += symbol_[i];
  }
}

bool Mask::affine() const noexcept {
  return std::abs(even_sum_ - 1.0) < 1e-12 && std::abs(odd_sum_ - 1.0) < 1e-12;
}

bool Mask::interpolatory() const noexcept {
  if (symbol_[0] != 1.0) return false;
  for (int i = symbol_.offset(); i <= symbol_.last(); ++i) {
    if (i != 0 && ((i % 2) + 2) % 2 == 0 && symbol_[i] != 0.0) return false;
  }
  return true;
}

Mask bspline_mask(int degree) {
  if (degree < 1) {
    throw Error(ErrorCode::InvalidArgument, "B-spline degree must be at least 1");
  }
  LaurentSymbol s = 2.0 * smoothing_factor(degree + 1);
  return Mask(LaurentSymbol(s.coefficients(), -((degree + 2) / 2)));
}

std::vector<double> dd_midpoint_weights(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "2n-point scheme needs n >= 1");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(2 * n));
  for (int m = -n + 1; m <= n; ++m) {
    double l = 1.0;
    for (int k = -n + 1; k <= n; ++k) {
      if (k != m) l *= (0.5 - k) / static_cast<double>(m - k);
    }
    w.push_back(l);
  }
  return w;
}

Mask dd_interpolatory_mask(int n) {
  const std::vector<double> w = dd_midpoint_weights(n);
  // Node m (relative to the left neighbour) feeds coefficient a_{1-2m}.
  const int lo = 1 - 2 * n;
  std::vector<double> coeffs(static_cast<std::size_t>(4 * n - 1), 0.0);
  for (int m = -n + 1; m <= n; ++m) {
    coeffs[static_cast<std::size_t>(1 - 2 * m - lo)] = w[static_cast<std::size_t>(m + n - 1)];
  }
  coeffs[static_cast<std::size_t>(-lo)] = 1.0;
  return Mask(LaurentSymbol(std::move(coeffs), lo));
}

namespace {

// Synthetic division by (1+z); returns false when the remainder is too large.
bool divide_once(const LaurentSymbol& s, double tolerance, LaurentSymbol& out) {
  const auto& c = s.coefficients();
  if (c.size() < 2) return false;
  std::vector<double> q(c.size() - 1);
  q[0] = c[0];
  for (std::size_t k = 1; k + 1 < c.size(); ++k) q[k] = c[k] - q[k - 1];
  const double remainder = c.back() - q.back();
  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (std::abs(remainder) > tolerance * scale) return false;
  if (std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; })) return false;
  out = LaurentSymbol(std::move(q), s.offset());
  return true;
}

}  // namespace

LaurentSymbol divide_smoothing_factor(const LaurentSymbol& s, int m, double tolerance) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "factor count must be non-negative");
  LaurentSymbol current = s;
  for (int i = 0; i < m; ++i) {
    LaurentSymbol next;
    if (!divide_once(current, tolerance, next)) {
      throw Error(ErrorCode::NotDivisible,
                  "symbol is not divisible by (1+z)^" + std::to_string(m));
    }
    current = 2.0 * next;
  }
  return current;
}

LaurentSymbol difference_symbol(const LaurentSymbol& s, double tolerance) {
  LaurentSymbol q;
  if (!divide_once(s, tolerance, q)) {
    throw Error(ErrorCode::NotDivisible, "symbol has no (1+z) factor");
  }
  return q;
}

double contractivity_factor(const LaurentSymbol& s, int iterations) {
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "iteration count must be positive");
  LaurentSymbol iterated = s;
  int dilation = 1;
  for (int l = 1; l < iterations; ++l) {
    dilation *= 2;
    iterated = iterated * s.dilate(dilation);
  }
  const int period = dilation * 2;
  std::vector<double> class_sums(static_cast<std::size_t>(period), 0.0);
  for (int i = iterated.offset(); i <= iterated.last(); ++i) {
    const int r = ((i % period) + period) % period;
    class_sums[static_cast<std::size_t>(r)] += std::abs(iterated[i]);
  }
  const double norm = *std::max_element(class_sums.begin(), class_sums.end());
  return std::pow(norm, 1.0 / iterations);
}

SmoothnessCertificate smoothness_certificate(const Mask& mask, int max_order, int max_iterations) {
  for (int k = max_order; k >= 0; --k) {
    LaurentSymbol b;
    LaurentSymbol q;
    try {
      b = divide_smoothing_factor(mask.symbol(), k);
      q = difference_symbol(b);
    } catch (const Error&) {
      continue;
    }
    for (int l = 1; l <= max_iterations; ++l) {
      const double f = contractivity_factor(q, l);
      if (f < 1.0) return {k, l, f};
    }
  }
  return {};
}

int certify_smoothness(const Mask& mask, int max_order, int max_iterations) {
  return std::max(0, smoothness_certificate(mask, max_order, max_iterations).order);
}

}  // namespace pnsubd

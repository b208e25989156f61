#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <type_traits>
#include <vector>

#include "cars/diagnostics.hpp"

namespace cars {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  std::size_t max_evaluations = std::size_t{1} << 20;
  int initial_panels = 16;
  int max_depth = 50;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

template <class F>
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(F& f, const QuadratureOptions& opt) : f_(f), opt_(opt) {}

  QuadratureResult run(double a, double b) {
    QuadratureResult out;
    if (a == b) return out;
    const int panels = opt_.initial_panels < 1 ? 1 : opt_.initial_panels;
    const double h = (b - a) / panels;

    struct Panel {
      double a, b;
      std::complex<double> fa, fm, fb, whole;
    };
    std::vector<Panel> coarse;
    coarse.reserve(static_cast<std::size_t>(panels));
    std::complex<double> estimate{};
    double magnitude = 0.0;
    std::complex<double> f_left = eval(a);
    for (int i = 0; i < panels; ++i) {
      const double pa = a + i * h;
      const double pb = (i + 1 == panels) ? b : a + (i + 1) * h;
      const double pm = 0.5 * (pa + pb);
      const auto fm = eval(pm);
      const auto fb = eval(pb);
      const double w = (pb - pa) / 6.0;
      const auto s = w * (f_left + 4.0 * fm + fb);
      coarse.push_back({pa, pb, f_left, fm, fb, s});
      estimate += s;
      magnitude += w * (std::abs(f_left) + 4.0 * std::abs(fm) + std::abs(fb));
      f_left = fb;
    }

    // Relative to the result, floored against heavy cancellation.
    const double abs_tol = opt_.rel_tol * std::max(std::abs(estimate), 1e-3 * magnitude);
    for (const auto& p : coarse) {
      const double share = abs_tol * (p.b - p.a) / (b - a);
      out.value += refine(p.a, p.b, p.fa, p.fm, p.fb, p.whole, share, opt_.max_depth);
    }
    out.error_estimate = error_;
    out.evaluations = evaluations_;
    if (depth_exhausted_) {
      std::ostringstream d;
      d << "interval [" << a << ", " << b << "], evaluations " << evaluations_
        << ", estimated error " << error_ << ", tolerance " << abs_tol;
      throw NumericalError("adaptive Simpson quadrature did not converge (depth limit)",
                           d.str());
    }
    return out;
  }

 private:
  std::complex<double> eval(double x) {
    if (++evaluations_ > opt_.max_evaluations) {
      std::ostringstream d;
      d << "evaluation cap " << opt_.max_evaluations << " reached near x = " << x
        << ", accumulated error estimate " << error_;
      throw NumericalError("adaptive Simpson quadrature exceeded its evaluation budget",
                           d.str());
    }
    return std::complex<double>(f_(x));
  }

  std::complex<double> refine(double a, double b, std::complex<double> fa,
                              std::complex<double> fm, std::complex<double> fb,
                              std::complex<double> whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const auto flm = eval(lm);
    const auto frm = eval(rm);
    const auto left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const auto right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const auto delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      error_ += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth <= 0) {
      depth_exhausted_ = true;
      error_ += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  F& f_;
  const QuadratureOptions& opt_;
  std::size_t evaluations_ = 0;
  double error_ = 0.0;
  bool depth_exhausted_ = false;
};

}  // namespace detail

/// Adaptive Simpson quadrature of a real- or complex-valued integrand over
/// [a, b]. The interval is first cut into `initial_panels` panels so that
/// oscillatory integrands are not mistaken for zero by a single coarse rule.
/// Throws NumericalError when the evaluation cap or depth limit is hit.
template <class F>
QuadratureResult integrate_adaptive_simpson(F&& f, double a, double b,
                                            const QuadratureOptions& opt = {}) {
  detail::AdaptiveSimpson<std::remove_reference_t<F>> engine(f, opt);
  return engine.run(a, b);
}

}  // namespace cars

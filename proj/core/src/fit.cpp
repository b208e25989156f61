#include "cars/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cars/diagnostics.hpp"
#include "cars/units.hpp"

namespace cars {
namespace {

constexpr int kMaxIterations = 100;
constexpr double kStepTolerance = 1e-10;

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

struct LorentzEval {
  double value;
  Vec4 grad;  // d/d(center, fwhm, amplitude, offset)
};

LorentzEval lorentz(double x, const Vec4& p) {
  const double d = x - p(0);
  const double g = 0.5 * p(1);
  const double g2 = g * g;
  const double den = d * d + g2;
  const double shape = g2 / den;
  LorentzEval e;
  e.value = p(3) + p(2) * shape;
  e.grad(0) = p(2) * g2 * 2.0 * d / (den * den);
  e.grad(1) = p(2) * g * d * d / (den * den);
  e.grad(2) = shape;
  e.grad(3) = 1.0;
  return e;
}

double chi2_of(const ScanData& data, const std::vector<double>& sigma, const Vec4& p) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = (data.y[i] - lorentz(data.x[i], p).value) / sigma[i];
    chi2 += r * r;
  }
  return chi2;
}

double relative_step(const Vec4& step, const Vec4& p) {
  // Centre and width are measured against the width; offset against the
  // amplitude, so a zero-valued parameter does not stall the criterion.
  const double width = std::max(std::abs(p(1)), 1e-300);
  const double amp = std::max(std::abs(p(2)), 1e-300);
  return std::max({std::abs(step(0)) / width, std::abs(step(1)) / width,
                   std::abs(step(2)) / amp, std::abs(step(3)) / amp});
}

void require_same_size(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw DomainError(std::string(what) + ": input lengths differ");
}

}  // namespace

const FitParameter& FitResult::param(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw std::out_of_range("fit result has no parameter '" + std::string(name) + "'");
}

LorentzianInit lorentzian_initial_guess(const ScanData& data) {
  data.validate();
  if (data.size() == 0) throw DomainError("empty scan");
  const auto [lo_it, hi_it] = std::minmax_element(data.y.begin(), data.y.end());
  const auto peak = static_cast<std::size_t>(std::distance(data.y.begin(), hi_it));
  LorentzianInit init;
  init.center = data.x[peak];
  init.offset = *lo_it;
  init.amplitude = *hi_it - *lo_it;

  const double half = init.offset + 0.5 * init.amplitude;
  auto cross = [&](std::size_t i0, std::size_t i1) {
    const double dy = data.y[i1] - data.y[i0];
    return dy == 0.0 ? data.x[i0] : data.x[i0] + (half - data.y[i0]) * (data.x[i1] - data.x[i0]) / dy;
  };
  std::optional<double> left, right;
  for (std::size_t j = peak; j-- > 0;)
    if (data.y[j] < half) {
      left = cross(j, j + 1);
      break;
    }
  for (std::size_t j = peak + 1; j < data.size(); ++j)
    if (data.y[j] < half) {
      right = cross(j - 1, j);
      break;
    }
  const auto [xmin, xmax] = std::minmax_element(data.x.begin(), data.x.end());
  if (left && right)
    init.fwhm = *right - *left;
  else if (left)
    init.fwhm = 2.0 * (init.center - *left);
  else if (right)
    init.fwhm = 2.0 * (*right - init.center);
  else
    init.fwhm = 0.5 * (*xmax - *xmin);
  if (!(std::abs(init.fwhm) > 0.0)) init.fwhm = 0.5 * (*xmax - *xmin);
  if (!(std::abs(init.fwhm) > 0.0)) init.fwhm = 1.0;
  init.fwhm = std::abs(init.fwhm);
  return init;
}

FitResult fit_lorentzian(const ScanData& data, std::optional<LorentzianInit> init) {
  data.validate();
  if (data.size() < 5) throw DomainError("Lorentzian fit needs at least 5 points");

  std::vector<double> sigma = data.sigma;
  if (sigma.empty())
    for (double y : data.y) sigma.push_back(std::sqrt(std::max(y, 1.0)));

  const LorentzianInit start = init.value_or(lorentzian_initial_guess(data));
  Vec4 p(start.center, start.fwhm, start.amplitude, start.offset);

  FitResult result;
  result.model = "lorentzian";
  const auto n = data.size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 4);
  Eigen::VectorXd res(static_cast<Eigen::Index>(n));
  auto linearize = [&](const Vec4& at) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = lorentz(data.x[i], at);
      const auto row = static_cast<Eigen::Index>(i);
      res(row) = (data.y[i] - e.value) / sigma[i];
      jac.row(row) = e.grad.transpose() / sigma[i];
    }
  };

  double chi2 = chi2_of(data, sigma, p);
  double lambda = 1e-3;
  std::ostringstream diag;
  bool singular = false;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    linearize(p);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    qr.setThreshold(1e-12);
    if (qr.rank() < 4) {
      singular = true;
      diag << "singular normal equations at iteration " << it << " (Jacobian rank " << qr.rank()
           << " < 4)";
      break;
    }
    const Mat4 a = jac.transpose() * jac;
    const Vec4 g = jac.transpose() * res;

    const Vec4 gauss_newton = a.ldlt().solve(g);
    if (relative_step(gauss_newton, p) < kStepTolerance) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    Vec4 step;
    while (lambda < 1e16) {
      Mat4 damped = a;
      damped.diagonal() += lambda * a.diagonal();
      step = damped.ldlt().solve(g);
      const Vec4 trial = p + step;
      const double trial_chi2 = chi2_of(data, sigma, trial);
      if (std::isfinite(trial_chi2) && trial_chi2 <= chi2) {
        p = trial;
        chi2 = trial_chi2;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      diag << "no downhill step at iteration " << it << " (lambda " << lambda << ")";
      break;
    }
    if (relative_step(step, p) < kStepTolerance) {
      result.converged = true;
      ++it;
      break;
    }
  }
  if (!result.converged && !singular && it >= kMaxIterations)
    diag << "iteration limit " << kMaxIterations << " reached";
  result.n_iterations = it;

  p(1) = std::abs(p(1));
  Vec4 err = Vec4::Zero();
  if (!singular) {
    linearize(p);
    const Mat4 a = jac.transpose() * jac;
    Eigen::FullPivLU<Mat4> lu(a);
    if (lu.isInvertible()) {
      const Mat4 cov = lu.inverse();
      for (int k = 0; k < 4; ++k) err(k) = std::sqrt(std::max(cov(k, k), 0.0));
    } else {
      result.converged = false;
      diag << "covariance matrix singular";
    }
  }
  if (p(2) == 0.0) {
    result.converged = false;
    diag << (diag.tellp() > 0 ? "; " : "") << "zero amplitude";
  }

  result.params = {{"center", p(0), err(0)},
                   {"fwhm", p(1), err(1)},
                   {"amplitude", p(2), err(2)},
                   {"offset", p(3), err(3)}};
  result.chi2_reduced = n > 4 ? chi2 / static_cast<double>(n - 4) : 0.0;
  result.diagnostics = diag.str();
  return result;
}

FitResult fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma) {
  require_same_size(x, y, "line fit");
  if (!sigma.empty()) require_same_size(x, sigma, "line fit");
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("line fit needs at least 2 points");

  auto weight = [&](std::size_t i) {
    if (sigma.empty()) return 1.0;
    if (!(sigma[i] > 0.0)) throw DomainError("line fit: sigma must be positive");
    return 1.0 / (sigma[i] * sigma[i]);
  };
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight(i);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
  }
  const double xm = swx / sw;
  const double ym = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight(i);
    sxx += w * (x[i] - xm) * (x[i] - xm);
    sxy += w * (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw DomainError("line fit: all x values are identical");

  const double slope = sxy / sxx;
  const double intercept = ym - slope * xm;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    chi2 += weight(i) * r * r;
  }
  const double dof = n > 2 ? static_cast<double>(n - 2) : 0.0;
  const double chi2_red = dof > 0.0 ? chi2 / dof : 0.0;
  const double scale = sigma.empty() ? chi2_red : 1.0;

  FitResult r;
  r.model = "line";
  r.params = {{"slope", slope, std::sqrt(scale / sxx)},
              {"intercept", intercept, std::sqrt(scale * (1.0 / sw + xm * xm / sxx))}};
  r.chi2_reduced = chi2_red;
  r.converged = true;
  return r;
}

FitResult fit_malus(std::span<const double> theta_deg, std::span<const double> rates,
                    std::span<const double> sigma) {
  require_same_size(theta_deg, rates, "Malus fit");
  if (!sigma.empty()) require_same_size(theta_deg, sigma, "Malus fit");
  const auto n = theta_deg.size();
  if (n < 4) throw DomainError("Malus fit needs at least 4 angles");
  const auto [tmin, tmax] = std::minmax_element(theta_deg.begin(), theta_deg.end());
  if (*tmax - *tmin < 180.0 - 1e-9)
    throw DomainError("Malus fit: angles must span at least 180 degrees");

  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd rhs(rows);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sigma.empty() ? 1.0 : 1.0 / sigma[i];
    const double t = 2.0 * theta_deg[i] * kPi / 180.0;
    const auto k = static_cast<Eigen::Index>(i);
    design(k, 0) = w;
    design(k, 1) = w * std::cos(t);
    design(k, 2) = w * std::sin(t);
    rhs(k) = w * rates[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3)
    throw DomainError("Malus fit: rank-deficient design (fewer than 3 independent harmonics)");
  const Eigen::Vector3d coef = qr.solve(rhs);
  const double a = coef(0), b = coef(1), c = coef(2);

  const double chi2 = (design * coef - rhs).squaredNorm();
  const double dof = n > 3 ? static_cast<double>(n - 3) : 0.0;
  const double chi2_red = dof > 0.0 ? chi2 / dof : 0.0;
  const Eigen::Matrix3d cov =
      (design.transpose() * design).inverse() * (sigma.empty() ? chi2_red : 1.0);

  const double rho = std::hypot(b, c);
  const double amplitude = 2.0 * rho;
  double phase = 0.5 * std::atan2(c, b) * 180.0 / kPi;
  if (phase <= -90.0) phase += 180.0;
  const double offset = a - rho;

  // Propagate through (a, b, c) -> (amplitude, phase, offset).
  Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
  if (rho > 0.0) {
    const double deg = 180.0 / kPi;
    jac.row(0) << 0.0, 2.0 * b / rho, 2.0 * c / rho;
    jac.row(1) << 0.0, -0.5 * c / (rho * rho) * deg, 0.5 * b / (rho * rho) * deg;
    jac.row(2) << 1.0, -b / rho, -c / rho;
  } else {
    jac(2, 0) = 1.0;
  }
  const Eigen::Matrix3d pcov = jac * cov * jac.transpose();

  FitResult r;
  r.model = "malus";
  r.params = {{"amplitude", amplitude, std::sqrt(std::max(pcov(0, 0), 0.0))},
              {"phase", phase, std::sqrt(std::max(pcov(1, 1), 0.0))},
              {"offset", offset, std::sqrt(std::max(pcov(2, 2), 0.0))}};
  r.chi2_reduced = chi2_red;
  r.converged = true;
  return r;
}

ZeroPressureFit zero_pressure_extrapolation(std::span<const PressurePoint> series) {
  if (series.size() < 2)
    throw DomainError("zero-pressure extrapolation needs at least 2 pressures");
  const double ref = series.front().reference_thz;
  std::vector<double> p, c, s;
  bool weighted = true;
  for (const auto& pt : series) {
    p.push_back(pt.pressure_bar);
    c.push_back((pt.reference_thz - ref) * 1e6 + pt.fit.value("center"));
    const double sig = pt.fit.sigma("center");
    s.push_back(sig);
    weighted = weighted && sig > 0.0 && std::isfinite(sig);
  }
  ZeroPressureFit out;
  out.line = fit_line(p, c, weighted ? std::span<const double>(s) : std::span<const double>{});
  out.slope_mhz_per_bar = out.line.value("slope");
  out.slope_sigma_mhz_per_bar = out.line.sigma("slope");
  out.nu0_thz = ref + out.line.value("intercept") * 1e-6;
  out.nu0_sigma_mhz = out.line.sigma("intercept");
  return out;
}

}  // namespace cars

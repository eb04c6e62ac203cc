#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqzkit::lsq {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major, small and dense

// Residual vector as a function of the parameter vector.
using ResidualFn = std::function<Vec(const Vec&)>;

struct Options {
  int max_iterations = 500;
  double gradient_tol = 1e-8;  // scaled-gradient stopping threshold
  double step_tol = 1e-10;     // relative step-size stopping threshold
  double fd_step_rel = 1e-6;   // central-difference relative step
  Vec lower;                   // optional box constraints; empty = unbounded
  Vec upper;
};

struct Result {
  Vec params;
  Vec sigma;       // standard errors, sqrt(s^2 diag((J^T J)^-1))
  Mat covariance;  // s^2 (J^T J)^-1
  double ssr = 0.0;
  double rms = 0.0;
  int iterations = 0;
  bool converged = false;
  double condition = std::numeric_limits<double>::infinity();  // cond(J^T J)
  std::string message;
};

namespace detail {

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double ssr_of(const Vec& r) { return dot(r, r); }

// Cyclic Jacobi eigendecomposition for small symmetric matrices.
// Returns eigenvalues; V's columns hold the eigenvectors.
inline Vec jacobi_eigen(Mat a, Mat& v) {
  const std::size_t n = a.size();
  v.assign(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  Vec eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  return eig;
}

// Cholesky solve of (A + lambda diag) x = b; returns false when the damped
// matrix is not positive definite.
inline bool solve_damped(const Mat& a, const Vec& damp, double lambda, const Vec& b, Vec& x) {
  const std::size_t n = a.size();
  Mat l(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i][j] + (i == j ? lambda * damp[i] : 0.0);
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i][k] * y[k];
    y[i] = sum / l[i][i];
  }
  x.assign(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l[k][ii] * x[k];
    x[ii] = sum / l[ii][ii];
  }
  return true;
}

}  // namespace detail

inline void clip_to_box(Vec& p, const Options& opt) {
  if (opt.lower.size() == p.size())
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(p[i], opt.lower[i]);
  if (opt.upper.size() == p.size())
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::min(p[i], opt.upper[i]);
}

// Central-difference Jacobian, one row per residual.
inline Mat finite_difference_jacobian(const ResidualFn& f, const Vec& p, double rel_step) {
  const std::size_t np = p.size();
  Mat cols(np);
  for (std::size_t j = 0; j < np; ++j) {
    const double h = rel_step * std::max(std::abs(p[j]), 1e-4);
    Vec pp = p, pm = p;
    pp[j] += h;
    pm[j] -= h;
    const Vec rp = f(pp);
    const Vec rm = f(pm);
    cols[j].resize(rp.size());
    for (std::size_t i = 0; i < rp.size(); ++i) cols[j][i] = (rp[i] - rm[i]) / (2.0 * h);
  }
  const std::size_t nr = cols.empty() ? 0 : cols[0].size();
  Mat jac(nr, Vec(np));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < np; ++j) jac[i][j] = cols[j][i];
  return jac;
}

// Damped least squares (Levenberg-style trust region on the normal
// equations). Only improving steps are accepted, so the objective decreases
// monotonically across accepted iterations.
inline Result solve(const ResidualFn& f, Vec p, Options opt = {}) {
  if (p.empty()) throw std::invalid_argument("lsq::solve: empty parameter vector");
  clip_to_box(p, opt);

  Result res;
  Vec r = f(p);
  const std::size_t nr = r.size();
  const std::size_t np = p.size();
  if (nr == 0) throw std::invalid_argument("lsq::solve: empty residual vector");
  double ssr = detail::ssr_of(r);

  double lambda = 1e-3;
  bool converged = false;
  std::string message = "max iterations reached";
  int it = 0;

  Mat jac;
  for (it = 0; it < opt.max_iterations; ++it) {
    jac = finite_difference_jacobian(f, p, opt.fd_step_rel);

    Vec g(np, 0.0);
    Mat jtj(np, Vec(np, 0.0));
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t a = 0; a < np; ++a) {
        g[a] += jac[i][a] * r[i];
        for (std::size_t b = a; b < np; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
      }
    }
    for (std::size_t a = 0; a < np; ++a)
      for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

    double gmax = 0.0;
    for (std::size_t a = 0; a < np; ++a)
      gmax = std::max(gmax, std::abs(g[a]) * std::max(std::abs(p[a]), 1.0));
    if (gmax <= opt.gradient_tol * std::max(1.0, ssr)) {
      converged = true;
      message = "gradient below tolerance";
      break;
    }

    double max_diag = 0.0;
    for (std::size_t a = 0; a < np; ++a) max_diag = std::max(max_diag, jtj[a][a]);
    if (max_diag == 0.0) {
      converged = true;
      message = "zero Jacobian";
      break;
    }
    Vec damp(np);
    for (std::size_t a = 0; a < np; ++a) damp[a] = std::max(jtj[a][a], 1e-12 * max_diag);

    Vec ng(np);
    for (std::size_t a = 0; a < np; ++a) ng[a] = -g[a];

    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      Vec step;
      if (!detail::solve_damped(jtj, damp, lambda, ng, step)) {
        lambda *= 10.0;
        continue;
      }
      Vec trial = p;
      for (std::size_t a = 0; a < np; ++a) trial[a] += step[a];
      clip_to_box(trial, opt);

      Vec rt = f(trial);
      const double ssrt = detail::ssr_of(rt);
      if (ssrt < ssr) {
        double step_norm = 0.0, p_norm = 0.0;
        for (std::size_t a = 0; a < np; ++a) {
          step_norm += (trial[a] - p[a]) * (trial[a] - p[a]);
          p_norm += p[a] * p[a];
        }
        p = trial;
        r = std::move(rt);
        ssr = ssrt;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (std::sqrt(step_norm) <= opt.step_tol * (std::sqrt(p_norm) + opt.step_tol)) {
          converged = true;
          message = "step below tolerance";
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (converged) {
      ++it;
      break;
    }
    if (!accepted) {
      converged = true;  // no downhill direction left at damping limit
      message = "no further decrease possible";
      break;
    }
  }

  // Covariance and condition from the (undamped) normal equations at the end.
  jac = finite_difference_jacobian(f, p, opt.fd_step_rel);
  Mat jtj(np, Vec(np, 0.0));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t a = 0; a < np; ++a)
      for (std::size_t b = a; b < np; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

  Mat evec;
  const Vec eval = detail::jacobi_eigen(jtj, evec);
  double emax = 0.0, emin = std::numeric_limits<double>::infinity();
  for (double e : eval) {
    emax = std::max(emax, e);
    emin = std::min(emin, e);
  }
  res.condition = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();

  const double dof = static_cast<double>(nr > np ? nr - np : 1);
  const double s2 = ssr / dof;
  // Near-null eigenvalues are floored, not dropped: a flat direction must
  // surface as a large sigma, not a confident one.
  res.covariance.assign(np, Vec(np, 0.0));
  const double eig_floor = emax > 0.0 ? emax * 1e-14 : 1.0;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < np; ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < np; ++k)
        sum += evec[a][k] * evec[b][k] / std::max(eval[k], eig_floor);
      res.covariance[a][b] = s2 * sum;
    }
  res.sigma.resize(np);
  for (std::size_t a = 0; a < np; ++a)
    res.sigma[a] = std::sqrt(std::max(res.covariance[a][a], 0.0));

  res.params = std::move(p);
  res.ssr = ssr;
  res.rms = std::sqrt(ssr / static_cast<double>(nr));
  res.iterations = it;
  res.converged = converged;
  res.message = message;
  return res;
}

}  // namespace sqzkit::lsq

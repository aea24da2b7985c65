#include "plc/quadrature.hpp"

#include <cmath>

#include "plc/errors.hpp"

namespace plc {

namespace {

// Implicit-shift QL for a symmetric tridiagonal matrix, accumulating only the
// first row of the eigenvector matrix (all Golub-Welsch needs). d = diagonal,
// e = subdiagonal (e[0..n-2]); on exit d holds eigenvalues, q the first-row
// eigenvector components.
void tridiagonal_eigen_first_row(std::vector<double>& d, std::vector<double>& e,
                                 std::vector<double>& q) {
  const int n = static_cast<int>(d.size());
  q.assign(n, 0.0);
  q[0] = 1.0;
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw NumericError("GaussHermite: QL iteration failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = q[i + 1];
          q[i + 1] = s * q[i] + c * f;
          q[i] = c * q[i] - s * f;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  // insertion sort by eigenvalue, carrying q along
  for (int i = 1; i < n; ++i) {
    const double dv = d[i], qv = q[i];
    int j = i - 1;
    while (j >= 0 && d[j] > dv) {
      d[j + 1] = d[j];
      q[j + 1] = q[j];
      --j;
    }
    d[j + 1] = dv;
    q[j + 1] = qv;
  }
}

}  // namespace

GaussHermite::GaussHermite(int order) {
  if (order < 1) throw ArgumentError("GaussHermite: order must be >= 1");
  // Jacobi matrix of probabilists' Hermite: zero diagonal, offdiag sqrt(k).
  std::vector<double> d(order, 0.0);
  std::vector<double> e(order > 1 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
  std::vector<double> q;
  tridiagonal_eigen_first_row(d, e, q);
  nodes_ = std::move(d);
  weights_.resize(order);
  for (int i = 0; i < order; ++i) weights_[i] = q[i] * q[i];  // measure has total mass 1
}

double GaussHermite::expectation(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
  return s;
}

}  // namespace plc

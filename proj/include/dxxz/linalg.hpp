#ifndef DXXZ_LINALG_HPP
#define DXXZ_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "dxxz/errors.hpp"
#include "dxxz/spin_basis.hpp"

namespace dxxz {

// Dense complex matrix, row-major. Only used at oracle scale (dim <= 4096).
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<cplx> a;

  static DenseMatrix zero(std::size_t n) { return {n, std::vector<cplx>(n * n)}; }
  cplx& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  std::vector<cplx> apply(const std::vector<cplx>& x) const {
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0;
      const cplx* row = a.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  double max_abs_diff(const DenseMatrix& other) const {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
      m = std::max(m, std::abs(a[k] - other.a[k]));
    return m;
  }

  double hermiticity_defect() const {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
    return m;
  }
};

namespace linalg_detail {

// Householder reduction of a real symmetric matrix to tridiagonal form
// (diagonal d, subdiagonal e). When accumulate is set, a is overwritten with
// the orthogonal transform so that a^T A a = tridiag.
inline void sym_tridiagonalize(std::vector<double>& a, std::size_t n,
                               std::vector<double>& d, std::vector<double>& e,
                               bool accumulate) {
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a[i * n + k]);
      if (scale == 0.0) {
        e[i] = a[i * n + l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a[i * n + k] /= scale;
          h += a[i * n + k] * a[i * n + k];
        }
        double f = a[i * n + l];
        double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        e[i] = scale * g;
        h -= f * g;
        a[i * n + l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          if (accumulate) a[j * n + i] = a[i * n + j] / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a[j * n + k] * a[i * n + k];
          for (std::size_t k = j + 1; k <= l; ++k) g += a[k * n + j] * a[i * n + k];
          e[j] = g / h;
          f += e[j] * a[i * n + j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a[i * n + j];
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k)
            a[j * n + k] -= f * e[k] + g * a[i * n + k];
        }
      }
    } else {
      e[i] = a[i * n + l];
    }
    d[i] = h;
  }
  if (accumulate) d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (accumulate) {
      if (d[i] != 0.0) {
        for (std::size_t j = 0; j < i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < i; ++k) g += a[i * n + k] * a[k * n + j];
          for (std::size_t k = 0; k < i; ++k) a[k * n + j] -= g * a[k * n + i];
        }
      }
      d[i] = a[i * n + i];
      a[i * n + i] = 1.0;
      for (std::size_t j = 0; j < i; ++j) a[j * n + i] = a[i * n + j] = 0.0;
    } else {
      d[i] = a[i * n + i];
    }
  }
}

// QL with implicit shifts on a tridiagonal matrix. d holds the diagonal,
// e the subdiagonal in e[1..n-1]. If z is non-null (row-major n x n), the
// rotations are accumulated so that columns of z become eigenvectors.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                       std::size_t n, std::vector<double>* z) {
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw NumericalError("tridiag_ql: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (std::size_t k = 0; k < n; ++k) {
              f = (*z)[k * n + i + 1];
              (*z)[k * n + i + 1] = s * (*z)[k * n + i] + c * f;
              (*z)[k * n + i] = c * (*z)[k * n + i] - s * f;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// A = X + iY Hermitian embeds as the real symmetric [[X, -Y], [Y, X]]; every
// eigenvalue of A appears twice, and any real eigenvector (u; v) gives back
// the complex eigenvector u + iv.
inline std::vector<double> embed_hermitian(const DenseMatrix& m) {
  const std::size_t n = m.n, n2 = 2 * n;
  std::vector<double> big(n2 * n2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = m.at(i, j).real(), y = m.at(i, j).imag();
      big[i * n2 + j] = x;
      big[(i + n) * n2 + (j + n)] = x;
      big[i * n2 + (j + n)] = -y;
      big[(i + n) * n2 + j] = y;
    }
  return big;
}

}  // namespace linalg_detail

// Eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigenvalues(const DenseMatrix& m) {
  const std::size_t n = m.n;
  if (n == 0) return {};
  if (n > 2048) throw ResourceError("hermitian_eigenvalues: matrix too large");
  std::vector<double> big = linalg_detail::embed_hermitian(m);
  std::vector<double> d, e;
  linalg_detail::sym_tridiagonalize(big, 2 * n, d, e, false);
  linalg_detail::tridiag_ql(d, e, 2 * n, nullptr);
  std::sort(d.begin(), d.end());
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = d[2 * k];  // doubled spectrum
  return out;
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k is the eigenvector for values[k]
};

inline EigenDecomposition hermitian_eigendecomposition(const DenseMatrix& m) {
  const std::size_t n = m.n;
  if (n > 1024) throw ResourceError("hermitian_eigendecomposition: matrix too large");
  const std::size_t n2 = 2 * n;
  std::vector<double> big = linalg_detail::embed_hermitian(m);
  std::vector<double> d, e;
  linalg_detail::sym_tridiagonalize(big, n2, d, e, true);
  linalg_detail::tridiag_ql(d, e, n2, &big);

  std::vector<std::size_t> order(n2);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&d](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  // The doubled spectrum yields 2n candidates u + iv; Gram-Schmidt against the
  // accepted set keeps one complex eigenvector per pair (duplicates project to
  // ~zero and are skipped).
  EigenDecomposition out;
  out.vectors = DenseMatrix::zero(n);
  std::vector<cplx> cand(n);
  for (std::size_t idx : order) {
    if (out.values.size() == n) break;
    for (std::size_t r = 0; r < n; ++r)
      cand[r] = cplx(big[r * n2 + idx], big[(r + n) * n2 + idx]);
    for (std::size_t c = 0; c < out.values.size(); ++c) {
      if (std::fabs(out.values[c] - d[idx]) > 1e-8 * (1.0 + std::fabs(d[idx])))
        continue;  // distinct eigenvalue, orthogonal already
      cplx proj = 0;
      for (std::size_t r = 0; r < n; ++r)
        proj += std::conj(out.vectors.at(r, c)) * cand[r];
      for (std::size_t r = 0; r < n; ++r) cand[r] -= proj * out.vectors.at(r, c);
    }
    double nrm = 0;
    for (const cplx& v : cand) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    if (nrm < 0.25) continue;
    const std::size_t col = out.values.size();
    out.values.push_back(d[idx]);
    for (std::size_t r = 0; r < n; ++r) out.vectors.at(r, col) = cand[r] / nrm;
  }
  if (out.values.size() != n)
    throw NumericalError("hermitian_eigendecomposition: eigenvector pairing failed");
  return out;
}

}  // namespace dxxz

#endif

/// @file cyl_ops.cpp
/// @brief Centered-difference operators and the direct streamfunction solver.

#include "axns/cyl_ops.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <vector>

namespace axns {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ScalarField d_r(const ScalarField& f, BoundaryRule br) {
  const AnnularGrid& g = *f.grid;
  ScalarField out(f.grid);
  const double i2dr = 1.0 / (2.0 * g.dr);
  const std::size_t nz = g.n_z;
  const double* F = f.data();
  double* O = out.data();
  for (std::size_t i = 1; i + 1 < g.n_r; ++i)
    for (std::size_t j = 0; j < nz; ++j)
      O[i * nz + j] = (F[(i + 1) * nz + j] - F[(i - 1) * nz + j]) * i2dr;
  if (br == BoundaryRule::kOneSided) {
    const std::size_t l = g.n_r - 1;
    for (std::size_t j = 0; j < nz; ++j) {
      O[j] = (-3.0 * F[j] + 4.0 * F[nz + j] - F[2 * nz + j]) * i2dr;
      O[l * nz + j] = (3.0 * F[l * nz + j] - 4.0 * F[(l - 1) * nz + j] +
                       F[(l - 2) * nz + j]) *
                      i2dr;
    }
  }
  return out;
}

ScalarField d_z(const ScalarField& f, BoundaryRule br) {
  const AnnularGrid& g = *f.grid;
  ScalarField out(f.grid);
  const double i2dz = 1.0 / (2.0 * g.dz);
  const std::size_t nz = g.n_z;
  const double* F = f.data();
  double* O = out.data();
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double* row = F + i * nz;
    double* orow = O + i * nz;
    for (std::size_t j = 1; j + 1 < nz; ++j)
      orow[j] = (row[j + 1] - row[j - 1]) * i2dz;
    if (g.periodic_z) {
      // No z boundary: the centered stencil wraps, whatever the rule.
      orow[0] = (row[1] - row[nz - 1]) * i2dz;
      orow[nz - 1] = (row[0] - row[nz - 2]) * i2dz;
    } else if (br == BoundaryRule::kOneSided) {
      orow[0] = (-3.0 * row[0] + 4.0 * row[1] - row[2]) * i2dz;
      orow[nz - 1] =
          (3.0 * row[nz - 1] - 4.0 * row[nz - 2] + row[nz - 3]) * i2dz;
    }
  }
  return out;
}

ScalarField laplacian_axisym(const ScalarField& f) {
  const AnnularGrid& g = *f.grid;
  ScalarField out(f.grid);
  const double idr2 = 1.0 / (g.dr * g.dr);
  const double idz2 = 1.0 / (g.dz * g.dz);
  const double i2dr = 1.0 / (2.0 * g.dr);
  const std::size_t nz = g.n_z;
  const double* F = f.data();
  double* O = out.data();
  for (std::size_t i = 1; i + 1 < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (std::size_t j = 1; j + 1 < nz; ++j) {
      const std::size_t c = i * nz + j;
      O[c] = (F[c + nz] - 2.0 * F[c] + F[c - nz]) * idr2 +
             (F[c + nz] - F[c - nz]) * i2dr * inv_r +
             (F[c + 1] - 2.0 * F[c] + F[c - 1]) * idz2;
    }
    if (g.periodic_z) {
      for (std::size_t j : {std::size_t{0}, nz - 1}) {
        const std::size_t c = i * nz + j;
        const std::size_t cm = i * nz + (j + nz - 1) % nz;
        const std::size_t cp = i * nz + (j + 1) % nz;
        O[c] = (F[c + nz] - 2.0 * F[c] + F[c - nz]) * idr2 +
               (F[c + nz] - F[c - nz]) * i2dr * inv_r +
               (F[cp] - 2.0 * F[c] + F[cm]) * idz2;
      }
    }
  }
  return out;
}

ScalarField divergence(const AxisymVectorField& v, BoundaryRule br) {
  require_same_grid(v.v_r, v.v_z);
  ScalarField drvr = d_r(v.v_r, br);
  ScalarField dzvz = d_z(v.v_z, br);
  const AnnularGrid& g = *v.v_r.grid;
  ScalarField out(v.v_r.grid);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      // Boundary nodes stay 0 under kZero because both one-sided pieces do.
      const bool edge = !g.interior(i, j);
      if (edge && br == BoundaryRule::kZero) continue;
      out(i, j) = drvr(i, j) + v.v_r(i, j) * inv_r + dzvz(i, j);
    }
  }
  return out;
}

VorticityField curl(const AxisymVectorField& v, BoundaryRule br) {
  require_same_grid(v.v_r, v.v_theta);
  require_same_grid(v.v_r, v.v_z);
  const AnnularGrid& g = *v.v_r.grid;
  VorticityField w;
  w.omega_r = d_z(v.v_theta, br);
  for (double& x : w.omega_r.v) x = -x;
  ScalarField dzvr = d_z(v.v_r, br);
  ScalarField drvz = d_r(v.v_z, br);
  w.omega_theta = ScalarField(v.v_r.grid);
  for (std::size_t c = 0; c < dzvr.size(); ++c)
    w.omega_theta.v[c] = dzvr.v[c] - drvz.v[c];
  w.omega_z = d_r(v.v_theta, br);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      const bool edge = !g.interior(i, j);
      if (edge && br == BoundaryRule::kZero) {
        w.omega_z(i, j) = 0.0;
        continue;
      }
      w.omega_z(i, j) += v.v_theta(i, j) * inv_r;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Streamfunction solver
// ---------------------------------------------------------------------------

struct StreamfunctionSolver::Impl {
  std::size_t ni = 0;   // interior rows in r
  std::size_t nm = 0;   // transform length in z
  std::size_t nk = 0;   // modes (nm for DST, nm/2+1 complex for FFT)
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::vector<double> lo, hi;       // radial stencil coefficients per row
  std::vector<double> lam;          // z-mode eigenvalues (>= 0)
  std::vector<double> cp, inv_den;  // cached Thomas factors, [k*ni + a]

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (rbuf) fftw_free(rbuf);
    if (cbuf) fftw_free(cbuf);
  }
};

StreamfunctionSolver::StreamfunctionSolver(GridPtr grid, ZBoundary zb,
                                           double tol)
    : grid_(std::move(grid)), zb_(zb), tol_(tol), impl_(new Impl) {
  const AnnularGrid& g = *grid_;
  Impl& s = *impl_;
  s.ni = g.n_r - 2;
  const double idr2 = 1.0 / (g.dr * g.dr);
  const double idz2 = 1.0 / (g.dz * g.dz);

  s.lo.resize(s.ni);
  s.hi.resize(s.ni);
  for (std::size_t a = 0; a < s.ni; ++a) {
    const double r = g.r(a + 1);
    s.lo[a] = idr2 + 1.0 / (2.0 * r * g.dr);
    s.hi[a] = idr2 - 1.0 / (2.0 * r * g.dr);
  }

  if (zb_ == ZBoundary::kDirichlet) {
    s.nm = g.n_z - 2;
    s.nk = s.nm;
    s.rbuf = fftw_alloc_real(s.ni * s.nm);
    const int n = static_cast<int>(s.nm);
    fftw_r2r_kind kind = FFTW_RODFT00;
    s.fwd = fftw_plan_many_r2r(1, &n, static_cast<int>(s.ni), s.rbuf, nullptr,
                               1, n, s.rbuf, nullptr, 1, n, &kind,
                               FFTW_ESTIMATE);
    s.lam.resize(s.nk);
    for (std::size_t k = 0; k < s.nk; ++k)
      s.lam[k] = (2.0 - 2.0 * std::cos(kPi * double(k + 1) /
                                       double(s.nm + 1))) *
                 idz2;
  } else {
    s.nm = g.n_z;  // periodic grids carry n_z distinct nodes
    s.nk = s.nm / 2 + 1;
    s.rbuf = fftw_alloc_real(s.ni * s.nm);
    s.cbuf = fftw_alloc_complex(s.ni * s.nk);
    const int n = static_cast<int>(s.nm);
    s.fwd = fftw_plan_many_dft_r2c(1, &n, static_cast<int>(s.ni), s.rbuf,
                                   nullptr, 1, n, s.cbuf, nullptr, 1,
                                   static_cast<int>(s.nk), FFTW_ESTIMATE);
    s.bwd = fftw_plan_many_dft_c2r(1, &n, static_cast<int>(s.ni), s.cbuf,
                                   nullptr, 1, static_cast<int>(s.nk), s.rbuf,
                                   nullptr, 1, n, FFTW_ESTIMATE);
    s.lam.resize(s.nk);
    for (std::size_t k = 0; k < s.nk; ++k)
      s.lam[k] =
          (2.0 - 2.0 * std::cos(2.0 * kPi * double(k) / double(s.nm))) * idz2;
  }

  // Thomas factorization per mode: diag entry is -2/dr^2 - lam_k.
  s.cp.resize(s.nk * s.ni);
  s.inv_den.resize(s.nk * s.ni);
  for (std::size_t k = 0; k < s.nk; ++k) {
    const double d = -2.0 * idr2 - s.lam[k];
    double* cp = s.cp.data() + k * s.ni;
    double* iden = s.inv_den.data() + k * s.ni;
    double den = d;
    iden[0] = 1.0 / den;
    cp[0] = s.hi[0] * iden[0];
    for (std::size_t a = 1; a < s.ni; ++a) {
      den = d - s.lo[a] * cp[a - 1];
      iden[a] = 1.0 / den;
      cp[a] = s.hi[a] * iden[a];
    }
  }
}

StreamfunctionSolver::~StreamfunctionSolver() = default;
StreamfunctionSolver::StreamfunctionSolver(StreamfunctionSolver&&) noexcept =
    default;
StreamfunctionSolver& StreamfunctionSolver::operator=(
    StreamfunctionSolver&&) noexcept = default;

namespace {

// Thomas solve with cached factors; x and rhs may alias. Strides let the
// caller solve along non-contiguous columns.
inline void thomas_strided(const double* lo, const double* cp,
                           const double* iden, double* x, std::size_t n,
                           std::size_t stride) {
  x[0] = x[0] * iden[0];
  for (std::size_t a = 1; a < n; ++a)
    x[a * stride] = (x[a * stride] - lo[a] * x[(a - 1) * stride]) * iden[a];
  for (std::size_t a = n - 1; a-- > 0;)
    x[a * stride] -= cp[a] * x[(a + 1) * stride];
}

}  // namespace

StreamfunctionSolver::Result StreamfunctionSolver::solve(
    const ScalarField& omega_theta, const ScalarField* psi_boundary) const {
  if (omega_theta.grid != grid_)
    throw ShapeMismatch("omega_theta not sampled on the solver grid");
  if (psi_boundary && psi_boundary->grid != grid_)
    throw ShapeMismatch("psi_boundary not sampled on the solver grid");
  const AnnularGrid& g = *grid_;
  const Impl& s = *impl_;
  const std::size_t nz = g.n_z;
  const double idr2 = 1.0 / (g.dr * g.dr);
  const double idz2 = 1.0 / (g.dz * g.dz);
  const double* W = omega_theta.data();

  auto bc = [&](std::size_t i, std::size_t j) -> double {
    return psi_boundary ? (*psi_boundary)(i, j) : 0.0;
  };

  Result res;
  res.psi = ScalarField(grid_);
  ScalarField& psi = res.psi;

  if (zb_ == ZBoundary::kDirichlet) {
    const std::size_t m = s.nm;
    // Assemble folded right-hand side on interior nodes.
    for (std::size_t a = 0; a < s.ni; ++a) {
      const std::size_t i = a + 1;
      const double r = g.r(i);
      double* row = s.rbuf + a * m;
      const double* wrow = W + i * nz;
      for (std::size_t b = 0; b < m; ++b) row[b] = -r * wrow[b + 1];
      if (psi_boundary) {
        row[0] -= bc(i, 0) * idz2;
        row[m - 1] -= bc(i, nz - 1) * idz2;
      }
    }
    if (psi_boundary) {
      double* row0 = s.rbuf;
      double* rowl = s.rbuf + (s.ni - 1) * m;
      for (std::size_t b = 0; b < m; ++b) {
        row0[b] -= s.lo[0] * bc(0, b + 1);
        rowl[b] -= s.hi[s.ni - 1] * bc(g.n_r - 1, b + 1);
      }
    }
    fftw_execute(s.fwd);
    for (std::size_t k = 0; k < s.nk; ++k)
      thomas_strided(s.lo.data(), s.cp.data() + k * s.ni,
                     s.inv_den.data() + k * s.ni, s.rbuf + k, s.ni, m);
    fftw_execute(s.fwd);
    const double scale = 1.0 / (2.0 * double(m + 1));
    for (std::size_t a = 0; a < s.ni; ++a) {
      const std::size_t i = a + 1;
      double* prow = psi.data() + i * nz;
      const double* row = s.rbuf + a * m;
      for (std::size_t b = 0; b < m; ++b) prow[b + 1] = row[b] * scale;
      prow[0] = bc(i, 0);
      prow[nz - 1] = bc(i, nz - 1);
    }
    for (std::size_t j = 0; j < nz; ++j) {
      psi(0, j) = bc(0, j);
      psi(g.n_r - 1, j) = bc(g.n_r - 1, j);
    }
  } else {
    const std::size_t n = s.nm;
    for (std::size_t a = 0; a < s.ni; ++a) {
      const std::size_t i = a + 1;
      const double r = g.r(i);
      double* row = s.rbuf + a * n;
      const double* wrow = W + i * nz;
      for (std::size_t b = 0; b < n; ++b) row[b] = -r * wrow[b];
    }
    if (psi_boundary) {
      double* row0 = s.rbuf;
      double* rowl = s.rbuf + (s.ni - 1) * n;
      for (std::size_t b = 0; b < n; ++b) {
        row0[b] -= s.lo[0] * bc(0, b);
        rowl[b] -= s.hi[s.ni - 1] * bc(g.n_r - 1, b);
      }
    }
    fftw_execute(s.fwd);
    // Complex tridiagonal = two real solves sharing the cached factors.
    double* C = reinterpret_cast<double*>(s.cbuf);
    for (std::size_t k = 0; k < s.nk; ++k) {
      thomas_strided(s.lo.data(), s.cp.data() + k * s.ni,
                     s.inv_den.data() + k * s.ni, C + 2 * k, s.ni, 2 * s.nk);
      thomas_strided(s.lo.data(), s.cp.data() + k * s.ni,
                     s.inv_den.data() + k * s.ni, C + 2 * k + 1, s.ni,
                     2 * s.nk);
    }
    fftw_execute(s.bwd);
    const double scale = 1.0 / double(n);
    for (std::size_t a = 0; a < s.ni; ++a) {
      const std::size_t i = a + 1;
      double* prow = psi.data() + i * nz;
      const double* row = s.rbuf + a * n;
      for (std::size_t b = 0; b < n; ++b) prow[b] = row[b] * scale;
    }
    for (std::size_t j = 0; j < nz; ++j) {
      psi(0, j) = bc(0, j);
      psi(g.n_r - 1, j) = bc(g.n_r - 1, j);
    }
  }

  // Componentwise backward error of the full discrete system: the worst over
  // interior nodes of |A psi - b| / (|A| |psi| + |b|). Scale-invariant, at
  // most 1, and exactly 0 when every equation is satisfied bitwise (all-zero
  // data included), so the contract cannot blow up on small sources.
  double worst = 0;
  auto node_error = [&](std::size_t i, std::size_t j, std::size_t jm,
                        std::size_t jp, double a_lo, double a_hi, double r) {
    const double lhs = a_lo * psi(i - 1, j) +
                       (-2.0 * idr2 - 2.0 * idz2) * psi(i, j) +
                       a_hi * psi(i + 1, j) +
                       (psi(i, jm) + psi(i, jp)) * idz2;
    const double rhs = -r * omega_theta(i, j);
    const double num = std::abs(lhs - rhs);
    if (num == 0.0) return;
    const double den =
        std::abs(a_lo) * std::abs(psi(i - 1, j)) +
        (2.0 * idr2 + 2.0 * idz2) * std::abs(psi(i, j)) +
        std::abs(a_hi) * std::abs(psi(i + 1, j)) +
        (std::abs(psi(i, jm)) + std::abs(psi(i, jp))) * idz2 + std::abs(rhs);
    worst = std::max(worst, num / den);
  };
  if (zb_ == ZBoundary::kDirichlet) {
    for (std::size_t i = 1; i + 1 < g.n_r; ++i) {
      const double r = g.r(i);
      const double a_lo = idr2 + 1.0 / (2.0 * r * g.dr);
      const double a_hi = idr2 - 1.0 / (2.0 * r * g.dr);
      for (std::size_t j = 1; j + 1 < nz; ++j)
        node_error(i, j, j - 1, j + 1, a_lo, a_hi, r);
    }
  } else {
    const std::size_t n = s.nm;
    for (std::size_t i = 1; i + 1 < g.n_r; ++i) {
      const double r = g.r(i);
      const double a_lo = idr2 + 1.0 / (2.0 * r * g.dr);
      const double a_hi = idr2 - 1.0 / (2.0 * r * g.dr);
      for (std::size_t j = 0; j < n; ++j)
        node_error(i, j, (j + n - 1) % n, (j + 1) % n, a_lo, a_hi, r);
    }
  }
  res.rel_residual = worst;
  if (!(res.rel_residual <= tol_))
    throw NonConvergence("streamfunction solve residual " +
                             std::to_string(res.rel_residual) +
                             " exceeds tolerance",
                         1, res.rel_residual);
  return res;
}

GradientMatrix gradient_matrix(const AxisymVectorField& v, BoundaryRule br) {
  require_same_grid(v.v_r, v.v_z);
  const AnnularGrid& g = *v.v_r.grid;
  GradientMatrix m;
  m.rr = d_r(v.v_r, br);
  m.rz = d_r(v.v_z, br);
  m.zr = d_z(v.v_r, br);
  m.zz = d_z(v.v_z, br);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double shift = 1.0 / (g.r(i) * g.r(i));
    for (std::size_t j = 0; j < g.n_z; ++j) m.rr(i, j) -= shift;
  }
  return m;
}

AxisymVectorField velocity_from_psi(const ScalarField& psi,
                                    const ScalarField& gamma) {
  require_same_grid(psi, gamma);
  const AnnularGrid& g = *psi.grid;
  AxisymVectorField v;
  ScalarField dpsi_r = d_r(psi, BoundaryRule::kOneSided);
  ScalarField dpsi_z = d_z(psi, BoundaryRule::kOneSided);
  v.v_r = ScalarField(psi.grid);
  v.v_z = ScalarField(psi.grid);
  v.v_theta = ScalarField(psi.grid);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      v.v_r(i, j) = -dpsi_z(i, j) * inv_r;
      v.v_z(i, j) = dpsi_r(i, j) * inv_r;
      v.v_theta(i, j) = gamma(i, j) * inv_r;
    }
  }
  return v;
}

}  // namespace axns

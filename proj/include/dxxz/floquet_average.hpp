#ifndef DXXZ_FLOQUET_AVERAGE_HPP
#define DXXZ_FLOQUET_AVERAGE_HPP

#include <cmath>
#include <cstdint>

#include "dxxz/operators.hpp"

namespace dxxz {

// Rotating-frame machinery of the drive: U(t) = exp[-i A sin(omega t) D] with
// D = sum_bonds S^z_k S^z_l diagonal, so U(t) is a plain (not time-ordered)
// exponential and conjugation by it is exact at every t. Averaging the
// conjugated H0 over one period is an oracle for the closed-form effective
// Hamiltonian, independent of the Bessel-dressed kernel it validates.
class RotatingFrame {
 public:
  explicit RotatingFrame(const Model& model) : model_(&model) {}

  // phase of U(t) on one basis state; |result| = 1 by construction
  cplx u_phase(double t, std::uint64_t index) const {
    const ModelParams& p = model_->params();
    const double theta = p.amplitude_a * std::sin(p.omega * t);
    const double arg = -theta * model_->zz_diagonal()[index];
    return {std::cos(arg), std::sin(arg)};
  }

  // U(t) H0 U(t)^dagger psi via three diagonal/matrix-free passes
  StateVector conjugated_h0_apply(double t, const StateVector& psi) const {
    const ModelParams& p = model_->params();
    return conjugated_h0_at_phase(p.amplitude_a * std::sin(p.omega * t), psi);
  }

  // same operator from the closed-form dressed-XY expression (independent path)
  StateVector conjugated_h0_closed_form(double t, const StateVector& psi) const {
    const ModelParams& p = model_->params();
    return model_->apply_rotated_h0_closed_form(p.amplitude_a * std::sin(p.omega * t),
                                                psi);
  }

  // Trapezoidal average of U H0 U^dagger over one period at dimensionless
  // amplitude a (the drive phase theta = a sin(phi) is sampled uniformly in
  // phi, so omega never enters). Periodic integrand: trapezoid = plain mean
  // over nodes, spectrally accurate.
  StateVector average_by_quadrature(double a, int nodes, const StateVector& psi) const {
    if (nodes < 32) throw InvalidArgument("average_by_quadrature: nodes must be >= 32");
    StateVector acc = StateVector::zero(model_->basis());
    for (int k = 0; k < nodes; ++k) {
      const double phi = 2.0 * M_PI * k / nodes;
      StateVector term = conjugated_h0_at_phase(a * std::sin(phi), psi);
      for (std::uint64_t n = 0; n < acc.amp.size(); ++n) acc.amp[n] += term.amp[n];
    }
    const double w = 1.0 / nodes;
    for (cplx& v : acc.amp) v *= w;
    return acc;
  }

 private:
  StateVector conjugated_h0_at_phase(double theta, const StateVector& psi) const {
    const std::vector<double>& diag = model_->zz_diagonal();
    const std::uint64_t dim = model_->basis().dim();
    StateVector rotated = StateVector::zero(model_->basis());
    for (std::uint64_t n = 0; n < dim; ++n) {
      const double arg = theta * diag[n];  // U^dagger phase
      rotated.amp[n] = cplx(std::cos(arg), std::sin(arg)) * psi.amp[n];
    }
    StateVector h0_rotated = model_->apply_h0(rotated);
    for (std::uint64_t n = 0; n < dim; ++n) {
      const double arg = -theta * diag[n];  // U phase
      h0_rotated.amp[n] *= cplx(std::cos(arg), std::sin(arg));
    }
    return h0_rotated;
  }

  const Model* model_;
};

// Dense quadrature-averaged operator, column by column; the effcheck oracle.
inline DenseMatrix dense_quadrature_average(const Model& model, double a, int nodes,
                                            std::uint64_t max_dim = 4096) {
  const SpinBasis& basis = model.basis();
  if (basis.dim() > max_dim)
    throw ResourceError("dense_quadrature_average: dimension too large");
  RotatingFrame frame(model);
  DenseMatrix m = DenseMatrix::zero(basis.dim());
  StateVector unit = StateVector::zero(basis);
  for (std::uint64_t col = 0; col < basis.dim(); ++col) {
    unit.amp[col] = 1.0;
    StateVector image = frame.average_by_quadrature(a, nodes, unit);
    for (std::uint64_t row = 0; row < basis.dim(); ++row) m.at(row, col) = image.amp[row];
    unit.amp[col] = 0.0;
  }
  return m;
}

}  // namespace dxxz

#endif

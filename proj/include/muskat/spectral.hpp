#pragma once

#include <complex>
#include <vector>

#include "muskat/grid.hpp"

namespace muskat {

/// Fourier-side operators on the periodic grid. Wavenumbers are
/// kappa_k = pi k / L for k = -N/2+1 .. N/2; the Nyquist mode is kept as a
/// pure cosine, is zeroed by odd-order derivatives and by the Hilbert
/// transform (sign ambiguity at +-N/2), and is phase-handled as a cosine by
/// shifted_samples.

/// Exact derivative of the trigonometric interpolant, order in {1,2,3,4}.
GridFunction spectral_derivative(const GridFunction& g, int order);

/// Multiplier pi |kappa|, normalized so that Lambda matches
/// PV int (g(x) - g(x-a)) / a^2 da  (int (1-cos u)/u^2 du = pi).
GridFunction lambda_op(const GridFunction& g);

/// Multiplier -i pi sign(kappa), so that lambda_op(g) == hilbert(d/dx g).
GridFunction hilbert(const GridFunction& g);

/// H^{1/2} seminorm through the Fourier-side quadratic form. The constant in
/// front of sum |kappa| |c_k|^2 is calibrated once per process against the
/// defining alpha-integral rather than hard-coded; see
/// hhalf_fourier_constant().
double hhalf_seminorm(const GridFunction& g);

/// Calibrated constant (equals 2 pi up to quadrature error of the
/// calibration integral).
double hhalf_fourier_constant();

/// Node samples of the interpolant shifted by s: out_j = g~(x_j - s).
GridFunction shifted_samples(const GridFunction& g, double s);

/// Trigonometric interpolant evaluated at one arbitrary point (O(N) sum).
double eval_interpolant(const GridFunction& g, double x);

/// Normalized Fourier coefficients c_k (index k as stored by the FFT:
/// 0..N/2 then negative frequencies).
std::vector<std::complex<double>> spectrum_normalized(const GridFunction& g);

/// Relative magnitude of the top-octave coefficients of the order-th
/// derivative; used to refuse checks on under-resolved data.
double spectral_tail_fraction(const GridFunction& g, int order);

}  // namespace muskat

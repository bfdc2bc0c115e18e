#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

/// Factorization of real-coefficient polynomials into complex roots.
///
/// Coefficients are in ascending monomial order: coeffs[i] multiplies u^i.
namespace homomorph::rootfind {

using cplx = std::complex<double>;

struct FactorOptions {
    double tol = 1e-8;        // bound on the scaled residual of every root
    int max_iterations = 200;
    std::size_t companion_max_degree = 64;  // eigenvalue fallback limit
};

/// Roots of p(u) = leading_coeff * prod(u - roots[k]).
///
/// max_residual is the largest scaled residual
/// |p(u_k)| / (||c||_inf * max(1, |u_k|)^degree).
struct RootSet {
    std::vector<cplx> roots;
    cplx leading_coeff{};
    std::size_t degree = 0;
    double max_residual = 0.0;
    int iterations = 0;
    bool used_companion = false;
};

/// Aberth-Ehrlich simultaneous iteration started from Newton-polygon circles.
/// Falls back to companion-matrix eigenvalues (polished by Newton) for small
/// degrees when the iteration does not converge.
///
/// Throws InvalidConfig for degree 0 or zero leading/trailing coefficients,
/// ConvergenceError when the residual tolerance is not met.
RootSet factor_polynomial(std::span<const double> coeffs, const FactorOptions& options = {});

/// Scaled residual of each root (see RootSet), evaluated by Horner's rule in
/// the reversed variable when |u| > 1.
std::vector<double> eval_residuals(std::span<const double> coeffs, std::span<const cplx> roots);
std::vector<double> eval_residuals(std::span<const double> coeffs, const RootSet& roots);

}  // namespace homomorph::rootfind

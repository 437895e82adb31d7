#ifndef UIV_LAMBERT_W_HPP
#define UIV_LAMBERT_W_HPP

namespace uiv {

/// Principal branch W0 of the Lambert W function, restricted to the interval
/// [-1/e, 0] (the only range the final-size formula produces). Returns a value
/// in [-1, 0] with w*exp(w) = x to an absolute residual of 1e-12 (1e-9 within
/// 1e-8 of the branch point, where the root is double).
///
/// Throws std::domain_error for x < -1/e - 1e-14 or x > 0.
double lambert_w0(double x);

} // namespace uiv

#endif

// Cayley retraction cay: so(3) -> SO(3) and its right-trivialized tangent
// maps, all in the closed forms valid on SO(3).
#pragma once

#include "suslov/so3.hpp"

namespace suslov {

// I + (hat(w) + hat(w)^2 / 2) / (1 + |w/2|^2).
Rot3 cay(const Vec3& w);

// Inverse on the Cayley chart, vee of the skew part of 2 (R - I)(R + I)^-1.
// Throws DomainError at the chart boundary |trace(R) + 1| < 1e-10 and when the
// reconstructed cay(w) does not reproduce R.
Vec3 cay_inv(const Rot3& r);

// dcay_w = (I + hat(w)/2) / (1 + |w/2|^2).
Mat3 dcay(const Vec3& w);

// dcay_w^{-1} = I - hat(w)/2 + w w^T / 4.
Mat3 dcay_inv(const Vec3& w);

// Inverse tangent map at eps*w restricted to the constrained subspace w_3 = 0,
// in the printed form whose (3,3) entry is 0 rather than the 1 produced by
// dcay_inv(eps*w). Throws ConstraintError when |w_3| > 1e-12.
Mat3 dcay_inv_scaled(const Vec3& w, double eps);

}  // namespace suslov

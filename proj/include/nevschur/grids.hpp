#pragma once

#include <vector>

#include "nevschur/numkit.hpp"

namespace nevschur::grids {

/// 12 disk points: radii {0.3, 0.6, 0.9} x angles {pi/4, 3pi/4, 5pi/4, 7pi/4}.
std::vector<cdouble> disk();

/// 4 points on |z sin(beta) + sign * i cos(beta)| = 1, none of them real.
std::vector<cdouble> beta_circle(double beta, int sign);

/// 8 real points in (-0.99, 0.99).
std::vector<cdouble> real_interval();

/// Certificate grids: radii {0.5, 1.0, 1.8} x angles {pi/3, 2pi/3} in the
/// upper half plane, and their conjugates.
std::vector<cdouble> certificate_upper();
std::vector<cdouble> certificate_lower();

/// 16 points used to compare transfer functions: the disk grid plus the
/// four points of the beta = pi/4 upper circle.
std::vector<cdouble> similarity();

/// 6 points off [-1, 1] for compressed resolvents and the Gamma transform.
std::vector<cdouble> xi_probe();

/// 5 points for transform identity checks.
std::vector<cdouble> transform_probe();

}  // namespace nevschur::grids

#include "nevschur/grids.hpp"

#include <cmath>
#include <numbers>

namespace nevschur::grids {

using std::numbers::pi;

std::vector<cdouble> disk() {
  std::vector<cdouble> out;
  for (double r : {0.3, 0.6, 0.9}) {
    for (double a : {pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4}) out.push_back(std::polar(r, a));
  }
  return out;
}

std::vector<cdouble> beta_circle(double beta, int sign) {
  // z = (e^{i theta} - sign * i cos(beta)) / sin(beta); the chosen thetas
  // keep Im e^{i theta} away from sign * cos(beta), so no point is real.
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  const std::vector<double> thetas = sign > 0
                                         ? std::vector<double>{pi / 2, -pi / 2, -pi / 4, -3 * pi / 4}
                                         : std::vector<double>{-pi / 2, pi / 2, pi / 4, 3 * pi / 4};
  std::vector<cdouble> out;
  for (double t : thetas) {
    out.push_back((std::polar(1.0, t) - cdouble(0.0, sign * c)) / s);
  }
  return out;
}

std::vector<cdouble> real_interval() {
  return {-0.95, -0.7, -0.4, -0.1, 0.15, 0.45, 0.75, 0.98};
}

std::vector<cdouble> certificate_upper() {
  std::vector<cdouble> out;
  for (double r : {0.5, 1.0, 1.8}) {
    for (double a : {pi / 3, 2 * pi / 3}) out.push_back(std::polar(r, a));
  }
  return out;
}

std::vector<cdouble> certificate_lower() {
  std::vector<cdouble> out;
  for (cdouble z : certificate_upper()) out.push_back(std::conj(z));
  return out;
}

std::vector<cdouble> similarity() {
  std::vector<cdouble> out = disk();
  for (cdouble z : beta_circle(pi / 4, 1)) out.push_back(z);
  return out;
}

std::vector<cdouble> xi_probe() {
  return {cdouble(0, 2), cdouble(0, -2), cdouble(1.5, 0.5), cdouble(-1.2, 0.3), cdouble(3.0, 0.0),
          cdouble(-2.5, 0.0)};
}

std::vector<cdouble> transform_probe() {
  return {cdouble(0.2, 0.1), cdouble(-0.5, 0.4), cdouble(0.0, 0.8), cdouble(1.3, 0.6),
          cdouble(0.6, 0.0)};
}

}  // namespace nevschur::grids

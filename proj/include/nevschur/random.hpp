#pragma once

// Seeded generators for test systems and parameters. The stream is
// std::mt19937_64; uniforms take the top 53 bits, normals use the cosine
// branch of Box-Muller, complex normals draw the real part first.

#include <cstdint>
#include <random>

#include "nevschur/blocks.hpp"
#include "nevschur/systems.hpp"

namespace nevschur {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform();  // [0, 1)
  double normal();
  cdouble complex_normal();

 private:
  std::mt19937_64 eng_;
};

inline constexpr double kContractionMargin = 1e-3;

CMatrix random_matrix(Rng& rng, Index rows, Index cols);
/// G / (||G|| + 1e-3) with G complex Gaussian.
CMatrix random_contraction(Rng& rng, Index rows, Index cols);
/// H / (||H|| + 1e-3) with H = (G + G*)/2.
CMatrix random_selfadjoint_contraction(Rng& rng, Index n);
CMatrix random_unitary(Rng& rng, Index n);
/// Hermitian contraction with norm exactly `scale` (or zero for n = 0).
CMatrix random_hermitian_scaled(Rng& rng, Index n, double scale);

PassiveSystem random_selfadjoint_system(Rng& rng, Index m, Index n);
/// Random (F, K, Y) with ||F|| <= f_scale.
KYParam random_ky(Rng& rng, Index m, Index n, double f_scale = 0.9);
/// Random parameters for an (rows_top + rows_bottom) x (cols_left + cols_right) contraction.
GeneralBlockParam random_general(Rng& rng, Index rows_top, Index cols_left, Index rows_bottom,
                                 Index cols_right);

}  // namespace nevschur

#include "distil/random.hpp"

#include <cmath>

namespace distil::random {

Engine derive(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

Matrix ginibre(Engine& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

Matrix random_hermitian(Engine& rng, Eigen::Index dim) { return hermitian_part(ginibre(rng, dim, dim)); }

Matrix random_density(Engine& rng, Eigen::Index dim, Eigen::Index rank) {
  const Matrix g = ginibre(rng, dim, rank);
  const Matrix rho = g * g.adjoint();
  return hermitian_part(rho / real_trace(rho));
}

Matrix haar_unitary(Engine& rng, Eigen::Index dim) {
  const Eigen::HouseholderQR<Matrix> qr(ginibre(rng, dim, dim));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

double uniform(Engine& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

std::vector<double> random_distribution(Engine& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) total += (v = expo(rng));
  for (double& v : p) v /= total;
  return p;
}

Matrix random_contraction(Engine& rng, Eigen::Index dim, double min_norm) {
  const Matrix g = ginibre(rng, dim, dim);
  Eigen::JacobiSVD<Matrix> svd(g);
  return g * (uniform(rng, min_norm, 1.0) / svd.singularValues()(0));
}

Matrix random_invertible_contraction(Engine& rng, Eigen::Index dim, double min_singular) {
  RealVector s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s(i) = uniform(rng, min_singular, 1.0);
  const Matrix u = haar_unitary(rng, dim);
  const Matrix v = haar_unitary(rng, dim);
  return u * s.cast<Complex>().asDiagonal() * v.adjoint();
}

MeasurementAssemblage random_projective_measurements(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                                     std::size_t n_outputs) {
  Elements e(n_inputs, std::vector<Matrix>(n_outputs, Matrix::Zero(dim, dim)));
  for (std::size_t x = 0; x < n_inputs; ++x) {
    const Matrix u = haar_unitary(rng, dim);
    for (Eigen::Index k = 0; k < dim; ++k) e[x][static_cast<std::size_t>(k) % n_outputs] += projector(u.col(k));
  }
  return MeasurementAssemblage(std::move(e));
}

MeasurementAssemblage random_noisy_measurements(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                                std::size_t n_outputs, double noise) {
  const MeasurementAssemblage sharp = random_projective_measurements(rng, dim, n_inputs, n_outputs);
  Elements e = scale_elements(sharp.elements(), 1.0 - noise);
  for (auto& row : e)
    for (auto& m : row) m += (noise / static_cast<double>(n_outputs)) * identity(dim);
  return MeasurementAssemblage(std::move(e));
}

MeasurementAssemblage random_povms(Engine& rng, Eigen::Index dim, std::size_t n_inputs, std::size_t n_outputs) {
  Elements e(n_inputs);
  for (std::size_t x = 0; x < n_inputs; ++x) {
    Matrix sum = Matrix::Zero(dim, dim);
    std::vector<Matrix> w;
    for (std::size_t a = 0; a < n_outputs; ++a) {
      const Matrix g = ginibre(rng, dim, dim);
      w.push_back(g * g.adjoint());
      sum += w.back();
    }
    const Matrix root_inv = sqrt_pinv(hermitian_part(sum));
    for (const Matrix& m : w) e[x].push_back(hermitian_part(root_inv * m * root_inv));
  }
  return MeasurementAssemblage(std::move(e));
}

StateAssemblage random_steerable_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                            std::size_t n_outputs) {
  Vector psi(dim * dim);
  psi = ginibre(rng, dim * dim, 1).col(0);
  psi.normalize();
  const BipartiteState state(projector(psi), dim, dim);
  return steer_from_state(state, random_projective_measurements(rng, dim, n_inputs, n_outputs));
}

StateAssemblage random_state_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                        std::size_t n_outputs) {
  const BipartiteState state(random_density(rng, dim * dim), dim, dim);
  return steer_from_state(state, random_povms(rng, dim, n_inputs, n_outputs));
}

StateAssemblage random_product_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                          std::size_t n_outputs) {
  const Matrix rho_a = random_density(rng, dim);
  const Matrix rho_b = random_density(rng, dim);
  const BipartiteState state(hermitian_part(kron(rho_a, rho_b)), dim, dim);
  return steer_from_state(state, random_projective_measurements(rng, dim, n_inputs, n_outputs));
}

StateAssemblage random_lhs_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                      std::size_t n_outputs, std::size_t n_hidden) {
  const std::vector<double> weights = random_distribution(rng, n_hidden);
  Elements e(n_inputs, std::vector<Matrix>(n_outputs, Matrix::Zero(dim, dim)));
  for (std::size_t l = 0; l < n_hidden; ++l) {
    const Matrix rho = random_density(rng, dim);
    for (std::size_t x = 0; x < n_inputs; ++x) {
      const std::vector<double> response = random_distribution(rng, n_outputs);
      for (std::size_t a = 0; a < n_outputs; ++a) e[x][a] += (weights[l] * response[a]) * rho;
    }
  }
  return StateAssemblage(std::move(e));
}

}  // namespace distil::random

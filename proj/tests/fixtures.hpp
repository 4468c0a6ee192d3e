#pragma once

// Models shared by several test binaries, assembled in code so that tests of
// the analysis engine do not depend on the file parser.

#include <random>

#include "oracle.hpp"
#include "pim/model.hpp"
#include "pim/ratlin.hpp"

namespace pim::fixtures {

inline RatVector row(std::initializer_list<int> xs) { return {xs.begin(), xs.end()}; }

/// F_D, rho, U, L, mu, nu over M, L, T with nu * rho / mu = 1.
inline Model drag(bool classic_basis = false, bool with_constraint = true) {
  Model m;
  m.dims.names = {"M", "L", "T"};
  m.quantities = {{"F_D", row({1, 1, -2})}, {"rho", row({1, -3, 0})}, {"U", row({0, 1, -1})},
                  {"L", row({0, 1, 0})},    {"mu", row({1, -1, -1})}, {"nu", row({0, 2, -1})}};
  if (with_constraint) m.constraints.push_back(Constraint::monomial(row({0, 1, 0, 0, -1, 1}), 1));
  if (classic_basis)
    m.basis_override = RatMatrix::from_columns(
        {row({1, -1, -2, -2, 0, 0}), row({0, 1, 1, 1, -1, 0}), row({0, 0, 1, 1, 0, -1})}, 6);
  return m;
}

/// Period T, mass m, length L_p, gravity g.
inline Model pendulum() {
  Model m;
  m.dims.names = {"M", "L", "T"};
  m.quantities = {{"T", row({0, 0, 1})}, {"m", row({1, 0, 0})}, {"L_p", row({0, 1, 0})}, {"g", row({0, 1, -2})}};
  return m;
}

/// Random integer dimension matrix (m <= 4, n <= 8, entries in -2..2).
inline Model random_integer_model(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> mdist(1, 4), ndist(1, 8);
  std::uniform_int_distribution<int> entry(-2, 2);
  Model model;
  const std::size_t m = mdist(rng), n = ndist(rng);
  for (std::size_t i = 0; i < m; ++i) model.dims.names.push_back("D" + std::to_string(i));
  for (std::size_t j = 0; j < n; ++j) {
    RatVector e(m);
    for (auto& x : e) x = entry(rng);
    model.quantities.push_back({"x" + std::to_string(j), e});
  }
  return model;
}

/// Adds up to `max_ell` monomial constraints whose exponent vectors are
/// random rational combinations of a kernel basis of A, so J·Aᵀ = 0. Some
/// draws repeat a scaled earlier row to make J rank deficient.
inline void add_scale_invariant_constraints(Model& model, std::mt19937& rng, std::size_t max_ell = 3) {
  const RatMatrix kernel = kernel_basis(build_dimension_matrix(model));
  if (kernel.cols() == 0) return;
  std::uniform_int_distribution<std::size_t> ell_dist(1, max_ell);
  std::bernoulli_distribution repeat(0.2);
  const std::size_t ell = ell_dist(rng);
  while (model.constraints.size() < ell) {
    RatVector v(model.n(), Rational(0));
    if (!model.constraints.empty() && repeat(rng)) {
      Rational s = oracle::random_rational(rng);
      if (s == 0) s = 2;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * model.constraints.front().row[j];
    } else {
      for (std::size_t k = 0; k < kernel.cols(); ++k) {
        const Rational c = oracle::random_rational(rng);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * kernel(j, k);
      }
    }
    if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; })) continue;
    model.constraints.push_back(Constraint::monomial(v, oracle::random_positive_rational(rng)));
  }
}

}  // namespace pim::fixtures

#pragma once

// Closed-form reference values written out independently of the library's
// coefficient pipeline. The Erlang(2) expressions are transcribed term by
// term from their published form, including its slips, so that they can be
// compared against the pipeline rather than trusted.

namespace levyqsd::reference {

/// Brownian dual psi(eta) = eta + eta^2 / 2.
double brownian_c1(double alpha, double beta);
double brownian_c3(double alpha, double beta);
double brownian_mu(double alpha, double beta);
double brownian_xi(double alpha, double beta);
/// Erlang(shape) density with unit rate.
double erlang_density(int shape, double x);
double brownian_mu_density(double x, double y);
double brownian_xi_density(double x, double y);

/// M/E(2, nu)/1: theta* = (2 lambda nu^2)^{1/3} - nu and the minimum value.
double erlang2_theta_star(double lambda, double nu);
double erlang2_zeta_star(double lambda, double nu);

/// Published C1(alpha, beta) for general lambda, nu.
double erlang2_c1_display(double lambda, double nu, double alpha, double beta);
/// Published C3(alpha, beta) for general lambda, nu.
double erlang2_c3_display(double lambda, double nu, double alpha, double beta);
/// Published mu~ for lambda = 1, nu = 3.
double erlang2_mu_display(double alpha, double beta);
/// Published xi~ = I1 / I2 for lambda = 1, nu = 3.
double erlang2_xi_display(double alpha, double beta);

}  // namespace levyqsd::reference

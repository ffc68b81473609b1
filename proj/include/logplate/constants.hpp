#pragma once

namespace logplate {

// Problem data for the clamped plate on the ball B_R in R^N.
struct Params {
  int N = 5;
  double lambda = 0.0;
  double mu = 0.0;
  double R = 1.0;
};

// Throws InvalidArgument unless N >= 5, R > 0 and lambda, mu are finite.
void validate(const Params& p);

struct Constants {
  int N = 0;
  double R = 0.0;
  double p_crit = 0.0;      // 2N/(N-4)
  double C_N = 0.0;         // Talenti normalisation
  double omega_N = 0.0;     // area of the unit sphere
  double volume = 0.0;      // |B_R|
  double S_pow = 0.0;       // S^{N/4}
  double lambda1 = 0.0;     // clamped bilaplacian, first eigenvalue
  double lambda1_lap = 0.0; // Dirichlet Laplacian, first eigenvalue
  double cS = 0.0;          // (2/N) S^{N/4}
};

double critical_exponent(int N);
double talenti_constant(int N);
double sphere_area(int N);
double ball_volume(int N, double R);

// Exact Gamma(k/2) for positive integers k.
double gamma_half(int k);

// S^{N/4} from the Beta-function closed form.
double sobolev_pow_closed(int N);
// S^{N/4} as the integral of |Delta U_1|^2 over R^N by quadrature in
// r = sinh(s), truncated where the integrand has decayed by 1e-16 and closed
// with the leading power-law tail.
double sobolev_pow_quadrature(int N);
// Closed form, after checking it against the quadrature route to 1e-6.
double sobolev_pow(int N);

double threshold_cS(double S_pow, int N);

// Fills every field; eigenvalues come from a uniform grid of `grid_size`
// nodes on [0, R].
Constants make_constants(const Params& p, int grid_size);

}  // namespace logplate

#pragma once

#include <functional>
#include <optional>

#include "npidob/params.hpp"

namespace npidob {

struct Vector2 {
  double x = 0.0;
  double y = 0.0;
};

// Row-major 2x2 matrix.
struct Matrix2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Matrix2 diagonal(double d) { return {d, 0.0, 0.0, d}; }

  Matrix2 transpose() const { return {a11, a21, a12, a22}; }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  bool is_finite() const;

  bool operator==(const Matrix2&) const = default;
};

Matrix2 operator+(const Matrix2& a, const Matrix2& b);
Matrix2 operator-(const Matrix2& a, const Matrix2& b);
Matrix2 operator*(const Matrix2& a, const Matrix2& b);
Matrix2 operator*(double s, const Matrix2& a);
Vector2 operator*(const Matrix2& a, Vector2 v);

double dot(Vector2 a, Vector2 b);
double norm(Vector2 v);

// Eigenvalues of the symmetric part's matrix, ascending. Assumes a12 == a21.
struct SymmetricEigen {
  double min;
  double max;
};
SymmetricEigen symmetric_eigenvalues(const Matrix2& m);

// Largest real part among the eigenvalues.
double spectral_abscissa(const Matrix2& m);
// Induced 2-norm (largest singular value).
double spectral_norm(const Matrix2& m);
double frobenius_norm(const Matrix2& m);

// Routh test for the 2x2 characteristic polynomial: trace < 0 and det > 0.
bool is_hurwitz(const Matrix2& a);
bool is_symmetric_positive_definite(const Matrix2& m);

// Symmetric P with A^T P + P A = -Q, from the 3-unknown linear system in
// (p11, p12, p22). Throws NotHurwitz, IllConditioned, or Precondition when Q
// is not symmetric positive definite.
Matrix2 solve_lyapunov(const Matrix2& a, const Matrix2& q);

enum class Loop { Outer, Inner };

const char* to_string(Loop loop);

// Estimation-error dynamics A(x) = A0 + d_mu(x) A1, forcing through B.
//   Outer: A0 = [-B/J, -1/J; l_i_tau, 0]
//   Inner: A0 = [-R/L, -1/L; l_i_e, 0]
// A1 has a zero first row and A0's first row as its second row.
struct ErrorMatrices {
  Matrix2 A0;
  Matrix2 A1;
  Vector2 B{0.0, 1.0};
};

ErrorMatrices error_matrices(Loop loop, const MotorParams& p, const GainSet& g);

struct StabilityQuery {
  Loop loop = Loop::Inner;
  Matrix2 Q0 = Matrix2::diagonal(1000.0);
  double epsilon = 0.1;  // ball radius
  double delta = 1.0;    // bound on the disturbance rate
};

struct StabilityReport {
  Loop loop = Loop::Inner;
  Matrix2 P;
  Matrix2 Q1;  // A1^T P + P A1
  bool hurwitz = false;
  double lambda_min_P = 0.0;
  double lambda_max_P = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double l_p = 0.0;  // sup |d_mu| over the saturation domain

  // gamma* = decay_term - mu_term - disturbance_term, spectral norms.
  double decay_term = 0.0;        // lambda_min(Q0) / lambda_max(P)
  double mu_term = 0.0;           // l_p ||Q1|| / lambda_min(P)
  double disturbance_term = 0.0;  // 2 ||P|| delta / (eps lambda_min(P))
  double gamma_star = 0.0;
  // Same expression with Frobenius norms for ||Q1|| and ||P||.
  double gamma_star_frobenius = 0.0;

  // Inner loop only: rho(eta2) = eps / (eps + eta2) with eps_ab = epsilon.
  std::optional<double> rho;

  bool certified() const { return hurwitz && gamma_star > 0.0; }
  // Gronwall entry-time bound for an initial Lyapunov value V0 = d^T P d.
  double finite_time_bound(double V0) const;
  double lyapunov_value(Vector2 d) const;
};

StabilityReport gamma_star(const StabilityQuery& q, const MotorParams& p, const GainSet& g);

// (ln V0 - 2 ln eps) / gamma. Throws NonPositiveGamma if gamma <= 0 and
// Precondition if V0 < eps^2.
double finite_time_bound(double V0, double epsilon, double gamma_star);

struct MechanicalMatrix {
  Matrix2 A_m;  // [0, 1; -k_theta/J, -(k_omega + B)/J]
  bool hurwitz = false;
};

MechanicalMatrix mechanical_matrix(const GainSet& g, const MotorParams& p);

// inf over x >= eps of x / (x + eta2).
double rho(double epsilon_ab, double eta2);

// -(2 eta1 / L) rho(eta2) + delta_ab.
double current_loop_decay(double epsilon_ab, const GainSet& g, const MotorParams& p,
                          double delta_ab);

// Right-hand sides of the continuous estimation-error dynamics.
// `current_coupling` is S e_alpha - C e_beta with S = sin(P theta), C = cos(P theta).
Vector2 outer_error_rhs(double omega_tilde, double tau_tilde, double current_coupling,
                        double tau_L_dot, const MotorParams& p, const GainSet& g);
Vector2 inner_error_rhs(double e_tilde, double d_tilde, double d_dot, const MotorParams& p,
                        const GainSet& g);

struct BallEntry {
  bool entered = false;
  double time = 0.0;  // first time with ||d|| < eps
};

// RK4 integration of the stand-alone error dynamics of `loop` from d0 with the
// given disturbance rate (tau_L_dot or d_dot), current coupling held at zero.
BallEntry simulate_ball_entry(Loop loop, const MotorParams& p, const GainSet& g, Vector2 d0,
                              const std::function<double(double)>& disturbance_rate,
                              double epsilon, double dt, double horizon);

}  // namespace npidob

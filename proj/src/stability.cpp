#include "npidob/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "npidob/errors.hpp"
#include "npidob/nonlinear_gain.hpp"

namespace npidob {

bool Matrix2::is_finite() const {
  return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

Matrix2 operator*(double s, const Matrix2& a) { return {s * a.a11, s * a.a12, s * a.a21, s * a.a22}; }

Vector2 operator*(const Matrix2& a, Vector2 v) {
  return {a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
}

double dot(Vector2 a, Vector2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vector2 v) { return std::hypot(v.x, v.y); }

SymmetricEigen symmetric_eigenvalues(const Matrix2& m) {
  const double mean = 0.5 * (m.a11 + m.a22);
  const double r = std::hypot(0.5 * (m.a11 - m.a22), m.a12);
  return {mean - r, mean + r};
}

double spectral_abscissa(const Matrix2& m) {
  const double half_tr = 0.5 * m.trace();
  const double disc = half_tr * half_tr - m.det();
  return disc >= 0.0 ? half_tr + std::sqrt(disc) : half_tr;
}

double spectral_norm(const Matrix2& m) {
  return std::sqrt(std::max(0.0, symmetric_eigenvalues(m.transpose() * m).max));
}

double frobenius_norm(const Matrix2& m) {
  return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

bool is_hurwitz(const Matrix2& a) { return a.trace() < 0.0 && a.det() > 0.0; }

bool is_symmetric_positive_definite(const Matrix2& m) {
  const double scale = std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
  if (!m.is_finite() || scale == 0.0) return false;
  if (std::abs(m.a12 - m.a21) > 1e-12 * scale) return false;
  return m.a11 > 0.0 && m.det() > 0.0;
}

namespace {

using Row = std::array<double, 4>;  // 3 coefficients + rhs

// Gaussian elimination with partial pivoting on row-equilibrated rows.
// Returns nullopt when a pivot is negligible relative to its row scale.
std::optional<std::array<double, 3>> solve3(std::array<Row, 3> m) {
  for (auto& row : m) {
    const double s = std::max({std::abs(row[0]), std::abs(row[1]), std::abs(row[2])});
    if (s == 0.0) return std::nullopt;
    for (double& v : row) v /= s;
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-13) return std::nullopt;
    std::swap(m[col], m[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double acc = m[r][3];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return x;
}

// Coefficient rows of (A^T P + P A) in (p11, p12, p22) for entries 11, 12, 22.
std::array<Row, 3> lyapunov_system(const Matrix2& a, const Matrix2& rhs) {
  return {{{2.0 * a.a11, 2.0 * a.a21, 0.0, rhs.a11},
           {a.a12, a.a11 + a.a22, a.a21, rhs.a12},
           {0.0, 2.0 * a.a12, 2.0 * a.a22, rhs.a22}}};
}

Matrix2 lyapunov_residual(const Matrix2& a, const Matrix2& p, const Matrix2& q) {
  return a.transpose() * p + p * a + q;
}

}  // namespace

Matrix2 solve_lyapunov(const Matrix2& a, const Matrix2& q) {
  if (!a.is_finite()) throw Error(ErrorCode::Precondition, "A", "A must be finite");
  if (!is_symmetric_positive_definite(q))
    throw Error(ErrorCode::Precondition, "Q", "Q must be symmetric positive definite");
  if (!is_hurwitz(a))
    throw Error(ErrorCode::NotHurwitz, "A", "A has an eigenvalue with nonnegative real part");

  const auto x = solve3(lyapunov_system(a, -1.0 * q));
  if (!x) throw Error(ErrorCode::IllConditioned, "A", "Lyapunov linear system is numerically singular");
  Matrix2 p{(*x)[0], (*x)[1], (*x)[1], (*x)[2]};

  // One step of iterative refinement against the scaled residual.
  const Matrix2 r = lyapunov_residual(a, p, q);
  if (const auto dx = solve3(lyapunov_system(a, -1.0 * r))) {
    p = p + Matrix2{(*dx)[0], (*dx)[1], (*dx)[1], (*dx)[2]};
  }
  if (!p.is_finite()) throw Error(ErrorCode::IllConditioned, "A", "Lyapunov solution is not finite");
  return p;
}

const char* to_string(Loop loop) { return loop == Loop::Outer ? "outer" : "inner"; }

ErrorMatrices error_matrices(Loop loop, const MotorParams& p, const GainSet& g) {
  const double damp = loop == Loop::Outer ? p.B / p.J : p.R / p.L;
  const double gain = loop == Loop::Outer ? 1.0 / p.J : 1.0 / p.L;
  const double integral = loop == Loop::Outer ? g.l_i_tau : g.l_i_e;
  ErrorMatrices m;
  m.A0 = {-damp, -gain, integral, 0.0};
  m.A1 = {0.0, 0.0, -damp, -gain};
  return m;
}

StabilityReport gamma_star(const StabilityQuery& q, const MotorParams& p, const GainSet& g) {
  if (!(q.epsilon > 0.0)) throw Error::invalid_value("epsilon", "must be positive");
  if (!(q.delta >= 0.0)) throw Error::invalid_value("delta", "must be nonnegative");

  const ErrorMatrices m = error_matrices(q.loop, p, g);
  StabilityReport r;
  r.loop = q.loop;
  r.epsilon = q.epsilon;
  r.delta = q.delta;
  r.l_p = q.loop == Loop::Outer ? g.l_p_tau : g.l_p_e;
  r.P = solve_lyapunov(m.A0, q.Q0);
  r.hurwitz = true;
  r.Q1 = m.A1.transpose() * r.P + r.P * m.A1;

  const SymmetricEigen ev_p = symmetric_eigenvalues(r.P);
  const SymmetricEigen ev_q = symmetric_eigenvalues(q.Q0);
  r.lambda_min_P = ev_p.min;
  r.lambda_max_P = ev_p.max;

  const auto gamma = [&](double norm_p, double norm_q1, StabilityReport* out) {
    const double decay = ev_q.min / ev_p.max;
    const double mu_term = r.l_p * norm_q1 / ev_p.min;
    const double dist = 2.0 * norm_p * q.delta / (q.epsilon * ev_p.min);
    if (out) {
      out->decay_term = decay;
      out->mu_term = mu_term;
      out->disturbance_term = dist;
    }
    return decay - mu_term - dist;
  };
  r.gamma_star = gamma(spectral_norm(r.P), spectral_norm(r.Q1), &r);
  r.gamma_star_frobenius = gamma(frobenius_norm(r.P), frobenius_norm(r.Q1), nullptr);
  if (q.loop == Loop::Inner) r.rho = rho(q.epsilon, g.eta2);
  return r;
}

double StabilityReport::finite_time_bound(double V0) const {
  return npidob::finite_time_bound(V0, epsilon, gamma_star);
}

double StabilityReport::lyapunov_value(Vector2 d) const { return dot(d, P * d); }

double finite_time_bound(double V0, double epsilon, double gamma_star) {
  if (!(gamma_star > 0.0))
    throw Error(ErrorCode::NonPositiveGamma, "gamma_star", "no certificate: gamma* <= 0");
  if (!(epsilon > 0.0)) throw Error::invalid_value("epsilon", "must be positive");
  if (!(V0 >= epsilon * epsilon))
    throw Error(ErrorCode::Precondition, "V0", "V0 must be at least eps^2");
  return std::max(0.0, (std::log(V0) - 2.0 * std::log(epsilon)) / gamma_star);
}

MechanicalMatrix mechanical_matrix(const GainSet& g, const MotorParams& p) {
  MechanicalMatrix m;
  m.A_m = {0.0, 1.0, -g.k_theta / p.J, -(g.k_omega + p.B) / p.J};
  m.hurwitz = is_hurwitz(m.A_m);
  return m;
}

double rho(double epsilon_ab, double eta2) {
  if (!(epsilon_ab > 0.0)) throw Error::invalid_value("epsilon_ab", "must be positive");
  if (std::isinf(epsilon_ab)) return 1.0;
  return epsilon_ab / (epsilon_ab + eta2);
}

double current_loop_decay(double epsilon_ab, const GainSet& g, const MotorParams& p,
                          double delta_ab) {
  return -(2.0 * g.eta1 / p.L) * rho(epsilon_ab, g.eta2) + delta_ab;
}

Vector2 outer_error_rhs(double omega_tilde, double tau_tilde, double current_coupling,
                        double tau_L_dot, const MotorParams& p, const GainSet& g) {
  const double dm = d_mu(omega_tilde, g.l_p_tau, g.omega_tilde_max);
  const double torque_err = p.k_m() / p.J * current_coupling;
  return {-p.B / p.J * omega_tilde + torque_err - tau_tilde / p.J,
          (-dm * p.B / p.J + g.l_i_tau) * omega_tilde - dm / p.J * tau_tilde + dm * torque_err +
              tau_L_dot};
}

Vector2 inner_error_rhs(double e_tilde, double d_tilde, double d_dot, const MotorParams& p,
                        const GainSet& g) {
  const double dm = d_mu(e_tilde, g.l_p_e, g.e_tilde_max);
  return {-p.R / p.L * e_tilde - d_tilde / p.L,
          (-dm * p.R / p.L + g.l_i_e) * e_tilde - dm / p.L * d_tilde + d_dot};
}

BallEntry simulate_ball_entry(Loop loop, const MotorParams& p, const GainSet& g, Vector2 d0,
                              const std::function<double(double)>& disturbance_rate,
                              double epsilon, double dt, double horizon) {
  const auto f = [&](double t, Vector2 d) {
    const double w = disturbance_rate(t);
    return loop == Loop::Outer ? outer_error_rhs(d.x, d.y, 0.0, w, p, g)
                               : inner_error_rhs(d.x, d.y, w, p, g);
  };
  const auto add = [](Vector2 a, double h, Vector2 b) { return Vector2{a.x + h * b.x, a.y + h * b.y}; };

  Vector2 d = d0;
  if (norm(d) < epsilon) return {true, 0.0};
  const auto steps = static_cast<long long>(std::ceil(horizon / dt));
  for (long long k = 0; k < steps; ++k) {
    const double t = k * dt;
    const Vector2 k1 = f(t, d);
    const Vector2 k2 = f(t + 0.5 * dt, add(d, 0.5 * dt, k1));
    const Vector2 k3 = f(t + 0.5 * dt, add(d, 0.5 * dt, k2));
    const Vector2 k4 = f(t + dt, add(d, dt, k3));
    d = {d.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
         d.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
    if (!std::isfinite(d.x) || !std::isfinite(d.y)) throw Error::non_finite("error dynamics state");
    if (norm(d) < epsilon) return {true, (k + 1) * dt};
  }
  return {false, horizon};
}

}  // namespace npidob

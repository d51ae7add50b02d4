#pragma once

#include <string>
#include <vector>

#include "harmsync/certify.hpp"
#include "harmsync/linalg.hpp"
#include "harmsync/network.hpp"

namespace harmsync {

/// First-order form x' = Phi x with x = [z; z'] and the Lyapunov matrix P.
struct StateSpace {
  Eigen::MatrixXd Phi;  // [[0, I], [-(omega0^2 I + R), -D]]
  Eigen::MatrixXd P;    // 0.5 * blockdiag(omega0^2 I + R, I)
  Eigen::MatrixXd D;
  Index q = 0;
  double omega0 = 0.0;
  double lyapunov_residual = 0.0;  // |Phi^T P + P Phi + blockdiag(0, D)|
};

/// Builds Phi and P. Throws std::logic_error if the Lyapunov identity is violated
/// beyond 1e-12 * |P| * |Phi|.
StateSpace build_state_space(const OscillatorArray& array);
StateSpace build_state_space(const LaplacianPair& pair, double omega0);

/// Uniformly sampled solution. Column k of `states` is x(times[k]).
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;
  double dt = 0.0;
  std::vector<std::string> warnings;

  Index q() const { return states.rows() / 2; }
  Index samples() const { return states.cols(); }
};

struct IntegrateOptions {
  Index stride = 1;  // keep every stride-th step (the final state is always kept)
};

/// Classical fixed-step RK4. The step is shrunk to horizon / ceil(horizon / dt) so
/// the grid is uniform and ends exactly at `horizon`. Throws Error(NonFiniteState).
Trajectory integrate(const StateSpace& ss, const Eigen::VectorXd& x0, double horizon, double dt,
                     const IntegrateOptions& opts = {});

/// max over pairs (i, j) of |z_i - z_j| + |z'_i - z'_j|, per sample; 0 when q == 1.
std::vector<double> sync_error(const Trajectory& traj);
double sync_error(const Eigen::VectorXd& x);

/// x^T P x per sample.
std::vector<double> energy(const StateSpace& ss, const Trajectory& traj);

/// x0 = [xi*; 0], the cosine-phase non-synchronizing solution of a certificate.
Eigen::VectorXd certificate_initial_state(const FailureCertificate& cert);

/// Horizon after which a synchronizing array is expected to be synchronized:
/// 200 / lambda_2(D) when the damper graph is connected, else 500 s.
double long_horizon(const LaplacianPair& pair);

struct ModalTerm {
  double omega = 0.0;
  Eigen::VectorXcd xi;
};

/// z(t) = Re sum_k exp(j omega_k t) xi_k for solutions of z'' + (omega0^2 I + R) z = 0.
class ModalSolution {
 public:
  const std::vector<ModalTerm>& terms() const { return terms_; }

  Eigen::VectorXd position(double t) const;
  Eigen::VectorXd velocity(double t) const;
  Eigen::VectorXd state(double t) const;

  /// True when every term is also annihilated by D, so the closed form solves the
  /// damped array too.
  bool damping_invariant(const Eigen::MatrixXd& D, double tol) const;

  friend ModalSolution modal_solution(const Eigen::MatrixXd& R, double omega0,
                                      std::vector<ModalTerm> terms);

 private:
  explicit ModalSolution(std::vector<ModalTerm> terms) : terms_(std::move(terms)) {}
  std::vector<ModalTerm> terms_;
};

/// Validates each term against (R - (omega_k^2 - omega0^2) I) xi_k = 0. Throws
/// Error(InvalidMode) on a residual above tolerance, a non-positive or repeated omega.
ModalSolution modal_solution(const Eigen::MatrixXd& R, double omega0, std::vector<ModalTerm> terms);

}  // namespace harmsync

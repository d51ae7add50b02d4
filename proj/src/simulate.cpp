#include "harmsync/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "harmsync/tolerances.hpp"

namespace harmsync {

StateSpace build_state_space(const LaplacianPair& pair, double omega0) {
  const Index q = pair.q();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(q, q);
  const Eigen::MatrixXd stiffness = omega0 * omega0 * I + pair.R;

  StateSpace ss;
  ss.q = q;
  ss.omega0 = omega0;
  ss.D = pair.D;
  ss.Phi = Eigen::MatrixXd::Zero(2 * q, 2 * q);
  ss.Phi.topRightCorner(q, q) = I;
  ss.Phi.bottomLeftCorner(q, q) = -stiffness;
  ss.Phi.bottomRightCorner(q, q) = -pair.D;
  ss.P = Eigen::MatrixXd::Zero(2 * q, 2 * q);
  ss.P.topLeftCorner(q, q) = 0.5 * stiffness;
  ss.P.bottomRightCorner(q, q) = 0.5 * I;

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * q, 2 * q);
  rhs.bottomRightCorner(q, q) = -pair.D;
  ss.lyapunov_residual = (ss.Phi.transpose() * ss.P + ss.P * ss.Phi - rhs).norm();
  if (ss.lyapunov_residual > 1e-12 * ss.P.norm() * ss.Phi.norm()) {
    throw std::logic_error("Lyapunov identity violated; D or R is not symmetric");
  }
  return ss;
}

StateSpace build_state_space(const OscillatorArray& array) {
  return build_state_space(build_laplacians(array), array.omega0());
}

Trajectory integrate(const StateSpace& ss, const Eigen::VectorXd& x0, double horizon, double dt,
                     const IntegrateOptions& opts) {
  if (!(dt > 0.0) || !(horizon >= dt)) {
    throw std::invalid_argument("integrate: need dt > 0 and horizon >= dt");
  }
  if (x0.size() != 2 * ss.q) throw std::invalid_argument("integrate: x0 must have 2q entries");

  const auto steps = static_cast<Index>(std::ceil(horizon / dt - 1e-9));
  const double h = horizon / static_cast<double>(steps);
  const Index stride = std::max<Index>(1, opts.stride);

  Trajectory traj;
  traj.dt = h;
  const double rho = ss.Phi.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 0.0 && h > 0.1 / rho) {
    std::ostringstream os;
    os << "dt = " << h << " exceeds 0.1 / spectral radius (" << 0.1 / rho << ")";
    traj.warnings.push_back(os.str());
  }

  const Index kept = steps / stride + 1 + (steps % stride != 0 ? 1 : 0);
  traj.states.resize(2 * ss.q, kept);
  traj.times.reserve(static_cast<std::size_t>(kept));

  Eigen::VectorXd x = x0;
  Index col = 0;
  traj.states.col(col++) = x;
  traj.times.push_back(0.0);
  for (Index n = 1; n <= steps; ++n) {
    const Eigen::VectorXd k1 = ss.Phi * x;
    const Eigen::VectorXd k2 = ss.Phi * (x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = ss.Phi * (x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = ss.Phi * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "non-finite state at t = " << static_cast<double>(n) * h;
      throw Error(ErrorKind::NonFiniteState, os.str());
    }
    if (n % stride == 0 || n == steps) {
      traj.states.col(col++) = x;
      traj.times.push_back(n == steps ? horizon : static_cast<double>(n) * h);
    }
  }
  return traj;
}

double sync_error(const Eigen::VectorXd& x) {
  const Index q = x.size() / 2;
  double worst = 0.0;
  for (Index i = 0; i < q; ++i) {
    for (Index j = i + 1; j < q; ++j) {
      worst = std::max(worst, std::abs(x(i) - x(j)) + std::abs(x(q + i) - x(q + j)));
    }
  }
  return worst;
}

std::vector<double> sync_error(const Trajectory& traj) {
  std::vector<double> out(static_cast<std::size_t>(traj.samples()));
  for (Index k = 0; k < traj.samples(); ++k) out[k] = sync_error(Eigen::VectorXd(traj.states.col(k)));
  return out;
}

std::vector<double> energy(const StateSpace& ss, const Trajectory& traj) {
  std::vector<double> out(static_cast<std::size_t>(traj.samples()));
  for (Index k = 0; k < traj.samples(); ++k) {
    out[k] = traj.states.col(k).dot(ss.P * traj.states.col(k));
  }
  return out;
}

Eigen::VectorXd certificate_initial_state(const FailureCertificate& cert) {
  const Index q = cert.xi_star.size();
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2 * q);
  x0.head(q) = cert.xi_star;
  return x0;
}

double long_horizon(const LaplacianPair& pair) {
  if (pair.q() >= 2 && is_connected_spectral(pair.D)) return 200.0 / algebraic_connectivity(pair.D);
  return 500.0;
}

Eigen::VectorXd ModalSolution::position(double t) const {
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(terms_.empty() ? 0 : terms_.front().xi.size());
  for (const auto& term : terms_) z += std::exp(Complex(0.0, term.omega * t)) * term.xi;
  return z.real();
}

Eigen::VectorXd ModalSolution::velocity(double t) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(terms_.empty() ? 0 : terms_.front().xi.size());
  for (const auto& term : terms_) {
    v += Complex(0.0, term.omega) * std::exp(Complex(0.0, term.omega * t)) * term.xi;
  }
  return v.real();
}

Eigen::VectorXd ModalSolution::state(double t) const {
  const Eigen::VectorXd z = position(t);
  Eigen::VectorXd x(2 * z.size());
  x << z, velocity(t);
  return x;
}

bool ModalSolution::damping_invariant(const Eigen::MatrixXd& D, double tol) const {
  for (const auto& term : terms_) {
    if ((D.cast<Complex>() * term.xi).norm() > tol * std::max(1.0, term.xi.norm())) return false;
  }
  return true;
}

ModalSolution modal_solution(const Eigen::MatrixXd& R, double omega0, std::vector<ModalTerm> terms) {
  const Index q = R.rows();
  const double tol = residual_tolerance(spectral_norm(R));
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& term = terms[k];
    if (!(term.omega > 0.0) || term.xi.size() != q) {
      throw Error(ErrorKind::InvalidMode, "mode frequency must be positive and xi must have q entries");
    }
    for (std::size_t m = 0; m < k; ++m) {
      if (std::abs(terms[m].omega - term.omega) <= 1e-12 * term.omega) {
        throw Error(ErrorKind::InvalidMode, "mode frequencies must be distinct");
      }
    }
    const double lambda = term.omega * term.omega - omega0 * omega0;
    const Eigen::MatrixXcd shifted =
        (R - lambda * Eigen::MatrixXd::Identity(q, q)).cast<Complex>();
    const double residual = (shifted * term.xi).norm();
    if (residual > tol * std::max(1.0, term.xi.norm())) {
      std::ostringstream os;
      os << "mode at omega = " << term.omega << " has residual " << residual;
      throw Error(ErrorKind::InvalidMode, os.str());
    }
  }
  return ModalSolution(std::move(terms));
}

}  // namespace harmsync

#include "csl/cslsim.hpp"

#include <tbb/parallel_for.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>

#include "csl/quadrature.hpp"

namespace csl::sim {

namespace {
using cd = std::complex<double>;
const cd kI(0.0, 1.0);

// U = V diag(e^{-i e t}) V^dag for Hermitian H = V diag(e) V^dag
struct Propagator {
  Eigen::VectorXd e;
  Mat V;
  explicit Propagator(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    e = es.eigenvalues();
    V = es.eigenvectors();
  }
  Mat at(double t) const {
    Eigen::VectorXcd ph(e.size());
    for (int i = 0; i < e.size(); ++i) ph[i] = std::exp(-kI * e[i] * t);
    return V * ph.asDiagonal() * V.adjoint();
  }
};

Mat rhs(const Mat& h, const Mat& l, double lam, const Mat& r) {
  Mat lr = l * r - r * l;
  return -kI * (h * r - r * h) - 0.5 * lam * (l * lr - lr * l);
}
}  // namespace

CollapseKind parse_collapse(const std::string& s) {
  if (s == "number") return CollapseKind::Number;
  if (s == "position-sq") return CollapseKind::PositionSq;
  if (s == "hamiltonian") return CollapseKind::Hamiltonian;
  throw std::invalid_argument("unknown collapse operator '" + s + "'");
}

const char* collapse_name(CollapseKind k) {
  switch (k) {
    case CollapseKind::Number: return "number";
    case CollapseKind::PositionSq: return "position-sq";
    case CollapseKind::Hamiltonian: return "hamiltonian";
  }
  return "?";
}

void ToySystem::validate() const {
  if (dim < 3) throw std::invalid_argument("toy system: dim must be >= 3");
  if (collapse_op.rows() != dim || collapse_op.cols() != dim || hamiltonian.rows() != dim || hamiltonian.cols() != dim)
    throw std::invalid_argument("toy system: operator shape mismatch");
  if ((collapse_op - collapse_op.adjoint()).norm() > 1e-12 * std::max(1.0, collapse_op.norm()))
    throw std::invalid_argument("toy system: collapse operator not Hermitian");
  if ((hamiltonian - hamiltonian.adjoint()).norm() > 1e-12 * std::max(1.0, hamiltonian.norm()))
    throw std::invalid_argument("toy system: Hamiltonian not Hermitian");
  if (!(gamma_eff >= 0)) throw std::invalid_argument("toy system: lambda_eff must be >= 0");
}

Mat number_op(int dim) {
  Mat n = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) n(i, i) = static_cast<double>(i);
  return n;
}

Mat position_op(int dim) {
  Mat x = Mat::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    const double s = std::sqrt((i + 1) / 2.0);
    x(i, i + 1) = s;
    x(i + 1, i) = s;
  }
  return x;
}

ToySystem make_oscillator(int dim, double omega, double lambda_eff, CollapseKind kind) {
  ToySystem s;
  s.dim = dim;
  s.omega = omega;
  s.gamma_eff = lambda_eff;
  s.hamiltonian = omega * (number_op(dim) + 0.5 * Mat::Identity(dim, dim));
  switch (kind) {
    case CollapseKind::Number: s.collapse_op = number_op(dim); break;
    case CollapseKind::PositionSq: {
      Mat x = position_op(dim);
      s.collapse_op = x * x;
      break;
    }
    case CollapseKind::Hamiltonian: s.collapse_op = s.hamiltonian; break;
  }
  s.validate();
  return s;
}

Vec coherent_state(int dim, cd alpha) {
  Vec v(dim);
  cd c = 1.0;
  for (int n = 0; n < dim; ++n) {
    v[n] = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v / v.norm();
}

double expectation(const Mat& rho, const Mat& O) { return (rho * O).trace().real(); }

double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

std::vector<Mat> evolve_master(const ToySystem& s, const Mat& rho0, const std::vector<double>& t_grid,
                               double step_scale) {
  s.validate();
  if ((rho0 - rho0.adjoint()).norm() > 1e-12) throw std::invalid_argument("evolve_master: rho0 not Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-12) throw std::invalid_argument("evolve_master: rho0 trace != 1");
  const double ln = spectral_norm(s.collapse_op);
  const double rate = std::max({spectral_norm(s.hamiltonian), s.gamma_eff * ln * ln, 1e-300});
  std::vector<Mat> out;
  Mat r = rho0;
  double t = 0.0;
  for (double tg : t_grid) {
    if (tg < t) throw std::invalid_argument("evolve_master: t_grid must be non-decreasing from 0");
    const double span = tg - t;
    const int n = std::max(1, static_cast<int>(std::ceil(span * rate / step_scale)));
    const double dt = span / n;
    for (int i = 0; i < n && span > 0; ++i) {
      Mat k1 = rhs(s.hamiltonian, s.collapse_op, s.gamma_eff, r);
      Mat k2 = rhs(s.hamiltonian, s.collapse_op, s.gamma_eff, r + 0.5 * dt * k1);
      Mat k3 = rhs(s.hamiltonian, s.collapse_op, s.gamma_eff, r + 0.5 * dt * k2);
      Mat k4 = rhs(s.hamiltonian, s.collapse_op, s.gamma_eff, r + dt * k3);
      r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = tg;
    if (std::abs(r.trace() - 1.0) > 1e-8) throw std::runtime_error("evolve_master: trace drift exceeds 1e-8");
    out.push_back(r);
  }
  return out;
}

Trajectory evolve_trajectory(const ToySystem& s, const Vec& psi0, double dt, int steps, std::uint64_t seed,
                             std::uint64_t index, bool zero_noise, int record_every) {
  s.validate();
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw std::invalid_argument("evolve_trajectory: psi0 not normalised");
  const double ln = spectral_norm(s.collapse_op);
  if (!(dt > 0) || s.gamma_eff * dt * ln * ln >= 0.1)
    throw std::invalid_argument("evolve_trajectory: need lambda dt |L|^2 < 0.1");
  if (record_every < 1) record_every = 1;

  Propagator hp(s.hamiltonian);
  const Mat uh = hp.at(0.5 * dt);
  Eigen::SelfAdjointEigenSolver<Mat> es(s.collapse_op);
  const Eigen::VectorXd ell = es.eigenvalues();
  const Mat V = es.eigenvectors();
  // half step of H, expressed in L's eigenbasis on both sides
  const Mat a = V.adjoint() * uh * V;

  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(sq);
  std::normal_distribution<double> nd(0.0, std::sqrt(dt));
  const double sl = std::sqrt(s.gamma_eff);

  Trajectory tr;
  tr.seed = seed;
  tr.index = index;
  Vec y = V.adjoint() * psi0;  // work in L's eigenbasis
  auto record = [&](double t) {
    tr.times.push_back(t);
    Vec psi = V * y;
    tr.weights.push_back(psi.squaredNorm());
    tr.states.push_back(std::move(psi));
  };
  record(0.0);
  for (int k = 0; k < steps; ++k) {
    y = a * y;
    const double dw = zero_noise ? 0.0 : nd(rng);
    for (int i = 0; i < y.size(); ++i) y[i] *= std::exp(-kI * (sl * ell[i] * dw));
    y = a * y;
    if ((k + 1) % record_every == 0 || k + 1 == steps) record((k + 1) * dt);
  }
  return tr;
}

std::vector<Estimate> ensemble_expectation(const ToySystem& s, const Vec& psi0, double dt, int steps, int ntraj,
                                           std::uint64_t seed, const std::vector<Mat>& observables) {
  if (ntraj < 2) throw std::invalid_argument("ensemble_expectation: need >= 2 trajectories");
  const std::size_t no = observables.size();
  std::vector<double> vals(static_cast<std::size_t>(ntraj) * no), wts(ntraj);
  tbb::parallel_for(0, ntraj, [&](int i) {
    Trajectory tr = evolve_trajectory(s, psi0, dt, steps, seed, static_cast<std::uint64_t>(i), false, steps);
    const Vec& psi = tr.states.back();
    const double w = tr.weights.back();
    wts[i] = w;
    for (std::size_t o = 0; o < no; ++o) vals[i * no + o] = psi.dot(observables[o] * psi).real() / w;
  });
  std::vector<Estimate> out(no);
  double wsum = 0;
  for (int i = 0; i < ntraj; ++i) wsum += wts[i];
  for (std::size_t o = 0; o < no; ++o) {
    double m = 0;
    for (int i = 0; i < ntraj; ++i) m += wts[i] * vals[i * no + o];
    m /= wsum;
    double v = 0;
    for (int i = 0; i < ntraj; ++i) {
      const double d = wts[i] * vals[i * no + o] * ntraj / wsum - m;
      v += d * d;
    }
    v /= (ntraj - 1);
    out[o].mean = m;
    out[o].stderr_ = std::sqrt(v / ntraj);
  }
  return out;
}

Perturbative perturbative_expectation(const ToySystem& s, const Mat& O, const Vec& psi0, double t, int panels) {
  s.validate();
  Propagator hp(s.hamiltonian);
  auto heis = [&](const Mat& X, double tt) {
    Mat u = hp.at(tt);
    return Mat(u.adjoint() * X * u);
  };
  const Mat ot = heis(O, t);
  Perturbative r;
  r.zeroth = psi0.dot(ot * psi0).real();
  quad::Nodes nd;
  quad::append_panels(nd, 0.0, t, std::max(1, panels));
  double acc = 0;
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const Mat l = heis(s.collapse_op, nd.x[i]);
    const Mat c1 = l * ot - ot * l;
    const Mat c2 = l * c1 - c1 * l;
    acc += nd.w[i] * psi0.dot(c2 * psi0).real();
  }
  r.correction = -0.5 * s.gamma_eff * acc;
  r.value = r.zeroth + r.correction;
  const double ln = spectral_norm(s.collapse_op);
  r.regime = s.gamma_eff * t * ln * ln;
  r.regime_ok = r.regime <= 0.1;
  return r;
}

std::vector<ThreeWay> compare_three_way(const ToySystem& s, const Vec& psi0, double t, double dt, int ntraj,
                                        std::uint64_t seed, const std::vector<std::pair<std::string, Mat>>& obs) {
  const int steps = static_cast<int>(std::llround(t / dt));
  if (steps < 1 || std::fabs(steps * dt - t) > 1e-9 * t)
    throw std::invalid_argument("compare_three_way: t must be a whole number of steps dt");
  const Mat rho0 = psi0 * psi0.adjoint();
  ToySystem free = s;
  free.gamma_eff = 0.0;
  const Mat r1 = evolve_master(s, rho0, {t}).back();
  const Mat r0 = evolve_master(free, rho0, {t}).back();
  std::vector<Mat> ops;
  for (const auto& o : obs) ops.push_back(o.second);
  const std::vector<Estimate> ens = ensemble_expectation(s, psi0, dt, steps, ntraj, seed, ops);
  std::vector<ThreeWay> out;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    ThreeWay w;
    w.observable = obs[i].first;
    w.unitary = expectation(r0, obs[i].second);
    w.master = expectation(r1, obs[i].second);
    w.ensemble = ens[i];
    w.perturbative = perturbative_expectation(s, obs[i].second, psi0, t);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace csl::sim

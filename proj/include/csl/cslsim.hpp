// Single-mode toy for the collapse machinery: the same dynamics evolved as a
// master equation, as an ensemble of linear stochastic trajectories, and by
// the second-order interaction-picture formula.
//
//   d rho/dt = -i[H, rho] - (lambda/2)[L, [L, rho]]
//   d psi    = -i (H dt + sqrt(lambda) L o dW) psi          (Stratonovich)
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace csl::sim {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class CollapseKind { Number, PositionSq, Hamiltonian };
CollapseKind parse_collapse(const std::string& s);  // number | position-sq | hamiltonian
const char* collapse_name(CollapseKind k);

struct ToySystem {
  int dim = 0;
  double omega = 1.0;
  double gamma_eff = 0.0;  // lambda_eff
  Mat collapse_op;
  Mat hamiltonian;
  void validate() const;
};

// truncated Fock-space operators
Mat number_op(int dim);
Mat position_op(int dim);  // (a + a^dag)/sqrt(2)
ToySystem make_oscillator(int dim, double omega, double lambda_eff, CollapseKind kind);

// normalised superposition sum_n c_n |n> with c_n ~ alpha^n/sqrt(n!) (truncated coherent state)
Vec coherent_state(int dim, std::complex<double> alpha);

// RK4 with steps sized so dt * max(|H|, lambda |L|^2) <= step_scale
std::vector<Mat> evolve_master(const ToySystem& s, const Mat& rho0, const std::vector<double>& t_grid,
                               double step_scale = 0.01);

struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<double> weights;  // |psi|^2
};

// record_every: keep every n-th state (the last is always kept)
Trajectory evolve_trajectory(const ToySystem& s, const Vec& psi0, double dt, int steps, std::uint64_t seed,
                             std::uint64_t index = 0, bool zero_noise = false, int record_every = 1);

struct Estimate {
  double mean = 0;
  double stderr_ = 0;
};
// weighted ensemble mean of <psi|O|psi>/<psi|psi> at the final time, one per observable
std::vector<Estimate> ensemble_expectation(const ToySystem& s, const Vec& psi0, double dt, int steps, int ntraj,
                                           std::uint64_t seed, const std::vector<Mat>& observables);

struct Perturbative {
  double zeroth = 0;      // <O(t)> without collapse
  double correction = 0;  // -(lambda/2) int_0^t dt' <[L_I(t'),[L_I(t'),O_I(t)]]>
  double value = 0;
  double regime = 0;      // lambda t |L|^2
  bool regime_ok = true;  // regime <= 0.1
};
Perturbative perturbative_expectation(const ToySystem& s, const Mat& O, const Vec& psi0, double t, int panels = 32);

// one observable evolved three ways from a pure state; corrections are
// differences from the lambda = 0 evolution
struct ThreeWay {
  std::string observable;
  double unitary = 0;               // lambda = 0
  double master = 0;
  Estimate ensemble;
  Perturbative perturbative;
  double master_correction() const { return master - unitary; }
};
std::vector<ThreeWay> compare_three_way(const ToySystem& s, const Vec& psi0, double t, double dt, int ntraj,
                                        std::uint64_t seed, const std::vector<std::pair<std::string, Mat>>& obs);

double expectation(const Mat& rho, const Mat& O);
double spectral_norm(const Mat& m);

}  // namespace csl::sim

#pragma once

// Brute-force pure-dephasing backend on a finite-dimensional environment.
// Conditional propagators come from the spectral decomposition of the
// Hermitian generators H_E + V_i; every trace is an explicit matrix product.

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdc/backend.hpp"
#include "pdc/bath.hpp"

namespace pdc::oracle {

using Matrix = Eigen::MatrixXcd;

/// Environment Hamiltonian, conditional couplings (meV) and initial state.
struct GenericEnvironment
{
	Matrix h_env;
	Matrix v0;
	Matrix v1;
	Matrix rho0;

	[[nodiscard]] Eigen::Index dimension() const { return h_env.rows(); }

	/// Hermiticity residual < 1e-10, rho0 positive semidefinite with unit trace.
	void validate() const;
};

/// Largest absolute matrix element.
double max_abs(const Matrix& m);

/// exp(-i H t / hbar) from a cached eigendecomposition of Hermitian H.
class SpectralPropagator
{
public:
	explicit SpectralPropagator(const Matrix& hamiltonian);

	[[nodiscard]] Matrix at(double t) const;
	[[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
	[[nodiscard]] const Matrix& basis() const { return basis_; }

private:
	Eigen::VectorXd energies_;
	Matrix basis_;
};

/// (w_0(t), w_1(t)).
std::pair<Matrix, Matrix> propagators(const GenericEnvironment& env, double t);

class OracleBackend final : public Backend
{
public:
	explicit OracleBackend(GenericEnvironment env);

	[[nodiscard]] complex cross_trace(int i, int j, double tau, double t) const override;
	[[nodiscard]] std::vector<CrossTraces> traces_grid(std::span<const double> taus,
	                                                   std::span<const double> ts) const override;
	[[nodiscard]] CrossTraces traces(double tau, double t) const override;

	[[nodiscard]] const GenericEnvironment& environment() const { return env_; }
	[[nodiscard]] Matrix w(int branch, double t) const;

private:
	[[nodiscard]] Matrix echo(double t) const; // w_1^+(t) w_0(t)

	GenericEnvironment env_;
	SpectralPropagator free_;
	SpectralPropagator coupled_;
	Matrix overlap_; // U_1^+ U_0
};

class TruncationError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct FockOptions
{
	/// Per bath mode; empty selects thermal-tail plus displacement buffer automatically.
	std::vector<std::size_t> n_max;
	std::size_t dimension_cap = 4096;
	double tail_target = 1e-10;
};

struct FockEnvironment
{
	GenericEnvironment env;
	std::vector<std::size_t> active_modes; // bath indices with nonzero coupling
	std::vector<std::size_t> n_max;        // per active mode
	double worst_tail = 0.0;               // largest (n/(n+1))^(n_max+1)
};

/// Thermal weight left above level n_max for a mode of occupation `occupation`.
double thermal_tail(double occupation, std::size_t n_max);

/// Smallest n_max with thermal_tail below target.
std::size_t tail_levels(double occupation, double target);

/// Truncated Fock-space model of a bath: H_E = sum hbar w b^+ b, V_0 = 0,
/// V_1 = sum hbar w r (b + b^+) + sum hbar w r^2. The constant term is the polaron
/// shift, absorbed into the qubit splitting. Modes without coupling factor out.
FockEnvironment build_fock(const BathSpec& bath, const FockOptions& options = {});

/// Max-abs norm of [R(0), w_0^+(tau) w_1(tau)]; zero iff no qubit-environment entanglement at tau.
double separability_norm(const GenericEnvironment& env, double tau);

struct CommutationNorms
{
	double evolutions = 0.0; // [w_0(t), w_1(t')]
	double state0 = 0.0;     // [w_0(t), R(0)]
	double state1 = 0.0;     // [w_1(t), R(0)]
};

CommutationNorms commutation_norms(const GenericEnvironment& env, double t, double t_prime);

/// H_E, V_0, V_1 diagonal in one shared random basis; random full-rank R(0).
GenericEnvironment random_commuting_env(std::uint64_t seed, Eigen::Index d);

/// Random non-commuting H_E, V_0, V_1 with R(0) = I/d.
GenericEnvironment random_state_commuting_env(std::uint64_t seed, Eigen::Index d);

/// Random non-commuting H_E, V_0, V_1 with random full-rank R(0).
GenericEnvironment random_generic_env(std::uint64_t seed, Eigen::Index d);

/// Qubit-environment state as four d x d blocks in the pointer basis.
struct JointState
{
	std::array<Matrix, 4> blocks; // 00, 01, 10, 11

	[[nodiscard]] Matrix full() const;
	[[nodiscard]] complex trace() const;
	/// Tr_E of the 01 block.
	[[nodiscard]] complex coherence() const;
};

struct JointEvolution
{
	JointState prepared;       // after free evolution for tau from |+> (x) R(0)
	JointState projected_plus; // unnormalized |+><+| branch of the measurement
	JointState projected_minus;
	double p_plus = 0.0;
	double p_minus = 0.0;
	JointState evolved_plus;   // |psi><psi| (x) R_+ evolved for t
	JointState evolved_minus;
	double D_plus = 0.0;       // |rho_01| / |alpha beta|
	double D_minus = 0.0;
};

/// Literal state evolution of the protocol on the 2d-dimensional joint space,
/// with qubit energies eps_0 = Delta_eps, eps_1 = 0.
JointEvolution joint_evolution_validate(const GenericEnvironment& env, double delta_eps_ev, double tau, double t,
                                        complex alpha, complex beta);

} // namespace pdc::oracle

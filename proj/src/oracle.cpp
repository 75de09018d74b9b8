#include "pdc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "pdc/parallel.hpp"
#include "pdc/params.hpp"

namespace pdc::oracle {

namespace {

constexpr double hermiticity_tolerance = 1e-10;
constexpr double positivity_tolerance = 1e-12;
constexpr double trace_tolerance = 1e-12;
// Keep the stored Q(t) matrices under this many bytes in traces_grid.
constexpr double grid_cache_bytes = 1024.0 * 1024.0 * 1024.0;

Matrix commutator(const Matrix& a, const Matrix& b)
{
	return a * b - b * a;
}

complex trace_of_product(const Matrix& a, const Matrix& b)
{
	return a.cwiseProduct(b.transpose()).sum();
}

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d)
{
	std::normal_distribution<double> normal;
	Matrix m(d, d);
	for(Eigen::Index j = 0; j < d; ++j)
	{
		for(Eigen::Index i = 0; i < d; ++i)
		{
			m(i, j) = complex(normal(rng), normal(rng));
		}
	}
	return 0.5 * (m + m.adjoint());
}

Matrix random_density(std::mt19937_64& rng, Eigen::Index d)
{
	std::normal_distribution<double> normal;
	Matrix m(d, d);
	for(Eigen::Index j = 0; j < d; ++j)
	{
		for(Eigen::Index i = 0; i < d; ++i)
		{
			m(i, j) = complex(normal(rng), normal(rng));
		}
	}
	Matrix rho = m * m.adjoint() + 1e-6 * Matrix::Identity(d, d);
	rho /= rho.trace().real();
	return 0.5 * (rho + rho.adjoint());
}

Matrix random_unitary(std::mt19937_64& rng, Eigen::Index d)
{
	std::normal_distribution<double> normal;
	Matrix m(d, d);
	for(Eigen::Index j = 0; j < d; ++j)
	{
		for(Eigen::Index i = 0; i < d; ++i)
		{
			m(i, j) = complex(normal(rng), normal(rng));
		}
	}
	Eigen::HouseholderQR<Matrix> qr(m);
	return qr.householderQ() * Matrix::Identity(d, d);
}

std::string scientific(double x)
{
	char buffer[32];
	std::snprintf(buffer, sizeof buffer, "%.3e", x);
	return buffer;
}

void require_dimension(Eigen::Index d, Eigen::Index min)
{
	if(d < min)
	{
		throw std::invalid_argument("random environment: dimension must be at least " + std::to_string(min));
	}
}

} // namespace

double max_abs(const Matrix& m)
{
	return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void GenericEnvironment::validate() const
{
	const auto d = dimension();
	if(d == 0 || h_env.cols() != d || v0.rows() != d || v0.cols() != d || v1.rows() != d || v1.cols() != d ||
	   rho0.rows() != d || rho0.cols() != d)
	{
		throw std::invalid_argument("GenericEnvironment: inconsistent matrix shapes");
	}
	const std::pair<const Matrix*, const char*> named[] = {{&h_env, "H_E"}, {&v0, "V_0"}, {&v1, "V_1"}, {&rho0, "R(0)"}};
	for(const auto& [m, name] : named)
	{
		if(max_abs(*m - m->adjoint()) >= hermiticity_tolerance)
		{
			throw std::invalid_argument(std::string("GenericEnvironment: ") + name + " is not Hermitian");
		}
	}
	if(std::abs(rho0.trace() - complex(1.0)) > trace_tolerance)
	{
		throw std::invalid_argument("GenericEnvironment: R(0) must have unit trace");
	}
	Eigen::SelfAdjointEigenSolver<Matrix> es(rho0, Eigen::EigenvaluesOnly);
	if(es.eigenvalues().minCoeff() < -positivity_tolerance)
	{
		throw std::invalid_argument("GenericEnvironment: R(0) is not positive semidefinite");
	}
}

SpectralPropagator::SpectralPropagator(const Matrix& hamiltonian)
{
	Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
	if(es.info() != Eigen::Success)
	{
		throw std::runtime_error("SpectralPropagator: eigensolver failed");
	}
	energies_ = es.eigenvalues();
	basis_ = es.eigenvectors();
}

Matrix SpectralPropagator::at(double t) const
{
	const Eigen::VectorXcd phases =
		(energies_.cast<complex>() * complex(0.0, -t / units::hbar)).array().exp().matrix();
	return basis_ * phases.asDiagonal() * basis_.adjoint();
}

std::pair<Matrix, Matrix> propagators(const GenericEnvironment& env, double t)
{
	env.validate();
	return {SpectralPropagator(env.h_env + env.v0).at(t), SpectralPropagator(env.h_env + env.v1).at(t)};
}

OracleBackend::OracleBackend(GenericEnvironment env)
	: env_{(env.validate(), std::move(env))}, free_{env_.h_env + env_.v0}, coupled_{env_.h_env + env_.v1},
	  overlap_{coupled_.basis().adjoint() * free_.basis()}
{ }

Matrix OracleBackend::w(int branch, double t) const
{
	if(branch != 0 && branch != 1)
	{
		throw std::invalid_argument("OracleBackend: branch must be 0 or 1");
	}
	return branch == 0 ? free_.at(t) : coupled_.at(t);
}

Matrix OracleBackend::echo(double t) const
{
	const Eigen::VectorXcd left =
		(coupled_.energies().cast<complex>() * complex(0.0, t / units::hbar)).array().exp().matrix();
	const Eigen::VectorXcd right =
		(free_.energies().cast<complex>() * complex(0.0, -t / units::hbar)).array().exp().matrix();
	const Matrix middle = left.asDiagonal() * overlap_ * right.asDiagonal();
	return coupled_.basis() * middle * free_.basis().adjoint();
}

complex OracleBackend::cross_trace(int i, int j, double tau, double t) const
{
	const Matrix inner = w(i, tau) * env_.rho0 * w(j, tau).adjoint();
	return trace_of_product(inner, echo(t));
}

CrossTraces OracleBackend::traces(double tau, double t) const
{
	const double taus[] = {tau};
	const double ts[] = {t};
	return traces_grid(taus, ts).front();
}

std::vector<CrossTraces> OracleBackend::traces_grid(std::span<const double> taus, std::span<const double> ts) const
{
	const auto d = static_cast<double>(env_.dimension());
	const bool cache = static_cast<double>(ts.size()) * d * d * 16.0 <= grid_cache_bytes;

	std::vector<Matrix> echoes;
	std::vector<complex> free_traces(ts.size());
	if(cache)
	{
		echoes.resize(ts.size());
		parallel_for(ts.size(), [&](std::size_t b) {
			echoes[b] = echo(ts[b]);
			free_traces[b] = trace_of_product(env_.rho0, echoes[b]);
		});
	}
	else
	{
		for(std::size_t b = 0; b < ts.size(); ++b)
		{
			free_traces[b] = trace_of_product(env_.rho0, echo(ts[b]));
		}
	}

	std::vector<CrossTraces> out(taus.size() * ts.size());
	parallel_for(taus.size(), [&](std::size_t a) {
		const Matrix w0 = free_.at(taus[a]);
		const Matrix w1 = coupled_.at(taus[a]);
		const Matrix w0_rho = w0 * env_.rho0;
		const Matrix w1_rho = w1 * env_.rho0;
		const Matrix r00 = w0_rho * w0.adjoint();
		const Matrix r01 = w0_rho * w1.adjoint();
		const Matrix r10 = r01.adjoint();
		const Matrix r11 = w1_rho * w1.adjoint();
		const complex prep = r01.trace();
		for(std::size_t b = 0; b < ts.size(); ++b)
		{
			Matrix local;
			if(!cache)
			{
				local = echo(ts[b]);
			}
			const Matrix& q = cache ? echoes[b] : local;
			out[a * ts.size() + b] = CrossTraces{
				trace_of_product(r00, q), trace_of_product(r11, q), trace_of_product(r01, q),
				trace_of_product(r10, q), prep, free_traces[b],
			};
		}
	});
	return out;
}

double thermal_tail(double occupation, std::size_t n_max)
{
	if(occupation <= 0.0)
	{
		return 0.0;
	}
	const double ratio = occupation / (occupation + 1.0);
	return std::pow(ratio, static_cast<double>(n_max + 1));
}

std::size_t tail_levels(double occupation, double target)
{
	if(occupation <= 0.0)
	{
		return 0;
	}
	const double ratio = occupation / (occupation + 1.0);
	auto n = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(target) / std::log(ratio)) - 1.0));
	while(thermal_tail(occupation, n) >= target)
	{
		++n;
	}
	while(n > 0 && thermal_tail(occupation, n - 1) < target)
	{
		--n;
	}
	return n;
}

FockEnvironment build_fock(const BathSpec& bath, const FockOptions& options)
{
	if(!options.n_max.empty() && options.n_max.size() != bath.modes.size())
	{
		throw std::invalid_argument("build_fock: need one n_max per bath mode");
	}
	FockEnvironment out;
	std::vector<double> energy;
	std::vector<double> coupling;
	std::vector<double> occupation;
	for(std::size_t m = 0; m < bath.modes.size(); ++m)
	{
		const auto& mode = bath.modes[m];
		if(mode.omega <= 0.0 || mode.ratio <= 0.0)
		{
			continue;
		}
		const double e = units::hbar * mode.omega;
		const double n_bar = bose_occupation(e, bath.temperature_k);
		const std::size_t needed = tail_levels(n_bar, options.tail_target);
		std::size_t levels = 0;
		if(options.n_max.empty())
		{
			// Room for displacements of up to four conditional evolutions.
			levels = needed + 16 + static_cast<std::size_t>(std::ceil(16.0 * mode.ratio));
		}
		else
		{
			levels = options.n_max[m];
			if(levels < needed)
			{
				throw TruncationError("build_fock: mode " + std::to_string(m) + " with n_max = " +
				                      std::to_string(levels) + " leaves thermal tail " +
				                      scientific(thermal_tail(n_bar, levels)) + " >= " +
				                      scientific(options.tail_target) + "; need n_max >= " +
				                      std::to_string(needed));
			}
		}
		out.active_modes.push_back(m);
		out.n_max.push_back(levels);
		out.worst_tail = std::max(out.worst_tail, thermal_tail(n_bar, levels));
		energy.push_back(e);
		coupling.push_back(e * mode.ratio);
		occupation.push_back(n_bar);
	}

	std::size_t dim = 1;
	for(auto levels : out.n_max)
	{
		dim *= levels + 1;
		if(dim > options.dimension_cap)
		{
			throw TruncationError("build_fock: truncated dimension exceeds cap " +
			                      std::to_string(options.dimension_cap));
		}
	}

	const auto d = static_cast<Eigen::Index>(dim);
	auto& env = out.env;
	env.h_env = Matrix::Zero(d, d);
	env.v0 = Matrix::Zero(d, d);
	env.v1 = Matrix::Zero(d, d);
	env.rho0 = Matrix::Zero(d, d);

	double polaron_shift = 0.0;
	for(std::size_t m = 0; m < energy.size(); ++m)
	{
		polaron_shift += coupling[m] * coupling[m] / energy[m];
	}

	// Mixed-radix digits, first active mode most significant.
	std::vector<std::size_t> stride(out.n_max.size(), 1);
	for(std::size_t m = out.n_max.size(); m-- > 1;)
	{
		stride[m - 1] = stride[m] * (out.n_max[m] + 1);
	}
	double norm = 0.0;
	for(Eigen::Index s = 0; s < d; ++s)
	{
		double free_energy = 0.0;
		double weight = 1.0;
		for(std::size_t m = 0; m < out.n_max.size(); ++m)
		{
			const auto n = (static_cast<std::size_t>(s) / stride[m]) % (out.n_max[m] + 1);
			free_energy += energy[m] * static_cast<double>(n);
			const double ratio = occupation[m] / (occupation[m] + 1.0);
			weight *= n == 0 ? 1.0 : std::pow(ratio, static_cast<double>(n));
			if(n < out.n_max[m])
			{
				const auto up = s + static_cast<Eigen::Index>(stride[m]);
				const double element = coupling[m] * std::sqrt(static_cast<double>(n + 1));
				env.v1(up, s) += element;
				env.v1(s, up) += element;
			}
		}
		env.h_env(s, s) = free_energy;
		env.v1(s, s) += polaron_shift;
		env.rho0(s, s) = weight;
		norm += weight;
	}
	env.rho0 /= norm;
	return out;
}

double separability_norm(const GenericEnvironment& env, double tau)
{
	const auto [w0, w1] = propagators(env, tau);
	return max_abs(commutator(env.rho0, w0.adjoint() * w1));
}

CommutationNorms commutation_norms(const GenericEnvironment& env, double t, double t_prime)
{
	env.validate();
	const SpectralPropagator free(env.h_env + env.v0);
	const SpectralPropagator coupled(env.h_env + env.v1);
	const Matrix w0 = free.at(t);
	const Matrix w1 = coupled.at(t);
	return CommutationNorms{
		max_abs(commutator(w0, coupled.at(t_prime))),
		max_abs(commutator(w0, env.rho0)),
		max_abs(commutator(w1, env.rho0)),
	};
}

GenericEnvironment random_commuting_env(std::uint64_t seed, Eigen::Index d)
{
	require_dimension(d, 2);
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> normal;
	const Matrix basis = random_unitary(rng, d);
	auto diagonal = [&] {
		Eigen::VectorXd v(d);
		for(Eigen::Index i = 0; i < d; ++i)
		{
			v(i) = normal(rng);
		}
		Matrix m = basis * v.cast<complex>().asDiagonal() * basis.adjoint();
		return Matrix(0.5 * (m + m.adjoint()));
	};
	GenericEnvironment env;
	env.h_env = diagonal();
	env.v0 = diagonal();
	env.v1 = diagonal();
	env.rho0 = random_density(rng, d);
	return env;
}

GenericEnvironment random_state_commuting_env(std::uint64_t seed, Eigen::Index d)
{
	require_dimension(d, 2);
	std::mt19937_64 rng(seed);
	GenericEnvironment env;
	env.h_env = random_hermitian(rng, d);
	env.v0 = random_hermitian(rng, d);
	env.v1 = random_hermitian(rng, d);
	env.rho0 = Matrix::Identity(d, d) / static_cast<double>(d);
	return env;
}

GenericEnvironment random_generic_env(std::uint64_t seed, Eigen::Index d)
{
	require_dimension(d, 2);
	std::mt19937_64 rng(seed);
	GenericEnvironment env;
	env.h_env = random_hermitian(rng, d);
	env.v0 = random_hermitian(rng, d);
	env.v1 = random_hermitian(rng, d);
	env.rho0 = random_density(rng, d);
	return env;
}

Matrix JointState::full() const
{
	const auto d = blocks[0].rows();
	Matrix m(2 * d, 2 * d);
	m.topLeftCorner(d, d) = blocks[0];
	m.topRightCorner(d, d) = blocks[1];
	m.bottomLeftCorner(d, d) = blocks[2];
	m.bottomRightCorner(d, d) = blocks[3];
	return m;
}

complex JointState::trace() const
{
	return blocks[0].trace() + blocks[3].trace();
}

complex JointState::coherence() const
{
	return blocks[1].trace();
}

namespace {

JointState split(const Matrix& m)
{
	const auto d = m.rows() / 2;
	return JointState{{m.topLeftCorner(d, d), m.topRightCorner(d, d), m.bottomLeftCorner(d, d),
	                   m.bottomRightCorner(d, d)}};
}

} // namespace

JointEvolution joint_evolution_validate(const GenericEnvironment& env, double delta_eps_ev, double tau, double t,
                                        complex alpha, complex beta)
{
	if(std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
	{
		throw std::invalid_argument("joint_evolution_validate: qubit amplitudes must be normalized");
	}
	env.validate();
	const auto d = env.dimension();
	const Matrix id = Matrix::Identity(d, d);
	const double eps0 = delta_eps_ev * units::mev_per_ev;

	Matrix h = Matrix::Zero(2 * d, 2 * d);
	h.topLeftCorner(d, d) = eps0 * id + env.h_env + env.v0;
	h.bottomRightCorner(d, d) = env.h_env + env.v1;
	const SpectralPropagator joint(h);

	auto qubit_projector = [](complex a, complex b) {
		Eigen::Matrix2cd p;
		p << a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b);
		return p;
	};
	auto product = [](const Eigen::Matrix2cd& q, const Matrix& e) {
		const auto n = e.rows();
		Matrix m(2 * n, 2 * n);
		for(int i = 0; i < 2; ++i)
		{
			for(int j = 0; j < 2; ++j)
			{
				m.block(i * n, j * n, n, n) = q(i, j) * e;
			}
		}
		return m;
	};

	const double s = 1.0 / std::sqrt(2.0);
	const Eigen::Matrix2cd plus = qubit_projector(s, s);
	const Eigen::Matrix2cd minus = qubit_projector(s, -s);

	JointEvolution out;
	const Matrix u_tau = joint.at(tau);
	const Matrix sigma = u_tau * product(plus, env.rho0) * u_tau.adjoint();
	out.prepared = split(sigma);

	const Matrix proj_plus = product(plus, id);
	const Matrix proj_minus = product(minus, id);
	const Matrix sigma_plus = proj_plus * sigma * proj_plus;
	const Matrix sigma_minus = proj_minus * sigma * proj_minus;
	out.projected_plus = split(sigma_plus);
	out.projected_minus = split(sigma_minus);
	out.p_plus = sigma_plus.trace().real();
	out.p_minus = sigma_minus.trace().real();

	// Environment left behind by each outcome: <+-| sigma |+-> / p.
	auto environment = [&](const JointState& b, double sign, double p) {
		return Matrix(0.5 * (b.blocks[0] + b.blocks[3] + sign * (b.blocks[1] + b.blocks[2])) / p);
	};
	const Eigen::Matrix2cd psi = qubit_projector(alpha, beta);
	const Matrix u_t = joint.at(t);
	const double norm = std::abs(alpha * beta);

	if(out.p_plus > 0.0)
	{
		const Matrix r = environment(out.projected_plus, 1.0, out.p_plus);
		out.evolved_plus = split(u_t * product(psi, r) * u_t.adjoint());
		out.D_plus = std::abs(out.evolved_plus.coherence()) / norm;
	}
	if(out.p_minus > 0.0)
	{
		const Matrix r = environment(out.projected_minus, -1.0, out.p_minus);
		out.evolved_minus = split(u_t * product(psi, r) * u_t.adjoint());
		out.D_minus = std::abs(out.evolved_minus.coherence()) / norm;
	}
	return out;
}

} // namespace pdc::oracle

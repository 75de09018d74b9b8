#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdc/bath.hpp"
#include "pdc/oracle.hpp"
#include "pdc/scheme.hpp"
#include "pdc/weyl_backend.hpp"

using namespace pdc;
using namespace pdc::oracle;

namespace {

BathSpec mode_bath(std::initializer_list<std::pair<double, double>> modes, double temperature_k)
{
	const std::vector<std::pair<double, double>> list(modes);
	return explicit_bath(list, MaterialParams{}, temperature_k);
}

GenericEnvironment identity_env(Eigen::Index d)
{
	GenericEnvironment env;
	env.h_env = Matrix::Zero(d, d);
	env.v0 = Matrix::Zero(d, d);
	env.v1 = Matrix::Zero(d, d);
	env.rho0 = Matrix::Identity(d, d) / static_cast<double>(d);
	return env;
}

double min_envelope_gain(const GenericEnvironment& env, std::size_t grid, double tau_max, double t_max)
{
	const OracleBackend backend(env);
	std::vector<double> taus, ts;
	for(std::size_t i = 0; i < grid; ++i)
	{
		taus.push_back(tau_max * static_cast<double>(i) / static_cast<double>(grid - 1));
		ts.push_back(t_max * static_cast<double>(i) / static_cast<double>(grid - 1));
	}
	const auto traces = backend.traces_grid(taus, ts);
	double g = 1e300;
	for(std::size_t i = 0; i < traces.size(); ++i)
	{
		g = std::min(g, envelope_from_traces(traces[i], taus[i / grid], ts[i % grid]).g_min);
	}
	return g;
}

} // namespace

TEST_CASE("environment validation")
{
	auto env = random_generic_env(1, 4);
	CHECK_NOTHROW(env.validate());
	auto bad = env;
	bad.v1(0, 1) += 1e-6;
	CHECK_THROWS(bad.validate());
	bad = env;
	bad.rho0 *= 1.1;
	CHECK_THROWS(bad.validate());
	bad = env;
	bad.rho0 = Matrix::Zero(4, 4);
	bad.rho0(0, 0) = 1.5;
	bad.rho0(1, 1) = -0.5;
	CHECK_THROWS(bad.validate());
	bad = env;
	bad.v0 = Matrix::Zero(3, 3);
	CHECK_THROWS(bad.validate());
}

TEST_CASE("propagators")
{
	const auto env = random_generic_env(3, 6);
	const auto [a0, a1] = propagators(env, 0.0);
	CHECK(max_abs(a0 - Matrix::Identity(6, 6)) < 1e-13);
	CHECK(max_abs(a1 - Matrix::Identity(6, 6)) < 1e-13);

	const auto [u1, v1] = propagators(env, 0.7);
	const auto [u2, v2] = propagators(env, 1.9);
	const auto [u12, v12] = propagators(env, 2.6);
	CHECK(max_abs(u1 * u2 - u12) < 1e-10);
	CHECK(max_abs(v1 * v2 - v12) < 1e-10);
	CHECK(max_abs(u1 * u1.adjoint() - Matrix::Identity(6, 6)) < 1e-12);

	GenericEnvironment diag = identity_env(3);
	diag.h_env.diagonal() << 0.5, -1.0, 2.0;
	const auto [d0, d1] = propagators(diag, 1.3);
	for(int n = 0; n < 3; ++n)
	{
		const double lambda = diag.h_env(n, n).real();
		CHECK(std::abs(d0(n, n) - std::polar(1.0, -lambda * 1.3 / units::hbar)) < 1e-13);
	}
}

TEST_CASE("cross traces: trivial cases")
{
	const auto env = random_generic_env(4, 5);
	const OracleBackend backend(env);
	for(int i = 0; i < 2; ++i)
	{
		for(int j = 0; j < 2; ++j)
		{
			CHECK(std::abs(backend.cross_trace(i, j, 0.0, 0.0) - 1.0) < 1e-12);
			CHECK(std::abs(backend.cross_trace(i, j, 1.3, 2.1)) <= 1.0 + 1e-10);
		}
	}
	const auto x = backend.traces(1.3, 2.1);
	CHECK(std::abs(x.x01 - backend.cross_trace(0, 1, 1.3, 2.1)) < 1e-12);
	CHECK(std::abs(x.x10 - backend.cross_trace(1, 0, 1.3, 2.1)) < 1e-12);
	CHECK(std::abs(x.x01_prep - backend.cross_trace(0, 1, 1.3, 0.0)) < 1e-12);
	CHECK(std::abs(x.x01_free - backend.cross_trace(0, 1, 2.1, 0.0)) < 1e-12);

	auto same = env;
	same.v1 = same.v0;
	const OracleBackend no_decoherence(same);
	for(double t : {0.5, 3.0, 11.0})
	{
		CHECK(std::abs(std::abs(no_decoherence.cross_trace(0, 1, t, 0.0)) - 1.0) < 1e-12);
	}
}

TEST_CASE("one-mode Fock model reproduces the Weyl engine")
{
	for(double temperature : {0.0, 10.0, 34.0})
	{
		const auto bath = mode_bath({{1.2, 0.16}}, temperature);
		const auto fock = build_fock(bath);
		const OracleBackend dense(fock.env);
		const WeylBackend weyl(bath);
		for(double tau : {0.0, 0.8, 3.1})
		{
			for(double t : {0.0, 1.7, 6.0})
			{
				const auto a = dense.traces(tau, t);
				const auto b = weyl.traces(tau, t);
				CHECK(std::abs(a.x00 - b.x00) < 1e-10);
				CHECK(std::abs(a.x11 - b.x11) < 1e-10);
				CHECK(std::abs(a.x01 - b.x01) < 1e-10);
				CHECK(std::abs(a.x10 - b.x10) < 1e-10);
				CHECK(std::abs(a.x01_prep - b.x01_prep) < 1e-10);
				CHECK(std::abs(a.x01_free - b.x01_free) < 1e-10);
			}
		}
	}
}

TEST_CASE("traces on a grid equal point evaluations")
{
	const OracleBackend backend(random_generic_env(8, 4));
	const double taus[] = {0.0, 0.6, 2.0};
	const double ts[] = {0.1, 4.0};
	const auto grid = backend.traces_grid(taus, ts);
	for(std::size_t a = 0; a < 3; ++a)
	{
		for(std::size_t b = 0; b < 2; ++b)
		{
			const auto& g = grid[a * 2 + b];
			CHECK(std::abs(g.x00 - backend.cross_trace(0, 0, taus[a], ts[b])) < 1e-12);
			CHECK(std::abs(g.x11 - backend.cross_trace(1, 1, taus[a], ts[b])) < 1e-12);
			CHECK(std::abs(g.x10 - backend.cross_trace(1, 0, taus[a], ts[b])) < 1e-12);
		}
	}
}

TEST_CASE("truncated Fock construction")
{
	CHECK(thermal_tail(4.06, 115) < 1e-10);
	CHECK(thermal_tail(4.06, 115) == doctest::Approx(std::pow(4.06 / 5.06, 116)));
	CHECK(thermal_tail(0.0, 0) == 0.0);
	const auto n = tail_levels(4.06, 1e-10);
	CHECK(thermal_tail(4.06, n) < 1e-10);
	CHECK(thermal_tail(4.06, n - 1) >= 1e-10);

	const auto cold = build_fock(mode_bath({{1.0, 0.09}}, 0.0));
	CHECK(std::abs(cold.env.rho0(0, 0) - 1.0) < 1e-15);
	CHECK(std::abs(cold.env.rho0.trace() - 1.0) < 1e-15);
	CHECK(cold.worst_tail == 0.0);

	const auto warm = build_fock(mode_bath({{1.0, 0.09}, {0.0, 0.0}, {2.0, 0.01}}, 10.0));
	CHECK(warm.active_modes == std::vector<std::size_t>{1, 2});
	CHECK(std::abs(warm.env.rho0.trace() - 1.0) < 1e-12);
	CHECK(warm.worst_tail < 1e-10);
	CHECK(warm.env.v0.norm() == 0.0);

	FockOptions small;
	small.n_max = {30};
	CHECK_THROWS_AS(build_fock(mode_bath({{1.0, 0.09}}, 34.0), small), TruncationError);
	FockOptions capped;
	capped.dimension_cap = 100;
	CHECK_THROWS_AS(build_fock(mode_bath({{1.0, 0.09}, {1.5, 0.04}}, 34.0), capped), TruncationError);
	FockOptions wrong_count;
	wrong_count.n_max = {10, 10};
	CHECK_THROWS_AS(build_fock(mode_bath({{1.0, 0.09}}, 0.0), wrong_count), std::invalid_argument);
}

TEST_CASE("separability norm")
{
	auto mixed = random_generic_env(2, 5);
	mixed.rho0 = Matrix::Identity(5, 5) / 5.0;
	CHECK(separability_norm(mixed, 1.0) < 1e-14);

	GenericEnvironment commuting = identity_env(4);
	commuting.h_env.diagonal() << 0.0, 0.4, 1.1, 2.0;
	commuting.v1.diagonal() << 0.3, -0.2, 0.5, 0.1;
	commuting.rho0.setZero();
	double z = 0.0;
	for(int n = 0; n < 4; ++n)
	{
		commuting.rho0(n, n) = std::exp(-commuting.h_env(n, n).real() / 2.0);
		z += commuting.rho0(n, n).real();
	}
	commuting.rho0 /= z;
	CHECK(separability_norm(commuting, 2.0) < 1e-14);

	const auto fock = build_fock(mode_bath({{1.0, 0.09}}, 34.0));
	CHECK(separability_norm(fock.env, 1.0) > 1e-3);
}

TEST_CASE("commutation norms")
{
	const auto trivial = commutation_norms(identity_env(3), 1.0, 2.0);
	CHECK(trivial.evolutions == 0.0);
	CHECK(trivial.state0 == 0.0);
	CHECK(trivial.state1 == 0.0);

	const auto fock = build_fock(mode_bath({{1.0, 0.09}}, 10.0));
	CHECK(commutation_norms(fock.env, 1.0, 2.0).evolutions > 1e-3);

	const auto state = commutation_norms(random_state_commuting_env(5, 4), 1.0, 2.0);
	CHECK(state.state0 < 1e-15);
	CHECK(state.state1 < 1e-15);
	CHECK(state.evolutions > 1e-3);
}

TEST_CASE("random environment generators")
{
	const auto a = random_commuting_env(1, 6);
	CHECK(max_abs(a.h_env * a.v0 - a.v0 * a.h_env) < 1e-10);
	CHECK(max_abs(a.h_env * a.v1 - a.v1 * a.h_env) < 1e-10);
	CHECK(max_abs(a.v0 * a.v1 - a.v1 * a.v0) < 1e-10);
	CHECK(commutation_norms(a, 1.3, 0.4).evolutions < 1e-10);

	const auto b = random_commuting_env(2, 6);
	CHECK(max_abs(a.h_env - b.h_env) > 1e-3);
	CHECK(max_abs(a.h_env - random_commuting_env(1, 6).h_env) == 0.0);

	const auto g = random_generic_env(9, 6);
	Eigen::SelfAdjointEigenSolver<Matrix> es(g.rho0);
	CHECK(es.eigenvalues().minCoeff() > 0.0);
	CHECK_THROWS(random_generic_env(1, 1));
}

TEST_CASE("commuting evolutions: A is independent of the delay and B splits into later and earlier factors")
{
	const auto env = random_commuting_env(21, 5);
	const OracleBackend backend(env);
	auto d = [&](double s) {
		const auto [w0, w1] = propagators(env, s);
		return complex((w0 * env.rho0 * w1.adjoint()).trace());
	};
	const double theta = 0.83;
	for(double t : {0.5, 2.0})
	{
		const complex a_ref = 0.5 * d(t);
		for(double tau : {0.0, 0.7, 3.0})
		{
			const auto p = assemble_point(backend.traces(tau, t), theta, tau, t);
			CHECK(std::abs(p.A - a_ref) < 1e-12);
			const complex b_ref = 0.25 * (std::polar(1.0, -theta) * d(t + tau) + std::polar(1.0, theta) * d(t - tau));
			CHECK(std::abs(p.B - b_ref) < 1e-12);
		}
	}
}

TEST_CASE("state-commuting environments keep R_00 = R_11 = R(0)")
{
	const auto env = random_state_commuting_env(3, 5);
	for(double tau : {0.4, 2.5})
	{
		const auto [w0, w1] = propagators(env, tau);
		CHECK(max_abs(w0 * env.rho0 * w0.adjoint() - env.rho0) < 1e-14);
		CHECK(max_abs(w1 * env.rho0 * w1.adjoint() - env.rho0) < 1e-14);
	}
}

TEST_CASE("gain sign on small random suites")
{
	for(std::uint64_t seed = 1; seed <= 10; ++seed)
	{
		CHECK(min_envelope_gain(random_commuting_env(seed, 4), 8, 5.0, 5.0) >= -1e-10);
		CHECK(min_envelope_gain(random_state_commuting_env(seed, 4), 8, 5.0, 5.0) >= -1e-10);
	}
	double most_negative = 0.0;
	for(std::uint64_t seed = 1; seed <= 5; ++seed)
	{
		most_negative = std::min(most_negative, min_envelope_gain(random_generic_env(seed, 4), 8, 5.0, 5.0));
	}
	CHECK(most_negative < -1e-4);
}

TEST_CASE("literal joint evolution equals the scheme formulas")
{
	const complex alpha(0.6, 0.0), beta(0.0, 0.8);
	for(double delta_eps : {0.01, 1.0})
	{
		for(std::uint64_t seed : {1u, 2u})
		{
			const auto env = random_generic_env(seed, 4);
			const OracleBackend backend(env);
			for(double tau : {0.0, 0.9, 2.3})
			{
				for(double t : {0.0, 1.4})
				{
					const auto j = joint_evolution_validate(env, delta_eps, tau, t, alpha, beta);
					const auto p = scheme_point(backend, delta_eps, tau, t);

					CHECK(std::abs(j.prepared.trace() - 1.0) < 1e-12);
					CHECK(std::abs(j.p_plus + j.p_minus - 1.0) < 1e-12);
					CHECK(std::abs(j.p_plus - p.p_plus) < 1e-10);
					CHECK(max_abs(j.prepared.full() - j.prepared.full().adjoint()) < 1e-12);
					for(const auto* projected : {&j.projected_plus, &j.projected_minus})
					{
						Eigen::SelfAdjointEigenSolver<Matrix> es(projected->full());
						CHECK(es.eigenvalues().minCoeff() > -1e-12);
					}
					if(p.plus_defined)
					{
						CHECK(std::abs(j.evolved_plus.trace() - 1.0) < 1e-12);
						CHECK(std::abs(j.D_plus - p.D_plus) < 1e-10);
					}
					if(p.minus_defined && j.p_minus > 1e-8)
					{
						CHECK(std::abs(j.evolved_minus.trace() - 1.0) < 1e-12);
						CHECK(std::abs(j.D_minus - p.D_minus) < 1e-10);
					}
				}
			}
		}
	}
	CHECK_THROWS(joint_evolution_validate(random_generic_env(1, 3), 1.0, 1.0, 1.0, 1.0, 1.0));
}

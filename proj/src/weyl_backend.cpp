#include "pdc/weyl_backend.hpp"

#include <stdexcept>

namespace pdc {

using weyl::adjoint;
using weyl::conditional_evolution;
using weyl::thermal_expectation;

// Tr[w_0(t) w_i(tau) R w_j^+(tau) w_1^+(t)] = < w_j^+(tau) w_1^+(t) w_0(t) w_i(tau) >_thermal
complex WeylBackend::cross_trace(int i, int j, double tau, double t) const
{
	if((i != 0 && i != 1) || (j != 0 && j != 1))
	{
		throw std::invalid_argument("cross_trace: branch indices must be 0 or 1");
	}
	const auto word = adjoint(conditional_evolution(j, tau, bath_)) *
		adjoint(conditional_evolution(1, t, bath_)) * conditional_evolution(0, t, bath_) *
		conditional_evolution(i, tau, bath_);
	return thermal_expectation(word, bath_);
}

CrossTraces WeylBackend::traces(double tau, double t) const
{
	const auto w0_tau = conditional_evolution(0, tau, bath_);
	const auto w1_tau = conditional_evolution(1, tau, bath_);
	const auto w0_t = conditional_evolution(0, t, bath_);
	const auto w1_t = conditional_evolution(1, t, bath_);
	const auto echo = adjoint(w1_t) * w0_t;

	const auto expect = [&](const weyl::WeylElementd& word) { return thermal_expectation(word, bath_); };
	return CrossTraces{
		expect(adjoint(w0_tau) * echo * w0_tau),
		expect(adjoint(w1_tau) * echo * w1_tau),
		expect(adjoint(w1_tau) * echo * w0_tau),
		expect(adjoint(w0_tau) * echo * w1_tau),
		expect(adjoint(w1_tau) * w0_tau),
		expect(echo),
	};
}

} // namespace pdc

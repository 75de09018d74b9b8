#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pdc {

using complex = std::complex<double>;

/// Slow traces that fix every scheme quantity at one (tau, t):
///   X_ij(tau, t) = Tr[w_0(t) w_i(tau) R(0) w_j^+(tau) w_1^+(t)].
struct CrossTraces
{
	complex x00;
	complex x11;
	complex x01;
	complex x10;
	complex x01_prep;   // X_01(tau, 0) = Tr R_01(tau)
	complex x01_free;   // X_01(t, 0), whose modulus is the standard coherence D(t)
};

/// Anything that can evaluate the cross traces of a pure-dephasing model.
class Backend
{
public:
	virtual ~Backend() = default;

	/// X_ij(tau, t) for i, j in {0, 1}; tau, t in ps.
	[[nodiscard]] virtual complex cross_trace(int i, int j, double tau, double t) const = 0;

	[[nodiscard]] virtual CrossTraces traces(double tau, double t) const;

	/// Row-major over (tau, t): entry [a * ts.size() + b] belongs to (taus[a], ts[b]).
	[[nodiscard]] virtual std::vector<CrossTraces> traces_grid(std::span<const double> taus,
	                                                           std::span<const double> ts) const;
};

} // namespace pdc

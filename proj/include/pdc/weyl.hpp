#pragma once

// Exact normal-form algebra for products of conditional evolution operators
// of a qubit coupled linearly to independent bosonic modes:
//
//   H_E = sum_k hbar w_k b_k^+ b_k,   V_0 = 0,   V_1 = sum_k hbar w_k r_k (b_k + b_k^+).
//
// Every product of w_0(t), w_1(t) and their adjoints has the form
//
//   e^{i phase} * prod_k D_k(alpha_k) * e^{-i H_E s / hbar}
//
// and is stored as (phase, alpha, s). Composition uses
//
//   e^{-i H_E s} D(a) e^{i H_E s} = D(a e^{-i w s}),   D(a) D(b) = e^{i Im(a conj(b))} D(a + b).

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "pdc/params.hpp"

namespace pdc::weyl {

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Residual free rotation (ps) tolerated by thermal_expectation.
inline constexpr double rotation_tolerance = 1e-12;

/// Modes seen by the Weyl engine: frequencies (rad/ps), coupling ratios
/// r_k = f_k / (hbar w_k), temperature, and the cached Gaussian widths n_k + 1/2.
template <typename Real>
struct BathRef
{
	std::shared_ptr<const RealVector<Real>> omega;
	RealVector<Real> ratio;
	Real temperature_k = 0;
	RealVector<Real> width;

	[[nodiscard]] Eigen::Index size() const { return ratio.size(); }
};

template <typename Real>
BathRef<Real> make_bath_ref(RealVector<Real> omega, RealVector<Real> ratio, Real temperature_k)
{
	if(omega.size() != ratio.size())
	{
		throw std::invalid_argument("make_bath_ref: frequency and coupling counts differ");
	}
	if(temperature_k < 0)
	{
		throw std::invalid_argument("make_bath_ref: negative temperature");
	}
	BathRef<Real> bath;
	bath.width.resize(omega.size());
	for(Eigen::Index k = 0; k < omega.size(); ++k)
	{
		if(!(omega(k) >= 0) || !std::isfinite(static_cast<double>(omega(k))) ||
		   !std::isfinite(static_cast<double>(ratio(k))))
		{
			throw std::invalid_argument("make_bath_ref: invalid mode " + std::to_string(k));
		}
		// A zero-frequency mode never displaces: alpha = r (e^0 - 1) = 0.
		if(omega(k) == 0)
		{
			ratio(k) = 0;
			bath.width(k) = Real(0.5);
			continue;
		}
		using std::expm1;
		const Real energy = Real(units::hbar) * omega(k);
		const Real occupation = temperature_k == 0
			? Real(0)
			: Real(1) / expm1(energy / (Real(units::k_boltzmann) * temperature_k));
		bath.width(k) = occupation + Real(0.5);
	}
	bath.omega = std::make_shared<const RealVector<Real>>(std::move(omega));
	bath.ratio = std::move(ratio);
	bath.temperature_k = temperature_k;
	return bath;
}

template <typename Real>
class WeylElement
{
public:
	using Frequencies = std::shared_ptr<const RealVector<Real>>;

	WeylElement() = default;

	/// A null `frequencies` pointer is allowed only for elements without rotation.
	WeylElement(Real phase, ComplexVector<Real> displacements, Real rotation, Frequencies frequencies)
		: phase_{phase}, displacements_{std::move(displacements)}, rotation_{rotation},
		  frequencies_{std::move(frequencies)}
	{
		if(frequencies_ && frequencies_->size() != displacements_.size())
		{
			throw std::invalid_argument("WeylElement: frequency and displacement counts differ");
		}
		if(!frequencies_ && rotation_ != 0)
		{
			throw std::invalid_argument("WeylElement: a rotation needs mode frequencies");
		}
	}

	[[nodiscard]] Real phase() const { return phase_; }
	[[nodiscard]] const ComplexVector<Real>& displacements() const { return displacements_; }
	[[nodiscard]] Real rotation() const { return rotation_; }
	[[nodiscard]] const Frequencies& frequencies() const { return frequencies_; }
	[[nodiscard]] Eigen::Index size() const { return displacements_.size(); }

private:
	Real phase_ = 0;
	ComplexVector<Real> displacements_;
	Real rotation_ = 0;
	Frequencies frequencies_;
};

template <typename Real>
WeylElement<Real> identity(Eigen::Index n_modes)
{
	return {Real(0), ComplexVector<Real>::Zero(n_modes), Real(0), nullptr};
}

template <typename Real>
WeylElement<Real> identity(const BathRef<Real>& bath)
{
	return {Real(0), ComplexVector<Real>::Zero(bath.size()), Real(0), bath.omega};
}

/// w_0(t) for branch 0, w_1(t) for branch 1. The polaron shift (linear in t)
/// is not included: it belongs to the qubit splitting.
template <typename Real>
WeylElement<Real> conditional_evolution(int branch, Real t, const BathRef<Real>& bath)
{
	if(branch == 0)
	{
		return {Real(0), ComplexVector<Real>::Zero(bath.size()), t, bath.omega};
	}
	if(branch != 1)
	{
		throw std::invalid_argument("conditional_evolution: branch must be 0 or 1");
	}
	using std::sin;
	using std::cos;
	const auto& omega = *bath.omega;
	ComplexVector<Real> alpha(bath.size());
	Real phase = 0;
	for(Eigen::Index k = 0; k < bath.size(); ++k)
	{
		const Real r = bath.ratio(k);
		const Real wt = omega(k) * t;
		alpha(k) = r * std::complex<Real>(cos(wt) - Real(1), -sin(wt));
		phase -= r * r * sin(wt);
	}
	return {phase, std::move(alpha), t, bath.omega};
}

namespace detail {

template <typename Real>
typename WeylElement<Real>::Frequencies common_frequencies(const WeylElement<Real>& a, const WeylElement<Real>& b)
{
	if(a.size() != b.size())
	{
		throw std::invalid_argument("compose: mode counts differ");
	}
	if(a.frequencies() && b.frequencies() && a.frequencies() != b.frequencies() &&
	   *a.frequencies() != *b.frequencies())
	{
		throw std::invalid_argument("compose: elements belong to different baths");
	}
	return a.frequencies() ? a.frequencies() : b.frequencies();
}

} // namespace detail

/// Normal form of the operator product a * b.
template <typename Real>
WeylElement<Real> compose(const WeylElement<Real>& a, const WeylElement<Real>& b)
{
	auto frequencies = detail::common_frequencies(a, b);
	using std::sin;
	using std::cos;

	ComplexVector<Real> moved = b.displacements();
	if(a.rotation() != 0)
	{
		const auto& omega = *frequencies;
		for(Eigen::Index k = 0; k < moved.size(); ++k)
		{
			const Real angle = omega(k) * a.rotation();
			moved(k) *= std::complex<Real>(cos(angle), -sin(angle));
		}
	}
	Real phase = a.phase() + b.phase();
	for(Eigen::Index k = 0; k < moved.size(); ++k)
	{
		phase += std::imag(a.displacements()(k) * std::conj(moved(k)));
	}
	ComplexVector<Real> total = a.displacements() + moved;
	return {phase, std::move(total), a.rotation() + b.rotation(), std::move(frequencies)};
}

template <typename Real>
WeylElement<Real> operator*(const WeylElement<Real>& a, const WeylElement<Real>& b)
{
	return compose(a, b);
}

template <typename Real>
WeylElement<Real> adjoint(const WeylElement<Real>& a)
{
	using std::sin;
	using std::cos;
	ComplexVector<Real> alpha = -a.displacements();
	if(a.rotation() != 0)
	{
		const auto& omega = *a.frequencies();
		for(Eigen::Index k = 0; k < alpha.size(); ++k)
		{
			const Real angle = omega(k) * a.rotation();
			alpha(k) *= std::complex<Real>(cos(angle), sin(angle));
		}
	}
	return {-a.phase(), std::move(alpha), -a.rotation(), a.frequencies()};
}

/// Tr[rho_thermal * a]. The free rotation must have cancelled.
template <typename Real>
std::complex<Real> thermal_expectation(const WeylElement<Real>& a, const BathRef<Real>& bath)
{
	using std::abs;
	using std::exp;
	using std::polar;
	if(abs(a.rotation()) >= Real(rotation_tolerance))
	{
		throw std::logic_error("thermal_expectation: residual free rotation " +
		                       std::to_string(static_cast<double>(a.rotation())) + " ps");
	}
	if(a.size() != bath.size())
	{
		throw std::invalid_argument("thermal_expectation: mode counts differ");
	}
	Real exponent = 0;
	for(Eigen::Index k = 0; k < a.size(); ++k)
	{
		exponent -= std::norm(a.displacements()(k)) * bath.width(k);
	}
	return std::polar(exp(exponent), a.phase());
}

using WeylElementd = WeylElement<double>;
using BathRefd = BathRef<double>;

} // namespace pdc::weyl

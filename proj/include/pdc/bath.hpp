#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdc/params.hpp"
#include "pdc/weyl.hpp"

namespace pdc {

/// One phonon mode: wave number (nm^-1), angular frequency c*k (rad/ps),
/// dimensionless weight H_i = |f/(hbar w)|^2 and coupling ratio r = sqrt(H_i).
struct Mode
{
	double k = 0.0;
	double omega = 0.0;
	double weight = 0.0;
	double ratio = 0.0;
};

enum class BathOrigin { paper19, quadrature, subset_rescaled, explicit_list };

struct BathSpec
{
	std::vector<Mode> modes;
	double temperature_k = 0.0;
	BathOrigin origin = BathOrigin::explicit_list;
	std::size_t quadrature_nodes = 0;
	double k_max = 0.0;
	std::vector<std::size_t> indices;

	[[nodiscard]] double total_weight() const;
};

/// Number of modes in the equally spaced discretization.
inline constexpr std::size_t paper_mode_count = 19;

/// Default dense-bath cutoff, in units of the G(k) peak position.
inline constexpr double default_k_max_factor = 16.0;
inline constexpr std::size_t default_quadrature_nodes = 1500;

/// (sigma_e - sigma_h)^2 / (8 pi^2 rho c^3 hbar), in nm^2.
double spectral_prefactor(const MaterialParams& m);

/// Spectral function G(k) in nm; integrates to the total dimensionless weight H.
double spectral_G(double k, const MaterialParams& m);

/// Position of the maximum of G (nm^-1).
double spectral_peak(const MaterialParams& m);

/// Integral of G over [0, k_max]; an infinite k_max integrates the whole tail.
double spectral_weight(const MaterialParams& m, double k_max);
double spectral_weight(const MaterialParams& m);

/// 19 equally spaced modes k_i = i dk, dk = (2/3) * peak, H_i = G(k_i) dk.
BathSpec discretize_paper(const MaterialParams& m, double temperature_k);

/// Gauss-Legendre nodes on (0, k_max] with H_i = G(k_i) w_i.
BathSpec quadrature_bath(const MaterialParams& m, double temperature_k,
                         std::size_t n = default_quadrature_nodes, double k_max = 0.0);

/// Restriction of the 19-mode bath to `indices`, rescaled so sum H_i equals
/// the continuum total H.
BathSpec subset_rescaled(const BathSpec& paper, std::span<const std::size_t> indices,
                         const MaterialParams& m);

/// Modes from (omega, H) pairs; k is reported as omega / c.
BathSpec explicit_bath(std::span<const std::pair<double, double>> modes, const MaterialParams& m,
                       double temperature_k);

/// Bath selected by a config entry.
BathSpec make_bath(const BathChoice& choice, const MaterialParams& m, double temperature_k);

weyl::BathRefd to_bath_ref(const BathSpec& spec);

/// Gauss-Legendre nodes and weights on [a, b].
struct QuadratureRule
{
	std::vector<double> nodes;
	std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

} // namespace pdc

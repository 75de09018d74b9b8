#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdc/backend.hpp"

namespace pdc {

/// Probabilities below this are treated as an outcome that never occurs.
inline constexpr double probability_floor = 1e-14;
/// 1 - D(t) below this leaves the normalized gain undefined.
inline constexpr double decoherence_floor = 1e-12;

/// Protocol outputs at one (tau, t): standard coherence D, per-outcome
/// coherences and probabilities, gains, and the slow trace combinations
/// A = (X_00 + X_11)/4, B01 = X_01/4, B10 = X_10/4.
struct SchemePoint
{
	double tau = 0.0;
	double t = 0.0;
	double D = 1.0;
	double D_plus = 1.0;
	double D_minus = 1.0;
	double p_plus = 1.0;
	double p_minus = 0.0;
	double g_plus = 0.0;
	double g_minus = 0.0;
	double g_av = 0.0;
	double g_av_norm = 0.0;
	complex A;
	complex B01;
	complex B10;
	bool plus_defined = true;
	bool minus_defined = true;
	bool norm_defined = true;

	/// B = e^{-i theta} B01 + e^{i theta} B10 at the qubit phase used for this point.
	complex B;
	double D_av = 1.0; // p+ D+ + p- D- = |A + B| + |A - B|
};

/// Extrema over the fast qubit phase theta in [0, 2 pi) with the slow traces held fixed.
struct EnvelopePoint
{
	double tau = 0.0;
	double t = 0.0;
	double D = 1.0;
	double Dav_min = 0.0, Dav_max = 0.0;
	double g_min = 0.0, g_max = 0.0;
	double gnorm_min = 0.0, gnorm_max = 0.0;
	double Dplus_min = 0.0, Dplus_max = 0.0;
	double Dminus_min = 0.0, Dminus_max = 0.0;
	double theta_at_min = 0.0, theta_at_max = 0.0;
	bool norm_defined = true;
	/// Largest violation of 2 max(|A|,|B|) <= D_av <= 2 sqrt(|A|^2 + |B|^2) over the scan.
	double sandwich_violation = 0.0;
	complex A;
	complex B01;
	complex B10;
};

/// Stationarity-condition residuals at one phase theta.
struct EnvelopeResiduals
{
	double sin_residual = 0.0;       // |sin(phi_B - phi_A)|, zero where D_av meets 2 max(|A|,|B|)
	double cos_residual = 0.0;       // |cos(phi_B - phi_A)|, zero where D_av meets 2 sqrt(|A|^2+|B|^2)
	double split_sin_residual = 0.0; // same conditions in the B_+- / half-angle decomposition,
	double split_cos_residual = 0.0; // normalized by |B|
	double slope = 0.0;              // dD_av / dtheta
};

enum class SpecialKind { max_gain, min_gain, equal_gain };

/// Fast qubit phase Delta_eps * tau / hbar (rad), Delta_eps in eV.
double qubit_phase(double delta_eps_ev, double tau);

/// D(t) = |X_01(t, 0)|.
double standard_coherence(const Backend& backend, double t);

SchemePoint scheme_point(const Backend& backend, double delta_eps_ev, double tau, double t);

/// Scheme quantities from precomputed traces at fast phase theta.
SchemePoint assemble_point(const CrossTraces& traces, double theta, double tau, double t);

EnvelopePoint envelopes(const Backend& backend, double tau, double t, std::size_t n_theta = 4096);
EnvelopePoint envelope_from_traces(const CrossTraces& traces, double tau, double t, std::size_t n_theta = 4096);

/// Envelope of D_av for bare (A, B01, B10) with standard coherence D.
EnvelopePoint envelope_from_parts(complex A, complex B01, complex B10, complex x01_prep, double D,
                                  std::size_t n_theta = 4096);

/// D_av(theta) = |A + B(theta)| + |A - B(theta)|.
double average_coherence(complex A, complex B01, complex B10, double theta);

EnvelopeResiduals envelope_conditions_check(complex A, complex B01, complex B10, double theta);

/// Delay of the requested kind nearest tau_target: the |+> outcome is maximal at
/// theta = 2 pi j, minimal at (2j + 1) pi, and both outcomes gain equally at (j + 1/2) pi.
double special_tau(double delta_eps_ev, double tau_target, SpecialKind kind);

std::vector<SchemePoint> coherence_vs_t(const Backend& backend, double delta_eps_ev, double tau,
                                        std::span<const double> ts);

} // namespace pdc

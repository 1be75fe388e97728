#pragma once

#include "qiopa/amplifier.hpp"
#include "qiopa/density.hpp"

#include <cmath>
#include <set>

namespace qiopa {

// Postselected cloning / U-NOT metrics.  F and R describe the cloning channel
// (k1), F_star and R_star the anticloning channel (k2).
struct FidelityReport {
    double F = 0.0;
    double F_star = 0.0;
    double R = 0.0;
    double R_star = 0.0;
    double leakage = 0.0;
    double sector_weight = 0.0;
};

// Reduced density matrix of the cloning channel as the explicit sum of
// Gamma^(2n)-weighted 2x2 blocks on the pairs {(i, n-i+1); (i+1, n-i)}.
inline DensityMatrix rho1_series(const PolarizationQubit& q, const AmplifierParams& params, int n_max) {
    if (n_max < 0) throw Error(ErrorKind::invalid_arguments, "n_max must be >= 0");
    std::set<std::pair<int, int>> pairs;
    for (int n = 0; n <= n_max; ++n)
        for (int i = 0; i <= n; ++i) {
            pairs.insert({i, n - i + 1});
            pairs.insert({i + 1, n - i});
        }
    DensityMatrix rho(DensityMatrix::PairBasis(pairs.begin(), pairs.end()));
    const double c6 = std::pow(params.C(), -6.0);
    const double g2 = params.Gamma() * params.Gamma();
    double weight = c6;
    for (int n = 0; n <= n_max; ++n) {
        for (int i = 0; i <= n; ++i) {
            const int jv = n - i; // 1v count of the second basis pair
            const double off = std::sqrt(double((i + 1) * (jv + 1)));
            rho.accumulate(i, jv + 1, i, jv + 1, weight * std::norm(q.beta) * (jv + 1));
            rho.accumulate(i + 1, jv, i + 1, jv, weight * std::norm(q.alpha) * (i + 1));
            rho.accumulate(i, jv + 1, i + 1, jv, weight * std::conj(q.alpha) * q.beta * off);
            rho.accumulate(i + 1, jv, i, jv + 1, weight * q.alpha * std::conj(q.beta) * off);
        }
        weight *= g2;
    }
    rho.set_leakage(1.0 - rho.trace());
    return rho;
}

// Anticloning-channel counterpart; the intrinsic phase enters only here,
// through the eps factors on the off-diagonals.
inline DensityMatrix rho2_series(const PolarizationQubit& q, const AmplifierParams& params, int n_max) {
    if (n_max < 0) throw Error(ErrorKind::invalid_arguments, "n_max must be >= 0");
    std::set<std::pair<int, int>> pairs;
    for (int n = 0; n <= n_max; ++n)
        for (int i = 0; i <= n + 1; ++i) {
            if (i <= n) pairs.insert({n - i, i});
            if (i >= 1) pairs.insert({n - i + 1, i - 1});
        }
    DensityMatrix rho(DensityMatrix::PairBasis(pairs.begin(), pairs.end()));
    const double c6 = std::pow(params.C(), -6.0);
    const double g2 = params.Gamma() * params.Gamma();
    const cplx eps = params.epsilon();
    double weight = c6;
    for (int n = 0; n <= n_max; ++n) {
        for (int i = 0; i <= n + 1; ++i) {
            const bool e1 = i <= n;      // (n-i, i)
            const bool e2 = i >= 1;      // (n-i+1, i-1)
            if (e1) rho.accumulate(n - i, i, n - i, i, weight * std::norm(q.beta) * (n - i + 1));
            if (e2) rho.accumulate(n - i + 1, i - 1, n - i + 1, i - 1, weight * std::norm(q.alpha) * i);
            if (e1 && e2) {
                const double off = std::sqrt(double((n - i + 1) * i));
                rho.accumulate(n - i, i, n - i + 1, i - 1,
                               weight * std::conj(eps) * std::conj(q.alpha) * q.beta * off);
                rho.accumulate(n - i + 1, i - 1, n - i, i,
                               weight * eps * q.alpha * std::conj(q.beta) * off);
            }
        }
        weight *= g2;
    }
    rho.set_leakage(1.0 - rho.trace());
    return rho;
}

namespace detail {

inline double sector_pair_weight(const StateVector& s, SpatialMode mode, int nh, int nv) {
    double w = 0.0;
    for (const auto& [k, a] : s.amplitudes()) {
        const int h = mode == SpatialMode::k1 ? k[Mode::k1h] : k[Mode::k2h];
        const int v = mode == SpatialMode::k1 ? k[Mode::k1v] : k[Mode::k2v];
        if (h == nh && v == nv) w += std::norm(a);
    }
    return w;
}

// Shared worker: project onto the coincidence sector (2 photons on k1, one on
// k2), renormalize, and evaluate both channels' metrics.
inline FidelityReport postselect_fidelities(const StateVector& state, const PolarizationQubit& qubit) {
    StateVector sector = project_sector(state, 2, 1);
    const double w = sector.norm2();
    if (w < 1e-14)
        throw Error(ErrorKind::empty_sector, "coincidence sector (2 on k1, 1 on k2) has no weight");
    sector *= 1.0 / std::sqrt(w);

    FidelityReport rep;
    rep.leakage = state.leakage();
    rep.sector_weight = w;

    const DensityMatrix rho1 = partial_trace(sector, SpatialMode::k1);
    const double n1_pi = number_expectation(rho1, qubit, RelativePolarization::aligned);
    const double n1_perp = number_expectation(rho1, qubit, RelativePolarization::orthogonal);
    rep.F = n1_pi / (n1_pi + n1_perp);

    const DensityMatrix rho2 = partial_trace(sector, SpatialMode::k2);
    const double n2_pi = number_expectation(rho2, qubit, RelativePolarization::aligned);
    const double n2_perp = number_expectation(rho2, qubit, RelativePolarization::orthogonal);
    rep.F_star = n2_perp / (n2_pi + n2_perp);

    // amplification ratios in the analyzer basis aligned with the qubit
    const StateVector rotated =
        apply_polarization_rotation(sector, Su2Element::taking_h_to(qubit).inverse(), RotationTarget::both);
    const double p_clone = sector_pair_weight(rotated, SpatialMode::k1, 2, 0);
    const double p_sym = sector_pair_weight(rotated, SpatialMode::k1, 1, 1);
    rep.R = p_clone / p_sym;
    const double p_flip = sector_pair_weight(rotated, SpatialMode::k2, 0, 1);
    const double p_same = sector_pair_weight(rotated, SpatialMode::k2, 1, 0);
    rep.R_star = p_flip / p_same;
    return rep;
}

} // namespace detail

// F = Tr(rho1 n_pi) / Tr(rho1 n_1) on the postselected sector, plus the
// signal ratio R = w(|Psi Psi>) / w(|{Psi, Psi_perp}>).
inline FidelityReport postselected_cloning_fidelity(const StateVector& state, const PolarizationQubit& qubit) {
    return detail::postselect_fidelities(state, qubit);
}

// F* = Tr(rho2 n_perp) / Tr(rho2 n_2) on the same sector.
inline FidelityReport postselected_unot_fidelity(const StateVector& state, const PolarizationQubit& qubit) {
    return detail::postselect_fidelities(state, qubit);
}

inline double fidelity_from_ratio(double r) {
    if (r < 0.0) throw Error(ErrorKind::invalid_arguments, "ratio must be >= 0");
    return (2.0 * r + 1.0) / (2.0 * r + 2.0);
}

inline double unot_from_ratio(double r_star) {
    if (r_star < 0.0) throw Error(ErrorKind::invalid_arguments, "ratio must be >= 0");
    return r_star / (r_star + 1.0);
}

// F = (NM + M + N) / (MN + 2M), exact.
inline Rational optimal_cloning_fidelity(std::int64_t n, std::int64_t m) {
    if (n < 1 || m < n) throw Error(ErrorKind::invalid_arguments, "need M >= N >= 1");
    return Rational(n * m + m + n, m * n + 2 * m);
}

// F = (N + 1) / (N + 2), exact.
inline Rational estimation_fidelity(std::int64_t n) {
    if (n < 1) throw Error(ErrorKind::invalid_arguments, "need N >= 1");
    return Rational(n + 1, n + 2);
}

// Entropy of entanglement E = S(rho1) = S(rho2) of a pure bipartite state,
// in bits; the equality of the two reductions is asserted.
inline double entanglement_entropy(const StateVector& state) {
    if (state.leakage() >= 1e-6)
        throw Error(ErrorKind::invalid_arguments, "state leakage too large for a pure-state entropy");
    const double s1 = von_neumann_entropy(partial_trace(state, SpatialMode::k1));
    const double s2 = von_neumann_entropy(partial_trace(state, SpatialMode::k2));
    if (std::abs(s1 - s2) >= 1e-9)
        throw Error(ErrorKind::internal, "entanglement entropy mismatch between channels: " +
                                             format_double(s1) + " vs " + format_double(s2));
    return s1;
}

} // namespace qiopa

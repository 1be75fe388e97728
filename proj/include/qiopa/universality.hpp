#pragma once

#include "qiopa/channels.hpp"
#include "qiopa/oracle.hpp"

#include <optional>
#include <random>
#include <vector>

namespace qiopa {

// Haar-style qubit sample from the two-angle parameterization.
inline PolarizationQubit sample_qubit(Rng& rng) {
    const double cos_theta = 2.0 * rng.u01() - 1.0;
    const double theta = std::acos(cos_theta);
    const double phase = 2.0 * pi * rng.u01();
    return PolarizationQubit(std::cos(theta / 2.0),
                             std::exp(cplx(0.0, phase)) * std::sin(theta / 2.0));
}

// Haar sample on SU(2).
inline Su2Element sample_su2(Rng& rng) {
    const double u = rng.u01();
    const double p1 = 2.0 * pi * rng.u01();
    const double p2 = 2.0 * pi * rng.u01();
    return Su2Element(std::sqrt(u) * std::exp(cplx(0.0, p1)),
                      std::sqrt(1.0 - u) * std::exp(cplx(0.0, p2)));
}

// Operator norm of (H_R - H) on the truncated basis, H_R built from the
// rotated mode operators.  Vanishes for every rotation exactly when Phi = 0.
inline double hamiltonian_invariance_residual(const Su2Element& r, double phi, int cutoff) {
    const Eigen::MatrixXcd h = hamiltonian_matrix(phi, cutoff);
    const Eigen::MatrixXcd h_rot = hamiltonian_matrix(phi, cutoff, r);
    return operator_norm(h_rot - h);
}

inline double hamiltonian_norm(double phi, int cutoff) {
    return operator_norm(hamiltonian_matrix(phi, cutoff));
}

struct BlochSample {
    PolarizationQubit qubit;
    bool empty_sector = false;
    double F = 0.0;
    double F_star = 0.0;
};

// Postselected fidelities over Haar-distributed qubits; the three reference
// injections H, (H+V)/sqrt(2), (H+iV)/sqrt(2) are always prepended so scan
// outputs are stable.  Empty postselection sectors (g = 0) are marked, not
// reported as numbers.
inline std::vector<BlochSample> bloch_fidelity_scan(const AmplifierParams& params, int samples,
                                                    std::uint64_t seed) {
    if (samples < 0) throw Error(ErrorKind::invalid_arguments, "negative sample count");
    std::vector<PolarizationQubit> qubits{PolarizationQubit::h(), PolarizationQubit::d(),
                                          PolarizationQubit::l()};
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) qubits.push_back(sample_qubit(rng));

    std::vector<BlochSample> out;
    out.reserve(qubits.size());
    for (const auto& q : qubits) {
        BlochSample row;
        row.qubit = q;
        try {
            const StateVector state = first_order_output(q, params);
            const FidelityReport rep = postselected_cloning_fidelity(state, q);
            row.F = rep.F;
            row.F_star = rep.F_star;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::empty_sector) throw;
            row.empty_sector = true;
        }
        out.push_back(row);
    }
    return out;
}

struct DegenerateSample {
    PolarizationQubit qubit;
    double gain_proxy = 0.0;
};

// Weight of the ideal one-pair amplified pattern |2 Psi>|1 Psi_perp> in the
// two-mode amplifier output.  A qubit-independent value would mean the
// collinear device were universal; it is not.
inline double degenerate_gain_proxy(const PolarizationQubit& qubit, const AmplifierParams& params,
                                    int cutoff = 12) {
    const StateVector evolved = degenerate_evolve(qubit, params, cutoff);
    // target ket in the qubit-aligned basis: (2, 1) on the two collinear modes
    StateVector target(cutoff);
    target.accumulate(OccupationKet(2, 1, 0, 0), 1.0);
    target = apply_polarization_rotation(target, Su2Element::taking_h_to(qubit), RotationTarget::k1);
    return std::norm(inner(target, evolved));
}

inline std::vector<DegenerateSample> degenerate_universality_scan(const AmplifierParams& params,
                                                                  int samples, std::uint64_t seed,
                                                                  int cutoff = 12) {
    std::vector<PolarizationQubit> qubits{PolarizationQubit::h(), PolarizationQubit::v(),
                                          PolarizationQubit::d()};
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) qubits.push_back(sample_qubit(rng));
    std::vector<DegenerateSample> out;
    out.reserve(qubits.size());
    for (const auto& q : qubits)
        out.push_back({q, degenerate_gain_proxy(q, params, cutoff)});
    return out;
}

} // namespace qiopa

#pragma once

#include "qiopa/fock.hpp"
#include "qiopa/params.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace qiopa {

// Phase-space coordinates {alpha, beta}: alpha_1/alpha_2 span the A pair
// (modes 1h/2v), beta_1/beta_2 the A' pair (modes 1v/2h).
struct PhasePoint {
    cplx alpha1{0.0};
    cplx alpha2{0.0};
    cplx beta1{0.0};
    cplx beta2{0.0};

    cplx& coord(int idx) {
        switch (idx) {
            case 0: return alpha1;
            case 1: return alpha2;
            case 2: return beta1;
            case 3: return beta2;
        }
        throw Error(ErrorKind::invalid_arguments, "phase coordinate index out of range");
    }
    cplx coord(int idx) const { return const_cast<PhasePoint*>(this)->coord(idx); }
};

// Squeezed variables of one pair: gamma_+ = (z1 + conj(z2)) e^-g,
// gamma_- = i (z1 - conj(z2)) e^+g, Delta = (gamma_+ - i gamma_-)/sqrt(2).
struct SqueezedVariables {
    cplx gamma_plus;
    cplx gamma_minus;

    SqueezedVariables(cplx z1, cplx z2, double g) {
        gamma_plus = (z1 + std::conj(z2)) * std::exp(-g);
        gamma_minus = cplx(0.0, 1.0) * (z1 - std::conj(z2)) * std::exp(g);
    }

    cplx delta() const { return (gamma_plus - cplx(0.0, 1.0) * gamma_minus) / std::sqrt(2.0); }
    double gaussian_exponent() const { return std::norm(gamma_plus) + std::norm(gamma_minus); }
};

// Closed-form Wigner function of the amplified field:
//   W = -Wbar_A Wbar_A' [ 1 - |e^{i Phi} Delta_A + Delta_A'|^2 ],
// Wbar = 4/pi^2 exp(-[|gamma_+|^2 + |gamma_-|^2]).
//
// Note on conventions: relative to the displaced-parity (standard
// symmetric-ordering) Wigner function of the simulator's states, this form
// describes the amplifier seeded with the balanced qubit
// (e^{-i Phi}|H> + |V>)/sqrt(2), with the alpha_2 coordinate sign-flipped and
// the beta_2 coordinate carrying an extra e^{i Phi}; the oracle tests encode
// exactly this map.  At the origin W = -16/pi^4 for every g and Phi.
inline double wigner_closed_form(const PhasePoint& pt, const AmplifierParams& params) {
    const SqueezedVariables a(pt.alpha1, pt.alpha2, params.g);
    const SqueezedVariables ap(pt.beta1, pt.beta2, params.g);
    const double wbar_a = 4.0 / (pi * pi) * std::exp(-a.gaussian_exponent());
    const double wbar_ap = 4.0 / (pi * pi) * std::exp(-ap.gaussian_exponent());
    const cplx mix = std::exp(cplx(0.0, params.phi)) * a.delta() + ap.delta();
    return -wbar_a * wbar_ap * (1.0 - std::norm(mix));
}

namespace detail {

// Single-mode displacement operator on a truncated basis; built with four
// extra photons of headroom and cropped to control truncation bias.
inline Eigen::MatrixXcd displacement_matrix(cplx eta, int dim) {
    const int big = dim + 4;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(big, big);
    for (int n = 0; n < big - 1; ++n) {
        gen(n + 1, n) = eta * std::sqrt(double(n + 1));        // eta a^dag
        gen(n, n + 1) = -std::conj(eta) * std::sqrt(double(n + 1)); // -conj(eta) a
    }
    const Eigen::MatrixXcd d = gen.exp();
    return d.topLeftCorner(dim, dim);
}

// Dense amplitude tensor over the per-mode truncated product basis.
struct ModeTensor {
    int dim;
    std::vector<cplx> data; // index ((a*dim + b)*dim + c)*dim + d for (1h,1v,2h,2v)

    explicit ModeTensor(int dim_) : dim(dim_), data(static_cast<std::size_t>(dim_) * dim_ * dim_ * dim_, cplx(0.0)) {}

    std::size_t flat(int a, int b, int c, int d) const {
        return ((static_cast<std::size_t>(a) * dim + b) * dim + c) * dim + d;
    }

    static ModeTensor from_state(const StateVector& s) {
        ModeTensor t(s.cutoff() + 1);
        for (const auto& [k, a] : s.amplitudes())
            t.data[t.flat(k[Mode::k1h], k[Mode::k1v], k[Mode::k2h], k[Mode::k2v])] = a;
        return t;
    }

    // applies a dim x dim matrix to one mode index
    void apply(const Eigen::MatrixXcd& m, int mode) {
        std::vector<cplx> out(data.size(), cplx(0.0));
        const int d = dim;
        std::array<int, 4> idx{};
        for (idx[0] = 0; idx[0] < d; ++idx[0])
            for (idx[1] = 0; idx[1] < d; ++idx[1])
                for (idx[2] = 0; idx[2] < d; ++idx[2])
                    for (idx[3] = 0; idx[3] < d; ++idx[3]) {
                        const cplx v = data[flat(idx[0], idx[1], idx[2], idx[3])];
                        if (v == cplx(0.0)) continue;
                        auto target = idx;
                        for (int r = 0; r < d; ++r) {
                            target[mode] = r;
                            out[flat(target[0], target[1], target[2], target[3])] += m(r, idx[mode]) * v;
                        }
                    }
        data.swap(out);
    }
};

} // namespace detail

struct CharacteristicValue {
    cplx value;
    bool accuracy_warning = false;
};

// Symmetrically-ordered characteristic value
//   <Psi| D_1h(eta1) D_2v(eta2) D_1v(xi1) D_2h(xi2) |Psi>
// evaluated with dense displacement matrices on the truncated basis.
inline CharacteristicValue characteristic_oracle(const StateVector& state, cplx eta1, cplx eta2,
                                                 cplx xi1, cplx xi2) {
    if (state.leakage() >= 1e-6)
        throw Error(ErrorKind::invalid_arguments, "state leakage too large for the characteristic oracle");
    CharacteristicValue out;
    const double max_arg = std::max({std::abs(eta1), std::abs(eta2), std::abs(xi1), std::abs(xi2)});
    out.accuracy_warning = max_arg > 2.0;

    detail::ModeTensor t = detail::ModeTensor::from_state(state);
    const int dim = t.dim;
    t.apply(detail::displacement_matrix(eta1, dim), 0); // 1h
    t.apply(detail::displacement_matrix(xi1, dim), 1);  // 1v
    t.apply(detail::displacement_matrix(xi2, dim), 2);  // 2h
    t.apply(detail::displacement_matrix(eta2, dim), 3); // 2v

    cplx acc = 0.0;
    for (const auto& [k, a] : state.amplitudes())
        acc += std::conj(a) * t.data[t.flat(k[Mode::k1h], k[Mode::k1v], k[Mode::k2h], k[Mode::k2v])];
    out.value = acc;
    return out;
}

// A 2-plane through the 8-dimensional phase space: two active complex
// coordinates (each swept along a fixed complex direction), the rest pinned.
struct PhasePlane {
    int coord1 = 0;
    int coord2 = 2;
    cplx dir1{1.0, 0.0};
    cplx dir2{1.0, 0.0};
    PhasePoint base{};
};

struct GridSpec {
    double min1 = -3.0, max1 = 3.0, step1 = 0.25;
    double min2 = -3.0, max2 = 3.0, step2 = 0.25;

    long points1() const { return static_cast<long>(std::floor((max1 - min1) / step1 + 1e-9)) + 1; }
    long points2() const { return static_cast<long>(std::floor((max2 - min2) / step2 + 1e-9)) + 1; }
};

struct ScanRow {
    cplx coord1;
    cplx coord2;
    double w;
};

struct NegativityScan {
    std::vector<ScanRow> rows;
    double min_w = 0.0;
    double negative_fraction = 0.0;
};

inline NegativityScan negativity_scan(const PhasePlane& plane, const GridSpec& grid,
                                      const AmplifierParams& params) {
    if (grid.step1 <= 0.0 || grid.step2 <= 0.0)
        throw Error(ErrorKind::invalid_arguments, "grid step must be positive");
    const long total = grid.points1() * grid.points2();
    if (total > 1000000L)
        throw Error(ErrorKind::resource_limit, "grid of " + std::to_string(total) + " points exceeds 10^6");
    NegativityScan scan;
    scan.rows.reserve(total);
    long negatives = 0;
    double min_w = std::numeric_limits<double>::infinity();
    for (long i = 0; i < grid.points1(); ++i) {
        const double s = grid.min1 + i * grid.step1;
        for (long j = 0; j < grid.points2(); ++j) {
            const double t = grid.min2 + j * grid.step2;
            PhasePoint pt = plane.base;
            pt.coord(plane.coord1) += s * plane.dir1;
            pt.coord(plane.coord2) += t * plane.dir2;
            const double w = wigner_closed_form(pt, params);
            scan.rows.push_back({pt.coord(plane.coord1), pt.coord(plane.coord2), w});
            if (w < 0.0) ++negatives;
            min_w = std::min(min_w, w);
        }
    }
    scan.min_w = min_w;
    scan.negative_fraction = static_cast<double>(negatives) / static_cast<double>(total);
    return scan;
}

} // namespace qiopa

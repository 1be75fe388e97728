#pragma once

#include "qiopa/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace qiopa {

// Mode ordering is fixed globally as (1h, 1v, 2h, 2v).  Amplifier A couples
// (1h, 2v) and amplifier A' couples (1v, 2h).
enum class Mode : int { k1h = 0, k1v = 1, k2h = 2, k2v = 3 };

inline const char* mode_label(Mode m) {
    switch (m) {
        case Mode::k1h: return "1h";
        case Mode::k1v: return "1v";
        case Mode::k2h: return "2h";
        case Mode::k2v: return "2v";
    }
    return "?";
}

inline Mode mode_from_label(const std::string& s) {
    if (s == "1h") return Mode::k1h;
    if (s == "1v") return Mode::k1v;
    if (s == "2h") return Mode::k2h;
    if (s == "2v") return Mode::k2v;
    throw Error(ErrorKind::invalid_mode, "unknown mode label '" + s + "'");
}

enum class SpatialMode { k1, k2 };

// Occupation numbers of the four field modes.
struct OccupationKet {
    std::array<int, 4> n{0, 0, 0, 0};

    OccupationKet() = default;
    OccupationKet(int n1h, int n1v, int n2h, int n2v) : n{n1h, n1v, n2h, n2v} {}

    int operator[](Mode m) const { return n[static_cast<int>(m)]; }
    int& operator[](Mode m) { return n[static_cast<int>(m)]; }

    int total() const { return n[0] + n[1] + n[2] + n[3]; }
    int k1_total() const { return n[0] + n[1]; }
    int k2_total() const { return n[2] + n[3]; }

    auto operator<=>(const OccupationKet&) const = default;
};

// Sparse complex superposition over occupation kets with a truncation budget.
// Weight pushed past the cutoff (or pruned away) is accumulated in `leakage`
// and never silently renormalized.
class StateVector {
  public:
    static constexpr double prune_threshold = 1e-15;

    explicit StateVector(int cutoff = 12) : cutoff_(cutoff) {
        if (cutoff < 0) throw Error(ErrorKind::invalid_arguments, "negative cutoff");
    }

    static StateVector basis_ket(const OccupationKet& k, int cutoff) {
        StateVector s(cutoff);
        s.accumulate(k, 1.0);
        return s;
    }

    int cutoff() const { return cutoff_; }
    double leakage() const { return leakage_; }
    void add_leakage(double w) { leakage_ += w; }

    const std::map<OccupationKet, cplx>& amplitudes() const { return amps_; }
    bool empty() const { return amps_.empty(); }
    std::size_t size() const { return amps_.size(); }

    cplx amplitude(const OccupationKet& k) const {
        auto it = amps_.find(k);
        return it == amps_.end() ? cplx(0.0) : it->second;
    }

    // Adds amplitude to a ket; kets past the cutoff contribute |a|^2 to leakage.
    void accumulate(const OccupationKet& k, cplx a) {
        if (a == cplx(0.0)) return;
        if (std::min({k.n[0], k.n[1], k.n[2], k.n[3]}) < 0)
            throw Error(ErrorKind::internal, "negative occupation number");
        if (k.total() > cutoff_) {
            leakage_ += std::norm(a);
            return;
        }
        amps_[k] += a;
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& [k, a] : amps_) s += std::norm(a);
        return s;
    }

    // Drops sub-threshold amplitudes, moving their weight to leakage.
    void prune(double threshold = prune_threshold) {
        for (auto it = amps_.begin(); it != amps_.end();) {
            if (std::abs(it->second) < threshold) {
                leakage_ += std::norm(it->second);
                it = amps_.erase(it);
            } else {
                ++it;
            }
        }
    }

    StateVector& operator*=(cplx c) {
        for (auto& [k, a] : amps_) a *= c;
        return *this;
    }

    StateVector& operator+=(const StateVector& o) {
        for (const auto& [k, a] : o.amps_) accumulate(k, a);
        leakage_ += o.leakage_;
        return *this;
    }

  private:
    int cutoff_;
    double leakage_ = 0.0;
    std::map<OccupationKet, cplx> amps_;
};

// a^dag on one mode: |n> -> sqrt(n+1)|n+1>.
inline StateVector create(const StateVector& state, Mode mode) {
    StateVector out(state.cutoff());
    out.add_leakage(state.leakage());
    for (const auto& [k, a] : state.amplitudes()) {
        OccupationKet up = k;
        const int n = up[mode];
        up[mode] = n + 1;
        out.accumulate(up, a * std::sqrt(double(n + 1)));
    }
    out.prune();
    return out;
}

// a on one mode: |n> -> sqrt(n)|n-1>; the vacuum component maps to zero.
inline StateVector annihilate(const StateVector& state, Mode mode) {
    StateVector out(state.cutoff());
    out.add_leakage(state.leakage());
    for (const auto& [k, a] : state.amplitudes()) {
        const int n = k[mode];
        if (n == 0) continue;
        OccupationKet down = k;
        down[mode] = n - 1;
        out.accumulate(down, a * std::sqrt(double(n)));
    }
    out.prune();
    return out;
}

// <a|b>, conjugate-linear in the first argument.
inline cplx inner(const StateVector& a, const StateVector& b) {
    // iterate over the sparser state
    const auto& small = a.size() <= b.size() ? a : b;
    cplx s = 0.0;
    for (const auto& [k, amp] : small.amplitudes()) {
        s += std::conj(a.amplitude(k)) * b.amplitude(k);
    }
    return s;
}

// Projection onto the (n photons on k1, m photons on k2) sector.
inline StateVector project_sector(const StateVector& state, int k1_photons, int k2_photons) {
    StateVector out(state.cutoff());
    for (const auto& [k, a] : state.amplitudes()) {
        if (k.k1_total() == k1_photons && k.k2_total() == k2_photons) out.accumulate(k, a);
    }
    return out;
}

// Normalized complex amplitude pair on the {|H>,|V>} basis.
struct PolarizationQubit {
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};

    PolarizationQubit() = default;
    PolarizationQubit(cplx a, cplx b) : alpha(a), beta(b) {
        const double n2 = std::norm(alpha) + std::norm(beta);
        if (std::abs(n2 - 1.0) > 1e-12)
            throw Error(ErrorKind::invalid_arguments, "qubit amplitudes not normalized");
    }

    static PolarizationQubit h() { return {}; }
    static PolarizationQubit v() { return PolarizationQubit(0.0, 1.0); }
    // (|H>+|V>)/sqrt(2)
    static PolarizationQubit d() { return PolarizationQubit(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)); }
    // (|H>+i|V>)/sqrt(2)
    static PolarizationQubit l() { return PolarizationQubit(1.0 / std::sqrt(2.0), cplx(0.0, 1.0 / std::sqrt(2.0))); }

    // The orthogonal qubit conj(beta)|H> - conj(alpha)|V>.
    PolarizationQubit orthogonal() const {
        return PolarizationQubit(std::conj(beta), -std::conj(alpha));
    }
};

} // namespace qiopa

#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qiopa {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Failure taxonomy shared by the library and the CLI exit-code mapping.
enum class ErrorKind {
    invalid_mode,
    invalid_arguments,
    not_a_state,
    unsupported_configuration,
    empty_sector,
    insufficient_statistics,
    resource_limit,
    io_error,
    internal
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

class InsufficientStatisticsError : public Error {
  public:
    InsufficientStatisticsError(const std::string& msg, std::int64_t signal, std::int64_t noise)
        : Error(ErrorKind::insufficient_statistics, msg), signal_counts(signal), noise_counts(noise) {}
    std::int64_t signal_counts;
    std::int64_t noise_counts;
};

// Exact rational for the closed-form fidelities (integer N, M inputs).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw Error(ErrorKind::invalid_arguments, "rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
};

// Locale-independent float formatting, 12 significant digits (golden-file contract).
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
}

// Deterministic uniform generator shared by scan drivers, the detection
// simulator, and tests; mt19937_64 output mapped to [0, 1).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(u01() * (hi - lo + 1));
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

} // namespace qiopa

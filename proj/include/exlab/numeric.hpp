#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace exlab {

/// Neumaier's variant of Kahan summation.
template <typename T> class CompensatedSum {
public:
    void add(T v) {
        const T t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum &operator+=(T v) {
        add(v);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

class CompensatedComplexSum {
public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<double> re_;
    CompensatedSum<double> im_;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286;

/// Float formatted with 12 significant digits ("%.12g"); the project-wide output format.
inline std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// v rounded to 12 significant digits, for JSON emission.
inline double round_sig12(double v) { return std::strtod(format_sig12(v).c_str(), nullptr); }

} // namespace exlab

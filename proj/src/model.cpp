#include "nuqwalk/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nuqwalk {

namespace {

constexpr double kPi = std::numbers::pi;

// Wrap k into the even-site Brillouin zone [-pi/2, pi/2).
double wrap_bz(double k) {
    double r = std::fmod(k + kPi / 2.0, kPi);
    if (r < 0.0) r += kPi;
    return r - kPi / 2.0;
}

} // namespace

void ModelParams::validate() const {
    if (!std::isfinite(theta1) || !std::isfinite(theta2) || !std::isfinite(phi) ||
        !std::isfinite(gamma)) {
        throw std::invalid_argument("model parameters must be finite");
    }
    if (steps < 0) throw std::invalid_argument("steps must be non-negative");
}

const char* to_string(PtPhase p) {
    switch (p) {
        case PtPhase::Unbroken: return "unbroken";
        case PtPhase::ExceptionalPoint: return "exceptional_point";
        case PtPhase::Broken: return "broken";
    }
    return "?";
}

Mat2 coin_op(double theta) {
    const double c = std::cos(theta);
    const cplx is(0.0, std::sin(theta));
    Mat2 r;
    r(0, 0) = c;
    r(0, 1) = is;
    r(1, 0) = is;
    r(1, 1) = c;
    return r;
}

Mat2 gain_loss_op(double gamma) {
    return Mat2::diag(std::exp(gamma), std::exp(-gamma));
}

Mat2 phase_op(double phi) {
    return Mat2::diag(std::polar(1.0, phi), std::polar(1.0, -phi));
}

Mat2 shift_mode_op(double k) {
    return Mat2::diag(std::polar(1.0, k), std::polar(1.0, -k));
}

Mat2 mode_operator(const ModelParams& p, double k) {
    const Mat2 s = shift_mode_op(k);
    const Mat2 ph = phase_op(p.phi);
    return s * gain_loss_op(p.gamma) * ph * coin_op(p.theta2) *
           s * gain_loss_op(-p.gamma) * ph * coin_op(p.theta1);
}

double dispersion_f(const ModelParams& p, double k) {
    return std::cos(p.theta1) * std::cos(p.theta2) * std::cos(2.0 * (k + p.phi)) -
           std::sin(p.theta1) * std::sin(p.theta2) * std::cosh(2.0 * p.gamma);
}

cplx quasi_energy(const ModelParams& p, double k) {
    return std::acos(cplx(dispersion_f(p, k), 0.0));
}

PhaseClass classify_phase(const ModelParams& p) {
    // f(k) = a x - b with x = cos(2(k+phi)) sweeping [-1, 1]; |f| is extremal
    // at the two cosine extremes.
    const double a = std::cos(p.theta1) * std::cos(p.theta2);
    const double b = std::sin(p.theta1) * std::sin(p.theta2) * std::cosh(2.0 * p.gamma);
    const double f_plus = std::abs(a - b);   // x = +1, k = -phi (mod pi)
    const double f_minus = std::abs(-a - b); // x = -1, k = -phi + pi/2 (mod pi)

    PhaseClass r;
    r.f_max = std::max(f_plus, f_minus);
    if (r.f_max < 1.0 - kPhaseTol) {
        r.phase = PtPhase::Unbroken;
    } else {
        r.phase = std::abs(r.f_max - 1.0) <= kPhaseTol ? PtPhase::ExceptionalPoint
                                                       : PtPhase::Broken;
        if (f_plus >= f_minus - 1e-15) r.gap_k.push_back(wrap_bz(-p.phi));
        if (f_minus >= f_plus - 1e-15) r.gap_k.push_back(wrap_bz(-p.phi + kPi / 2.0));
    }
    return r;
}

std::optional<double> exceptional_gamma(double theta1, double theta2) {
    const double a = std::abs(std::cos(theta1) * std::cos(theta2));
    const double s = std::abs(std::sin(theta1) * std::sin(theta2));
    if (s < 1e-15) return std::nullopt;          // cosh term absent from the dispersion
    if (a + s >= 1.0) return std::nullopt;       // gapless or broken already at gamma = 0
    return 0.5 * std::acosh((1.0 - a) / s);
}

std::vector<double> mode_grid(int sites) {
    std::vector<double> ks(static_cast<size_t>(sites));
    for (int j = 0; j < sites; ++j) {
        ks[static_cast<size_t>(j)] = -kPi / 2.0 + static_cast<double>(j) * kPi / sites;
    }
    return ks;
}

} // namespace nuqwalk

#include "ofudiff/state_bound.hpp"

#include "ofudiff/model.hpp"

#include <cmath>
#include <numbers>

namespace ofudiff {

StateBound StateBound::from_model(const ModelSpec& model, const Vec& x0) {
    require(model.lyapunov().has_value(), "StateBound: model carries no Lyapunov certificate");
    const LyapunovSpec& lyap = *model.lyapunov();
    const double s = model.sigma_bar_op();
    const double l0 = model.meta().lipschitz_L0;
    const double sqd = std::sqrt(static_cast<double>(model.d()));

    StateBound b;
    b.ell_v = lyap.ell_v;
    b.L_v = lyap.L_v;
    b.M_v = lyap.M_v;
    b.c_v = lyap.c_v;
    b.sigma_op = s;
    b.x0_norm = x0.norm();
    b.C_H = lyap.L_v * ((1.0 + l0) * s * std::sqrt(8.0 * model.d() / std::numbers::e) + 1.0 + s * sqd);
    b.c_v_prime = lyap.M_v * l0 * (1.0 + s * sqd) + 2.0 * lyap.M_v * s * sqd +
                  0.5 * lyap.M_v_prime * s * s;
    return b;
}

double StateBound::h_delta(std::size_t n, double delta) const {
    require(delta > 0.0 && delta < 1.0, "h_delta: delta in (0,1)");
    const double np1 = static_cast<double>(n) + 1.0;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double tail = std::sqrt(2.0 / c_v * std::log(pi2 * np1 * np1 * np1 / (6.0 * delta)));
    return (C_H + L_v * x0_norm) / ell_v + c_v_prime / (ell_v * c_v) + (M_v / ell_v) * sigma_op * tail;
}

}  // namespace ofudiff

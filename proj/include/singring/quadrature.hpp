#pragma once

#include <array>
#include <cmath>

namespace singring {

// Gauss-Kronrod 7/15 pair (QUADPACK abscissae).  The Kronrod sum is the
// integral estimate, |K15 - G7| the per-panel error estimate.
struct PanelResult {
    double value = 0.0;
    double err = 0.0;
};

namespace gk15_detail {
inline constexpr std::array<double, 8> xgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> wg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
}  // namespace gk15_detail

template <typename F>
PanelResult gk15(F&& f, double a, double b) {
    using namespace gk15_detail;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double fl = f(c - h * xgk[i]);
        const double fr = f(c + h * xgk[i]);
        kron += wgk[i] * (fl + fr);
        if (i % 2 == 1) gauss += wg[i / 2] * (fl + fr);
    }
    return {kron * h, std::abs(kron - gauss) * h};
}

// Node/weight view of the same rule on [a, b], for callers that evaluate the
// integrand in a custom order (e.g. warm-started solver sweeps).  wgauss is
// zero on Kronrod-only nodes.
struct PanelNodes {
    std::array<double, 15> x{}, wkron{}, wgauss{};
};

inline PanelNodes gk15_nodes(double a, double b) {
    using namespace gk15_detail;
    PanelNodes out;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    int k = 0;
    for (int i = 0; i < 7; ++i) {
        out.x[k] = c - h * xgk[i];
        out.wkron[k] = h * wgk[i];
        out.wgauss[k] = (i % 2 == 1) ? h * wg[i / 2] : 0.0;
        ++k;
        out.x[k] = c + h * xgk[i];
        out.wkron[k] = h * wgk[i];
        out.wgauss[k] = (i % 2 == 1) ? h * wg[i / 2] : 0.0;
        ++k;
    }
    out.x[k] = c;
    out.wkron[k] = h * wgk[7];
    out.wgauss[k] = h * wg[3];
    return out;
}

}  // namespace singring

#ifndef BASKOPT_DIVERGENCE_HPP
#define BASKOPT_DIVERGENCE_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "baskopt/errors.hpp"
#include "baskopt/special_functions.hpp"

namespace baskopt {

/// Similarity metric used when comparing posterior distributions.
enum class DivergenceKind { Jsd, Hellinger };

namespace detail {

inline double log_beta_pdf(double x, const BetaShapes& s) {
    if (x <= 0.0) {
        if (s.alpha == 1.0) return s.beta >= 1.0 ? std::log(s.beta) : 0.0;
        return s.alpha > 1.0 ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
    }
    if (x >= 1.0) {
        if (s.beta == 1.0) return s.alpha >= 1.0 ? std::log(s.alpha) : 0.0;
        return s.beta > 1.0 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
    }
    return (s.alpha - 1.0) * std::log(x) + (s.beta - 1.0) * std::log1p(-x) -
           log_beta(s.alpha, s.beta);
}

// Integrand of JSD(P,Q) = 1/2 (KLD(P,M) + KLD(Q,M)), M = (P+Q)/2, with the
// convention t*ln(t/m) := 0 where the density t vanishes.
struct JsdIntegrand {
    BetaShapes p, q;

    double operator()(double x) const {
        const double lp = log_beta_pdf(x, p);
        const double lq = log_beta_pdf(x, q);
        // Densities with shapes >= 1 are bounded; an infinite endpoint value
        // (shape < 1) is a measure-zero singularity and contributes nothing.
        if (lp == std::numeric_limits<double>::infinity() ||
            lq == std::numeric_limits<double>::infinity())
            return 0.0;
        const double pv = std::exp(lp);
        const double qv = std::exp(lq);
        const double m = 0.5 * (pv + qv);
        if (m <= 0.0) return 0.0;
        const double lm = std::log(m);
        double acc = 0.0;
        if (pv > 0.0) acc += pv * (lp - lm);
        if (qv > 0.0) acc += qv * (lq - lm);
        return 0.5 * acc;
    }
};

// Adaptive Simpson on [a,b] with absolute tolerance, Richardson-corrected.
template <class F>
double adaptive_simpson_rec(const F& f, double a, double m, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol || (b - a) < 1e-14)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw numeric_error("adaptive quadrature did not converge", 48);
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, tol * 0.5,
                                depth - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, tol * 0.5,
                                depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

inline double beta_mode_clamped(const BetaShapes& s) {
    if (s.alpha + s.beta <= 2.0) return 0.5;
    return std::clamp((s.alpha - 1.0) / (s.alpha + s.beta - 2.0), 1e-6, 1.0 - 1e-6);
}

} // namespace detail

/// Jensen-Shannon divergence (natural logarithm) between two beta
/// distributions, by adaptive quadrature on [0,1]. Result lies in [0, ln 2].
inline double jsd(const BetaShapes& p, const BetaShapes& q, double tol = 1e-9) {
    p.validate();
    q.validate();
    detail::JsdIntegrand f{p, q};
    // Split at the density modes so the adaptive pass starts aligned with the
    // peaks, then integrate each panel to a proportional share of `tol`.
    double knots[4] = {0.0, detail::beta_mode_clamped(p),
                       detail::beta_mode_clamped(q), 1.0};
    std::sort(knots, knots + 4);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (knots[i + 1] - knots[i] < 1e-15) continue;
        total += detail::adaptive_simpson(f, knots[i], knots[i + 1], tol / 3.0);
    }
    return std::max(0.0, total);
}

/// Hellinger distance between two beta distributions, in closed form:
/// 1 - B((a1+a2)/2, (b1+b2)/2) / sqrt(B(a1,b1) B(a2,b2)).
inline double hellinger(const BetaShapes& p, const BetaShapes& q) {
    p.validate();
    q.validate();
    const double log_affinity =
        log_beta(0.5 * (p.alpha + q.alpha), 0.5 * (p.beta + q.beta)) -
        0.5 * (log_beta(p.alpha, p.beta) + log_beta(q.alpha, q.beta));
    return std::clamp(1.0 - std::exp(log_affinity), 0.0, 1.0);
}

/// Divergence of the selected kind; both variants return values in [0, 1]
/// usable as 1 - similarity.
inline double divergence(DivergenceKind kind, const BetaShapes& p,
                         const BetaShapes& q) {
    return kind == DivergenceKind::Jsd ? jsd(p, q) : hellinger(p, q);
}

} // namespace baskopt

#endif

#include "peakbound/smith_capacity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#ifdef PB_SMITH_DEBUG
#include <cstdio>
#endif
#include <utility>
#include <numeric>
#include <sstream>

namespace peakbound {

double gap_converse(double A, double P) { return std::exp(log_gap_converse(A, P)); }

double log_gap_converse(double A, double P) {
    if (!(A > 0.0 && P > 0.0)) throw std::domain_error("gap_converse: need A, P > 0");
    double lp = std::log1p(P);
    double a1 = std::sqrt(A * A + P * lp);
    double b = std::sqrt(1.0 + P) * a1 / P + A / P;
    double pref = (std::sqrt(1.0 + P) - 1.0) * lp / (A + a1);
    return 2.0 * std::log(pref) + 2.0 * log_normal_pdf(b) + std::log(8.0);
}

double gap_achievability(double A, double P) {
    if (!(A > 0.0 && P > 0.0)) throw std::domain_error("gap_achievability: need A, P > 0");
    double theta = A / std::sqrt(P);
    double q = q_function(theta);
    double denom = 1.0 - 2.0 * q;
    // phi(theta)/Q(theta) via Mills: stable far into the tail.
    double ratio = normal_pdf(theta) / q;
    return (q * std::log1p(A * std::sqrt(P) / (1.0 + P) * ratio) + binary_entropy_nats(2.0 * q)) /
           denom;
}

double log_gap_achievability(double A, double P) {
    double g = gap_achievability(A, P);
    if (g > 0.0) return std::log(g);
    // Deep tail: the h(2Q) term dominates; h(x) ~ x ln(1/x) with x = 2Q(theta).
    double theta = A / std::sqrt(P);
    double log_2q = std::log(2.0) + log_normal_pdf(theta) - std::log(theta);
    return log_2q + std::log(-log_2q);
}

TruncatedGaussianStats truncated_gaussian_stats(double A, double P) {
    if (!(A > 0.0 && P > 0.0)) throw std::domain_error("truncated_gaussian_stats: need A, P > 0");
    TruncatedGaussianStats st;
    st.theta = A / std::sqrt(P);
    double q = q_function(st.theta);
    double phi = normal_pdf(st.theta);
    st.inner_power = P - 2.0 * st.theta * P * phi / (1.0 - 2.0 * q);
    st.outer_power = P + st.theta * P * phi / q;
    return st;
}

// ---------------------------------------------------------------------------
// Output-entropy quadrature for an arbitrary discrete input.

namespace {

double mixture_neg_plogp(const std::vector<double>& xs, const std::vector<double>& ps, double y) {
    double f = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) f += ps[i] * normal_pdf(y - xs[i]);
    return f > 0.0 ? -f * std::log(f) : 0.0;
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double tol,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

} // namespace

double mutual_info_discrete_awgn(const std::vector<double>& support,
                                 const std::vector<double>& probs) {
    if (support.size() != probs.size() || support.empty())
        throw std::domain_error("mutual_info_discrete_awgn: support/probs size mismatch");
    double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::domain_error("mutual_info_discrete_awgn: probs must sum to 1");

    std::vector<double> xs, ps;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0) throw std::domain_error("mutual_info_discrete_awgn: negative mass");
        if (probs[i] > 0.0) {
            xs.push_back(support[i]);
            ps.push_back(probs[i]);
        }
    }
    double x_min = *std::min_element(xs.begin(), xs.end());
    double x_max = *std::max_element(xs.begin(), xs.end());
    if (x_max - x_min < 1e-300) return 0.0; // deterministic input

    auto g = [&](double y) { return mixture_neg_plogp(xs, ps, y); };
    double a = x_min - 10.0, b = x_max + 10.0;
    // Split at the atoms so the adaptive rule sees each mode.
    std::vector<double> knots{a};
    for (double x : xs) knots.push_back(x);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    double h_out = 0.0;
    for (size_t k = 0; k + 1 < knots.size(); ++k) {
        double lo = knots[k], hi = knots[k + 1];
        if (hi - lo < 1e-14) continue;
        double mid = 0.5 * (lo + hi);
        h_out += adaptive_simpson(g, lo, hi, g(lo), g(mid), g(hi),
                                  1e-10 / static_cast<double>(knots.size()), 48);
    }
    constexpr double kHalfLog2PiE = 1.41893853320467274178; // (1/2) ln(2*pi*e)
    return h_out - kHalfLog2PiE;
}

// ---------------------------------------------------------------------------
// Grid solver. Three layers:
//   1. capacity iteration with SQUAREM extrapolation (globally stable),
//   2. damped Newton polish at fixed multiplier (fast local cleanup),
//   3. joint Newton on (weights, multiplier) with the power constraint as an
//      explicit KKT row, which is what actually closes the certificate when
//      the constraint is active: the fixed-multiplier problem is nearly
//      singular along the direction that trades variance for entropy.

namespace {

struct GridProblem {
    std::vector<double> x;   // input grid
    std::vector<double> y;   // quadrature grid
    double hy;               // quadrature spacing
    int win;                 // half window in y-nodes (kernel support radius)
    std::vector<int> j0;     // first y-index of each kernel row
    std::vector<std::vector<double>> W; // kernel rows phi(y_j - x_i)
    std::vector<double> EW;  // h * sum W ln W per row

    GridProblem(double A, int N, double spacing, double pad) {
        x.resize(N);
        for (int i = 0; i < N; ++i)
            x[i] = -A + 2.0 * A * static_cast<double>(i) / static_cast<double>(N - 1);
        double lo = -A - pad, hi = A + pad;
        int ny = static_cast<int>(std::ceil((hi - lo) / spacing)) + 1;
        hy = (hi - lo) / static_cast<double>(ny - 1);
        y.resize(ny);
        for (int j = 0; j < ny; ++j) y[j] = lo + hy * j;
        win = static_cast<int>(std::ceil(pad / hy));
        W.resize(N);
        EW.resize(N);
        j0.resize(N);
        for (int i = 0; i < N; ++i) {
            int jc = static_cast<int>(std::lround((x[i] - lo) / hy));
            int a = std::max(0, jc - win), b = std::min(ny - 1, jc + win);
            j0[i] = a;
            W[i].resize(b - a + 1);
            double ew = 0.0;
            for (int j = a; j <= b; ++j) {
                double w = normal_pdf(y[j] - x[i]);
                W[i][j - a] = w;
                if (w > 0.0) ew += w * std::log(w);
            }
            EW[i] = ew * hy;
        }
    }

    int nx() const { return static_cast<int>(x.size()); }
    int ny() const { return static_cast<int>(y.size()); }

    void output_density(const std::vector<double>& p, std::vector<double>& q) const {
        q.assign(y.size(), 0.0);
        for (int i = 0; i < nx(); ++i) {
            if (p[i] <= 0.0) continue;
            const auto& row = W[i];
            double pi = p[i];
            double* qp = q.data() + j0[i];
            for (size_t k = 0; k < row.size(); ++k) qp[k] += pi * row[k];
        }
    }

    // D_i = EW_i - h * sum_j W_ij ln q_j (relative entropy to the mixture).
    void divergences(const std::vector<double>& lq, std::vector<double>& D) const {
        D.resize(x.size());
        for (int i = 0; i < nx(); ++i) {
            const auto& row = W[i];
            const double* lp = lq.data() + j0[i];
            double s = 0.0;
            for (size_t k = 0; k < row.size(); ++k) s += row[k] * lp[k];
            D[i] = EW[i] - hy * s;
        }
    }
};

struct LagrangianState {
    std::vector<double> p, q, lq, D, t;
    double lower = 0.0, upper = 0.0, I = 0.0, power = 0.0;
};

void evaluate(const GridProblem& g, double s, LagrangianState& st) {
    g.output_density(st.p, st.q);
    st.lq.resize(st.q.size());
    for (size_t j = 0; j < st.q.size(); ++j) {
        if (st.q[j] > 0.0) {
            st.lq[j] = std::log(st.q[j]);
            continue;
        }
        // q underflowed: bound ln q from below by its largest mixture term,
        // computed in log space. (A fixed floor here would overstate the
        // density and silently weaken the dual bound.)
        double best = -1e300;
        for (int i = 0; i < g.nx(); ++i)
            if (st.p[i] > 0.0)
                best = std::max(best, std::log(st.p[i]) + log_normal_pdf(g.y[j] - g.x[i]));
        st.lq[j] = best;
    }
    g.divergences(st.lq, st.D);
    int n = g.nx();
    st.t.resize(n);
    st.I = 0.0;
    st.power = 0.0;
    double lo = 0.0, hi = -1e300;
    for (int i = 0; i < n; ++i) {
        st.t[i] = st.D[i] - s * g.x[i] * g.x[i];
        st.I += st.p[i] * st.D[i];
        st.power += st.p[i] * g.x[i] * g.x[i];
        lo += st.p[i] * st.t[i];
        hi = std::max(hi, st.t[i]);
    }
    st.lower = lo;
    st.upper = hi;
}

void ba_step(const GridProblem& g, double s, LagrangianState& st) {
    evaluate(g, s, st);
    int n = g.nx();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        st.p[i] *= std::exp(st.t[i] - st.upper);
        sum += st.p[i];
    }
    for (int i = 0; i < n; ++i) st.p[i] /= sum;
    for (int i = 0; i < n / 2; ++i) { // keep the symmetric structure exact
        double m = 0.5 * (st.p[i] + st.p[n - 1 - i]);
        st.p[i] = st.p[n - 1 - i] = m;
    }
}

// Value of the Lagrangian objective I(p) - s E[X^2] for a given p.
double objective(const GridProblem& g, double s, const std::vector<double>& p) {
    std::vector<double> q;
    g.output_density(p, q);
    double hq = 0.0;
    for (double v : q)
        if (v > 0.0) hq -= v * std::log(v);
    hq *= g.hy;
    double val = hq;
    for (int i = 0; i < g.nx(); ++i)
        if (p[i] > 0.0) val += p[i] * (g.EW[i] - s * g.x[i] * g.x[i]);
    return val;
}

// Current support plus every grid point whose payoff beats the average
// (candidate new mass points).
std::vector<int> candidate_set(const GridProblem& g, const LagrangianState& st) {
    std::vector<int> S;
    for (int i = 0; i < g.nx(); ++i)
        if (st.p[i] > 0.0 || st.t[i] >= st.lower) S.push_back(i);
    return S;
}

// -H restricted to S: (-H)_ab = h * sum_j W_a W_b / q  (positive semidef).
Eigen::MatrixXd neg_hessian(const GridProblem& g, const LagrangianState& st,
                            const std::vector<int>& S) {
    int m = static_cast<int>(S.size());
    Eigen::MatrixXd nH(m, m);
    for (int a = 0; a < m; ++a) {
        int i = S[a];
        for (int b = a; b < m; ++b) {
            int j = S[b];
            int lo = std::max(g.j0[i], g.j0[j]);
            int hi = std::min(g.j0[i] + static_cast<int>(g.W[i].size()),
                              g.j0[j] + static_cast<int>(g.W[j].size()));
            double acc = 0.0;
            for (int jj = lo; jj < hi; ++jj) {
                double qv = st.q[jj];
                if (qv > 0.0) acc += g.W[i][jj - g.j0[i]] * g.W[j][jj - g.j0[j]] / qv;
            }
            nH(a, b) = nH(b, a) = acc * g.hy;
        }
    }
    return nH;
}

void apply_clipped(const std::vector<int>& S, const Eigen::VectorXd& dp, double step,
                   const std::vector<double>& p, std::vector<double>& p_new) {
    p_new = p;
    for (size_t a = 0; a < S.size(); ++a) p_new[S[a]] = std::max(0.0, p[S[a]] + step * dp(a));
    double sum = std::accumulate(p_new.begin(), p_new.end(), 0.0);
    for (auto& v : p_new) v /= sum;
}

void prune(std::vector<double>& p) {
    for (auto& v : p)
        if (v < 1e-15) v = 0.0;
}

// Polish of the weights at fixed multiplier. Phase A: Levenberg-damped
// Newton ascent on the objective (plain Newton is useless: neighbouring grid
// points have nearly identical kernel rows, so H is close to singular).
// Phase B: once objective gains drown in roundoff, undamped payoff-leveling
// steps through a rank-revealing solve, accepted on certificate improvement.
long newton_polish(const GridProblem& g, double s, LagrangianState& st, double tol) {
    long spent = 0;
    double mu = 0.0;
    double J = objective(g, s, st.p);
    for (int it = 0; it < 200; ++it) {
        evaluate(g, s, st);
        if (st.upper - st.lower <= tol) return spent;
        ++spent;
        std::vector<int> S = candidate_set(g, st);
        int m = static_cast<int>(S.size());
        Eigen::MatrixXd nH = neg_hessian(g, st, S);
        double hmax = nH.diagonal().maxCoeff();
        if (mu == 0.0) mu = 1e-10 * hmax;

        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + 1, m + 1);
        K.topLeftCorner(m, m) = nH;
        Eigen::VectorXd rhs(m + 1);
        for (int a = 0; a < m; ++a) {
            K(a, m) = K(m, a) = 1.0;
            rhs(a) = st.t[S[a]] - 1.0;
        }
        rhs(m) = 0.0;

        bool accepted = false;
        std::vector<double> p_new;
        for (int trial = 0; trial < 16 && !accepted; ++trial) {
            Eigen::MatrixXd Kd = K;
            for (int a = 0; a < m; ++a) Kd(a, a) += mu;
            Eigen::VectorXd sol = Kd.partialPivLu().solve(rhs);
            apply_clipped(S, sol.head(m), 1.0, st.p, p_new);
            double J_new = objective(g, s, p_new);
            if (J_new > J) {
                accepted = true;
                J = J_new;
            } else {
                mu *= 10.0;
            }
        }
        if (!accepted) break;
        st.p = p_new;
        prune(st.p);
        mu = std::max(mu / 3.0, 1e-12 * hmax);
#ifdef PB_SMITH_DEBUG
        fprintf(stderr, "  polish it=%d m=%d gap=%.3e J=%.12f mu=%.1e\n", it, m,
                st.upper - st.lower, J, mu);
#endif
    }

    // Phase B. The KKT solution satisfies t + H dp = c*1: the Newton step is
    // also the step that levels the payoffs across the support.
    LagrangianState trial;
    for (int it = 0; it < 40; ++it) {
        evaluate(g, s, st);
        double gap = st.upper - st.lower;
        if (gap <= tol) return spent;
        ++spent;
        std::vector<int> S = candidate_set(g, st);
        int m = static_cast<int>(S.size());
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + 1, m + 1);
        K.topLeftCorner(m, m) = neg_hessian(g, st, S);
        Eigen::VectorXd rhs(m + 1);
        for (int a = 0; a < m; ++a) {
            K(a, m) = K(m, a) = 1.0;
            rhs(a) = st.t[S[a]] - 1.0;
        }
        rhs(m) = 0.0;
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        cod.setThreshold(1e-13);
        cod.compute(K);
        Eigen::VectorXd sol = cod.solve(rhs);
        bool accepted = false;
        for (double step = 1.0; step > 1e-3 && !accepted; step *= 0.5) {
            apply_clipped(S, sol.head(m), step, st.p, trial.p);
            evaluate(g, s, trial);
            if (trial.upper - trial.lower < 0.95 * gap) {
                st.p = trial.p;
                accepted = true;
            }
        }
#ifdef PB_SMITH_DEBUG
        fprintf(stderr, "  level it=%d m=%d gap=%.3e acc=%d\n", it, m, st.upper - st.lower,
                accepted ? 1 : 0);
#endif
        if (!accepted) break;
    }
    evaluate(g, s, st);
    return spent;
}

// One SQUAREM cycle: two capacity-iteration steps, a squared-extrapolation
// along the dominant slow mode, and a stabilization step to stay admissible.
// Returns the number of capacity-iteration steps spent.
long squarem_cycle(const GridProblem& g, double s, LagrangianState& st) {
    std::vector<double> p0 = st.p;
    ba_step(g, s, st);
    std::vector<double> p1 = st.p; // F(p0)
    ba_step(g, s, st);
    std::vector<double> p2 = st.p; // F(F(p0))
    long spent = 2;
    double nr = 0.0, nv = 0.0;
    for (size_t i = 0; i < p0.size(); ++i) {
        double r = p1[i] - p0[i];
        double v = p2[i] - p1[i] - r;
        nr += r * r;
        nv += v * v;
    }
    if (nv > 1e-300) {
        double alpha = std::min(-1.0, -std::sqrt(nr / nv));
        double sum = 0.0;
        for (size_t i = 0; i < p0.size(); ++i) {
            double r = p1[i] - p0[i];
            double v = p2[i] - p1[i] - r;
            double val = p0[i] - 2.0 * alpha * r + alpha * alpha * v;
            st.p[i] = std::max(0.0, val);
            sum += st.p[i];
        }
        if (sum > 0.0) {
            for (auto& v : st.p) v /= sum;
            ba_step(g, s, st); // stabilization step keeps the iterate admissible
            ++spent;
        } else {
            st.p = p2;
        }
    }
    return spent;
}

struct LagrangianSolution {
    double I, power, gap, upper_dual; // upper_dual = max_i t_i
    long iterations;
};

LagrangianSolution solve_lagrangian(const GridProblem& g, double s, std::vector<double>& p,
                                    double tol, long max_iter, bool warm = false) {
    LagrangianState st;
    st.p = p;
    if (warm) {
        // Blend in a little uniform mass: the capacity iteration can only
        // shrink support, never regrow it, and the previous multiplier's
        // solution may have pruned points this multiplier needs.
        const double eps = 1e-3, u = eps / static_cast<double>(st.p.size());
        for (auto& v : st.p) v = (1.0 - eps) * v + u;
    }
    long iters = 0;
    // Phase 1: capacity iteration with SQUAREM extrapolation.
    const long phase1 = std::min<long>(max_iter, warm ? 200 : 600);
    while (iters < phase1) {
        evaluate(g, s, st);
        if (st.upper - st.lower <= tol) break;
        iters += squarem_cycle(g, s, st);
    }
    // Phase 2: Newton polish until the sandwich closes (or stalls).
    iters += newton_polish(g, s, st, tol);
    evaluate(g, s, st);
    p = st.p;
    return {st.I, st.power, st.upper - st.lower, st.upper, iters};
}

// Divergences against the defended mixture (1-delta) q + delta * uniform.
// The dual bound holds for any output density; defending q with a uniform
// floor caps the divergence of grid points facing an empty output region
// at -ln(delta * u) (which the envelope's multiplier can then suppress),
// at a cost of at most -ln(1-delta) wherever q itself dominates.
void defended_divergences(const GridProblem& g, const std::vector<double>& q,
                          std::vector<double>& D) {
    const double delta = 1e-9;
    const double u = delta / (g.y.back() - g.y.front());
    std::vector<double> lq(q.size());
    for (size_t j = 0; j < q.size(); ++j) lq[j] = std::log((1.0 - delta) * q[j] + u);
    g.divergences(lq, D);
}

// Exact minimization over the multiplier of the dual bound
//   min_{s >= 0} max_i [D_i + s (P - x_i^2)]
// for a fixed output density: the upper envelope of lines is convex in s.
double dual_envelope_min(const GridProblem& g, const std::vector<double>& D, double P) {
    auto f = [&](double s) {
        double m = -1e300;
        for (int i = 0; i < g.nx(); ++i)
            m = std::max(m, D[i] + s * (P - g.x[i] * g.x[i]));
        return m;
    };
    double lo = 0.0, hi = 1.0;
    while (f(2.0 * hi) < f(hi) && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (f(a) < f(b))
            hi = b;
        else
            lo = a;
        if (hi - lo < 1e-15 * (1.0 + hi)) break;
    }
    return f(0.5 * (lo + hi));
}

// Exactly feasible lower bound: exponentially tilt the weights so the power
// budget is met with equality (the tilt is a smooth bijection, so a nearly
// optimal p loses only second order), then evaluate the mutual information.
double tilted_feasible_info(const GridProblem& g, const LagrangianState& st, double P,
                            LagrangianState& scratch) {
    auto tilt_power = [&](double beta) {
        double mx = -1e300;
        for (int i = 0; i < g.nx(); ++i)
            if (st.p[i] > 0.0)
                mx = std::max(mx, std::log(st.p[i]) - beta * g.x[i] * g.x[i]);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.nx(); ++i)
            if (st.p[i] > 0.0) {
                double w = std::exp(std::log(st.p[i]) - beta * g.x[i] * g.x[i] - mx);
                den += w;
                num += w * g.x[i] * g.x[i];
            }
        return num / den;
    };
    // pw(beta) is decreasing; bracket the root of pw(beta) = P.
    double b_lo = 0.0, b_hi = 0.0;
    if (st.power > P) {
        b_hi = 1e-6;
        while (tilt_power(b_hi) > P && b_hi < 1e6) b_hi *= 2.0;
        if (tilt_power(b_hi) > P) return -1e300;
    } else {
        b_lo = -1e-6;
        while (tilt_power(b_lo) < P && b_lo > -1e6) b_lo *= 2.0;
        if (tilt_power(b_lo) < P) b_lo = 0.0; // can't reach P: keep p as is
    }
    double beta = 0.0;
    for (int it = 0; it < 200; ++it) {
        beta = 0.5 * (b_lo + b_hi);
        if (tilt_power(beta) > P)
            b_lo = beta;
        else
            b_hi = beta;
    }
    beta = b_hi; // the feasible side of the final bracket
    double mx = -1e300;
    for (int i = 0; i < g.nx(); ++i)
        if (st.p[i] > 0.0)
            mx = std::max(mx, std::log(st.p[i]) - beta * g.x[i] * g.x[i]);
    scratch.p.assign(g.nx(), 0.0);
    double sum = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        if (st.p[i] > 0.0) {
            scratch.p[i] = std::exp(std::log(st.p[i]) - beta * g.x[i] * g.x[i] - mx);
            sum += scratch.p[i];
        }
    for (auto& v : scratch.p) v /= sum;
    evaluate(g, 0.0, scratch);
    return scratch.power <= P * (1.0 + 1e-12) ? scratch.I : -1e300;
}

struct ConstrainedResult {
    double value = -1e300, upper = 1e300, s = 0.0, power = 0.0;
    std::vector<double> p;
    long iterations = 0;
};

// Newton-KKT iteration on (weights, multiplier) for
//   max I(p)  s.t.  sum p = 1, E[X^2] = P, p >= 0.
ConstrainedResult joint_newton(const GridProblem& g, double P, double s, LagrangianState& st,
                               double tol) {
    ConstrainedResult best;
    LagrangianState trial, scratch;
    double mu = 0.0;
    // Secant history on the multiplier, taken only at converged fixed
    // points: pairing a multiplier with a power value from a half-converged
    // iterate is what makes a naive outer root-find oscillate.
    double s_hist = 0.0, pw_hist = 0.0;
    bool have_hist = false;
    auto kkt_residual = [&](const LagrangianState& e) {
        // Mass-weighted payoff spread about its average plus the (relative)
        // power violation. Weighting by mass keeps near-zero stragglers from
        // dominating: a vanishing atom with an off payoff is irrelevant to
        // both bounds.
        double r = 0.0;
        for (int i = 0; i < g.nx(); ++i)
            if (e.p[i] > 0.0) {
                double d = e.t[i] - e.lower;
                r += e.p[i] * d * d;
            }
        double pv = (e.power - P) / std::max(1.0, P);
        return r + pv * pv;
    };
    std::vector<double> Ddef;
    auto defended_bu = [&](const LagrangianState& e) {
        defended_divergences(g, e.q, Ddef);
        return dual_envelope_min(g, Ddef, P);
    };
    // A trial helps if it tightens either running bound: a lower dual
    // envelope minimum or a higher exactly-feasible tilted value.
    auto improves_bounds = [&](const LagrangianState& e) {
        if (defended_bu(e) < best.upper) return true;
        return tilted_feasible_info(g, e, P, scratch) > best.value;
    };
    // Revive off-support points whose defended payoff beats the support
    // level (the capacity iteration is multiplicative and cannot regrow an
    // exact zero). The raw payoffs are useless for this test: a point facing
    // an empty output region carries an arbitrarily inflated divergence.
    // Rather than planting a token mass and waiting for multiplicative
    // growth at rate e^{payoff excess} — glacial for the tiny outer atoms —
    // jump straight to the self-consistent mass m solving
    // t_i(q + m W_i) = level, which is monotone in m. Inserts greedily,
    // worst violation first, folding each mass into q before sizing the
    // next: neighbours in a violating cluster would otherwise all be sized
    // against the same stale density and collectively overshoot. Only
    // called once the current support has converged; resizing the support
    // under a half-converged state destabilizes the whole iteration.
    auto insert_violators = [&](double s_cur) {
        defended_divergences(g, st.q, Ddef);
        std::vector<std::pair<double, int>> violators;
        for (int i = 0; i < g.nx(); ++i) {
            double v = Ddef[i] - s_cur * g.x[i] * g.x[i] - st.lower;
            if (st.p[i] <= 1e-12 && v > 0.0) violators.push_back({v, i});
        }
        if (violators.empty()) return false;
        std::sort(violators.rbegin(), violators.rend());
        bool inserted = false;
        for (auto [v0, i] : violators) {
            const auto& row = g.W[i];
            double* qp = st.q.data() + g.j0[i];
            auto excess = [&](double mass) {
                double acc = 0.0;
                for (size_t k = 0; k < row.size(); ++k) {
                    double qv = qp[k] + mass * row[k];
                    if (qv > 0.0) acc += row[k] * std::log(qv);
                }
                return g.EW[i] - g.hy * acc - s_cur * g.x[i] * g.x[i] - st.lower;
            };
            if (excess(0.0) <= 0.0) continue; // covered by an earlier insert
            double lo = 0.0, hi = 1e-3;
            while (excess(hi) > 0.0 && hi < 0.5) hi *= 4.0;
            for (int b = 0; b < 60; ++b) {
                double mid = 0.5 * (lo + hi);
                (excess(mid) > 0.0 ? lo : hi) = mid;
            }
            st.p[i] = std::max(0.5 * (lo + hi), 1e-13);
            for (size_t k = 0; k < row.size(); ++k) qp[k] += st.p[i] * row[k];
            inserted = true;
        }
        if (inserted) {
            double sum = std::accumulate(st.p.begin(), st.p.end(), 0.0);
            for (auto& v : st.p) v /= sum;
            evaluate(g, s_cur, st);
        }
        return inserted;
    };
    for (int it = 0; it < 300; ++it) {
        evaluate(g, s, st);
        best.iterations++;
        // Certificate bookkeeping: exact 1-D cleanups on both sides. The
        // dual envelope minimum is a valid upper bound for any output
        // density; the tilted weights are exactly feasible.
        best.upper = std::min(best.upper, defended_bu(st));
        double bl = tilted_feasible_info(g, st, P, scratch);
        if (bl > best.value) {
            best.value = bl;
            best.p = scratch.p;
            best.s = s;
            best.power = scratch.power;
            best.upper = std::min(best.upper, defended_bu(scratch));
        }
#ifdef PB_SMITH_DEBUG
        {
            int im = 0;
            for (int i = 1; i < g.nx(); ++i)
                if (st.t[i] > st.t[im]) im = i;
            fprintf(stderr,
                    "joint it=%d s=%.8f pw=%.8f I=%.9f BU=%.9f BL=%.9f res=%.2e tmax@x=%.4f "
                    "p=%.2e dt=%.2e\n",
                    it, s, st.power, st.I, best.upper, best.value, kkt_residual(st), g.x[im],
                    st.p[im], st.t[im] - st.lower);
        }
#endif
        if (best.upper - best.value <= tol) return best;

        // Gauss-Newton step on the residual itself: linearize
        //   f_i  = t_i + (H dp)_i - x_i^2 ds - lam        (i in S)
        //   f_pw = (pw - P + x^2' dp) / max(1, P)
        //   f_1  = 1' dp
        // and minimize ||f||^2 with Levenberg damping. Unlike a saddle-point
        // solve, every damped step is a descent direction for the quantity
        // the acceptance test measures.
        std::vector<int> S;
        for (int i = 0; i < g.nx(); ++i)
            if (st.p[i] > 1e-13) S.push_back(i);
        int m = static_cast<int>(S.size());
        double pscale = std::max(1.0, P);
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m + 2, m + 2);
        M.topLeftCorner(m, m) = -neg_hessian(g, st, S);
        Eigen::VectorXd f0(m + 2);
        for (int a = 0; a < m; ++a) {
            double x2 = g.x[S[a]] * g.x[S[a]];
            M(a, m) = -x2;
            M(a, m + 1) = -1.0;
            M(m, a) = x2 / pscale;
            M(m + 1, a) = 1.0;
            f0(a) = st.t[S[a]];
            // weight each payoff row by sqrt(mass), floored so freshly
            // seeded candidates can still attract mass
            double w = std::sqrt(std::max(st.p[S[a]], 1e-8));
            M.row(a) *= w;
            f0(a) *= w;
        }
        f0(m) = (st.power - P) / pscale;
        f0(m + 1) = 0.0;
        Eigen::MatrixXd MtM = M.transpose() * M;
        Eigen::VectorXd Mtf = M.transpose() * f0;
        double dmax = MtM.diagonal().maxCoeff();
        if (mu == 0.0) mu = 1e-14 * dmax;

        double res = kkt_residual(st);
        bool accepted = false;
        int trials = 0;
        for (int tr = 0; tr < 12 && !accepted; ++tr) {
            ++trials;
            Eigen::MatrixXd Md = MtM;
            for (int a = 0; a < m + 2; ++a) Md(a, a) += mu;
            Eigen::VectorXd sol = -Md.ldlt().solve(Mtf);
            double s_new = std::max(0.0, s + sol(m));
            apply_clipped(S, sol.head(m), 1.0, st.p, trial.p);
            evaluate(g, s_new, trial);
            if (kkt_residual(trial) < res) {
                st.p = trial.p;
                s = s_new;
                accepted = true;
            } else {
                mu *= 10.0;
            }
        }
        // The step iteration has stalled on the current support: first ask
        // whether the support itself is wrong.
        if (!accepted && insert_violators(s)) {
            accepted = true;
#ifdef PB_SMITH_DEBUG
            fprintf(stderr, "      insert: pw=%.8f I=%.9f\n", st.power, st.I);
#endif
        }
        if (!accepted) {
            // Damped least squares has stalled: the surviving error lives in
            // a near-flat mode (mass splits within a grid cluster) that the
            // normal equations cannot resolve. The squared-extrapolation
            // capacity iteration is built for exactly this regime — with one
            // dominant slow mode it estimates the mode's rate and jumps
            // toward the fixed point along it. Burn cycles at the current
            // multiplier until the certificate closes or stops improving.
            int stalled = 0;
            for (int burst = 0; burst < 600 && stalled < 12; ++burst) {
                best.iterations += squarem_cycle(g, s, st);
                // The certificate costs several cycles' worth of
                // transcendentals; sampling it every few cycles loses little.
                if (burst % 5 != 4) continue;
                evaluate(g, s, st);
                double bu = defended_bu(st);
                double bl = tilted_feasible_info(g, st, P, scratch);
                if (bu < best.upper || bl > best.value) {
                    accepted = true;
                    stalled = 0;
                } else {
                    ++stalled;
                }
                best.upper = std::min(best.upper, bu);
                if (bl > best.value) {
                    best.value = bl;
                    best.p = scratch.p;
                    best.s = s;
                    best.power = scratch.power;
                }
#ifdef PB_SMITH_DEBUG
                if (burst % 50 == 0)
                    fprintf(stderr, "      squarem burst=%d BU=%.9f BL=%.9f res=%.3e\n", burst,
                            best.upper, best.value, kkt_residual(st));
#endif
                if (best.upper - best.value <= tol) return best;
            }
            // The weight iteration has converged at this multiplier but the
            // certificate is still open: the multiplier itself is off and
            // the power constraint misses. Refine it on the fixed-point pair
            // (s, power): secant once we have history, else a scale-free
            // proportional correction.
#ifdef PB_SMITH_DEBUG
            {
                defended_divergences(g, st.q, Ddef);
                std::vector<std::pair<double, int>> v;
                for (int i = 0; i < g.nx(); ++i)
                    v.push_back({Ddef[i] - s * g.x[i] * g.x[i] - st.lower, i});
                std::sort(v.rbegin(), v.rend());
                for (int k = 0; k < 5; ++k)
                    fprintf(stderr, "      viol x=%.4f p=%.2e tdef-lvl=%.3e\n", g.x[v[k].second],
                            st.p[v[k].second], v[k].first);
            }
#endif
            double pw = st.power;
            if (std::abs(pw - P) / std::max(1.0, P) > 1e-10) {
                double s_new;
                if (have_hist && std::abs(pw - pw_hist) > 0.0)
                    s_new = s - (pw - P) * (s - s_hist) / (pw - pw_hist);
                else
                    s_new = s * (1.0 + (pw - P) / P);
                s_new = std::clamp(s_new, 0.25 * s, 4.0 * s);
                s_hist = s;
                pw_hist = pw;
                have_hist = true;
#ifdef PB_SMITH_DEBUG
                fprintf(stderr, "      refine s: %.8f -> %.8f (pw=%.8f)\n", s, s_new, pw);
#endif
                s = s_new;
                accepted = true;
            }
        }
#ifdef PB_SMITH_DEBUG
        fprintf(stderr, "      step m=%d res=%.3e mu=%.1e trials=%d acc=%d\n", m, res, mu, trials,
                accepted ? 1 : 0);
#endif
        if (!accepted) break;
        prune(st.p);
        mu = std::max(mu / 10.0, 1e-14 * dmax);
    }
    return best;
}

} // namespace

SmithCapacityResult capacity_amplitude_constrained(double A, double P, const SmithOptions& opts) {
    if (!(A > 0.0 && P > 0.0))
        throw std::domain_error("capacity_amplitude_constrained: need A, P > 0");
    if (opts.grid_size < 3)
        throw std::domain_error("capacity_amplitude_constrained: grid_size must be >= 3");
    if (!(opts.tol > 0.0)) throw std::domain_error("capacity_amplitude_constrained: tol must be > 0");

    GridProblem g(A, opts.grid_size, opts.quad_spacing, opts.tail_pad);
    const int n = g.nx();
    std::vector<double> p(n, 1.0 / n);
    long total_iters = 0;
    const double inner_tol = 0.5 * opts.tol;
    const double loose = std::max(opts.tol, 1e-3);

    SmithCapacityResult res;

    // Cheap probe at multiplier 0 decides whether the power constraint binds.
    LagrangianSolution sol = solve_lagrangian(g, 0.0, p, loose, opts.max_iterations);
    total_iters += sol.iterations;

    if (sol.power <= P) {
        // Looks unconstrained; finish the multiplier-0 solve at full accuracy.
        sol = solve_lagrangian(g, 0.0, p, inner_tol, opts.max_iterations, true);
        total_iters += sol.iterations;
        if (sol.power <= P) {
            if (sol.gap > opts.tol) {
                std::ostringstream os;
                os << "capacity_amplitude_constrained: sandwich gap " << sol.gap
                   << " exceeds tol " << opts.tol << " after " << total_iters << " iterations";
                throw SolverError(os.str());
            }
            res.value_nats = sol.I;
            res.probs = p;
            res.power_used = sol.power;
            res.multiplier = 0.0;
            res.sandwich_gap = sol.gap;
            res.support = g.x;
            res.iterations = total_iters;
            res.gap_to_gaussian = capacity_nats(P) - res.value_nats;
            return res;
        }
        // The accurate solve exposed a binding constraint after all.
    }

    // Power constraint binds. Bracket the multiplier with loose fixed-s
    // solves, then hand over to the joint Newton-KKT iteration.
    double s_lo = 0.0, pw_lo = sol.power;
    double s_hi = 0.5 / (1.0 + P), pw_hi = 0.0;
    for (int k = 0; k < 60; ++k) {
        sol = solve_lagrangian(g, s_hi, p, loose, opts.max_iterations, true);
        total_iters += sol.iterations;
        pw_hi = sol.power;
        if (pw_hi < P) break;
        s_lo = s_hi;
        pw_lo = pw_hi;
        s_hi *= 2.0;
    }
    double s0 = s_hi;
    if (pw_lo > P && pw_hi < P && pw_lo > pw_hi)
        s0 = s_lo + (pw_lo - P) / (pw_lo - pw_hi) * (s_hi - s_lo);

    // Tight fixed-multiplier solve at the bracket estimate: collapses the
    // support to the genuine atoms so the joint iteration starts clean.
    sol = solve_lagrangian(g, s0, p, inner_tol, opts.max_iterations, true);
    total_iters += sol.iterations;

    LagrangianState st;
    st.p = p;
    ConstrainedResult cr = joint_newton(g, P, s0, st, opts.tol);
    total_iters += cr.iterations;
    if (cr.upper - cr.value > opts.tol) {
        std::ostringstream os;
        os << "capacity_amplitude_constrained: sandwich gap " << cr.upper - cr.value
           << " exceeds tol " << opts.tol << " after " << total_iters << " iterations";
        throw SolverError(os.str());
    }
    res.value_nats = cr.value;
    res.probs = cr.p;
    res.power_used = cr.power;
    res.multiplier = cr.s;
    res.sandwich_gap = cr.upper - cr.value;
    res.support = g.x;
    res.iterations = total_iters;
    res.gap_to_gaussian = capacity_nats(P) - res.value_nats;
    return res;
}

} // namespace peakbound

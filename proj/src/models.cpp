#include "asianctmc/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace asianctmc::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

double sq(double x) { return x * x; }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// z with P(Z > z) = p for a standard normal, via bisection on erfc.
double normal_tail_quantile(double p) {
    double lo = 0.0, hi = 45.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(mid / std::sqrt(2.0)) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt_rec(const std::function<double(double)>& f, double a, double m, double b,
                 double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson with a relative target; assumes f finite on [a, b].
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double rough = simpson(a, b, fa, fm, fb);
    const double tol = rel_tol * std::max(std::abs(rough), 1e-30);
    return adapt_rec(f, a, m, b, fa, fm, fb, rough, tol, 60);
}

}  // namespace

double rate_of(const ModelSpec& spec) {
    return std::visit([](const auto& p) { return p.r; }, spec);
}

std::string model_name(const ModelSpec& spec) {
    struct Namer {
        std::string operator()(const CirParams&) const { return "cir"; }
        std::string operator()(const CevParams&) const { return "cev"; }
        std::string operator()(const DejdParams&) const { return "dejd"; }
        std::string operator()(const MjdParams&) const { return "mjd"; }
        std::string operator()(const CgmyParams&) const { return "cgmy"; }
    };
    return std::visit(Namer{}, spec);
}

void validate_spec(const ModelSpec& spec) {
    struct Checker {
        void operator()(const CirParams& p) const {
            require(p.kappa > 0, "cir: kappa must be > 0");
            require(p.theta_bar > 0, "cir: theta_bar must be > 0");
            require(p.sigma > 0, "cir: sigma must be > 0");
            require(p.r >= 0, "cir: r must be >= 0");
        }
        void operator()(const CevParams& p) const {
            require(p.sigma > 0, "cev: sigma must be > 0");
            require(p.beta > -2 && p.beta <= 5, "cev: beta out of range");
            require(p.r >= 0, "cev: r must be >= 0");
        }
        void operator()(const DejdParams& p) const {
            require(p.sigma > 0, "dejd: sigma must be > 0");
            require(p.lambda >= 0, "dejd: lambda must be >= 0");
            require(p.p_up >= 0 && p.p_up <= 1, "dejd: p_up must lie in [0,1]");
            require(p.eta1 > 1, "dejd: eta1 must be > 1");
            require(p.eta2 > 0, "dejd: eta2 must be > 0");
            require(p.r >= 0, "dejd: r must be >= 0");
        }
        void operator()(const MjdParams& p) const {
            require(p.sigma > 0, "mjd: sigma must be > 0");
            require(p.lambda >= 0, "mjd: lambda must be >= 0");
            require(p.jump_std > 0, "mjd: jump_std must be > 0");
            require(p.r >= 0, "mjd: r must be >= 0");
        }
        void operator()(const CgmyParams& p) const {
            require(p.c > 0, "cgmy: c must be > 0");
            require(p.g > 0, "cgmy: g must be > 0");
            require(p.m > 1, "cgmy: m must be > 1 (finite mean price move)");
            require(p.y < 2, "cgmy: y must be < 2");
            require(std::abs(p.y) > 1e-12 && std::abs(p.y - 1.0) > 1e-12,
                    "cgmy: y = 0 and y = 1 are not supported");
            require(p.r >= 0, "cgmy: r must be >= 0");
        }
    };
    std::visit(Checker{}, spec);
}

double jump_compensator(const ModelSpec& spec) {
    if (const auto* p = std::get_if<DejdParams>(&spec)) {
        if (p->lambda == 0.0) return 0.0;
        return p->p_up * p->eta1 / (p->eta1 - 1.0) +
               (1.0 - p->p_up) * p->eta2 / (p->eta2 + 1.0) - 1.0;
    }
    if (const auto* p = std::get_if<MjdParams>(&spec)) {
        if (p->lambda == 0.0) return 0.0;
        return std::exp(p->jump_mean + 0.5 * sq(p->jump_std)) - 1.0;
    }
    if (const auto* p = std::get_if<CgmyParams>(&spec)) {
        // c Gamma(-y) [ (m-1)^y - m^y + (g+1)^y - g^y ]
        return p->c * std::tgamma(-p->y) *
               (std::pow(p->m - 1.0, p->y) - std::pow(p->m, p->y) +
                std::pow(p->g + 1.0, p->y) - std::pow(p->g, p->y));
    }
    throw std::invalid_argument("jump_compensator: not a jump model");
}

double proxy_volatility(const ModelSpec& spec, double spot) {
    struct Visitor {
        double spot;
        double operator()(const CirParams& p) const {
            return p.sigma * std::sqrt(spot) / spot;
        }
        double operator()(const CevParams& p) const {
            return p.sigma * std::pow(spot, p.beta);
        }
        double operator()(const DejdParams& p) const {
            const double q = 1.0 - p.p_up;
            const double jump_var =
                p.lambda * (2.0 * p.p_up / sq(p.eta1) + 2.0 * q / sq(p.eta2));
            return std::sqrt(sq(p.sigma) + jump_var);
        }
        double operator()(const MjdParams& p) const {
            const double jump_var = p.lambda * (sq(p.jump_mean) + sq(p.jump_std));
            return std::sqrt(sq(p.sigma) + jump_var);
        }
        double operator()(const CgmyParams& p) const {
            const double var = p.c * std::tgamma(2.0 - p.y) *
                               (std::pow(p.m, p.y - 2.0) + std::pow(p.g, p.y - 2.0));
            return std::sqrt(var);
        }
    };
    return std::visit(Visitor{spot}, spec);
}

namespace {

// --- Levy cell masses in log-move space -----------------------------------

double dejd_cell_mass(const DejdParams& p, double a, double b) {
    if (p.lambda == 0.0 || a >= b) return 0.0;
    double mass = 0.0;
    // up side
    const double ua = std::max(a, 0.0), ub = std::max(b, 0.0);
    if (ub > ua && p.p_up > 0.0) {
        const double hi = std::isinf(ub) ? 0.0 : std::exp(-p.eta1 * ub);
        mass += p.p_up * (std::exp(-p.eta1 * ua) - hi);
    }
    // down side
    const double da = std::min(a, 0.0), db = std::min(b, 0.0);
    if (db > da && p.p_up < 1.0) {
        const double lo = std::isinf(da) ? 0.0 : std::exp(p.eta2 * da);
        mass += (1.0 - p.p_up) * (std::exp(p.eta2 * db) - lo);
    }
    return p.lambda * mass;
}

double mjd_cell_mass(const MjdParams& p, double a, double b) {
    if (p.lambda == 0.0 || a >= b) return 0.0;
    const double za = std::isinf(a) ? -kInf : (a - p.jump_mean) / p.jump_std;
    const double zb = std::isinf(b) ? kInf : (b - p.jump_mean) / p.jump_std;
    const double fa = std::isinf(za) ? (za < 0 ? 0.0 : 1.0) : norm_cdf(za);
    const double fb = std::isinf(zb) ? (zb < 0 ? 0.0 : 1.0) : norm_cdf(zb);
    return p.lambda * (fb - fa);
}

// integral of e^{-decay y} y^{-1-yexp} over [a, b], 0 < a < b (b may be inf)
double cgmy_side_mass(double c, double decay, double yexp, double a, double b) {
    if (!(a > 0.0)) throw std::invalid_argument("cgmy_side_mass: a must be > 0");
    if (std::isinf(b)) b = a + 60.0 / decay;  // beyond this the integrand is ~e^-60
    if (b <= a) return 0.0;
    auto f = [&](double y) { return std::exp(-decay * y) * std::pow(y, -1.0 - yexp); };
    return c * adaptive_quad(f, a, b);
}

// integral of the CGMY Levy density over [a, b] excluding (-eps, eps)
double cgmy_cell_mass(const CgmyParams& p, double a, double b, double eps) {
    if (a >= b) return 0.0;
    double mass = 0.0;
    const double ua = std::max(a, eps);
    if (b > ua) mass += cgmy_side_mass(p.c, p.m, p.y, ua, b);
    const double db = std::min(b, -eps);
    if (db > a) mass += cgmy_side_mass(p.c, p.g, p.y, -db, std::isinf(a) ? kInf : -a);
    return mass;
}

// sigma_small^2(eps) = c * int_0^eps y^{1-Y} (e^{-m y} + e^{-g y}) dy,
// evaluated after u = y^{2-Y} so the integrand is smooth at zero.
double cgmy_small_jump_variance(const CgmyParams& p, double eps) {
    const double ex = 2.0 - p.y;
    auto f = [&](double u) {
        const double y = std::pow(u, 1.0 / ex);
        return std::exp(-p.m * y) + std::exp(-p.g * y);
    };
    return p.c / ex * adaptive_quad(f, 0.0, std::pow(eps, ex));
}

// log-move h with one-sided CGMY tail mass below `target`
double cgmy_tail_bound(double c, double decay, double yexp, double target) {
    double lo = 1e-3, hi = 1.0;
    while (cgmy_side_mass(c, decay, yexp, hi, kInf) > target && hi < 1e3) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cgmy_side_mass(c, decay, yexp, mid, kInf) > target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

struct JumpTailSpan {
    double y_low = 0.0;   // most negative log move that must stay on grid
    double y_high = 0.0;  // most positive log move that must stay on grid
};

JumpTailSpan jump_tail_span(const ModelSpec& spec, double mass_tol) {
    JumpTailSpan out;
    if (const auto* p = std::get_if<DejdParams>(&spec)) {
        if (p->lambda == 0.0) return out;
        const double q = 1.0 - p->p_up;
        const double half = 0.5 * mass_tol;
        if (q > 0.0) out.y_low = std::min(0.0, std::log(half / q) / p->eta2);
        if (p->p_up > 0.0) out.y_high = std::max(0.0, -std::log(half / p->p_up) / p->eta1);
    } else if (const auto* p = std::get_if<MjdParams>(&spec)) {
        if (p->lambda == 0.0) return out;
        const double z = normal_tail_quantile(0.5 * mass_tol);
        out.y_low = p->jump_mean - z * p->jump_std;
        out.y_high = p->jump_mean + z * p->jump_std;
    } else if (const auto* p = std::get_if<CgmyParams>(&spec)) {
        // reference intensity: jumps larger than 1% in log space
        const double lam_ref = cgmy_side_mass(p->c, p->m, p->y, 0.01, kInf) +
                               cgmy_side_mass(p->c, p->g, p->y, 0.01, kInf);
        const double target = 0.5 * mass_tol * lam_ref;
        out.y_high = cgmy_tail_bound(p->c, p->m, p->y, target);
        out.y_low = -cgmy_tail_bound(p->c, p->g, p->y, target);
    }
    return out;
}

bool is_jump_model(const ModelSpec& spec) {
    return std::holds_alternative<DejdParams>(spec) ||
           std::holds_alternative<MjdParams>(spec) ||
           std::holds_alternative<CgmyParams>(spec);
}

}  // namespace

StateGrid build_grid(const ModelSpec& spec, double spot, double maturity,
                     const GridSpec& grid) {
    validate_spec(spec);
    require(spot > 0, "build_grid: spot must be > 0");
    require(maturity > 0, "build_grid: maturity must be > 0");
    require(grid.n_states >= 3, "build_grid: need at least 3 states");

    double lo, hi;
    if (grid.span) {
        lo = grid.span->first;
        hi = grid.span->second;
        require(lo >= 0, "build_grid: span low must be >= 0");
        require(lo < spot && spot < hi, "build_grid: spot must lie inside span");
    } else {
        // lognormal proxy leaving < 1e-6 mass outside by time T
        const double vol = proxy_volatility(spec, spot);
        const double z = 4.891638;  // two-sided 1e-6
        const double drift = (rate_of(spec) - 0.5 * sq(vol)) * maturity;
        const double width = z * vol * std::sqrt(maturity);
        double log_lo = drift - width, log_hi = drift + width;
        if (is_jump_model(spec)) {
            const JumpTailSpan tails = jump_tail_span(spec, grid.jump_mass_tol);
            log_lo = std::min(log_lo, tails.y_low + drift);
            log_hi = std::max(log_hi, tails.y_high + drift);
        }
        lo = spot * std::exp(std::min(log_lo, std::log(0.75)));
        hi = spot * std::exp(std::max(log_hi, std::log(1.30)));
        if (const auto* p = std::get_if<CirParams>(&spec)) {
            lo = std::min(lo, 0.5 * std::min(spot, p->theta_bar));
            hi = std::max(hi, 1.75 * std::max(spot, p->theta_bar));
        }
    }

    const std::size_t n = grid.n_states;
    std::vector<double> x(n);
    if (grid.placement == Placement::uniform) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    } else {
        const double alpha = grid.concentration * (hi - lo);
        require(alpha > 0, "build_grid: concentration must be > 0");
        const double xi_lo = std::asinh((lo - spot) / alpha);
        const double xi_hi = std::asinh((hi - spot) / alpha);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi =
                xi_lo + (xi_hi - xi_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            x[i] = spot + alpha * std::sinh(xi);
        }
        x.front() = lo;
        x.back() = hi;
    }

    // make the spot an exact node
    std::size_t nearest = 0;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(x[i] - spot);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    nearest = std::clamp<std::size_t>(nearest, 1, n - 2);
    x[nearest] = spot;
    for (std::size_t i = 1; i < n; ++i)
        require(x[i] > x[i - 1], "build_grid: spot snap broke monotonicity");
    return StateGrid(std::move(x));
}

Generator build_diffusion_generator(const std::function<double(double)>& drift,
                                    const std::function<double(double)>& vol,
                                    const StateGrid& grid, Boundary boundary) {
    const std::size_t n = grid.size();
    std::vector<double> q(n * n, 0.0);
    if (n == 1) return Generator(grid, std::move(q));

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = grid[i] - grid[i - 1];
        const double hp = grid[i + 1] - grid[i];
        const double m = drift(grid[i]);
        const double s = vol(grid[i]);
        if (!(s > 0.0)) {
            std::ostringstream msg;
            msg << "build_diffusion_generator: vol <= 0 at interior node " << i << " (x="
                << grid[i] << ")";
            throw std::invalid_argument(msg.str());
        }
        const double v = s * s;
        double qm = (v - hp * m) / (hm * (hm + hp));
        double qp = (v + hm * m) / (hp * (hm + hp));
        if (qm < 0.0 || qp < 0.0) {
            // first-moment-only upwind fallback
            if (m >= 0.0) {
                qp = m / hp;
                qm = 0.0;
            } else {
                qm = -m / hm;
                qp = 0.0;
            }
        }
        q[i * n + (i - 1)] = qm;
        q[i * n + (i + 1)] = qp;
        q[i * n + i] = -(qm + qp);
    }

    if (boundary == Boundary::reflecting) {
        {
            const double h = grid[1] - grid[0];
            const double m = drift(grid[0]);
            const double v = sq(vol(grid[0]));
            const double rate = std::max(m, 0.0) / h + 0.5 * v / (h * h);
            q[0 * n + 1] = rate;
            q[0 * n + 0] = -rate;
        }
        {
            const std::size_t i = n - 1;
            const double h = grid[i] - grid[i - 1];
            const double m = drift(grid[i]);
            const double v = sq(vol(grid[i]));
            const double rate = std::max(-m, 0.0) / h + 0.5 * v / (h * h);
            q[i * n + (i - 1)] = rate;
            q[i * n + i] = -rate;
        }
    }
    // absorbing: boundary rows stay zero
    return Generator(grid, std::move(q));
}

Generator build_jump_generator(const ModelSpec& spec, const StateGrid& grid, double spot,
                               const GridSpec& gridspec) {
    validate_spec(spec);
    require(is_jump_model(spec), "build_jump_generator: not a jump model");
    const std::size_t n = grid.size();
    require(n >= 3, "build_jump_generator: need at least 3 states");
    const double r = rate_of(spec);

    std::vector<double> logx(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(grid[i] > 0.0, "build_jump_generator: states must be positive");
        logx[i] = std::log(grid[i]);
    }
    // cell edges in log space; the first and last cells absorb the tails
    std::vector<double> edge(n + 1);
    edge[0] = -kInf;
    edge[n] = kInf;
    for (std::size_t j = 1; j < n; ++j) edge[j] = 0.5 * (logx[j - 1] + logx[j]);

    const auto* dejd = std::get_if<DejdParams>(&spec);
    const auto* mjd = std::get_if<MjdParams>(&spec);
    const auto* cgmy = std::get_if<CgmyParams>(&spec);

    // CGMY small-jump cutoff: half the local log spacing
    std::vector<double> eps(n, 0.0);
    if (cgmy) {
        for (std::size_t i = 0; i < n; ++i) {
            const double up = i + 1 < n ? logx[i + 1] - logx[i] : logx[i] - logx[i - 1];
            const double dn = i > 0 ? logx[i] - logx[i - 1] : logx[i + 1] - logx[i];
            eps[i] = 0.25 * (up + dn);
        }
    }

    std::vector<double> qjump(n * n, 0.0);
    std::vector<double> jump_drift(n, 0.0);
    const bool has_jumps = cgmy != nullptr || (dejd && dejd->lambda > 0.0) ||
                           (mjd && mjd->lambda > 0.0);
    if (has_jumps) {
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double a = edge[j] - logx[i];
                const double b = edge[j + 1] - logx[i];
                double mass;
                if (dejd)
                    mass = dejd_cell_mass(*dejd, a, b);
                else if (mjd)
                    mass = mjd_cell_mass(*mjd, a, b);
                else
                    mass = cgmy_cell_mass(*cgmy, a, b, eps[i]);
                qjump[i * n + j] = mass;
                d += mass * (grid[j] - grid[i]);
            }
            jump_drift[i] = d;
        }

        // mass landing beyond the grid edges, measured from the spot state
        const std::size_t spot_idx = grid.index_of(spot);
        const double lo_move = logx[0] - logx[spot_idx];
        const double hi_move = logx[n - 1] - logx[spot_idx];
        double outside, total;
        if (dejd) {
            outside = dejd_cell_mass(*dejd, -kInf, lo_move) +
                      dejd_cell_mass(*dejd, hi_move, kInf);
            total = dejd->lambda;
        } else if (mjd) {
            outside = mjd_cell_mass(*mjd, -kInf, lo_move) + mjd_cell_mass(*mjd, hi_move, kInf);
            total = mjd->lambda;
        } else {
            outside = cgmy_cell_mass(*cgmy, -kInf, lo_move, eps[spot_idx]) +
                      cgmy_cell_mass(*cgmy, hi_move, kInf, eps[spot_idx]);
            total = cgmy_cell_mass(*cgmy, -kInf, kInf, eps[spot_idx]);
        }
        if (total > 0.0 && outside > gridspec.jump_mass_tol * total) {
            std::ostringstream msg;
            msg << "build_jump_generator: " << outside / total
                << " of the jump intensity from the spot state (node " << spot_idx
                << ") lands outside the grid (tolerance " << gridspec.jump_mass_tol << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    // diffusion part carries whatever drift the discretized jumps left over,
    // so the chain's drift is exactly r x at interior nodes
    std::vector<double> sig(n);
    if (cgmy) {
        for (std::size_t i = 0; i < n; ++i)
            sig[i] = std::sqrt(cgmy_small_jump_variance(*cgmy, eps[i])) * grid[i];
    } else {
        const double s = dejd ? dejd->sigma : mjd->sigma;
        for (std::size_t i = 0; i < n; ++i) sig[i] = s * grid[i];
    }
    auto drift_fn = [&](double x) {
        const std::size_t i = grid.index_of(x);
        return r * x - jump_drift[i];
    };
    auto vol_fn = [&](double x) { return sig[grid.index_of(x)]; };
    Generator diff = build_diffusion_generator(drift_fn, vol_fn, grid, gridspec.boundary);

    std::vector<double> q(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double v = diff.rate(i, j) + qjump[i * n + j];
            q[i * n + j] = v;
            row += v;
        }
        q[i * n + i] = -row;
    }
    return Generator(grid, std::move(q));
}

Generator build_generator(const ModelSpec& spec, double spot, double maturity,
                          const GridSpec& gridspec) {
    StateGrid grid = build_grid(spec, spot, maturity, gridspec);
    if (const auto* p = std::get_if<CirParams>(&spec)) {
        auto drift = [kappa = p->kappa, theta = p->theta_bar](double x) {
            return kappa * (theta - x);
        };
        auto vol = [sigma = p->sigma](double x) { return sigma * std::sqrt(x); };
        return build_diffusion_generator(drift, vol, grid, gridspec.boundary);
    }
    if (const auto* p = std::get_if<CevParams>(&spec)) {
        auto drift = [r = p->r](double x) { return r * x; };
        auto vol = [sigma = p->sigma, beta = p->beta](double x) {
            return sigma * std::pow(x, beta + 1.0);
        };
        return build_diffusion_generator(drift, vol, grid, gridspec.boundary);
    }
    return build_jump_generator(spec, grid, spot, gridspec);
}

double risk_neutral_drift_check(const Generator& g, double r) {
    const std::size_t n = g.size();
    if (n < 3) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += g.rate(i, j) * g.grid()[j];
        worst = std::max(worst, std::abs(ax - r * g.grid()[i]));
    }
    return worst;
}

}  // namespace asianctmc::models

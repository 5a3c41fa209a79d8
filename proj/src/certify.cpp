#include "qmatch/certify.hpp"

#include "qmatch/error.hpp"
#include "qmatch/matching.hpp"
#include "qmatch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace qmatch::certify {

namespace {

constexpr double kPhi = std::numbers::phi;

/// Gauss series sum_k (a)_k (b)_k / ((c)_k k!) x^k for 0 <= x <= 1/2, summed
/// until the geometric tail bound falls below 1e-17 of the partial sum.
double hyp2f1_series(double a, double b, double c, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 10000; ++k) {
        const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        term *= ratio;
        sum += term;
        if (k >= 1) {
            const double next_ratio =
                std::max(std::abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0)) * x), x);
            if (next_ratio < 1.0 &&
                std::abs(term) * next_ratio / (1.0 - next_ratio) <= 1e-17 * std::abs(sum))
                return sum;
        }
    }
    throw InvariantViolation("hypergeometric series did not converge");
}

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

} // namespace

double F(double s) {
    if (!(std::abs(s) <= 1.0)) throw InputError("F is defined on [-1, 1]");
    if (s == 0.0) return 0.0;
    const double z = s * s;
    double h;
    if (z < 0.5) {
        h = hyp2f1_series(0.5, 0.5, 2.5, z);
    } else {
        // Connection formula around z = 1 (c - a - b = 3/2).
        const double x = 1.0 - z;
        h = 3.0 * std::numbers::pi / 8.0 * hyp2f1_series(0.5, 0.5, -0.5, x) +
            std::pow(x, 1.5) * hyp2f1_series(2.0, 2.0, 2.5, x);
    }
    return 8.0 / (3.0 * std::numbers::pi) * s * h;
}

MonteCarloEstimate F_monte_carlo(double s, std::size_t samples, std::uint64_t seed) {
    if (!(std::abs(s) <= 1.0)) throw InputError("F is defined on [-1, 1]");
    if (samples < 2) throw InputError("Monte Carlo estimate needs at least two samples");
    Rng rng(seed);
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        double a[3], b[3];
        for (int r = 0; r < 3; ++r) {
            const double g0 = rng.normal();
            const double g1 = rng.normal();
            a[r] = g0;
            b[r] = s * g0 + c * g1;
        }
        const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
        const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        const double x = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (na * nb);
        const double delta = x - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (x - mean);
    }
    const double n = static_cast<double>(samples);
    return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

double epr_objective(double x) {
    return (1.0 + std::pow(kPhi, -(1.0 - x)) +
            2.0 * std::sqrt(std::max(0.0, 1.0 - std::pow(kPhi, -x))) * std::pow(kPhi, -(1.0 - x) / 2.0)) /
           (2.0 * (1.0 + x));
}

EprCertificate certify_epr_min(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.5)) throw InputError("grid step must lie in (0, 1/2]");
    const auto steps = static_cast<std::size_t>(std::ceil(1.0 / grid_step));
    EprCertificate out;
    out.grid_step = 1.0 / static_cast<double>(steps);
    out.minimum = std::numeric_limits<double>::infinity();
    out.interior_minimum = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(steps);
        const double v = epr_objective(x);
        if (v < out.minimum) {
            out.minimum = v;
            best = k;
        }
        if (k > 0 && k < steps) out.interior_minimum = std::min(out.interior_minimum, v);
    }
    // Golden-section refinement on the bracketing cells.
    double lo = static_cast<double>(best == 0 ? 0 : best - 1) / static_cast<double>(steps);
    double hi = static_cast<double>(std::min(best + 1, steps)) / static_cast<double>(steps);
    out.argmin = static_cast<double>(best) / static_cast<double>(steps);
    const double inv = 1.0 / kPhi;
    double x1 = hi - inv * (hi - lo);
    double x2 = lo + inv * (hi - lo);
    double f1 = epr_objective(x1), f2 = epr_objective(x2);
    for (int it = 0; it < 100; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - inv * (hi - lo); f1 = epr_objective(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + inv * (hi - lo); f2 = epr_objective(x2);
        }
    }
    if (std::min(f1, f2) < out.minimum) {
        out.minimum = std::min(f1, f2);
        out.argmin = f1 < f2 ? x1 : x2;
    }
    return out;
}

double appendix_f(double x) {
    const double c = kPhi;
    return c * c * (x + c) * (x + c) - 4.0 * c * x - 4.0 + std::pow(c, 2.0 * x - 2.0) -
           2.0 * std::pow(c, x) * (x + c);
}

double appendix_f2(double x) {
    const double c = kPhi;
    const double l = std::log(c);
    return 2.0 * c * c + 4.0 * l * l * std::pow(c, 2.0 * x - 2.0) -
           2.0 * std::pow(c, x) * l * ((x + c) * l + 2.0);
}

double appendix_g(double z) {
    const double c = kPhi;
    const double l = std::log(c);
    return 2.0 * c * c + z * z * (4.0 / (c * c) * l * l) - z * 2.0 * l * ((c + std::log(z) / l) * l + 2.0);
}

AppendixBReport check_appendix_B(std::size_t grid_points) {
    if (grid_points < 3) throw InputError("appendix check needs at least three grid points");
    const double c = kPhi;
    const double l = std::log(c);
    AppendixBReport r;
    r.f0 = appendix_f(0.0);
    r.f1 = appendix_f(1.0);
    r.max_f = -std::numeric_limits<double>::infinity();
    r.min_f2 = std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(grid_points - 1);
    const double h = 1e-4;
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double x = static_cast<double>(k) / n;
        r.max_f = std::max(r.max_f, appendix_f(x));
        const double f2 = appendix_f2(x);
        r.min_f2 = std::min(r.min_f2, f2);
        const double fd = (appendix_f(x + h) - 2.0 * appendix_f(x) + appendix_f(x - h)) / (h * h);
        r.max_f2_fd_error = std::max(r.max_f2_fd_error, std::abs(fd - f2));
    }
    r.max_g_increment = -std::numeric_limits<double>::infinity();
    double prev = appendix_g(1.0);
    for (std::size_t k = 1; k < grid_points; ++k) {
        const double z = 1.0 + (c - 1.0) * static_cast<double>(k) / n;
        const double g = appendix_g(z);
        r.max_g_increment = std::max(r.max_g_increment, g - prev);
        prev = g;
    }
    r.g_at_c = appendix_g(c);
    r.g_at_c_closed = 2.0 * (c - l) * (c - l) - 4.0 * c * l * l;
    r.f_endpoints_zero = std::abs(r.f0) <= 1e-10 && std::abs(r.f1) <= 1e-10;
    r.f_nonpositive = r.max_f <= 1e-10;
    r.f_convex = r.min_f2 >= -1e-10 && r.max_f2_fd_error <= 1e-5;
    r.g_decreasing = r.max_g_increment < 0.0;
    r.g_c_positive = r.g_at_c > 0.0 && std::abs(r.g_at_c - r.g_at_c_closed) <= 1e-12;
    return r;
}

std::string_view to_string(Branch b) { return b == Branch::Pm ? "E_PM" : "E_PM''"; }

BranchValues branch_values(double theta, double s, double f, double d) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double clamp = positive_part(-(1.0 + 3.0 * s) / 2.0);
    const double denom = 1.0 - 3.0 * s;
    const double shared = d * st * (1.0 - f * (1.0 + st)) * clamp;
    BranchValues v;
    v.e_pm = (1.0 - f * ct * ct + shared) / denom;
    v.e_pm_prime = (1.0 - f * ct + shared) / denom;
    v.e_pm_double_prime = (1.0 - f + shared) / denom;
    v.e_m = (1.0 + 3.0 * d * clamp) / denom;
    return v;
}

BranchValues branch_values(double theta, double s, double d) { return branch_values(theta, s, F(s), d); }

namespace {

void validate(const CertifyConfig& cfg) {
    if (!(cfg.d > 0.0 && cfg.d <= 1.0)) throw InputError("d must lie in (0, 1]");
    if (!(cfg.theta_grid > 0.0 && cfg.mu_grid > 0.0 && cfg.s_grid > 0.0))
        throw InputError("grid resolutions must be positive");
    if (cfg.theta_grid > 0.5 || cfg.mu_grid > 0.5 || cfg.s_grid > 0.1)
        throw InputError("grid resolutions are too coarse");
    if (cfg.refine_iters < 0) throw InputError("refine_iters must be non-negative");
}

struct SGrid {
    std::vector<double> s;
    std::vector<double> f;
    std::vector<Branch> branch;  // Pm for s < 0, PmDoublePrime for s >= 0
    std::vector<double> clamp;
    std::vector<double> inv_denom;
    std::vector<double> e_m;
};

SGrid build_s_grid(const CertifyConfig& cfg) {
    SGrid g;
    std::vector<double> pts;
    for (std::size_t k = 0;; ++k) {
        const double s = -1.0 + static_cast<double>(k) * cfg.s_grid;
        if (s >= 1.0 / 3.0) break;
        pts.push_back(s);
    }
    pts.push_back(-1.0 / 3.0);
    pts.push_back(0.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              pts.end());
    for (double s : pts) {
        if (std::abs(s) < 1e-15) s = 0.0;
        g.s.push_back(s);
        g.f.push_back(F(s));
        g.branch.push_back(s < 0.0 ? Branch::Pm : Branch::PmDoublePrime);
        g.clamp.push_back(positive_part(-(1.0 + 3.0 * s) / 2.0));
        g.inv_denom.push_back(1.0 / (1.0 - 3.0 * s));
        g.e_m.push_back((1.0 + 3.0 * cfg.d * g.clamp.back()) * g.inv_denom.back());
    }
    return g;
}

/// E_PM (s < 0) or E_PM'' (s >= 0) at each grid point for one theta.
void pm_values(const SGrid& g, double theta, double d, std::vector<double>& out) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    out.resize(g.s.size());
    for (std::size_t k = 0; k < g.s.size(); ++k) {
        const double f = g.f[k];
        const double lead = g.branch[k] == Branch::Pm ? f * ct * ct : f;
        out[k] = (1.0 - lead + d * st * (1.0 - f * (1.0 + st)) * g.clamp[k]) * g.inv_denom[k];
    }
}

InnerMin inner_min(const SGrid& g, const std::vector<double>& pm, double mu) {
    InnerMin best{std::numeric_limits<double>::infinity(), 0.0, Branch::Pm};
    std::size_t arg = 0;
    for (std::size_t k = 0; k < pm.size(); ++k) {
        const double v = mu * pm[k] + (1.0 - mu) * g.e_m[k];
        if (v < best.value) {
            best.value = v;
            arg = k;
        }
    }
    best.s = g.s[arg];
    best.branch = g.branch[arg];
    return best;
}

double objective_at(double theta, double mu, double s, Branch b, double d) {
    const auto v = branch_values(theta, s, d);
    return mu * (b == Branch::Pm ? v.e_pm : v.e_pm_double_prime) + (1.0 - mu) * v.e_m;
}

/// Lowers the grid minimum by golden-section search over s in the cells
/// adjacent to the worst grid point, staying on its branch.
InnerMin refine_inner(InnerMin m, double theta, double mu, const CertifyConfig& cfg) {
    double lo = m.s - cfg.s_grid;
    double hi = m.s + cfg.s_grid;
    if (m.branch == Branch::Pm) {
        lo = std::max(lo, -1.0);
        hi = std::min(hi, -1e-15);
    } else {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0 / 3.0 - cfg.s_grid / 2.0);
    }
    if (!(hi > lo)) return m;
    const double inv = 1.0 / kPhi;
    double x1 = hi - inv * (hi - lo);
    double x2 = lo + inv * (hi - lo);
    double f1 = objective_at(theta, mu, x1, m.branch, cfg.d);
    double f2 = objective_at(theta, mu, x2, m.branch, cfg.d);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - inv * (hi - lo); f1 = objective_at(theta, mu, x1, m.branch, cfg.d);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + inv * (hi - lo); f2 = objective_at(theta, mu, x2, m.branch, cfg.d);
        }
    }
    const double v = std::min(f1, f2);
    if (v < m.value) {
        m.value = v;
        m.s = f1 < f2 ? x1 : x2;
    }
    return m;
}

} // namespace

InnerMin qmc_inner_min(double theta, double mu, const CertifyConfig& cfg) {
    validate(cfg);
    const SGrid g = build_s_grid(cfg);
    std::vector<double> pm;
    pm_values(g, theta, cfg.d, pm);
    return inner_min(g, pm, mu);
}

RatioCertificate certify_qmc_ratio(const CertifyConfig& cfg) {
    validate(cfg);
    const SGrid g = build_s_grid(cfg);
    const double half_pi = std::numbers::pi / 2.0;
    const auto theta_steps = static_cast<std::size_t>(std::ceil(half_pi / cfg.theta_grid));
    const auto mu_steps = static_cast<std::size_t>(std::ceil(1.0 / cfg.mu_grid));
    auto theta_at = [&](std::size_t k) { return std::min(half_pi, static_cast<double>(k) * cfg.theta_grid); };
    auto mu_at = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(mu_steps); };

    RatioCertificate cert;
    cert.d = cfg.d;
    cert.config = cfg;
    cert.s_points = g.s.size();
    cert.grid_alpha = -std::numeric_limits<double>::infinity();

    std::vector<double> pm;
    for (std::size_t ti = 0; ti <= theta_steps; ++ti) {
        const double theta = theta_at(ti);
        pm_values(g, theta, cfg.d, pm);
        auto eval = [&](std::size_t mi) { return inner_min(g, pm, mu_at(mi)).value; };
        std::size_t lo = 0, hi = mu_steps;
        while (hi - lo > 2) {
            const std::size_t m1 = lo + (hi - lo) / 3;
            const std::size_t m2 = hi - (hi - lo) / 3;
            const double f1 = eval(m1), f2 = eval(m2);
            if (f1 < f2) lo = m1 + 1;
            else if (f1 > f2) hi = m2 - 1;
            else { lo = m1; hi = m2; if (m2 - m1 <= 2) break; }
        }
        for (std::size_t mi = lo; mi <= hi; ++mi) {
            const double v = eval(mi);
            if (v > cert.grid_alpha) {
                cert.grid_alpha = v;
                cert.grid_theta = theta;
                cert.grid_mu = mu_at(mi);
            }
        }
    }

    // Local trisection refinement around the grid incumbent.
    double theta = cert.grid_theta;
    double mu = cert.grid_mu;
    double best = cert.grid_alpha;
    double dt = cfg.theta_grid;
    double dm = cfg.mu_grid;
    for (int round = 0; round < cfg.refine_iters; ++round) {
        double bt = theta, bm = mu;
        for (int a = -1; a <= 1; ++a) {
            const double t = std::clamp(theta + a * dt, 0.0, half_pi);
            pm_values(g, t, cfg.d, pm);
            for (int b = -1; b <= 1; ++b) {
                if (a == 0 && b == 0) continue;
                const double m = std::clamp(mu + b * dm, 0.0, 1.0);
                const double v = inner_min(g, pm, m).value;
                if (v > best) {
                    best = v;
                    bt = t;
                    bm = m;
                }
            }
        }
        if (bt == theta && bm == mu) {
            dt /= 3.0;
            dm /= 3.0;
        }
        theta = bt;
        mu = bm;
    }
    pm_values(g, theta, cfg.d, pm);
    const InnerMin worst = refine_inner(inner_min(g, pm, mu), theta, mu, cfg);
    cert.alpha = worst.value;
    cert.argmax_theta = theta;
    cert.argmax_mu = mu;
    cert.worst_s = worst.s;
    cert.worst_branch = worst.branch;

    // Branch ordering and the s >= 0 reduction, pointwise on the grid.
    for (std::size_t ti = 0; ti <= theta_steps; ++ti) {
        const double t = theta_at(ti);
        for (std::size_t k = 0; k < g.s.size(); ++k) {
            const double s = g.s[k];
            const auto v = branch_values(t, s, g.f[k], cfg.d);
            const double tol = 1e-12 * std::max(1.0, std::abs(v.e_pm));
            const bool ordered = s > 0.0
                ? (v.e_pm_double_prime <= v.e_pm_prime + tol && v.e_pm_prime <= v.e_pm + tol)
                : (v.e_pm <= v.e_pm_prime + tol && v.e_pm_prime <= v.e_pm_double_prime + tol);
            if (!ordered) ++cert.ordering_violations;
            if (s >= 0.0 && (v.e_m < 1.0 - 1e-12 || v.e_pm_double_prime < 1.0 - 1e-12))
                ++cert.remark_violations;
        }
    }
    cert.ordering_holds = cert.ordering_violations == 0;
    cert.remark_holds = cert.remark_violations == 0;
    return cert;
}

MomentMap parse_moment_file(std::string_view text) {
    MomentMap out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string where = "moment file line " + std::to_string(line_no) + ": ";
        if (tok.size() != 3) throw InputError(where + "expected 'u v s'");
        long u, v;
        double s;
        try {
            std::size_t a = 0, b = 0, c = 0;
            u = std::stol(tok[0], &a);
            v = std::stol(tok[1], &b);
            s = std::stod(tok[2], &c);
            if (a != tok[0].size() || b != tok[1].size() || c != tok[2].size() || !std::isfinite(s))
                throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InputError(where + "malformed entry");
        }
        if (u < 0 || v < 0 || u == v) throw InputError(where + "invalid vertex pair");
        if (u > v) std::swap(u, v);
        const auto key = std::make_pair(static_cast<Vertex>(u), static_cast<Vertex>(v));
        if (!out.emplace(key, s).second) throw InputError(where + "duplicate edge");
    }
    return out;
}

MomentMap read_moment_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open moment file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_moment_file(ss.str());
}

MomentBound moment_upper_bound(const Graph& g, const MomentMap& moments, double d) {
    if (!(d > 0.0 && d <= 1.0)) throw InputError("d must lie in (0, 1]");
    MomentBound out;
    for (const auto& [key, s] : moments)
        if (!g.find_edge(key.first, key.second))
            throw InputError("moment given for non-edge (" + std::to_string(key.first) + ", " +
                             std::to_string(key.second) + ")");
    for (const auto& e : g.edges()) {
        const auto it = moments.find({e.u, e.v});
        if (it == moments.end())
            throw InputError("missing moment for edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        const double s = it->second;
        if (!(s >= -1.0 && s <= 1.0 / 3.0))
            throw InputError("moment for edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                             ") lies outside [-1, 1/3]");
        const double gij = (1.0 - 3.0 * s) / 2.0;
        out.s.push_back(s);
        out.x.push_back(d * positive_part(gij - 1.0));
        out.upper_bound += e.w * gij;
    }
    if (g.num_vertices() <= 14) out.x_in_matching_polytope = in_matching_polytope(g, out.x);
    return out;
}

} // namespace qmatch::certify

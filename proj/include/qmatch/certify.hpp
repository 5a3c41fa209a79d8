#pragma once

#include "qmatch/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmatch::certify {

/// Expected Bloch inner product after rounding two unit vectors with inner
/// product s by a random 3-dimensional Gaussian projection:
/// F(s) = 8/(3 pi) s 2F1(1/2, 1/2; 5/2; s^2). Throws InputError for |s| > 1.
double F(double s);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Direct simulation of the rounding: project u, v with a 3x2 standard
/// Gaussian matrix, normalize, average the inner product.
MonteCarloEstimate F_monte_carlo(double s, std::size_t samples, std::uint64_t seed);

/// Per-edge EPR ratio T(ln(phi)/2, x)/(1+x).
double epr_objective(double x);

struct EprCertificate {
    double minimum = 0.0;
    double argmin = 0.0;
    double grid_step = 0.0;
    double interior_minimum = 0.0;  // smallest value strictly inside (0, 1)
};

EprCertificate certify_epr_min(double grid_step = 1e-5);

struct AppendixBReport {
    double f0 = 0.0;
    double f1 = 0.0;
    double max_f = 0.0;          // over [0, 1]
    double min_f2 = 0.0;         // min f'' over [0, 1]
    double max_f2_fd_error = 0.0;  // closed-form f'' vs finite differences
    double max_g_increment = 0.0;  // largest g(z_{k+1}) - g(z_k) on [1, c]
    double g_at_c = 0.0;
    double g_at_c_closed = 0.0;  // 2(c - ln c)^2 - 4 c ln^2 c
    bool f_endpoints_zero = false;
    bool f_nonpositive = false;
    bool f_convex = false;
    bool g_decreasing = false;
    bool g_c_positive = false;
    bool all_passed() const {
        return f_endpoints_zero && f_nonpositive && f_convex && g_decreasing && g_c_positive;
    }
};

double appendix_f(double x);
double appendix_f2(double x);
double appendix_g(double z);

AppendixBReport check_appendix_B(std::size_t grid_points = 100001);

enum class Branch { Pm, PmDoublePrime };
std::string_view to_string(Branch b);

/// Per-edge ratio bounds at SDP moment s. Denominators are 1 - 3s.
struct BranchValues {
    double e_pm = 0.0;
    double e_pm_prime = 0.0;
    double e_pm_double_prime = 0.0;
    double e_m = 0.0;
};
BranchValues branch_values(double theta, double s, double f_of_s, double d);
BranchValues branch_values(double theta, double s, double d);

struct CertifyConfig {
    double d = 14.0 / 15.0;
    double theta_grid = 1e-3;
    double mu_grid = 1e-3;
    double s_grid = 1e-4;
    int refine_iters = 20;
};

struct RatioCertificate {
    double d = 0.0;
    double alpha = 0.0;           // minimax value at the refined optimizer
    double grid_alpha = 0.0;      // best value on the (theta, mu) grid
    double argmax_theta = 0.0;
    double argmax_mu = 0.0;
    double worst_s = 0.0;
    Branch worst_branch = Branch::Pm;
    double grid_theta = 0.0;
    double grid_mu = 0.0;
    CertifyConfig config;
    std::size_t s_points = 0;
    bool ordering_holds = false;  // E'' <= E' <= E for s > 0, reversed for s <= 0
    std::size_t ordering_violations = 0;
    bool remark_holds = false;    // E_M >= 1 and E'' >= 1 on s in [0, 1/3)
    std::size_t remark_violations = 0;
};

/// Maximizes over theta in [0, pi/2] and mu in [0, 1] the smaller of
/// min_{s in [-1,0)} mu E_PM + (1-mu) E_M and min_{s in [0,1/3)} mu E_PM'' + (1-mu) E_M.
RatioCertificate certify_qmc_ratio(const CertifyConfig& cfg = {});

/// Objective for fixed (theta, mu), minimized over the configured s grid.
struct InnerMin {
    double value = 0.0;
    double s = 0.0;
    Branch branch = Branch::Pm;
};
InnerMin qmc_inner_min(double theta, double mu, const CertifyConfig& cfg);

using MomentMap = std::map<std::pair<Vertex, Vertex>, double>;

/// Lines "u v s"; '#' comments. Throws InputError naming the line.
MomentMap parse_moment_file(std::string_view text);
MomentMap read_moment_file(const std::string& path);

struct MomentBound {
    double upper_bound = 0.0;         // sum w (1 - 3 s)/2
    std::vector<double> s;            // canonical edge order
    std::vector<double> x;            // d (g - 1)^+ with g = (1 - 3 s)/2
    std::optional<bool> x_in_matching_polytope;  // when n <= 14
};

MomentBound moment_upper_bound(const Graph& g, const MomentMap& moments, double d = 14.0 / 15.0);

} // namespace qmatch::certify

#include "qmatch/report.hpp"

#include "qmatch/error.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace qmatch::report {

std::string fmt(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(bool b) { return b ? "true" : "false"; }

namespace {

void write(const Json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) { out += "{}"; return; }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            write(it.value(), depth + 1, out);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) { out += "[]"; return; }
        bool scalars = true;
        for (const auto& v : j) scalars = scalars && !v.is_structured();
        if (scalars) {
            out += "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ", ";
                write(j[k], depth + 1, out);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) out += ",\n";
            out += pad;
            write(j[k], depth + 1, out);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? fmt(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json envelope(std::string algorithm, Json graph, Json params, std::uint64_t seed) {
    Json j;
    j["graph"] = std::move(graph);
    j["algorithm"] = std::move(algorithm);
    j["params"] = std::move(params);
    j["energies"] = Json::object();
    j["bounds"] = Json::object();
    j["ratio"] = Json::object();
    j["seed"] = seed;
    j["version"] = kVersion;
    return j;
}

Json bloch_json(const BlochVector& b) { return Json::array({b.x, b.y, b.z}); }

} // namespace

std::string dump_json(const Json& j) {
    std::string out;
    write(j, 0, out);
    out += "\n";
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw InvariantViolation("CSV row width mismatch");
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) text_ += ',';
        const auto& f = fields[k];
        if (f.find_first_of(",\"\n") == std::string::npos) {
            text_ += f;
        } else {
            text_ += '"';
            for (char c : f) {
                if (c == '"') text_ += '"';
                text_ += c;
            }
            text_ += '"';
        }
    }
    text_ += '\n';
}

Json graph_json(const Graph& g) {
    Json j;
    j["n"] = g.num_vertices();
    j["m"] = g.num_edges();
    j["total_weight"] = total_weight(g);
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back(Json::array({e.u, e.v, e.w}));
    j["edges"] = std::move(edges);
    return j;
}

Json epr_report_json(const Graph& g, const epr::Report& r, const epr::RunConfig& cfg,
                     std::uint64_t seed) {
    Json params;
    params["theta"] = cfg.theta;
    params["simulate_exact"] = cfg.simulate_exact;
    params["max_sim_qubits"] = cfg.max_sim_qubits;
    Json j = envelope("epr", graph_json(g), std::move(params), seed);
    j["energies"]["certified_lower_bound"] = r.certified_lower_bound;
    j["energies"]["king_lower_bound"] = r.king_lower_bound;
    j["energies"]["exact_energy"] = optional_number(r.exact_energy);
    j["bounds"]["total_weight"] = r.total_weight;
    j["bounds"]["max_fractional_matching"] = r.fractional.weight;
    j["bounds"]["upper_bound"] = r.upper_bound;
    j["ratio"]["certified"] = r.ratio_certified;
    j["ratio"]["exact_over_upper"] =
        r.exact_energy ? Json(r.upper_bound > 0.0 ? *r.exact_energy / r.upper_bound : 1.0) : Json(nullptr);
    Json sol;
    sol["fractional_matching"] = r.fractional.values;
    sol["gammas"] = r.gammas;
    sol["edge_certified"] = r.edge_certified;
    sol["edge_king_bound"] = r.edge_king_bound;
    sol["exact_edge_energies"] = r.exact_edge_energies ? Json(*r.exact_edge_energies) : Json(nullptr);
    j["solution"] = std::move(sol);
    return j;
}

std::string epr_report_csv(const Graph& g, const epr::Report& r) {
    CsvWriter csv({"u", "v", "w", "m", "gamma", "certified", "king_bound", "exact"});
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        csv.row({std::to_string(e.u), std::to_string(e.v), fmt(e.w), fmt(r.fractional.values[k]),
                 fmt(r.gammas[k]), fmt(r.edge_certified[k]), fmt(r.edge_king_bound[k]),
                 r.exact_edge_energies ? fmt((*r.exact_edge_energies)[k]) : std::string()});
    }
    return csv.str();
}

Json qmc_report_json(const Graph& g, const qmc::Report& r, qmc::ProviderKind provider,
                     std::uint64_t seed) {
    Json params;
    params["theta"] = r.theta;
    params["provider"] = qmc::to_string(provider);
    params["d"] = qmc::kStrengthenedD;
    Json j = envelope("qmc", graph_json(g), std::move(params), seed);
    j["energies"]["prod_energy"] = r.prod_energy;
    j["energies"]["match_energy"] = r.match_energy;
    j["energies"]["pmatch_energy"] = r.pmatch_energy;
    j["energies"]["combined_energy"] = r.combined_energy;
    j["energies"]["chosen"] = r.chosen;
    j["bounds"]["total_weight"] = r.total_weight;
    j["bounds"]["max_matching"] = r.max_matching;
    j["bounds"]["max_fractional_matching"] = r.max_fractional_matching;
    j["bounds"]["w_plus_fm"] = r.upper_bounds.w_plus_fm;
    j["bounds"]["w_plus_m_over_d"] = r.upper_bounds.w_plus_m_over_d;
    j["bounds"]["exact_lambda_max"] = optional_number(r.exact_lambda_max);
    j["ratio"]["observed"] = optional_number(r.observed_ratio);
    j["ratio"]["combined_over_w_plus_fm"] =
        r.upper_bounds.w_plus_fm > 0.0 ? r.combined_energy / r.upper_bounds.w_plus_fm : 1.0;

    Json sol;
    Json blochs = Json::array();
    for (const auto& b : r.product.blochs) blochs.push_back(bloch_json(b));
    sol["product_state"] = std::move(blochs);
    sol["match_edges"] = r.match.matching.edges;
    sol["pmatch_edges"] = r.pmatch.state.matching.edges;
    Json classes = Json::array();
    for (auto c : r.pmatch.classes) classes.push_back(std::string(qmc::to_string(c)));
    sol["pmatch_edge_classes"] = std::move(classes);
    sol["pmatch_edge_energies"] = r.pmatch.edge_energies;
    sol["match_edge_energies"] = r.match.edge_energies;
    j["solution"] = std::move(sol);
    return j;
}

std::string qmc_report_csv(const Graph& g, const qmc::Report& r) {
    CsvWriter csv({"u", "v", "w", "t", "pmatch_class", "pmatch_energy", "match_energy"});
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        csv.row({std::to_string(e.u), std::to_string(e.v), fmt(e.w),
                 fmt(r.product.blochs[e.u].dot(r.product.blochs[e.v])),
                 std::string(qmc::to_string(r.pmatch.classes[k])), fmt(r.pmatch.edge_energies[k]),
                 fmt(r.match.edge_energies[k])});
    }
    return csv.str();
}

Json exact_json(const Graph& g, const std::vector<Hamiltonian>& kinds,
                const std::vector<TopEigenpair>& tops, std::uint64_t seed) {
    Json params;
    PowerIterationOptions defaults;
    params["tolerance"] = defaults.tolerance;
    params["max_iterations"] = defaults.max_iterations;
    Json j = envelope("exact", graph_json(g), std::move(params), seed);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        const std::string name(to_string(kinds[k]));
        j["energies"]["lambda_max_" + name] = tops[k].value;
        j["energies"]["iterations_" + name] = tops[k].iterations;
    }
    const double w = total_weight(g);
    const double fm = max_weight_fractional_matching(g).weight;
    j["bounds"]["total_weight"] = w;
    j["bounds"]["w_plus_fm"] = w + fm;
    return j;
}

Json epr_certificate_json(const certify::EprCertificate& c, std::uint64_t seed) {
    Json params;
    params["theta"] = epr::kDefaultTheta;
    params["x_grid"] = c.grid_step;
    Json j = envelope("certify_epr", nullptr, std::move(params), seed);
    j["ratio"]["alpha"] = c.minimum;
    j["ratio"]["target"] = std::numbers::phi / 2.0;
    j["certificate"]["argmin_x"] = c.argmin;
    j["certificate"]["endpoint_0"] = certify::epr_objective(0.0);
    j["certificate"]["endpoint_1"] = certify::epr_objective(1.0);
    j["certificate"]["interior_minimum"] = c.interior_minimum;
    return j;
}

Json qmc_certificate_json(const certify::RatioCertificate& c, std::uint64_t seed) {
    Json params;
    params["d"] = c.d;
    params["theta_grid"] = c.config.theta_grid;
    params["mu_grid"] = c.config.mu_grid;
    params["s_grid"] = c.config.s_grid;
    params["refine_iters"] = c.config.refine_iters;
    params["s_points"] = c.s_points;
    Json j = envelope("certify_qmc", nullptr, std::move(params), seed);
    j["ratio"]["alpha"] = c.alpha;
    j["ratio"]["grid_alpha"] = c.grid_alpha;
    auto& cert = j["certificate"];
    cert["argmax_theta"] = c.argmax_theta;
    cert["argmax_theta_complement"] = std::numbers::pi / 2.0 - c.argmax_theta;
    cert["argmax_mu"] = c.argmax_mu;
    cert["grid_theta"] = c.grid_theta;
    cert["grid_mu"] = c.grid_mu;
    cert["worst_s"] = c.worst_s;
    cert["worst_branch"] = std::string(certify::to_string(c.worst_branch));
    cert["ordering_holds"] = c.ordering_holds;
    cert["ordering_violations"] = c.ordering_violations;
    cert["nonnegative_s_reduction_holds"] = c.remark_holds;
    cert["nonnegative_s_reduction_violations"] = c.remark_violations;
    return j;
}

Json appendix_b_json(const certify::AppendixBReport& r, std::uint64_t seed) {
    Json j = envelope("certify_appendix_b", nullptr, Json::object(), seed);
    auto& c = j["certificate"];
    c["f_0"] = r.f0;
    c["f_1"] = r.f1;
    c["max_f"] = r.max_f;
    c["min_f2"] = r.min_f2;
    c["f2_finite_difference_error"] = r.max_f2_fd_error;
    c["max_g_increment"] = r.max_g_increment;
    c["g_at_c"] = r.g_at_c;
    c["g_at_c_closed_form"] = r.g_at_c_closed;
    c["f_endpoints_zero"] = r.f_endpoints_zero;
    c["f_nonpositive"] = r.f_nonpositive;
    c["f_convex"] = r.f_convex;
    c["g_decreasing"] = r.g_decreasing;
    c["g_c_positive"] = r.g_c_positive;
    c["all_passed"] = r.all_passed();
    return j;
}

Json moment_bound_json(const Graph& g, const certify::MomentBound& b, double d, std::uint64_t seed) {
    Json params;
    params["d"] = d;
    Json j = envelope("moment_bound", graph_json(g), std::move(params), seed);
    j["bounds"]["moment_upper_bound"] = b.upper_bound;
    j["bounds"]["w_plus_fm"] = total_weight(g) + max_weight_fractional_matching(g).weight;
    j["certificate"]["s"] = b.s;
    j["certificate"]["x"] = b.x;
    j["certificate"]["x_in_matching_polytope"] =
        b.x_in_matching_polytope ? Json(*b.x_in_matching_polytope) : Json(nullptr);
    return j;
}

namespace {

void flatten(const Json& j, const std::string& prefix, CsvWriter& csv) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), csv);
    } else if (j.is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "." + std::to_string(k), csv);
    } else if (j.is_number_float()) {
        csv.row({prefix, fmt(j.get<double>())});
    } else if (j.is_string()) {
        csv.row({prefix, j.get<std::string>()});
    } else {
        csv.row({prefix, j.dump()});
    }
}

} // namespace

std::string flat_csv(const Json& j) {
    CsvWriter csv({"key", "value"});
    flatten(j, "", csv);
    return csv.str();
}

} // namespace qmatch::report

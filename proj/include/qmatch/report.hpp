#pragma once

#include "qmatch/certify.hpp"
#include "qmatch/epr.hpp"
#include "qmatch/graph.hpp"
#include "qmatch/qmc.hpp"

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qmatch::report {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// 17 significant digits, "%.17g".
std::string fmt(double v);
std::string fmt(bool b);

/// JSON text with every floating-point value printed by fmt(double).
std::string dump_json(const Json& j);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& fields);
    std::string str() const { return text_; }

private:
    std::size_t width_;
    std::string text_;
};

Json graph_json(const Graph& g);

Json epr_report_json(const Graph& g, const epr::Report& r, const epr::RunConfig& cfg,
                     std::uint64_t seed);
std::string epr_report_csv(const Graph& g, const epr::Report& r);

Json qmc_report_json(const Graph& g, const qmc::Report& r, qmc::ProviderKind provider,
                     std::uint64_t seed);
std::string qmc_report_csv(const Graph& g, const qmc::Report& r);

Json exact_json(const Graph& g, const std::vector<Hamiltonian>& kinds,
                const std::vector<TopEigenpair>& tops, std::uint64_t seed);

Json epr_certificate_json(const certify::EprCertificate& c, std::uint64_t seed);
Json qmc_certificate_json(const certify::RatioCertificate& c, std::uint64_t seed);
Json appendix_b_json(const certify::AppendixBReport& r, std::uint64_t seed);
Json moment_bound_json(const Graph& g, const certify::MomentBound& b, double d, std::uint64_t seed);

/// Flattens a certificate object into "key,value" lines.
std::string flat_csv(const Json& j);

} // namespace qmatch::report

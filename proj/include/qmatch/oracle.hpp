#pragma once

#include "qmatch/graph.hpp"
#include "qmatch/qmc.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmatch::oracle {

inline constexpr int kMaxOracleVertices = 12;
inline constexpr double kMonogamyTolerance = 1e-7;

struct MonogamyReport {
    double lambda_qmc = 0.0;
    double lambda_epr = 0.0;
    double total_weight = 0.0;
    double max_matching = 0.0;
    double max_fractional_matching = 0.0;
    double fm_bound = 0.0;  // W + FM
    double md_bound = 0.0;  // W + M/d, d = 14/15
    bool fm_bound_qmc = false;
    bool fm_bound_epr = false;
    bool md_bound_qmc = false;
    bool matching_chain = false;  // FM <= 3M/2, hence 3M >= FM
    bool ok() const { return fm_bound_qmc && fm_bound_epr && md_bound_qmc && matching_chain; }
};

/// Exact lambda_max for both Hamiltonians checked against the monogamy bounds.
/// Throws InstanceTooLarge above kMaxOracleVertices.
MonogamyReport verify_monogamy(const Graph& g);

struct EndToEnd {
    double epr_certified = 0.0;
    double epr_exact = 0.0;
    double epr_lambda = 0.0;
    double epr_certified_ratio = 1.0;  // certified / lambda_max
    double epr_exact_ratio = 1.0;      // simulated / lambda_max
    qmc::Report qmc;
    double qmc_ratio = 1.0;
    double min_ratio = 1.0;  // min(epr_exact_ratio, qmc_ratio)
};

EndToEnd end_to_end_ratio(const Graph& g, std::uint64_t seed,
                          qmc::ProviderKind provider = qmc::ProviderKind::ExactSearch,
                          double qmc_theta = qmc::kDefaultTheta);

struct CorpusEntry {
    std::string name;
    GeneratorSpec spec;
};

/// Manifest lines: "kind n seed weights [p]" with '#' comments.
std::vector<CorpusEntry> parse_corpus_manifest(std::string_view text);
std::vector<CorpusEntry> read_corpus_manifest(const std::string& path);
std::string default_corpus_path();

struct CorpusRow {
    std::string name;
    int n = 0;
    std::size_t m = 0;
    MonogamyReport monogamy;
    EndToEnd ratios;
};

std::vector<CorpusRow> run_corpus(const std::vector<CorpusEntry>& entries, std::uint64_t seed,
                                  qmc::ProviderKind provider = qmc::ProviderKind::ExactSearch,
                                  double qmc_theta = qmc::kDefaultTheta);

struct CorpusSummary {
    std::size_t instances = 0;
    std::size_t monogamy_violations = 0;
    std::size_t chain_violations = 0;
    double min_qmc_ratio = 1.0;
    std::string min_qmc_instance;
    double min_epr_certified_ratio = 1.0;
    std::vector<std::string> below_target;  // QMC ratio under 0.611
};

CorpusSummary summarize(const std::vector<CorpusRow>& rows);

std::string corpus_csv(const std::vector<CorpusRow>& rows);

} // namespace qmatch::oracle

#pragma once

#include <string>
#include <vector>

#include "wavesel/bench.hpp"
#include "wavesel/certify.hpp"
#include "wavesel/concentration.hpp"
#include "wavesel/estimator.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/transform.hpp"

namespace wavesel {

// Every document carries a "schema" field naming its layout and version.

std::string certificate_to_json(const SlbCertificate& cert, const Model& model);

struct RiskRow {
    std::size_t dimension = 0;
    double empirical_risk = 0.0;
    std::string method;
    bool ok = true;
    std::string failure;
    bool has_truth = false;
    RiskReport risk;
};
std::string risk_rows_to_json(const std::vector<RiskRow>& rows, const SampleMeta& meta, const std::string& collection);
/// D,empirical_risk,bias,excess,total (truth columns empty without truth).
std::string risk_rows_to_csv(const std::vector<RiskRow>& rows);

std::string selection_to_json(const std::vector<SelectionOutcome>& outcomes, const FittedCollection& fc,
                              const SampleMeta& meta, const std::string& collection);
std::vector<SelectionOutcome> selection_from_json(const std::string& text);

std::string bench_report_to_json(const BenchReport& report);
BenchReport bench_report_from_json(const std::string& text);

std::string concentration_to_json(const ConcentrationReport& report);
ConcentrationReport concentration_from_json(const std::string& text);

std::string rep_oracle_to_json(const RepOracleResult& result);

std::string coefficients_to_json(const CoefficientTree& tree, const std::string& filter, std::size_t kept_dimension);
CoefficientTree coefficients_from_json(const std::string& text, std::size_t* kept_dimension = nullptr);

/// Reads the "schema" field of a JSON document ("" if absent).
std::string json_schema_of(const std::string& text);

}  // namespace wavesel

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ptspec/basis.hpp"
#include "ptspec/jordan.hpp"
#include "ptspec/operator_matrix.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/resonance.hpp"
#include "ptspec/rspt.hpp"
#include "ptspec/spectrum.hpp"

namespace ptspec {

inline constexpr const char* kSchemaVersion = "1";

/// Shortest representation that round-trips.
std::string format_double(double x);

/// row,col,re,im with a header line; zero entries are skipped.
std::string matrix_csv(const OperatorMatrix& m);
std::string matrix_csv(const CMatrix& m);

nlohmann::json matrix_json(const CMatrix& m);
nlohmann::json matrix_json(const OperatorMatrix& m, const BasisTruncation& basis);

nlohmann::json to_json(const MultiIndex& s);
nlohmann::json to_json(const Cluster& c);
nlohmann::json to_json(const JordanBlockReport& r);
nlohmann::json to_json(const ConditionAReport& r);
nlohmann::json to_json(const GapReport& r);
nlohmann::json to_json(const PerturbationSeries& s);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const BranchTrackResult& r);
nlohmann::json to_json(const SlopeReport& r);
nlohmann::json complex_json(Complex z);

/// g,index,re,im,trusted
std::string scan_csv(const std::vector<SpectrumReport>& reports);
/// branch_id,g,re,im
std::string branches_csv(const BranchTrackResult& r);

}  // namespace ptspec

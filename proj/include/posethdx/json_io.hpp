#pragma once

#include <json.hpp>
#include <string>

#include "posethdx/poset.hpp"
#include "posethdx/properties.hpp"
#include "posethdx/spectral.hpp"
#include "posethdx/theorems.hpp"

namespace posethdx {

struct PosetBundle {
  GradedPoset poset;
  WeightScheme weights;
};

// Poset file schema:
//   {"d": int,
//    "elements": [{"id": int, "rank": int, "label": string}, ...],
//    "covers": [[child, parent], ...],
//    "p": {"child,parent": float, ...},        // omitted for standard schemes
//    "m_top": {"id": float, ...}}              // omitted means uniform tops
nlohmann::json poset_to_json(const GradedPoset& poset, const WeightScheme& weights);
PosetBundle poset_from_json(const nlohmann::json& j);

PosetBundle load_poset_file(const std::string& path);
void save_poset_file(const std::string& path, const GradedPoset& poset, const WeightScheme& weights);

// Plain-text rows of decimal entries, plus "<path>.index.json" carrying the
// levels and element ids of both axes.
void write_matrix_dump(const std::string& path, const LinearOp& op, const GradedPoset& poset);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const SpectralSummary& summary);
nlohmann::json to_json(const ConnectivityReport& report);
nlohmann::json to_json(const ExpansionCertificate& cert);
nlohmann::json to_json(const RegularityReport& report);
nlohmann::json to_json(const ULReport& report);
nlohmann::json to_json(const ALReport& report);
nlohmann::json to_json(const TLReport& report);
nlohmann::json to_json(const PredictedConstants& constants);
nlohmann::json to_json(const BoundCheck& check);
nlohmann::json to_json(const ResidualReport& report);
nlohmann::json to_json(const BasicLocalizationReport& report);
nlohmann::json to_json(const UpLocalizationReport& report);
nlohmann::json to_json(const TricklingLocalizationReport& report);
nlohmann::json to_json(const WalkIdentityReport& report);
nlohmann::json to_json(const TricklingBound& bound);
nlohmann::json to_json(const EposetDecomposition& dec);
nlohmann::json to_json(const PosetificationCertificate& cert);

}  // namespace posethdx

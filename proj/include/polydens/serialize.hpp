#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "polydens/counterexample.hpp"
#include "polydens/experiments.hpp"
#include "polydens/exponents.hpp"
#include "polydens/maps.hpp"
#include "polydens/search.hpp"
#include "polydens/varieties.hpp"

namespace polydens {

using Json = nlohmann::json;  // std::map-backed, so keys come out sorted

// Rounds to 12 significant digits; non-finite values become null.
Json number(double v);

Json to_json(const Rational& r);
Json to_json(const QuadForm& q);
Json to_json(const GroupElement& g);
Json to_json(const VarietySpec& v);
Json to_json(const MapFamily& f);
Json to_json(const LatticePoint& p);
Json to_json(const SearchOutcome& o, bool timing = false);
Json to_json(const RunRecord& r, bool timing = false);
Json to_json(const ExponentFit& f);
Json to_json(const CampaignSummary& s, bool timing = false);
Json to_json(const FamilyTemplate& t);
Json to_json(const Schedule& s);
Json to_json(const AlphaInstance& a);
Json to_json(const MarginReport& m);
Json to_json(const NoSolutionReport& r);
Json to_json(const TheoremEntry& e);
Json to_json(const GrowthFit& g);

std::string counts_csv(std::span<const CountRecord> records);
std::string records_csv(std::span<const RunRecord> records);
std::string campaign_csv(const CampaignSummary& s);

}  // namespace polydens

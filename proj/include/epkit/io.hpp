#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "epkit/family.hpp"
#include "epkit/locator.hpp"
#include "epkit/loop.hpp"
#include "epkit/tracker.hpp"

namespace epk {

using Json = nlohmann::ordered_json;

/// Round-trip-safe decimal rendering (17 significant digits).
std::string format17(double v);

// ---- family descriptors ----------------------------------------------------

Json family_to_json(const HamiltonianFamily& f);
HamiltonianFamily family_from_json(const Json& j);

/// Builtin name ("paper2x2", "paper3x3", "tep3x3") or path to a descriptor file.
HamiltonianFamily family_from_spec(const std::string& name_or_path);

// ---- loops ------------------------------------------------------------------

Json loop_to_json(const ParameterLoop& loop);
ParameterLoop loop_from_json(const Json& j);

// ---- exceptional point records ----------------------------------------------

Json ep_records_to_json(const std::vector<EPRecord>& eps);
void write_ep_records_csv(std::ostream& os, const std::vector<EPRecord>& eps);

// ---- grid fields --------------------------------------------------------------

/// Header: alpha,beta,min_gap,abs_discriminant; one row per node, beta-major.
void write_gap_field_csv(std::ostream& os, const GapField& field);

/// Header: alpha,beta,re1,im1,...,reN,imN,flag; one row per node, beta-major.
void write_sheet_csv(std::ostream& os, const SheetSurface& sheet);

// ---- track results -------------------------------------------------------------

Json track_to_json(const TrackResult& t);
TrackResult track_from_json(const Json& j);

// ---- files ----------------------------------------------------------------------

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
Json parse_json(const std::string& text, const std::string& what);

}  // namespace epk

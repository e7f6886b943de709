#pragma once

#include <string>

#include <json.hpp>

#include "stabcert/criteria.hpp"
#include "stabcert/ddesim.hpp"
#include "stabcert/model.hpp"

namespace stabcert {

using Json = nlohmann::json;

/// Parses a network from its JSON encoding. Throws Error(parse) with a JSON
/// pointer to the offending field, or Error(validation) for semantic problems.
NetworkSpec spec_from_json(const Json& j);
NetworkSpec spec_from_text(const std::string& text);
Json to_json(const NetworkSpec& spec);

/// {"kind": "constant", "values": [...]} or
/// {"kind": "sampled-cubic", "span": s, "values": [[...], ...]}; span defaults
/// to the network's tau_max.
History history_from_json(const Json& j, const NetworkSpec& spec);
History history_from_text(const std::string& text, const NetworkSpec& spec);

Certificate certificate_from_json(const Json& j);
Certificate certificate_from_text(const std::string& text);
Json to_json(const Certificate& cert);

Json to_json(const StarBounds& sb);
Json to_json(const SimReport& rep);
Json to_json(const Matrix& m);

/// Parses text as JSON, turning syntax errors into Error(parse) with the
/// line and column.
Json parse_json_text(const std::string& text, const std::string& what);

/// FNV-1a 64-bit digest of the canonical JSON dump, as 16 hex digits.
std::string spec_digest(const NetworkSpec& spec);

}  // namespace stabcert

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "covbal/baselines.hpp"
#include "covbal/test_result.hpp"

namespace covbal {

// Every field is always present (null when not applicable) so the key set
// of a test block depends only on its type.
nlohmann::ordered_json to_json(const TestResult& r);
nlohmann::ordered_json to_json(const HotellingResult& r);
nlohmann::ordered_json to_json(const LogitFit& fit);
nlohmann::ordered_json to_json(const BalanceTable& table);

// One "key = value" line per field of to_json(r), in the same order; nested
// arrays are written inline.
void write_text_block(const nlohmann::ordered_json& block, std::ostream& out);

// Shortest text that parses back to the same double.
std::string format_double(double v);

// Version string compiled into the library.
const char* library_version();

// ISO-8601 UTC time of the call, second resolution.
std::string utc_timestamp();

}  // namespace covbal

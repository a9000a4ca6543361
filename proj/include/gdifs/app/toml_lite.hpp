#pragma once

#include <string_view>

#include <json.hpp>

#include "gdifs/expr.hpp"

namespace gdifs::app {

using Json = nlohmann::ordered_json;

/// Bad config text or contents; the message carries line:column when known.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Reads the TOML subset used by gdifs configs into a JSON object:
/// [table] and [a.b] headers, [[array]] of tables, bare or quoted keys,
/// basic/literal strings, integers, floats, booleans, arrays and inline
/// tables (which may span lines). Dates and multi-line strings are not
/// supported.
Json parse_toml(std::string_view text);

}  // namespace gdifs::app

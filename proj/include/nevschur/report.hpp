#pragma once

// Report construction: complex values as [re, im], matrices as nested rows,
// insertion-ordered objects so output bytes are deterministic.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nevschur/numkit.hpp"

namespace nevschur::report {

using Json = nlohmann::ordered_json;

Json complex_value(cdouble z);
Json matrix(const CMatrix& a);
Json real_vector(const RVector& v);
Json points(const std::vector<cdouble>& zs);

/// FNV-1a 64-bit digest as 16 lowercase hex digits.
std::string digest(std::string_view bytes);

/// Parses "a+bi", "a-bi", "a", "bi", "i", "-i" (spaces ignored).
/// Throws InvalidArgument on anything else.
cdouble parse_complex(std::string_view text);

std::string dump(const Json& j);

}  // namespace nevschur::report

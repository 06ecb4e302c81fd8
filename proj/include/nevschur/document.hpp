#pragma once

// Canonical JSON system documents:
//   {"format_version":"1","dim_input":m,"dim_state":n,"selfadjoint":b,
//    "matrix":[[[re,im],...],...]}
// Fields appear in this order, floats use the shortest decimal that round
// trips, and the file ends with one newline. save(load(doc)) is byte-identical
// for canonical input.

#include <string>
#include <string_view>

#include "nevschur/systems.hpp"

namespace nevschur {

/// Shortest round-trip decimal for a finite double.
std::string format_double(double x);

std::string serialize_system(const PassiveSystem& sys);

/// Throws Parse (with line and column) for malformed JSON or schema
/// violations, and the validation error kinds for invalid operators.
PassiveSystem parse_system(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

PassiveSystem load_system(const std::string& path);
void save_system(const PassiveSystem& sys, const std::string& path);

}  // namespace nevschur

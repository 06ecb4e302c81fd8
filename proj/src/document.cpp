#include "nevschur/document.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nevschur {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "cannot serialize a non-finite value");
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string serialize_system(const PassiveSystem& sys) {
  const CMatrix& t = sys.matrix();
  std::string out;
  out += "{\"format_version\":\"1\",\"dim_input\":";
  out += std::to_string(sys.dim_input());
  out += ",\"dim_state\":";
  out += std::to_string(sys.dim_state());
  out += ",\"selfadjoint\":";
  out += sys.selfadjoint() ? "true" : "false";
  out += ",\"matrix\":[";
  for (Index i = 0; i < t.rows(); ++i) {
    if (i > 0) out += ',';
    out += '[';
    for (Index j = 0; j < t.cols(); ++j) {
      if (j > 0) out += ',';
      out += '[';
      out += format_double(t(i, j).real());
      out += ',';
      out += format_double(t(i, j).imag());
      out += ']';
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorKind::Parse, "schema: " + msg);
}

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Index count_field(const nlohmann::json& j, const char* key, Index min) {
  if (!j.contains(key)) schema_error(std::string("missing field \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) schema_error(std::string("\"") + key + "\" must be an integer");
  const auto x = v.get<long long>();
  if (x < min) schema_error(std::string("\"") + key + "\" must be >= " + std::to_string(min));
  return static_cast<Index>(x);
}

}  // namespace

PassiveSystem parse_system(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorKind::Parse, position(text, byte) + ": invalid JSON");
  }
  if (!j.is_object()) schema_error("document must be an object");
  if (!j.contains("format_version") || j.at("format_version") != "1") {
    schema_error("format_version must be \"1\"");
  }
  const Index m = count_field(j, "dim_input", 1);
  const Index n = count_field(j, "dim_state", 0);
  if (!j.contains("selfadjoint") || !j.at("selfadjoint").is_boolean()) {
    schema_error("\"selfadjoint\" must be a boolean");
  }
  const bool sa = j.at("selfadjoint").get<bool>();
  if (!j.contains("matrix") || !j.at("matrix").is_array()) schema_error("\"matrix\" must be an array");
  const auto& rows = j.at("matrix");
  const Index d = m + n;
  if (static_cast<Index>(rows.size()) != d) {
    schema_error("matrix must have dim_input + dim_state = " + std::to_string(d) + " rows");
  }
  CMatrix t(d, d);
  for (Index i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      schema_error("row " + std::to_string(i) + " must have " + std::to_string(d) + " entries");
    }
    for (Index k = 0; k < d; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        schema_error("entry (" + std::to_string(i) + "," + std::to_string(k) +
                     ") must be a [re, im] pair of numbers");
      }
      t(i, k) = cdouble(e[0].get<double>(), e[1].get<double>());
    }
  }
  return PassiveSystem::validate(t, m, sa);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << bytes;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

PassiveSystem load_system(const std::string& path) { return parse_system(read_file(path)); }

void save_system(const PassiveSystem& sys, const std::string& path) {
  write_file(path, serialize_system(sys));
}

}  // namespace nevschur

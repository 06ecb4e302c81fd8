#include "nevschur/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace nevschur::report {

Json complex_value(cdouble z) { return Json::array({z.real(), z.imag()}); }

Json matrix(const CMatrix& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(complex_value(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json real_vector(const RVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json points(const std::vector<cdouble>& zs) {
  Json out = Json::array();
  for (cdouble z : zs) out.push_back(complex_value(z));
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorKind::InvalidArgument, "cannot parse complex number \"" + std::string(text) + "\"");
}

// Parses a signed decimal at s[pos..]; returns false when none is present.
bool read_number(const std::string& s, std::size_t& pos, double& out) {
  const char* first = s.data() + pos;
  const char* last = s.data() + s.size();
  const char* p = first;
  if (p < last && *p == '+') ++p;
  const auto res = std::from_chars(p, last, out);
  if (res.ec != std::errc()) return false;
  pos = static_cast<std::size_t>(res.ptr - s.data());
  return true;
}

}  // namespace

cdouble parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s += c;
  }
  if (s.empty()) bad(text);
  if (s.back() != 'i' && s.back() != 'j') {
    std::size_t pos = 0;
    double re = 0.0;
    if (!read_number(s, pos, re) || pos != s.size()) bad(text);
    return {re, 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or leading.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0;
  std::string imag_part = body;
  if (split != std::string::npos) {
    const std::string real_part = body.substr(0, split);
    std::size_t pos = 0;
    if (!read_number(real_part, pos, re) || pos != real_part.size()) bad(text);
    imag_part = body.substr(split);
  }
  double im = 0.0;
  if (imag_part.empty() || imag_part == "+") {
    im = 1.0;
  } else if (imag_part == "-") {
    im = -1.0;
  } else {
    std::size_t pos = 0;
    if (!read_number(imag_part, pos, im) || pos != imag_part.size()) bad(text);
  }
  if (!std::isfinite(re) || !std::isfinite(im)) bad(text);
  return {re, im};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace nevschur::report

#include "vage/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "vage/errors.hpp"

namespace vage {

namespace {

void bad(const std::string& what) { throw DomainError("json: " + what); }

std::string number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  if (v == 0.0) return "0";  // also folds -0, which would not survive a round trip
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write(const Json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(std::size_t(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        newline(depth + 1);
        write(j[i], indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

double get_number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

std::uint64_t get_uint(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

std::string dump_canonical(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

Json to_json(const MultiIndex& a) {
  Json out = Json::array();
  for (const auto& [g, e] : a.entries()) out.push_back(Json::array({g, e}));
  return out;
}

Json to_json(const TruncationSpec& t) { return Json{{"K", t.max_generator}, {"N", t.max_degree}}; }

Json to_json(const Series& f) {
  Json terms = Json::array();
  for (const auto& [a, c] : f.terms()) {
    terms.push_back(Json{{"alpha", to_json(a)}, {"re", c.real()}, {"im", c.imag()}});
  }
  return Json{{"window", to_json(f.window())}, {"terms", terms}};
}

Json to_json(const WeightSpec& w) {
  Json out{{"family", to_string(w.family())}};
  switch (w.family()) {
    case WeightFamily::power: out["c"] = w.c(); break;
    case WeightFamily::custom_generators: out["w"] = w.generator_weights(); break;
    case WeightFamily::tensor:
      out["left"] = to_json(w.left());
      out["right"] = to_json(w.right());
      break;
    default: break;
  }
  return out;
}

Json to_json(const RingMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const Realization& r) {
  return Json{{"A", to_json(r.A)}, {"B", to_json(r.B)}, {"C", to_json(r.C)}, {"D", to_json(r.D)}};
}

MultiIndex multi_index_from_json(const Json& j) {
  if (!j.is_array()) bad("multi-index must be an array of [generator, exponent] pairs");
  std::vector<MultiIndex::Entry> entries;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) bad("multi-index entries must be [generator, exponent]");
    entries.emplace_back(static_cast<Generator>(get_uint(e[0], "generator")),
                         static_cast<Exponent>(get_uint(e[1], "exponent")));
  }
  return MultiIndex(std::move(entries));
}

TruncationSpec window_from_json(const Json& j) {
  const auto k = get_uint(field(j, "K"), "K");
  if (k == 0) bad("window K must be positive");
  return {static_cast<Generator>(k), static_cast<std::uint32_t>(get_uint(field(j, "N"), "N"))};
}

Series series_from_json(const Json& j) {
  const auto t = window_from_json(field(j, "window"));
  const auto& terms = field(j, "terms");
  if (!terms.is_array()) bad("terms must be an array");
  Series::Terms out;
  for (const auto& term : terms) {
    const auto a = multi_index_from_json(field(term, "alpha"));
    const double re = term.contains("re") ? get_number(term["re"], "re") : 0.0;
    const double im = term.contains("im") ? get_number(term["im"], "im") : 0.0;
    out[a] += Complex(re, im);
  }
  std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) <= kZeroThreshold; });
  return Series(t, std::move(out));
}

WeightSpec weight_from_json(const Json& j) {
  if (j.is_string()) return weight_from_json(Json{{"family", j}});
  const auto& fam = field(j, "family");
  if (!fam.is_string()) bad("family must be a string");
  const auto f = fam.get<std::string>();
  if (f == "schwartz") return WeightSpec::schwartz();
  if (f == "gspace") return WeightSpec::gspace();
  if (f == "kondratiev") return WeightSpec::kondratiev();
  if (f == "doubly_exponential") return WeightSpec::doubly_exponential();
  if (f == "power") return WeightSpec::power(get_number(field(j, "c"), "c"));
  if (f == "custom_generators") {
    const auto& w = field(j, "w");
    if (!w.is_array()) bad("w must be an array of numbers");
    std::vector<double> v;
    for (const auto& x : w) v.push_back(get_number(x, "w entry"));
    return WeightSpec::custom_generators(std::move(v));
  }
  if (f == "tensor") {
    return WeightSpec::tensor(weight_from_json(field(j, "left")), weight_from_json(field(j, "right")));
  }
  bad("unknown weight family \"" + f + "\"");
  return WeightSpec::gspace();
}

RingMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    bad("matrix must be a nonempty array of nonempty rows");
  }
  const std::size_t rows = j.size(), cols = j[0].size();
  std::vector<Series> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) bad("matrix rows must have equal length");
    for (const auto& s : row) entries.push_back(series_from_json(s));
  }
  return RingMatrix(rows, cols, std::move(entries));
}

Realization realization_from_json(const Json& j) {
  Realization r{matrix_from_json(field(j, "A")), matrix_from_json(field(j, "B")),
                matrix_from_json(field(j, "C")), matrix_from_json(field(j, "D"))};
  r.validate();
  return r;
}

}  // namespace vage

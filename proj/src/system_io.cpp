#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "moran/errors.hpp"
#include "moran/system.hpp"

namespace moran {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void reject_unknown_keys(const json &obj, const std::set<std::string> &allowed,
                         const std::string &where) {
  for (const auto &[key, _] : obj.items()) {
    if (!allowed.count(key)) throw InputError(where + ": unknown key '" + key + "'");
  }
}

Integer read_integer(const json &v, const std::string &where) {
  if (v.is_number_integer()) return Integer(v.get<long>());
  if (v.is_string()) {
    const Rational r = Rational::parse(v.get<std::string>());
    if (!r.is_integer()) throw InputError(where + ": expected an integer");
    return r.num();
  }
  throw InputError(where + ": expected an integer");
}

Rational read_rational(const json &v, const std::string &where) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) return Rational::from_double(v.get<double>());
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  throw InputError(where + ": expected a number or a \"p/q\" string");
}

std::vector<Integer> read_integer_array(const json &obj, const char *key, const std::string &where) {
  if (!obj.contains(key)) throw InputError(where + ": missing '" + key + "'");
  const json &arr = obj.at(key);
  if (!arr.is_array()) throw InputError(where + ": '" + key + "' must be an array");
  std::vector<Integer> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(read_integer(arr[i], where + "." + key + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<DigitLevel> read_levels(const json &obj, const std::string &where) {
  if (!obj.is_object()) throw InputError(where + " must be an object");
  const auto bases = read_integer_array(obj, "b", where);
  const auto counts = read_integer_array(obj, "N", where);
  if (bases.size() != counts.size())
    throw InputError(where + ": 'b' and 'N' must have equal length");
  std::vector<Integer> scales(bases.size(), Integer(1));
  if (obj.contains("scale")) {
    scales = read_integer_array(obj, "scale", where);
    if (scales.size() != bases.size())
      throw InputError(where + ": 'scale' must match 'b' in length");
  }
  std::vector<DigitLevel> levels;
  for (std::size_t i = 0; i < bases.size(); ++i)
    levels.push_back(DigitLevel{bases[i], counts[i], scales[i]});
  return levels;
}

ordered_json integer_value(const Integer &v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return ordered_json(v.get_si());
  return ordered_json(v.get_str());
}

void write_levels(ordered_json &out, const std::vector<DigitLevel> &levels) {
  ordered_json b = ordered_json::array(), n = ordered_json::array(), s = ordered_json::array();
  bool unit = true;
  for (const auto &lv : levels) {
    b.push_back(integer_value(lv.base));
    n.push_back(integer_value(lv.count));
    s.push_back(integer_value(lv.scale));
    unit = unit && lv.scale == 1;
  }
  out["b"] = std::move(b);
  out["N"] = std::move(n);
  if (!unit) out["scale"] = std::move(s);
}

} // namespace

MoranSystem parse_system(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError(std::string("malformed system document: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("system document must be a JSON object");
  reject_unknown_keys(doc, {"prefix", "tail"}, "system");
  if (!doc.contains("prefix")) throw InputError("system: missing 'prefix'");
  if (!doc.contains("tail")) throw InputError("system: missing 'tail'");

  const json &prefix_doc = doc.at("prefix");
  if (prefix_doc.is_object()) reject_unknown_keys(prefix_doc, {"b", "N", "scale"}, "prefix");
  std::vector<DigitLevel> prefix = read_levels(prefix_doc, "prefix");

  const json &tail_doc = doc.at("tail");
  if (!tail_doc.is_object() || !tail_doc.contains("kind") || !tail_doc.at("kind").is_string())
    throw InputError("tail: must be an object with a string 'kind'");
  const std::string kind = tail_doc.at("kind").get<std::string>();
  if (kind == "none") {
    reject_unknown_keys(tail_doc, {"kind"}, "tail");
    return MoranSystem(std::move(prefix), NoTail{});
  }
  if (kind == "periodic") {
    reject_unknown_keys(tail_doc, {"kind", "b", "N", "scale"}, "tail");
    return MoranSystem(std::move(prefix), PeriodicTail{read_levels(tail_doc, "tail")});
  }
  if (kind == "formula") {
    reject_unknown_keys(tail_doc, {"kind", "b", "c", "rho"}, "tail");
    if (!tail_doc.contains("b")) throw InputError("formula tail: missing 'b'");
    if (!tail_doc.contains("c")) throw InputError("formula tail: missing 'c'");
    if (!tail_doc.contains("rho")) throw InputError("formula tail: missing 'rho'");
    FormulaTail f{read_integer(tail_doc.at("b"), "tail.b"), read_rational(tail_doc.at("c"), "tail.c"),
                  read_rational(tail_doc.at("rho"), "tail.rho")};
    return MoranSystem(std::move(prefix), std::move(f));
  }
  throw InputError("tail: unknown kind '" + kind + "'");
}

std::string serialize_system(const MoranSystem &system) {
  ordered_json doc;
  ordered_json prefix = ordered_json::object();
  write_levels(prefix, system.prefix());
  doc["prefix"] = std::move(prefix);
  ordered_json tail = ordered_json::object();
  if (system.is_finite()) {
    tail["kind"] = "none";
  } else if (const auto *p = std::get_if<PeriodicTail>(&system.tail())) {
    tail["kind"] = "periodic";
    write_levels(tail, p->levels);
  } else {
    const auto &f = std::get<FormulaTail>(system.tail());
    tail["kind"] = "formula";
    tail["b"] = integer_value(f.base);
    tail["c"] = f.c.str();
    tail["rho"] = f.rho.str();
  }
  doc["tail"] = std::move(tail);
  return doc.dump();
}

MoranSystem load_system(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open system file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

} // namespace moran

#include "btharm/json_io.hpp"

#include <charconv>

#include "btharm/errors.hpp"

namespace bt {

std::string rational_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_str();
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) throw InvalidArgument("rational: expected a string or an integer");
  Rational r;
  if (r.set_str(j.get<std::string>(), 10) != 0) throw InvalidArgument("rational: cannot parse " + j.get<std::string>());
  if (r.get_den() == 0) throw InvalidArgument("rational: zero denominator");
  r.canonicalize();
  return r;
}

Key key_from_string(const std::string& s) {
  Key k;
  if (s.empty()) return k;
  const char* p = s.data();
  const char* end = p + s.size();
  while (true) {
    std::int32_t v = 0;
    auto [q, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) throw InvalidArgument("key: cannot parse " + s);
    k.push_back(v);
    if (q == end) break;
    if (*q != ',') throw InvalidArgument("key: cannot parse " + s);
    p = q + 1;
  }
  return k;
}

Json hc_report_json(const HcReport& r) {
  Json j;
  for (int i = 0; i < 4; ++i) {
    const std::string name = "hc" + std::to_string(i + 1);
    j[name] = {{"checked", r.checked[i]}, {"failed", r.failed[i]}, {"inconclusive", r.inconclusive[i]}};
  }
  j["failures"] = r.failures;
  j["pass"] = r.pass();
  return j;
}

Json roundtrip_report_json(const RoundtripReport& r) {
  return {{"checked", r.checked}, {"passed", r.passed}, {"skipped", r.skipped},
          {"failures", r.failures}, {"pass", r.pass()}};
}

Json well_defined_json(const WellDefinedReport& r) {
  return {{"relations", r.relations}, {"vanished", r.vanished}, {"skipped", r.skipped}, {"pass", r.pass()}};
}

Json invariance_json(const InvarianceReport& r) {
  return {{"checked", r.checked}, {"passed", r.passed}, {"skipped", r.skipped},
          {"failures", r.failures}, {"pass", r.pass()}};
}

Json cusp_sum_json(const CuspSum& c) {
  return {{"value", rational_string(c.value)},
          {"next_value", rational_string(c.next_value)},
          {"depth", c.depth},
          {"required_depth", c.required_depth}};
}

Json census_json(const std::map<BundleType, int>& census) {
  Json a = Json::array();
  for (const auto& [t, count] : census) a.push_back({{"type", t}, {"count", count}});
  return a;
}

Json cell_json(const PointedCell& c) {
  Json verts = Json::array();
  for (const auto& v : cell_vertices(c)) verts.push_back(v->a);
  return {{"key", key_string(c.key)}, {"type", pointed_type(c)}, {"vertices", verts}};
}

Json cochain_json(const Cochain& h) {
  const auto& w = *h.cells->window;
  Json vals = Json::object();
  for (int i = 0; i < h.cells->size(); ++i)
    if (h.values[i] != 0) vals[key_string(h.cells->cells[i].key)] = rational_string(h.values[i]);
  return {{"p", w.field->p()}, {"e", w.field->e()}, {"n", w.n}, {"k", h.k()}, {"r", w.r}, {"values", vals}};
}

Cochain cochain_from_json(const Json& j, const Limits& lim) {
  for (const char* f : {"p", "n", "k", "r", "values"})
    if (!j.contains(f)) throw InvalidArgument(std::string("cochain: missing field ") + f);
  const Fq& F = Fq::get(j["p"].get<int>(), j.value("e", 1));
  const int n = j["n"].get<int>(), k = j["k"].get<int>(), r = j["r"].get<int>();
  if (n < 1 || k < 0 || k > n || r < 0) throw InvalidArgument("cochain: bad dimensions");
  auto cs = CellSet::make(Window::make(F, n, r, lim), k, lim);
  Cochain h = Cochain::zero(cs);
  for (const auto& [key, val] : j["values"].items()) {
    const int i = cs->find(key_from_string(key));
    if (i < 0) throw OutOfWindow("cochain: cell " + key + " is not in the window");
    h.values[i] = rational_from_json(val);
  }
  return h;
}

Json error_json(const std::exception& e) {
  const auto* be = dynamic_cast<const Error*>(&e);
  return {{"error", be ? be->kind() : "Exception"}, {"message", e.what()}};
}

}  // namespace bt

#include "ngtheta/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ngtheta::io {

namespace {

// Byte offset to 1-based line and column.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw InputError(std::string("expected an object with field \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

void check_schema(const Json& j) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  const auto it = j.find("schema_version");
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<int>() != schema_version)
    throw InputError("unsupported schema_version " + it->dump());
}

Json with_schema(Json body) {
  Json out;
  out["schema_version"] = schema_version;
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte is one past the offending character
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw InputError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) { return parse_json(read_text(path), path.string()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::complex<double> parse_tau(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto number = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    double v = 0;
    const auto res = std::from_chars(part.data() + (part[0] == '+' ? 1 : 0), part.data() + part.size(), v);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size()) throw InputError("bad tau '" + text + "'");
    return v;
  };
  if (s.empty()) throw InputError("empty tau");
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  // Split at the last sign that does not start the string or follow an exponent marker.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, split)), number(s.substr(split))};
}

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(mpz_class(j.dump(), 10));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  throw InputError("expected a rational string \"p/q\" or an integer, got " + j.dump());
}

RatVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals, got " + j.dump());
  RatVector v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

std::vector<RatVector> vectors_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of vectors");
  std::vector<RatVector> out;
  for (const auto& e : j) out.push_back(vector_from_json(e));
  return out;
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const std::vector<RatVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

QuadraticSpace space_from_json(const Json& j) {
  check_schema(j);
  const auto rows = vectors_from_json(field(j, "gram"));
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw InputError("gram matrix must be square");
  if (rows.empty()) throw InputError("gram matrix is empty");
  return QuadraticSpace(RatMatrix::from_rows(rows));
}

Json space_to_json(const QuadraticSpace& space) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < space.dim(); ++i) {
    RatVector r(space.dim());
    for (std::size_t k = 0; k < space.dim(); ++k) r[k] = space.gram()(i, k);
    rows.push_back(to_json(r));
  }
  Json out;
  out["gram"] = rows;
  return out;
}

NGonInput ngon_from_json(const Json& j) {
  check_schema(j);
  NGonInput in{space_from_json(field(j, "space")), vectors_from_json(field(j, "cs")), Closure::legal};
  if (const auto it = j.find("closure"); it != j.end()) {
    const std::string c = it->is_string() ? it->get<std::string>() : "";
    if (c == "legal")
      in.closure = Closure::legal;
    else if (c == "flipped")
      in.closure = Closure::flipped;
    else
      throw InputError("closure must be \"legal\" or \"flipped\"");
  }
  return in;
}

Json ngon_to_json(const NGonData& ngon) {
  Json body;
  body["space"] = space_to_json(ngon.space());
  body["cs"] = to_json(ngon.cs());
  body["closure"] = ngon.closure() == Closure::legal ? "legal" : "flipped";
  return with_schema(body);
}

LatticeCoset LatticeInput::coset() const { return make_coset(space, mu.empty() ? RatVector(space.dim(), Rational(0)) : mu); }

LatticeInput lattice_from_json(const Json& j) {
  check_schema(j);
  // Either {"space": {...}, "mu": [...]} or a bare space {"gram": ...}.
  LatticeInput in{space_from_json(j.contains("space") ? j.at("space") : j), {}};
  if (const auto it = j.find("mu"); it != j.end()) in.mu = vector_from_json(*it);
  return in;
}

DodecInput dodec_from_json(const Json& j) {
  check_schema(j);
  DodecInput in{space_from_json(field(j, "space")), {}, std::nullopt, {}};
  if (j.contains("cs")) {
    in.cs = vectors_from_json(j.at("cs"));
  } else {
    const Json& seed = field(j, "seed");
    const auto frame = vectors_from_json(field(seed, "frame"));
    const RatVector v0 = vector_from_json(field(seed, "v0"));
    const Rational phi = seed.contains("phi") ? rational_from_json(seed.at("phi")) : dodec::default_phi();
    in.cs = dodec::seed_construction(in.space, frame, v0, vector_from_json(field(j, "t")), phi);
    if (seed.value("use_as_base", true)) in.seed_plane = frame;
  }
  if (const auto it = j.find("seed_plane"); it != j.end()) in.seed_plane = vectors_from_json(*it);
  if (const auto it = j.find("mu"); it != j.end()) in.mu = vector_from_json(*it);
  return in;
}

std::vector<sig12::UHPoint> points_from_json(const Json& j) {
  check_schema(j);
  std::vector<sig12::UHPoint> out;
  for (const auto& p : field(j, "points")) {
    const RatVector xy = vector_from_json(p);
    if (xy.size() != 2) throw InputError("a point is a pair [x, y]");
    out.push_back(sig12::make_point(xy[0], xy[1]));
  }
  return out;
}

Json series_to_json(const QExpansion& q) {
  Json coeffs = Json::object();
  for (const auto& [n, c] : q.coeffs) coeffs[to_string(n)] = to_json(c);
  Json nonreg = Json::array();
  for (const auto& n : q.nonregular) nonreg.push_back(to_json(n));
  Json window;
  window["z0"] = to_json(q.window.z0);
  window["B"] = q.window.B;
  window["kappa"] = q.window.kappa;
  window["safety"] = q.window.safety;
  Json body;
  body["mu"] = to_json(q.mu);
  body["nmax"] = to_json(q.nmax);
  body["normalized"] = q.normalized;
  body["coeffs"] = coeffs;
  body["nonregular"] = nonreg;
  body["window"] = window;
  body["enumerated"] = q.enumerated;
  body["retries"] = q.retries;
  return with_schema(body);
}

std::string series_to_csv(const QExpansion& q) {
  std::string out = "n,c,regular\n";
  for (const auto& [n, c] : q.coeffs) out += to_string(n) + "," + to_string(c) + "," + (q.nonregular.count(n) ? "0" : "1") + "\n";
  return out;
}

std::string series_to_plot_data(const QExpansion& q) {
  std::string out;
  for (const auto& [n, c] : q.coeffs) out += format_double(n.get_d()) + "\t" + format_double(c.get_d()) + "\n";
  return out;
}

Json complex_to_json(std::complex<double> z) {
  Json out;
  // + 0.0 turns -0 into 0
  out["re"] = z.real() + 0.0;
  out["im"] = z.imag() + 0.0;
  return out;
}

Json completion_to_json(const CompletionValue& v, std::complex<double> tau, const RatVector& mu) {
  Json body;
  body["tau"] = complex_to_json(tau);
  body["mu"] = to_json(mu);
  body["value"] = complex_to_json(v.value);
  body["tail_bound"] = v.tail_bound;
  body["terms"] = v.terms;
  body["B"] = v.window.B;
  return with_schema(body);
}

Json modularity_to_json(const ModularityReport& r, std::complex<double> tau) {
  const auto list = [](const std::vector<std::complex<double>>& zs) {
    Json a = Json::array();
    for (const auto& z : zs) a.push_back(complex_to_json(z));
    return a;
  };
  Json body;
  body["tau"] = complex_to_json(tau);
  body["t_defect"] = r.t_defect;
  body["s_defect"] = r.s_defect;
  body["tail_bound"] = r.tail_bound;
  body["tolerance"] = r.tolerance;
  body["s_squared_defect"] = r.s_squared_defect;
  body["st_cubed_defect"] = r.st_cubed_defect;
  body["t_ok"] = r.t_ok;
  body["s_ok"] = r.s_ok;
  body["at_tau"] = list(r.at_tau);
  body["at_tau_plus_1"] = list(r.at_tau_plus_1);
  body["at_minus_inv_tau"] = list(r.at_minus_inv);
  return with_schema(body);
}

Json violation_to_json(const ConditionViolation& v) {
  Json out;
  out["j"] = v.j;
  out["condition"] = v.condition;
  out["value"] = to_json(v.value);
  out["message"] = v.describe();
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ngtheta::io

#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ngtheta/dodecahedron.hpp"
#include "ngtheta/lattice_theta.hpp"
#include "ngtheta/ngon.hpp"
#include "ngtheta/sig12.hpp"

// JSON, CSV and plot-data formats. Rationals are "p/q" strings, floats shortest round-trip
// decimals, object keys keep a fixed order so output is byte-identical across runs.
namespace ngtheta::io {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// Parse errors become InputError with "line L, column C" in the message.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

std::string format_double(double x);
// "a+bi", "a-bi", "bi", "i", "a".
std::complex<double> parse_tau(const std::string& text);

Rational rational_from_json(const Json& j);
RatVector vector_from_json(const Json& j);
std::vector<RatVector> vectors_from_json(const Json& j);
Json to_json(const Rational& r);
Json to_json(const RatVector& v);
Json to_json(const std::vector<RatVector>& vs);

QuadraticSpace space_from_json(const Json& j);
Json space_to_json(const QuadraticSpace& space);

struct NGonInput {
  QuadraticSpace space;
  std::vector<RatVector> cs;
  Closure closure = Closure::legal;
  NGonData validate() const { return NGonData::validate(space, cs, closure); }
};
NGonInput ngon_from_json(const Json& j);
Json ngon_to_json(const NGonData& ngon);

struct LatticeInput {
  QuadraticSpace space;
  RatVector mu;  // empty: zero coset
  LatticeCoset coset() const;
};
LatticeInput lattice_from_json(const Json& j);

struct DodecInput {
  QuadraticSpace space;
  std::vector<RatVector> cs;
  std::optional<std::vector<RatVector>> seed_plane;
  RatVector mu;
  dodec::DodecData validate() const { return dodec::DodecData::validate(space, cs, seed_plane); }
};
// Either explicit "cs", or a "seed" object {frame, v0, phi?} together with "t".
DodecInput dodec_from_json(const Json& j);

std::vector<sig12::UHPoint> points_from_json(const Json& j);

Json series_to_json(const QExpansion& q);
// "n,c,regular" lines with a header, n ascending; regular is 0 on flagged levels.
std::string series_to_csv(const QExpansion& q);
// Tab separated decimal (n, c(n)) pairs for plotting.
std::string series_to_plot_data(const QExpansion& q);

Json complex_to_json(std::complex<double> z);
Json completion_to_json(const CompletionValue& v, std::complex<double> tau, const RatVector& mu);
Json modularity_to_json(const ModularityReport& r, std::complex<double> tau);
Json violation_to_json(const ConditionViolation& v);

// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

}  // namespace ngtheta::io

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "ngtheta/io.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string data(const std::string& name) { return (std::filesystem::path(NGTHETA_DATA_DIR) / name).string(); }

// Runs the CLI with stderr discarded.
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" NGTHETA_CLI "\" " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / ("ngtheta_cli_" + name); }

}  // namespace

TEST_CASE("ngon validate on the packaged fundamental domain") {
  const auto r = run("ngon validate --ngon " + data("funddom.json"));
  CHECK(r.code == 0);
  const auto j = ngtheta::io::parse_json(r.out);
  CHECK(j["valid"] == true);
  CHECK(j["w"] == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("ngon validate --ngon " + data("no_such_file.json")).code == 1);
  const auto bad = temp("bad.json");
  ngtheta::io::write_text(bad, "{\"space\": [1,}");
  CHECK(run("ngon validate --ngon " + bad.string()).code == 1);
  // C_2 negated breaks the turning inequality.
  auto j = ngtheta::io::read_json(data("funddom.json"));
  for (auto& c : j["cs"][1]) c = ngtheta::to_string(-ngtheta::parse_rational(c.get<std::string>()));
  const auto broken = temp("broken.json");
  ngtheta::io::write_text(broken, ngtheta::io::dump(j));
  const auto r = run("ngon validate --ngon " + broken.string());
  CHECK(r.code == 2);
  CHECK(ngtheta::io::parse_json(r.out)["violations"].size() == 2);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("theta series --nmax -3").code == 1);
  CHECK(run("theta complete --tau 1-1i --nmax 2").code == 1);
}

TEST_CASE("class number series as CSV") {
  const auto plot = temp("plot.tsv");
  const auto r = run("theta series --nmax 50 --normalized --format csv --emit-plot-data " + plot.string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,c,regular\n", 0) == 0);
  CHECK(r.out.find("\n8,2,1\n") != std::string::npos);
  const std::string tsv = ngtheta::io::read_text(plot);
  CHECK(tsv.find("8\t2\n") != std::string::npos);
}

TEST_CASE("kernel and winding subcommands agree") {
  const auto eps = ngtheta::io::parse_json(run("ngon eps --ngon " + data("funddom.json") + " --x 1,0,2").out);
  CHECK(eps["eps"] == 4);
  const auto w = ngtheta::io::parse_json(run("sig12 winding --ngon " + data("funddom.json") + " --x 1,0,2").out);
  CHECK(w["winding"] == 1);
  CHECK(w["eps"] == 4);
  const auto rec = run("sig12 recover --points " + data("square_points.json"));
  CHECK(rec.code == 0);
  CHECK(ngtheta::io::parse_json(rec.out)["w"] == 0);
}

TEST_CASE("errfn eval prints ten digits") {
  const auto r = run("errfn eval --c 0,1,0 --x 1,1,2");
  CHECK(r.code == 0);
  const auto dot = r.out.find('.');
  REQUIRE(dot != std::string::npos);
  CHECK(r.out.size() - dot - 2 == 10);
}

TEST_CASE("dodecahedron subcommands") {
  const auto v = run("dodec validate --data " + data("dodecahedron.json"));
  CHECK(v.code == 0);
  const auto j = ngtheta::io::parse_json(v.out);
  CHECK(j["valid"] == true);
  for (const auto& w : j["face_w"]) CHECK((w == -1 || w == 3));
  const auto k = ngtheta::io::parse_json(run("dodec kernel --data " + data("dodecahedron.json") + " --x 5,0,0,0 --scale 40").out);
  CHECK(k["regular"] == true);
  const double p = ngtheta::parse_rational(k["P"].get<std::string>()).get_d();
  CHECK(std::abs(k["completion"].get<double>() - p) < 1e-6);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  const std::string a = run("theta series --nmax 40 --threads 1").out;
  CHECK_FALSE(a.empty());
  CHECK(run("theta series --nmax 40 --threads 2").out == a);
  CHECK(run("theta series --nmax 40 --threads 8").out == a);
  CHECK(run("theta series --nmax 40", "NGON_THETA_THREADS=8").out == a);
  const std::string d = run("dodec series --data " + data("dodecahedron.json") + " --nmax 12 --threads 1").out;
  CHECK(run("dodec series --data " + data("dodecahedron.json") + " --nmax 12 --threads 8").out == d);
  const std::string c = run("theta complete --tau 0.2+1.1i --nmax 4 --threads 1").out;
  CHECK(run("theta complete --tau 0.2+1.1i --nmax 4 --threads 8").out == c);
}

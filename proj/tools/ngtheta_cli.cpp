#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "ngtheta/io.hpp"

using namespace ngtheta;
using io::Json;

namespace {

enum Exit { ok = 0, input_error = 1, validation_error = 2, certification_error = 3 };

struct Output {
  std::string path;     // empty: stdout
  std::string format = "json";
  std::string plot;     // --emit-plot-data

  void emit(const std::string& text) const {
    if (path.empty())
      std::cout << text;
    else
      io::write_text(path, text);
  }
};

struct SeriesArgs {
  std::string lattice, ngon;
  std::string nmax = "50";
  std::string T = "2";
  double safety = 1.5;
  bool normalized = false;
  unsigned threads = 0;
};

// NGON_THETA_THREADS takes precedence over --threads.
unsigned threads_from(unsigned requested) { return std::getenv("NGON_THETA_THREADS") ? 0 : requested; }

Rational parse_rat(const std::string& s, const char* what) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

RatVector parse_vec(const std::string& s, const char* what) {
  try {
    return parse_rational_list(s);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

Rational positive_nmax(const std::string& s) {
  const Rational n = parse_rat(s, "--nmax");
  if (n <= 0) throw InputError("--nmax must be positive");
  return n;
}

// The N-gon and the coset a theta subcommand works on. Without --ngon this is the truncated
// fundamental domain at height --T on the lattice of integral binary forms.
std::pair<NGonData, LatticeCoset> theta_setup(const SeriesArgs& a) {
  std::optional<NGonData> ngon;
  if (a.ngon.empty())
    ngon = NGonData::validate(sig12::form_space(), sig12::fundamental_domain(parse_rat(a.T, "--T")));
  else
    ngon = io::ngon_from_json(io::read_json(a.ngon)).validate();
  LatticeCoset coset = a.lattice.empty() ? make_coset(ngon->space(), RatVector(ngon->space().dim(), Rational(0)))
                                         : io::lattice_from_json(io::read_json(a.lattice)).coset();
  if (!(coset.space->gram() == ngon->space().gram()))
    throw ValidationError("lattice and N-gon live in different spaces");
  return {*ngon, coset};
}

void emit_series(const QExpansion& q, const Output& out) {
  out.emit(out.format == "csv" ? io::series_to_csv(q) : io::dump(io::series_to_json(q)));
  if (!out.plot.empty()) io::write_text(out.plot, io::series_to_plot_data(q));
}

void add_output(CLI::App* cmd, Output& out, bool formats) {
  cmd->add_option("-o,--output", out.path, "Write to this file instead of stdout");
  if (formats) {
    cmd->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--emit-plot-data", out.plot, "Write tab separated (n, c(n)) pairs");
  }
}

void add_series_args(CLI::App* cmd, SeriesArgs& a) {
  cmd->add_option("--lattice", a.lattice, "Lattice JSON: space and coset mu");
  cmd->add_option("--ngon", a.ngon, "N-gon JSON (default: truncated fundamental domain)");
  cmd->add_option("--T", a.T, "Height of the truncated fundamental domain");
  cmd->add_option("--nmax", a.nmax, "Largest exponent");
  cmd->add_option("--safety", a.safety, "Window safety factor");
  cmd->add_option("--threads", a.threads, "Worker threads (0: automatic)");
}

int run(int argc, char** argv) {
  CLI::App app{"Indefinite theta series of geodesic polygons and dodecahedra"};
  app.require_subcommand(1);
  Output out;

  // ngon
  auto* ngon = app.add_subcommand("ngon", "Validate N-gon data and evaluate the sign kernel");
  ngon->require_subcommand(1);
  std::string ngon_path, x_text, v_text;
  auto* ngon_validate = ngon->add_subcommand("validate", "Check the N-gon inequalities");
  auto* ngon_eps = ngon->add_subcommand("eps", "Integer kernel at x");
  auto* ngon_w = ngon->add_subcommand("w", "The constant w");
  for (auto* c : {ngon_validate, ngon_eps, ngon_w}) {
    c->add_option("--ngon", ngon_path, "N-gon JSON")->required();
    add_output(c, out, false);
  }
  ngon_eps->add_option("--x", x_text, "Vector, comma separated rationals")->required();
  ngon_w->add_option("--v", v_text, "Negative vector (default: automatic)");

  // theta
  auto* theta = app.add_subcommand("theta", "Theta series, completion and modularity");
  theta->require_subcommand(1);
  SeriesArgs sa;
  std::string tau_text = "i";
  double tolerance = 1e-3;
  bool sqrt2_scaling = false;
  auto* theta_series = theta->add_subcommand("series", "Holomorphic q-expansion");
  auto* theta_complete = theta->add_subcommand("complete", "Completed series at tau");
  auto* theta_mod = theta->add_subcommand("modularity", "T and S transformation defects");
  for (auto* c : {theta_series, theta_complete, theta_mod}) add_series_args(c, sa);
  theta_series->add_flag("--normalized", sa.normalized, "Divide by four to get intersection counts");
  add_output(theta_series, out, true);
  for (auto* c : {theta_complete, theta_mod}) {
    c->add_option("--tau", tau_text, "Point a+bi of the upper half plane");
    c->add_flag("--sqrt2-scaling", sqrt2_scaling, "Scale x by sqrt2 instead of sqrt(2v)");
    add_output(c, out, false);
  }
  theta_mod->add_option("--tolerance", tolerance, "Allowed S defect on top of the tail bound");

  // sig12
  auto* sig = app.add_subcommand("sig12", "Upper half plane model");
  sig->require_subcommand(1);
  std::string points_path;
  bool allow_reverse = false;
  auto* sig_recover = sig->add_subcommand("recover", "N-gon data from polygon vertices");
  sig_recover->add_option("--points", points_path, "Points JSON")->required();
  sig_recover->add_flag("--allow-reverse", allow_reverse, "Reverse odd polygons with the wrong total turning");
  auto* sig_winding = sig->add_subcommand("winding", "Winding number around the CM point of x");
  sig_winding->add_option("--ngon", ngon_path, "N-gon JSON in form coordinates")->required();
  sig_winding->add_option("--x", x_text, "Form a,b,c")->required();
  auto* sig_zagier = sig->add_subcommand("zagier", "Intersection counts with the truncated fundamental domain");
  add_series_args(sig_zagier, sa);
  for (auto* c : {sig_recover, sig_winding}) add_output(c, out, false);
  add_output(sig_zagier, out, true);

  // dodec
  auto* dod = app.add_subcommand("dodec", "Geodesic dodecahedra");
  dod->require_subcommand(1);
  std::string dodec_path;
  double scale = 1;
  auto* dod_validate = dod->add_subcommand("validate", "Check the face conditions");
  auto* dod_kernel = dod->add_subcommand("kernel", "Kernel values at x");
  auto* dod_series = dod->add_subcommand("series", "Holomorphic q-expansion");
  for (auto* c : {dod_validate, dod_kernel, dod_series}) c->add_option("--data", dodec_path, "Dodecahedron JSON")->required();
  dod_kernel->add_option("--x", x_text, "Vector, comma separated rationals")->required();
  dod_kernel->add_option("--scale", scale, "Scale for the smooth kernel");
  dod_series->add_option("--lattice", sa.lattice, "Lattice JSON (default: the data's space and mu)");
  dod_series->add_option("--nmax", sa.nmax, "Largest exponent");
  dod_series->add_option("--safety", sa.safety, "Window safety factor");
  dod_series->add_option("--threads", sa.threads, "Worker threads (0: automatic)");
  for (auto* c : {dod_validate, dod_kernel}) add_output(c, out, false);
  add_output(dod_series, out, true);

  // errfn
  auto* errfn = app.add_subcommand("errfn", "Generalized error functions");
  errfn->require_subcommand(1);
  std::string space_path;
  std::vector<std::string> c_texts;
  auto* errfn_eval = errfn->add_subcommand("eval", "E_q(C_1..C_q; x) with 10 digits");
  errfn_eval->add_option("--space", space_path, "Space JSON (default: integral binary forms)");
  errfn_eval->add_option("--c", c_texts, "Vector C_i, repeat for each")->required();
  errfn_eval->add_option("--x", x_text, "Point x, comma separated decimals or rationals")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }

  if (*ngon_validate) {
    const auto in = io::ngon_from_json(io::read_json(ngon_path));
    const auto violations = ngon_violations(in.space, in.cs, in.closure);
    Json body;
    body["schema_version"] = io::schema_version;
    body["valid"] = violations.empty();
    body["N"] = in.cs.size();
    Json vs = Json::array();
    for (const auto& v : violations) vs.push_back(io::violation_to_json(v));
    body["violations"] = vs;
    if (violations.empty()) body["w"] = in.validate().w();
    out.emit(io::dump(body));
    if (!violations.empty()) {
      std::cerr << "error: " << violations.front().describe() << "\n";
      return validation_error;
    }
    return ok;
  }
  if (*ngon_eps) {
    const NGonData d = io::ngon_from_json(io::read_json(ngon_path)).validate();
    const RatVector x = parse_vec(x_text, "--x");
    d.space().check_dim(x);
    const KernelValue k = d.epsilon(x);
    Json body;
    body["schema_version"] = io::schema_version;
    body["x"] = io::to_json(x);
    body["eps"] = k.eps;
    body["regular"] = k.regular;
    body["locally_constant"] = d.locally_constant(x);
    body["Q"] = io::to_json(d.space().Q(x));
    out.emit(io::dump(body));
    return ok;
  }
  if (*ngon_w) {
    const NGonData d = io::ngon_from_json(io::read_json(ngon_path)).validate();
    const RatVector v = v_text.empty() ? d.default_negative_vector() : parse_vec(v_text, "--v");
    Json body;
    body["schema_version"] = io::schema_version;
    body["v"] = io::to_json(v);
    body["w"] = d.w(v);
    out.emit(io::dump(body));
    return ok;
  }
  if (*theta_series) {
    const auto [d, coset] = theta_setup(sa);
    SeriesOptions o;
    o.safety = sa.safety;
    o.normalized = sa.normalized;
    o.threads = threads_from(sa.threads);
    emit_series(holomorphic_series(coset, NGonKernel(d), positive_nmax(sa.nmax), o), out);
    return ok;
  }
  if (*theta_complete || *theta_mod) {
    const auto [d, coset] = theta_setup(sa);
    const auto tau = io::parse_tau(tau_text);
    if (!(tau.imag() > 0)) throw InputError("tau must lie in the upper half plane");
    CompletionOptions o;
    o.sqrt2_scaling = sqrt2_scaling;
    o.safety = sa.safety;
    o.threads = threads_from(sa.threads);
    if (*theta_complete) {
      const auto v = completion_eval(coset, NGonKernel(d), tau, positive_nmax(sa.nmax), o);
      out.emit(io::dump(io::completion_to_json(v, tau, coset.mu)));
      return ok;
    }
    const auto r = modularity_check(*coset.space, NGonKernel(d), tau, positive_nmax(sa.nmax), tolerance, o);
    out.emit(io::dump(io::modularity_to_json(r, tau)));
    if (!(r.t_ok && r.s_ok)) {
      std::cerr << "error: transformation defect exceeds tail bound plus tolerance\n";
      return certification_error;
    }
    return ok;
  }
  if (*sig_recover) {
    const auto rec = sig12::recover_ngon(io::points_from_json(io::read_json(points_path)), allow_reverse);
    Json body = io::ngon_to_json(rec.ngon);
    body["reversed"] = rec.reversed;
    body["tau"] = rec.tau;
    body["w"] = rec.ngon.w();
    out.emit(io::dump(body));
    return ok;
  }
  if (*sig_winding) {
    const NGonData d = io::ngon_from_json(io::read_json(ngon_path)).validate();
    const RatVector x = parse_vec(x_text, "--x");
    d.space().check_dim(x);
    const auto w = sig12::winding_number(d, x);
    Json body;
    body["schema_version"] = io::schema_version;
    body["x"] = io::to_json(x);
    body["winding"] = w.winding;
    body["eps"] = d.epsilon(x).eps;
    const auto z = sig12::cm_point_upper(x);
    body["cm_point"] = io::complex_to_json(z);
    out.emit(io::dump(body));
    return ok;
  }
  if (*sig_zagier) {
    SeriesOptions o;
    o.safety = sa.safety;
    o.threads = threads_from(sa.threads);
    emit_series(sig12::truncated_class_series(parse_rat(sa.T, "--T"), positive_nmax(sa.nmax), o).series, out);
    return ok;
  }
  if (*dod_validate || *dod_kernel || *dod_series) {
    const auto in = io::dodec_from_json(io::read_json(dodec_path));
    if (*dod_validate) {
      const auto violations = dodec::dodec_violations(in.space, in.cs);
      Json body;
      body["schema_version"] = io::schema_version;
      body["valid"] = violations.empty();
      Json vs = Json::array();
      for (const auto& v : violations) {
        Json e = io::violation_to_json(v.violation);
        e["face"] = dodec::label(v.face);
        vs.push_back(e);
      }
      body["violations"] = vs;
      if (violations.empty()) {
        const auto d = in.validate();
        Json w = Json::array();
        for (int i = 0; i < 12; ++i) w.push_back(d.face_w(i));
        body["face_w"] = w;
        body["D_v"] = io::to_json(d.D_v());
        body["distinct_vertices"] = d.distinct_vertices();
        body["cs"] = io::to_json(d.cs());
      }
      out.emit(io::dump(body));
      if (!violations.empty()) {
        std::cerr << "error: " << violations.front().describe() << "\n";
        return validation_error;
      }
      return ok;
    }
    const auto d = in.validate();
    if (*dod_kernel) {
      const RatVector x = parse_vec(x_text, "--x");
      d.space().check_dim(x);
      Json body;
      body["schema_version"] = io::schema_version;
      body["x"] = io::to_json(x);
      body["regular"] = d.regular(x);
      body["locally_constant"] = d.locally_constant(x);
      body["D"] = io::to_json(d.D(x));
      body["P"] = io::to_json(d.P(x));
      body["scale"] = scale;
      body["E"] = d.E(to_real(x) * scale);
      body["completion"] = d.completion(x, scale);
      out.emit(io::dump(body));
      return ok;
    }
    LatticeCoset coset = sa.lattice.empty() ? make_coset(d.space(), in.mu.empty() ? RatVector(d.space().dim(), Rational(0)) : in.mu)
                                            : io::lattice_from_json(io::read_json(sa.lattice)).coset();
    if (!(coset.space->gram() == d.space().gram())) throw ValidationError("lattice and dodecahedron live in different spaces");
    SeriesOptions o;
    o.safety = sa.safety;
    o.threads = threads_from(sa.threads);
    emit_series(dodec::dodec_series(coset, d, positive_nmax(sa.nmax), o), out);
    return ok;
  }
  if (*errfn_eval) {
    const QuadraticSpace space = space_path.empty() ? sig12::form_space() : io::space_from_json(io::read_json(space_path));
    std::vector<RatVector> cs;
    for (const auto& t : c_texts) {
      cs.push_back(parse_vec(t, "--c"));
      space.check_dim(cs.back());
    }
    const RatVector x = parse_vec(x_text, "--x");
    space.check_dim(x);
    const double e = generalized_erf(space, cs, to_real(x));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f\n", e + 0.0);
    std::cout << buf;
    return ok;
  }
  return input_error;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation_error;
  } catch (const CertificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return certification_error;
  } catch (const QuadratureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return certification_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  }
}

#include "nevschur/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nevschur/blocks.hpp"
#include "nevschur/document.hpp"
#include "nevschur/grids.hpp"
#include "nevschur/random.hpp"
#include "nevschur/report.hpp"
#include "nevschur/rsclass.hpp"
#include "nevschur/systems.hpp"
#include "nevschur/transforms.hpp"

namespace nevschur {

namespace {

using report::Json;

double max_dev(const CMatrix& a, const CMatrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

Json error_object(const Error& e) {
  Json j;
  j["kind"] = to_string(e.kind());
  j["message"] = e.what();
  return j;
}

// Runs one report section; domain errors become an error object in place.
Json section(const std::function<Json()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    Json j;
    j["error"] = error_object(e);
    return j;
  }
}

struct LoadedSystem {
  PassiveSystem sys;
  std::string bytes;
};

LoadedSystem load(const std::string& path) {
  std::string bytes = read_file(path);
  PassiveSystem sys = parse_system(bytes);
  return {std::move(sys), std::move(bytes)};
}

Json system_summary(const PassiveSystem& sys) {
  Json j;
  j["dim_input"] = sys.dim_input();
  j["dim_state"] = sys.dim_state();
  j["selfadjoint"] = sys.selfadjoint();
  return j;
}

class Context {
 public:
  Context(std::string command, const std::vector<std::string>& args)
      : command_(std::move(command)), args_(args) {}

  void add_input(const std::string& bytes) { inputs_ += bytes; }

  Json header() const {
    Json j;
    j["command"] = command_;
    j["argv"] = args_;
    std::string all;
    for (const auto& a : args_) all += a + '\0';
    j["inputs_digest"] = report::digest(all + inputs_);
    return j;
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::string inputs_;
};

// ---- gen -------------------------------------------------------------------

struct GenOptions {
  std::uint64_t seed = 0;
  Index dim_input = 1;
  Index dim_state = 2;
  std::string via = "direct";
  std::string out;
};

int run_gen(const GenOptions& o, Context& ctx, std::ostream& out) {
  Rng rng(o.seed);
  std::optional<PassiveSystem> sys;
  if (o.via == "direct") {
    sys = random_selfadjoint_system(rng, o.dim_input, o.dim_state);
  } else if (o.via == "ky") {
    sys = assemble_selfadjoint_ky(random_ky(rng, o.dim_input, o.dim_state));
  } else {
    const GeneralBlockParam p = random_general(rng, o.dim_input, o.dim_input, o.dim_state, o.dim_state);
    sys = PassiveSystem::validate(assemble_contraction(p), o.dim_input, false);
  }
  const std::string doc = serialize_system(*sys);
  if (o.out.empty()) {
    out << doc;
    return kExitOk;
  }
  write_file(o.out, doc);
  Json j = ctx.header();
  j["output"] = {{"path", o.out}, {"digest", report::digest(doc)}};
  j["system"] = system_summary(*sys);
  out << report::dump(j);
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalOptions {
  std::string system;
  std::vector<std::string> at;
  std::vector<std::string> xi;
  bool batch = false;
};

int run_eval(const EvalOptions& o, Context& ctx, std::istream& in, std::ostream& out) {
  const LoadedSystem ls = load(o.system);
  ctx.add_input(ls.bytes);
  if (o.batch) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ss(line);
      double re = 0.0, im = 0.0;
      if (!(ss >> re >> im)) throw Error(ErrorKind::Parse, "batch line must be \"re im\": " + line);
      const cdouble z(re, im);
      Json j;
      j["z"] = report::complex_value(z);
      j["omega"] = report::matrix(transfer(ls.sys, CutPlanePoint(z)));
      out << j.dump() << "\n";
    }
    return kExitOk;
  }
  Json j = ctx.header();
  j["system"] = system_summary(ls.sys);
  Json pts = Json::array();
  for (const auto& s : o.at) {
    const cdouble z = report::parse_complex(s);
    const CutPlanePoint zp(z);
    Json p;
    p["z"] = report::complex_value(z);
    p["omega"] = report::matrix(transfer(ls.sys, zp));
    p["omega_prime"] = report::matrix(transfer_derivative(ls.sys, zp));
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  Json res = Json::array();
  for (const auto& s : o.xi) {
    require_selfadjoint(ls.sys, "compressed_resolvent");
    const cdouble xi = report::parse_complex(s);
    Json p;
    p["xi"] = report::complex_value(xi);
    p["m"] = report::matrix(compressed_resolvent(HermitianMatrix(ls.sys.matrix()), ls.sys.dim_input(), xi));
    res.push_back(std::move(p));
  }
  j["resolvents"] = std::move(res);
  out << report::dump(j);
  return kExitOk;
}

// ---- check -----------------------------------------------------------------

Json certificate_json(const RSCertificate& c) {
  Json j;
  j["pass"] = c.pass;
  j["min_kernel_eig"] = c.min_kernel_eig;
  j["min_inequality_eig"] = c.min_inequality_eig;
  j["schur_norm_max"] = c.schur_norm_max;
  j["tolerances"] = {{"psd", c.tol_psd}, {"norm", c.tol_norm}};
  j["grid"] = {{"upper", report::points(c.grid.upper)},
               {"lower", report::points(c.grid.lower)},
               {"disk", report::points(c.grid.disk)}};
  return j;
}

Json blocks_json(const PassiveSystem& sys) {
  Json j;
  j["ky"] = section([&] {
    const KYExtraction ky = extract_ky(sys);
    const CMatrix& k = ky.param.K();
    const CMatrix& y = ky.param.Y().matrix();
    const CMatrix& t = sys.matrix();
    Json s;
    s["reassembly_residual"] = ky.reassembly_residual;
    s["rank_defect_f"] = ky.param.defect_f().rank();
    s["rank_defect_k_star"] = ky.param.defect_k_star().rank();
    s["k_isometric"] = max_dev(k.adjoint() * k, identity(k.cols())) < 1e-8;
    s["y_involution"] = max_dev(y * y, identity(y.rows())) < 1e-8;
    s["t_unitary"] = max_dev(t * t, identity(t.rows())) < 1e-8;
    return s;
  });
  j["nx"] = section([&] {
    const NXExtraction nx = extract_nx(sys);
    Json s;
    s["reassembly_residual"] = nx.reassembly_residual;
    s["rank_defect_d"] = nx.param.defect_d().rank();
    s["rank_defect_n_star"] = nx.param.defect_n_star().rank();
    const CutPlanePoint z(cdouble(0.0, 0.3));
    const CMatrix w = lemma_w(nx.param, z);
    const CMatrix wi = lemma_w_inverse(nx.param, z);
    s["w_identity_residual"] = max_dev(w * wi, identity(w.rows()));
    s["f_hat"] = report::matrix(nx.param.f_hat());
    return s;
  });
  j["jf"] = section([&] {
    const CMatrix jf = fundamental_jf(HermitianMatrix(sys.A()));
    Json s;
    s["dim"] = jf.rows();
    s["unitarity_residual"] = max_dev(jf * jf, identity(jf.rows()));
    return s;
  });
  j["defect_identity"] = section([&] {
    const Index m = sys.dim_input();
    const GeneralBlockParam p = extract_general(sys.matrix(), m, m);
    Rng rng(0);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const CVector f = random_matrix(rng, m, 1);
      const CVector h = random_matrix(rng, sys.dim_state(), 1);
      worst = std::max(worst, defect_identity_residual(p, f, h));
    }
    Json s;
    s["residual"] = worst;
    s["samples"] = 8;
    return s;
  });
  return j;
}

Json rs_json(const PassiveSystem& sys) {
  Json j;
  j["characteristic"] = section([&] {
    const CutPlanePoint z(std::polar(1.0, std::numbers::pi / 3));
    const CMatrix delta = characteristic_fn(HermitianMatrix(sys.A()), z);
    Json s;
    s["dim"] = delta.rows();
    s["unitarity_residual"] = max_dev(delta.adjoint() * delta, identity(delta.rows()));
    return s;
  });
  j["pick_kernel"] = section([&] {
    const CutPlanePoint z(cdouble(0.3, 0.4));
    const CutPlanePoint w(cdouble(-0.2, 0.5));
    Json s;
    s["symmetry_residual"] =
        max_dev(pick_kernel(sys, z, w).adjoint(), pick_kernel(sys, w, z));
    return s;
  });
  return j;
}

Json limits_json(const PassiveSystem& sys) {
  const LimitValues lim = limit_values(extract_ky(sys).param);
  const Index m = sys.dim_input();
  const CMatrix o0 = transfer(sys, CutPlanePoint(0.0));
  auto min_eig = [](const CMatrix& h) { return eigh(HermitianMatrix(h)).values(0); };
  Json j;
  j["minus"] = report::matrix(lim.minus);
  j["plus"] = report::matrix(lim.plus);
  j["ordering_min_eig"] = std::min({min_eig(lim.minus + identity(m)), min_eig(o0 - lim.minus),
                                    min_eig(lim.plus - o0), min_eig(identity(m) - lim.plus)});
  return j;
}

Json moebius_json(const PassiveSystem& sys) {
  const MoebiusRep rep = moebius_rep(sys);
  Json j;
  j["omega0"] = report::matrix(rep.omega0);
  j["defect_rank"] = rep.defect_embedding.cols();
  j["reconstruction_residual"] = rep.reconstruction_residual;
  j["pinv_crosscheck_residual"] = rep.pinv_crosscheck_residual;
  double schwarz = 0.0;
  for (cdouble z : grids::disk()) {
    const CMatrix lam = rep.lambda(CutPlanePoint(z));
    if (lam.size() > 0) schwarz = std::max(schwarz, opnorm(lam) - std::abs(z));
  }
  j["schwarz_excess"] = schwarz;
  return j;
}

Json inner_json(const PassiveSystem& sys) {
  const InnerReport r = inner_test(sys);
  Json j;
  j["is_inner"] = r.is_inner;
  j["fit_residual"] = r.fit_residual;
  j["d_fit"] = r.d_fit ? report::matrix(*r.d_fit) : Json(nullptr);
  j["neuvaa"] = {r.neuvaa[0], r.neuvaa[1], r.neuvaa[2]};
  j["thinne_at_a"] = r.thinne_at_a;
  j["unitary_at_probe"] = r.unitary_at_probe;
  j["commuting"] = r.commuting;
  j["normal"] = r.normal;
  return j;
}

Json nfunction_json(const PassiveSystem& sys) {
  const NFunction nf = to_nfunction(sys);
  const PassiveSystem back = from_nfunction(nf);
  double roundtrip = 0.0;
  for (cdouble z : grids::disk()) {
    const CutPlanePoint zp(z);
    roundtrip = std::max(roundtrip, max_dev(u_inverse_eval(nf, zp), transfer(sys, zp)));
    roundtrip = std::max(roundtrip, max_dev(transfer(back, zp), transfer(sys, zp)));
  }
  double u_match = 0.0;
  double involution = 0.0;
  double commutation = 0.0;
  const NFunction gam = gamma_realize(nf);
  const PassiveSystem phi = phi_realize(sys);
  for (cdouble xi : grids::xi_probe()) {
    u_match = std::max(u_match, max_dev(u_eval(sys, xi), nf(xi)));
    const CMatrix g = gamma_transform(nf, xi);
    involution = std::max(involution, max_dev(gamma_value(g, xi), nf(xi)));
    commutation = std::max(commutation, max_dev(u_eval(phi, xi), g));
    commutation = std::max(commutation, max_dev(gam(xi), g));
  }
  Json j;
  j["u_roundtrip_residual"] = roundtrip;
  j["u_resolvent_residual"] = u_match;
  j["gamma_involution_residual"] = involution;
  j["commutation_residual"] = commutation;
  return j;
}

int run_check(const std::string& path, Context& ctx, std::ostream& out) {
  const LoadedSystem ls = load(path);
  ctx.add_input(ls.bytes);
  const PassiveSystem& sys = ls.sys;
  require_selfadjoint(sys, "check");
  Json j = ctx.header();
  j["system"] = system_summary(sys);
  const KrylovReport kr = krylov_analysis(sys);
  j["krylov"] = {{"controllable_dim", kr.controllable_dim},
                 {"observable_dim", kr.observable_dim},
                 {"minimal", kr.minimal},
                 {"simple", kr.simple},
                 {"near_tolerance", kr.near_tolerance}};
  j["certificate"] = certificate_json(certify_rs(sys));
  j["inner"] = section([&] { return inner_json(sys); });
  j["limits"] = section([&] { return limits_json(sys); });
  j["moebius"] = section([&] { return moebius_json(sys); });
  j["blocks"] = blocks_json(sys);
  j["rs"] = rs_json(sys);
  j["nfunction"] = section([&] { return nfunction_json(sys); });
  j["tolerances"] = {{"rtol", kDefaultRtol}, {"inner_fit", 1e-8}, {"reassembly", kReassemblyTol}};
  out << report::dump(j);
  return kExitOk;
}

// ---- transform -------------------------------------------------------------

struct TransformOptions {
  std::string system;
  std::string kind;
  double a = 0.5;
  std::string coupler;
  std::string out;
};

int run_transform(const TransformOptions& o, Context& ctx, std::ostream& out) {
  const LoadedSystem ls = load(o.system);
  ctx.add_input(ls.bytes);
  const PassiveSystem& sys = ls.sys;
  const Index m = sys.dim_input();
  const CMatrix id = identity(m);
  const double a = o.a;

  std::optional<PassiveSystem> result;
  std::function<CMatrix(CutPlanePoint)> expected;
  Json extra;
  if (o.kind == "phi") {
    result = phi_realize(sys);
    expected = [&](CutPlanePoint z) { return phi_eval(sys, z); };
  } else if (o.kind == "xi") {
    result = xi_realize(sys, a);
    expected = [&](CutPlanePoint z) { return transfer(sys, CutPlanePoint(moebius_point(z.value(), a))); };
  } else if (o.kind == "pia") {
    result = pi_a_realize(sys, a);
    expected = [&](CutPlanePoint z) {
      const CMatrix w = transfer(sys, z);
      return CMatrix((a * id + w) * inverse(id + a * w));
    };
  } else if (o.kind == "eta") {
    result = operator_moebius(sys, a);
    expected = [&](CutPlanePoint z) {
      const CMatrix w = transfer(sys, CutPlanePoint(moebius_point(z.value(), a)));
      return CMatrix((w - a * id) * inverse(id - a * w));
    };
    extra["block_form_residual"] = max_dev(operator_moebius_blocks(sys, a), result->matrix());
  } else if (o.kind == "zeta") {
    result = zeta_realize(sys, a);
    expected = [&](CutPlanePoint z) {
      const CMatrix w = transfer(sys, z);
      return CMatrix((w - a * id) * inverse(id - a * w));
    };
  } else {
    if (o.coupler.empty()) throw Error(ErrorKind::InvalidArgument, "redheffer needs --coupler");
    const LoadedSystem lc = load(o.coupler);
    ctx.add_input(lc.bytes);
    const RedhefferCoupler k = RedhefferCoupler::from_matrix(lc.sys.matrix(), lc.sys.dim_input());
    result = redheffer(k, sys);
    expected = [&, k](CutPlanePoint z) { return redheffer_transfer(k, sys, z); };
    extra["coupler_strict"] = k.strict();
  }

  double residual = 0.0;
  for (cdouble z : grids::transform_probe()) {
    const CutPlanePoint zp(z);
    residual = std::max(residual, max_dev(transfer(*result, zp), expected(zp)));
  }
  const std::string doc = serialize_system(*result);
  if (!o.out.empty()) write_file(o.out, doc);

  Json j = ctx.header();
  j["kind"] = o.kind;
  if (o.kind != "phi" && o.kind != "redheffer") j["a"] = a;
  j["residual"] = residual;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  j["norm"] = opnorm(result->matrix());
  j["minimal"] = krylov_analysis(*result).minimal;
  j["probe_grid"] = report::points(grids::transform_probe());
  j["system"] = Json::parse(doc);
  out << report::dump(j);
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
  std::string system;
  std::string input;
  std::uint64_t seed = 0;
  Index steps = 10;
};

CVector vector_from_json(const nlohmann::json& arr, Index expected, const char* what) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
    throw Error(ErrorKind::Parse, std::string(what) + " must have " + std::to_string(expected) + " entries");
  }
  CVector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const auto& e = arr[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorKind::Parse, std::string(what) + " entries must be [re, im] pairs");
    }
    v(i) = cdouble(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

Json vectors_json(const std::vector<CVector>& vs) {
  Json out = Json::array();
  for (const CVector& v : vs) out.push_back(report::matrix(v.transpose()).at(0));
  return out;
}

int run_simulate(const SimulateOptions& o, Context& ctx, std::ostream& out) {
  const LoadedSystem ls = load(o.system);
  ctx.add_input(ls.bytes);
  const Index m = ls.sys.dim_input();
  const Index n = ls.sys.dim_state();
  CVector h0;
  std::vector<CVector> inputs;
  if (!o.input.empty()) {
    const std::string bytes = read_file(o.input);
    ctx.add_input(bytes);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::Parse, std::string("input file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("h0") || !j.contains("inputs") || !j.at("inputs").is_array()) {
      throw Error(ErrorKind::Parse, "input file needs \"h0\" and \"inputs\"");
    }
    h0 = vector_from_json(j.at("h0"), n, "h0");
    for (const auto& x : j.at("inputs")) inputs.push_back(vector_from_json(x, m, "input"));
  } else {
    Rng rng(o.seed);
    h0 = random_matrix(rng, n, 1);
    for (Index k = 0; k < o.steps; ++k) inputs.push_back(random_matrix(rng, m, 1));
  }
  const Trajectory tr = simulate(ls.sys, h0, inputs);
  Json j = ctx.header();
  j["steps"] = inputs.size();
  const double min_defect = tr.energy_defect.empty() ? 0.0 : tr.min_energy_defect();
  j["energy"] = {{"min_defect", min_defect}, {"passes", min_defect >= -1e-12}, {"tolerance", 1e-12}};
  j["trajectory"] = {{"states", vectors_json(tr.states)},
                     {"inputs", vectors_json(tr.inputs)},
                     {"outputs", vectors_json(tr.outputs)},
                     {"energy_defect", tr.energy_defect}};
  out << report::dump(j);
  return kExitOk;
}

// ---- dilate / measure --------------------------------------------------------

int run_dilate(const std::string& path, Context& ctx, std::ostream& out) {
  const LoadedSystem ls = load(path);
  ctx.add_input(ls.bytes);
  const InnerDilation dil = inner_dilate(ls.sys);
  Json j = ctx.header();
  j["dilation"] = {{"dim_ambient", dil.dim_ambient},
                   {"dim_input", dil.dim_input},
                   {"a_tilde", report::matrix(dil.a_tilde.matrix())},
                   {"reconstruction_residual", dil.reconstruction_residual},
                   {"m_simple", dil.m_simple},
                   {"source_inner", dil.dim_ambient == dil.dim_input}};
  out << report::dump(j);
  return kExitOk;
}

int run_measure(const std::string& path, Context& ctx, std::ostream& out) {
  const LoadedSystem ls = load(path);
  ctx.add_input(ls.bytes);
  const SpectralMeasure mu = spectral_measure(inner_dilate(ls.sys));
  Json atoms = Json::array();
  for (const SpectralAtom& a : mu.atoms) atoms.push_back({{"t", a.t}, {"weight", report::matrix(a.weight)}});
  double recon = 0.0;
  for (cdouble z : grids::similarity()) {
    const CutPlanePoint zp(z);
    recon = std::max(recon, max_dev(mu.eval(zp), transfer(ls.sys, zp)));
  }
  Json j = ctx.header();
  j["atoms"] = std::move(atoms);
  j["total_residual"] = max_dev(mu.total(), identity(ls.sys.dim_input()));
  j["reconstruction_residual"] = recon;
  out << report::dump(j);
  return kExitOk;
}

// ---- jacobi ------------------------------------------------------------------

int run_jacobi(Index n, Index m, const std::string& out_path, Context& ctx, std::ostream& out) {
  const PassiveSystem sys = jacobi_system(n, m);
  const std::string doc = serialize_system(sys);
  if (out_path.empty()) {
    out << doc;
    return kExitOk;
  }
  write_file(out_path, doc);
  const CutPlanePoint z(cdouble(0.0, 0.5));
  Json j = ctx.header();
  j["output"] = {{"path", out_path}, {"digest", report::digest(doc)}};
  j["n"] = n;
  j["dim_input"] = m;
  j["minimal"] = krylov_analysis(sys).minimal;
  j["error_at_half_i"] = std::abs(jacobi_error(n, z));
  out << report::dump(j);
  return kExitOk;
}

// ---- fixedpoint ----------------------------------------------------------------

int run_fixedpoint(const std::string& path, double a, Context& ctx, std::ostream& out) {
  Json j = ctx.header();
  std::optional<LoadedSystem> ls;
  if (!path.empty()) {
    ls = load(path);
    ctx.add_input(ls->bytes);
    j = ctx.header();
  }
  const Index m = ls ? ls->sys.dim_input() : 1;
  const CutPlanePoint i_pt(cdouble(0.0, 1.0));
  double phi_res = 0.0;
  for (cdouble z : grids::transform_probe()) {
    const cdouble w = omega0_scalar(CutPlanePoint(z));
    phi_res = std::max(phi_res, std::abs((z - w) / (1.0 - z * w) - w));
  }
  double gamma_res = 0.0;
  for (cdouble xi : grids::xi_probe()) {
    const CMatrix mx = m0_eval(xi, m);
    gamma_res = std::max(gamma_res, max_dev(gamma_value(mx, xi), mx));
  }
  j["reference"] = {{"omega0_at_i", report::complex_value(omega0_eval(i_pt, m)(0, 0))},
                    {"m0_at_i", report::complex_value(m0_eval(cdouble(0.0, 1.0), m)(0, 0))},
                    {"phi_fixed_residual", phi_res},
                    {"gamma_fixed_residual", gamma_res}};
  j["a"] = a;
  if (ls) {
    const FixedPointReport r = fixed_point_tests(ls->sys, a);
    j["fixed_points"] = {{"xi_fixed", r.xi_fixed},
                         {"infix_fixed", r.infix_fixed},
                         {"cjdcyjd_fixed", r.cjdcyjd_fixed},
                         {"constant", r.constant},
                         {"fundamental_symmetry", r.fundamental_symmetry}};
    const CutPlanePoint h(cdouble(0.0, 0.5));
    j["omega0_distance_at_half_i"] = max_dev(transfer(ls->sys, h), omega0_eval(h, m));
  }
  j["probe_grid"] = report::points(grids::similarity());
  out << report::dump(j);
  return kExitOk;
}

// ---- similar -------------------------------------------------------------------

int run_similar(const std::string& p1, const std::string& p2, double rtol, Context& ctx,
                std::ostream& out) {
  const LoadedSystem s1 = load(p1);
  const LoadedSystem s2 = load(p2);
  ctx.add_input(s1.bytes);
  ctx.add_input(s2.bytes);
  const std::optional<CMatrix> u = unitary_similarity(s1.sys, s2.sys, rtol);
  Json j = ctx.header();
  Json s;
  s["found"] = u.has_value();
  if (u) {
    const CMatrix& uu = *u;
    s["u"] = report::matrix(uu);
    s["residuals"] = {{"unitary", max_dev(uu.adjoint() * uu, identity(uu.rows()))},
                      {"a", max_dev(s2.sys.A(), uu * s1.sys.A() * uu.adjoint())},
                      {"b", max_dev(s2.sys.B(), uu * s1.sys.B())},
                      {"c", max_dev(s2.sys.C(), s1.sys.C() * uu.adjoint())},
                      {"d", max_dev(s2.sys.D(), s1.sys.D())}};
  }
  j["similar"] = std::move(s);
  j["rtol"] = rtol;
  out << report::dump(j);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"realizations and transforms of RS-class transfer functions", "nevschur"};
  app.require_subcommand(1, 1);

  GenOptions gen;
  auto* c_gen = app.add_subcommand("gen", "Emit a seeded random passive system document");
  c_gen->add_option("--seed", gen.seed, "PRNG seed (mt19937_64)");
  c_gen->add_option("--dim-input", gen.dim_input)->check(CLI::PositiveNumber);
  c_gen->add_option("--dim-state", gen.dim_state)->check(CLI::NonNegativeNumber);
  c_gen->add_option("--via", gen.via)->check(CLI::IsMember({"direct", "ky", "general"}));
  c_gen->add_option("--out", gen.out);

  EvalOptions ev;
  auto* c_eval = app.add_subcommand("eval", "Evaluate Omega, Omega' and M");
  c_eval->add_option("--system", ev.system)->required();
  c_eval->add_option("--at", ev.at, "point a+bi (repeatable)");
  c_eval->add_option("--xi", ev.xi, "resolvent point a+bi (repeatable)");
  c_eval->add_flag("--batch", ev.batch, "read \"re im\" lines from stdin");

  std::string check_path;
  auto* c_check = app.add_subcommand("check", "Certificates, inner test, Krylov and block audits");
  c_check->add_option("--system", check_path)->required();

  TransformOptions tf;
  auto* c_tf = app.add_subcommand("transform", "Realize a transform of the transfer function");
  c_tf->add_option("--system", tf.system)->required();
  c_tf->add_option("--kind", tf.kind)
      ->required()
      ->check(CLI::IsMember({"phi", "xi", "pia", "eta", "zeta", "redheffer"}));
  c_tf->add_option("--a", tf.a);
  c_tf->add_option("--coupler", tf.coupler);
  c_tf->add_option("--out", tf.out);

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "Run the state recursion with an energy audit");
  c_sim->add_option("--system", sim.system)->required();
  auto* o_input = c_sim->add_option("--input", sim.input);
  c_sim->add_option("--seed", sim.seed)->excludes(o_input);
  c_sim->add_option("--steps", sim.steps)->check(CLI::NonNegativeNumber)->excludes(o_input);

  std::string dilate_path;
  auto* c_dil = app.add_subcommand("dilate", "Bi-inner dilation");
  c_dil->add_option("--system", dilate_path)->required();

  std::string measure_path;
  auto* c_meas = app.add_subcommand("measure", "Spectral measure atoms");
  c_meas->add_option("--system", measure_path)->required();

  Index jn = 0;
  Index jm = 1;
  std::string jout;
  auto* c_jac = app.add_subcommand("jacobi", "Block Jacobi truncation");
  c_jac->add_option("--n", jn)->required()->check(CLI::NonNegativeNumber);
  c_jac->add_option("--dim-input", jm)->check(CLI::PositiveNumber);
  c_jac->add_option("--out", jout);

  std::string fp_path;
  double fp_a = 0.5;
  auto* c_fp = app.add_subcommand("fixedpoint", "Fixed-point tests and reference values");
  c_fp->add_option("--system", fp_path);
  c_fp->add_option("--a", fp_a)->required();

  std::string sim1, sim2;
  double sim_rtol = 1e-8;
  auto* c_sim2 = app.add_subcommand("similar", "Unitary similarity of two minimal systems");
  c_sim2->add_option("--system", sim1)->required();
  c_sim2->add_option("--other", sim2)->required();
  c_sim2->add_option("--rtol", sim_rtol);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto subs = app.get_subcommands();
  const std::string name = subs.front()->get_name();
  Context ctx(name, args);
  try {
    if (name == "gen") return run_gen(gen, ctx, out);
    if (name == "eval") return run_eval(ev, ctx, in, out);
    if (name == "check") return run_check(check_path, ctx, out);
    if (name == "transform") return run_transform(tf, ctx, out);
    if (name == "simulate") return run_simulate(sim, ctx, out);
    if (name == "dilate") return run_dilate(dilate_path, ctx, out);
    if (name == "measure") return run_measure(measure_path, ctx, out);
    if (name == "jacobi") return run_jacobi(jn, jm, jout, ctx, out);
    if (name == "fixedpoint") return run_fixedpoint(fp_path, fp_a, ctx, out);
    return run_similar(sim1, sim2, sim_rtol, ctx, out);
  } catch (const Error& e) {
    Json j = ctx.header();
    j["error"] = error_object(e);
    out << report::dump(j);
    return kExitDomain;
  }
}

const std::vector<OperationRoute>& operation_table() {
  using V = std::vector<std::string>;
  static const std::vector<OperationRoute> table = {
      {"numkit", "eigh", V{"check", "--system", "{system}"}, "/certificate/min_kernel_eig"},
      {"numkit", "psd_sqrt", V{"dilate", "--system", "{system}"}, "/dilation/a_tilde"},
      {"numkit", "pinv", V{"check", "--system", "{system}"}, "/moebius/pinv_crosscheck_residual"},
      {"numkit", "range_embed", V{"check", "--system", "{system}"}, "/blocks/nx/rank_defect_d"},
      {"numkit", "opnorm", V{"transform", "--system", "{system}", "--kind", "phi"}, "/norm"},
      {"systems", "validate_passive", V{"check", "--system", "{system}"}, "/system/dim_input"},
      {"systems", "transfer", V{"eval", "--system", "{system}", "--at", "0.3+0.2i"}, "/points/0/omega"},
      {"systems", "transfer_derivative", V{"eval", "--system", "{system}", "--at", "0.3+0.2i"},
       "/points/0/omega_prime"},
      {"systems", "compressed_resolvent", V{"eval", "--system", "{system}", "--xi", "2i"},
       "/resolvents/0/m"},
      {"systems", "krylov_analysis", V{"check", "--system", "{system}"}, "/krylov/minimal"},
      {"systems", "simulate", V{"simulate", "--system", "{system}", "--seed", "1", "--steps", "20"},
       "/energy/min_defect"},
      {"systems", "unitary_similarity", V{"similar", "--system", "{system}", "--other", "{other}"},
       "/similar/found"},
      {"blocks", "assemble_contraction",
       V{"gen", "--seed", "3", "--dim-input", "1", "--dim-state", "2", "--via", "general"}, "/matrix"},
      {"blocks", "assemble_selfadjoint_ky",
       V{"gen", "--seed", "3", "--dim-input", "1", "--dim-state", "2", "--via", "ky"}, "/matrix"},
      {"blocks", "extract_ky", V{"check", "--system", "{system}"}, "/blocks/ky/reassembly_residual"},
      {"blocks", "extract_nx", V{"check", "--system", "{system}"}, "/blocks/nx/reassembly_residual"},
      {"blocks", "lemma_w", V{"check", "--system", "{system}"}, "/blocks/nx/w_identity_residual"},
      {"blocks", "fundamental_jf", V{"check", "--system", "{system}"}, "/blocks/jf/unitarity_residual"},
      {"blocks", "defect_identity_residual", V{"check", "--system", "{system}"},
       "/blocks/defect_identity/residual"},
      {"rsclass", "characteristic_fn", V{"check", "--system", "{system}"},
       "/rs/characteristic/unitarity_residual"},
      {"rsclass", "pick_kernel", V{"check", "--system", "{system}"}, "/rs/pick_kernel/symmetry_residual"},
      {"rsclass", "certify_rs", V{"check", "--system", "{system}"}, "/certificate/pass"},
      {"rsclass", "limit_values", V{"check", "--system", "{system}"}, "/limits/plus"},
      {"rsclass", "moebius_rep", V{"check", "--system", "{system}"}, "/moebius/reconstruction_residual"},
      {"rsclass", "inner_test", V{"check", "--system", "{system}"}, "/inner/is_inner"},
      {"rsclass", "to_nfunction", V{"check", "--system", "{system}"}, "/nfunction/u_resolvent_residual"},
      {"rsclass", "from_nfunction", V{"check", "--system", "{system}"}, "/nfunction/u_roundtrip_residual"},
      {"rsclass", "gamma_transform", V{"check", "--system", "{system}"},
       "/nfunction/gamma_involution_residual"},
      {"transforms", "phi_eval", V{"transform", "--system", "{system}", "--kind", "phi"}, "/residual"},
      {"transforms", "phi_realize", V{"transform", "--system", "{system}", "--kind", "phi"}, "/system/matrix"},
      {"transforms", "xi_realize", V{"transform", "--system", "{system}", "--kind", "xi", "--a", "0.5"},
       "/residual"},
      {"transforms", "operator_moebius",
       V{"transform", "--system", "{system}", "--kind", "eta", "--a", "0.5"}, "/block_form_residual"},
      {"transforms", "redheffer",
       V{"transform", "--system", "{system}", "--kind", "redheffer", "--coupler", "{coupler}"}, "/residual"},
      {"transforms", "pi_a_realize", V{"transform", "--system", "{system}", "--kind", "pia", "--a", "0.5"},
       "/residual"},
      {"transforms", "zeta_realize", V{"transform", "--system", "{system}", "--kind", "zeta", "--a", "0.5"},
       "/residual"},
      {"transforms", "omega0_eval", V{"fixedpoint", "--a", "0.5"}, "/reference/omega0_at_i"},
      {"transforms", "m0_eval", V{"fixedpoint", "--a", "0.5"}, "/reference/m0_at_i"},
      {"transforms", "jacobi_system", V{"jacobi", "--n", "4"}, "/matrix"},
      {"transforms", "jacobi_error", V{"jacobi", "--n", "4", "--out", "{out}"}, "/error_at_half_i"},
      {"transforms", "inner_dilate", V{"dilate", "--system", "{system}"}, "/dilation/dim_ambient"},
      {"transforms", "spectral_measure", V{"measure", "--system", "{system}"}, "/atoms/0/t"},
      {"transforms", "fixed_point_tests", V{"fixedpoint", "--system", "{system}", "--a", "0.5"},
       "/fixed_points/xi_fixed"},
      {"cli", "load_system", V{"eval", "--system", "{system}", "--at", "0"}, "/system/dim_state"},
      {"cli", "save_system", V{"gen", "--seed", "1", "--out", "{out}"}, "/output/digest"},
      {"cli", "dispatch", V{"fixedpoint", "--a", "0.5"}, "/command"},
  };
  return table;
}

}  // namespace nevschur

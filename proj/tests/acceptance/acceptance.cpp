// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nevschur/blocks.hpp"
#include "nevschur/cli.hpp"
#include "nevschur/document.hpp"
#include "nevschur/grids.hpp"
#include "nevschur/random.hpp"
#include "nevschur/rsclass.hpp"
#include "nevschur/systems.hpp"
#include "nevschur/transforms.hpp"

using namespace nevschur;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = NEVSCHUR_FIXTURES;

double dev(const CMatrix& a, const CMatrix& b) { return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the worst value of a residual against its bound.
class Worst {
 public:
  Worst(std::string name, double bound) : name_(std::move(name)), bound_(bound) {}
  void add(double v) { worst_ = std::max(worst_, v); }
  bool ok() const { return worst_ < bound_; }
  std::string str() const {
    std::ostringstream s;
    s << name_ << "=" << worst_;
    return s.str();
  }

 private:
  std::string name_;
  double bound_;
  double worst_ = 0.0;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

PassiveSystem random_minimal(Rng& rng, Index m, Index n) {
  for (;;) {
    PassiveSystem s = random_selfadjoint_system(rng, m, n);
    if (krylov_analysis(s).minimal) return s;
  }
}

std::vector<std::pair<std::string, PassiveSystem>> corpus() {
  std::vector<std::pair<std::string, PassiveSystem>> out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kFixtures)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) out.emplace_back(p.filename().string(), load_system(p.string()));
  return out;
}

std::vector<cdouble> all_grids() {
  std::vector<cdouble> g = grids::disk();
  for (double beta : {M_PI / 6, M_PI / 4, M_PI / 3}) {
    for (int sign : {1, -1}) {
      for (cdouble z : grids::beta_circle(beta, sign)) g.push_back(z);
    }
  }
  for (cdouble z : grids::real_interval()) g.push_back(z);
  for (cdouble z : grids::certificate_upper()) g.push_back(z);
  for (cdouble z : grids::certificate_lower()) g.push_back(z);
  return g;
}

Outcome c1_fixed_points() {
  const cdouble i(0, 1);
  Worst exact("abs_err", 1e-12), phi("phi_fix", 1e-10), gam("gamma_fix", 1e-10);
  exact.add(dev(omega0_eval(CutPlanePoint(i), 2), (i / (1.0 + std::sqrt(2.0))) * identity(2)));
  exact.add(dev(m0_eval(i, 2), (i / std::sqrt(2.0)) * identity(2)));
  for (cdouble z : grids::certificate_upper()) {
    const CMatrix w = omega0_eval(CutPlanePoint(z), 2);
    const CMatrix u = (z * identity(2) - w) * (identity(2) - z * w).inverse();
    phi.add(dev(u, w));
  }
  for (cdouble xi : grids::xi_probe()) {
    const CMatrix m = m0_eval(xi, 2);
    gam.add(dev(gamma_value(m, xi), m));
  }
  return {exact.ok() && phi.ok() && gam.ok(), join({exact.str(), phi.str(), gam.str()})};
}

Outcome c2_phi() {
  Rng rng(1002);
  Worst real("realize", 1e-9), inv("involution", 1e-9);
  int nonminimal = 0;
  for (int k = 0; k < 100; ++k) {
    const PassiveSystem s = random_minimal(rng, 1 + k % 3, 1 + k % 5);
    const PassiveSystem p = phi_realize(s);
    const PassiveSystem pp = phi_realize(p);
    for (cdouble z : grids::disk()) {
      const CutPlanePoint zp(z);
      real.add(dev(transfer(p, zp), phi_eval(s, zp)));
      inv.add(dev(transfer(pp, zp), transfer(s, zp)));
    }
    if (!krylov_analysis(p).minimal || !krylov_analysis(pp).minimal) ++nonminimal;
  }
  return {real.ok() && inv.ok() && nonminimal == 0,
          join({real.str(), inv.str(), "nonminimal=" + std::to_string(nonminimal)})};
}

Outcome c3_schur_frobenius() {
  Worst w("residual", 1e-10);
  std::vector<PassiveSystem> systems;
  for (auto& [name, s] : corpus()) systems.push_back(s);
  Rng rng(1003);
  for (int k = 0; k < 20; ++k) systems.push_back(random_selfadjoint_system(rng, 1 + k % 3, 1 + k % 6));
  for (const PassiveSystem& s : systems) {
    const Index m = s.dim_input();
    for (cdouble z : all_grids()) {
      const CutPlanePoint zp(z);
      w.add(dev(compressed_inverse_resolvent(s.matrix(), m, zp) * (identity(m) - z * transfer(s, zp)), identity(m)));
    }
  }
  return {w.ok(), w.str() + " systems=" + std::to_string(systems.size())};
}

Outcome c4_certificates() {
  Rng rng(1004);
  int failed = 0;
  double min_k = 1e300, min_i = 1e300, max_n = 0.0;
  for (int k = 0; k < 100; ++k) {
    const RSCertificate c = certify_rs(random_selfadjoint_system(rng, 1 + k % 3, 1 + k % 6));
    if (!c.pass || c.min_kernel_eig < -1e-8 || c.min_inequality_eig < -1e-8 || c.schur_norm_max > 1 + 1e-9) ++failed;
    min_k = std::min(min_k, c.min_kernel_eig);
    min_i = std::min(min_i, c.min_inequality_eig);
    max_n = std::max(max_n, c.schur_norm_max);
  }
  CMatrix t = random_selfadjoint_contraction(rng, 3) * 0.5;
  t(0, 0) = 1.2;
  const double norm = opnorm(t);
  const RSCertificate bad = certify_rs(PassiveSystem::unchecked(t * (1.2 / norm), 1, true));
  std::ostringstream s;
  s << "failed=" << failed << " min_kernel=" << min_k << " min_ineq=" << min_i << " max_norm=" << max_n
    << " violator_pass=" << bad.pass;
  return {failed == 0 && !bad.pass, s.str()};
}

Outcome c5_redheffer() {
  Rng rng(1005);
  Worst theta("theta", 1e-9), intr("intrav", 1e-10);
  double max_norm = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Index m = 1 + k % 3, h = 1 + (k / 3) % 3;
    const RedhefferCoupler c = RedhefferCoupler::from_matrix(random_selfadjoint_contraction(rng, m + h), m);
    const PassiveSystem s = random_selfadjoint_system(rng, h, 1 + k % 4);
    const PassiveSystem t = redheffer(c, s);
    max_norm = std::max(max_norm, opnorm(t.matrix()));
    for (cdouble z : grids::transform_probe()) {
      const CutPlanePoint zp(z);
      const CMatrix w = transfer(s, zp);
      theta.add(dev(transfer(t, zp), c.k11() + c.k12() * w * (identity(h) - c.k22() * w).inverse() * c.k12().adjoint()));
    }
  }
  const PassiveSystem s = random_selfadjoint_system(rng, 2, 3);
  const bool id_exact =
      redheffer(RedhefferCoupler(CMatrix::Zero(2, 2), identity(2), CMatrix::Zero(2, 2)), s).matrix() == s.matrix();
  for (int k = 0; k < 10; ++k) {
    const PassiveSystem r = random_selfadjoint_system(rng, 1 + k % 3, 1 + k % 4);
    for (double a : {-0.7, -0.3, 0.3, 0.7}) {
      intr.add(dev(redheffer(RedhefferCoupler::k_a(-a, r.dim_input()), xi_realize(r, a)).matrix(),
                   operator_moebius(r, a).matrix()));
    }
  }
  std::ostringstream n;
  n << "max_norm=" << max_norm << " identity_exact=" << id_exact;
  return {theta.ok() && intr.ok() && id_exact && max_norm <= 1 + 1e-9, join({theta.str(), intr.str(), n.str()})};
}

double gap(const PassiveSystem& a, const PassiveSystem& b) {
  double g = 0.0;
  for (cdouble z : grids::transform_probe()) g = std::max(g, dev(transfer(a, CutPlanePoint(z)), transfer(b, CutPlanePoint(z))));
  return g;
}

Outcome c6_moebius() {
  Rng rng(1006);
  Worst comp("composition", 1e-9), rt("pi_zeta", 1e-9), wa("wa_inverse", 1e-10), fsym("fundsym", 1e-12);
  for (int k = 0; k < 20; ++k) {
    const PassiveSystem s = random_minimal(rng, 1 + k % 2, 1 + k % 4);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.3, -0.6}, {-0.2, 0.7}}) {
      comp.add(gap(xi_realize(xi_realize(s, a), b), xi_realize(s, (a + b) / (1 + a * b))));
    }
    for (double a : {-0.7, -0.3, 0.3, 0.7}) {
      rt.add(gap(pi_a_realize(zeta_realize(s, a), a), s));
      rt.add(gap(zeta_realize(pi_a_realize(s, a), a), s));
      wa.add(dev(operator_moebius(operator_moebius(s, a), -a).matrix(), s.matrix()));
    }
  }
  for (int k = 0; k < 20; ++k) {
    const CMatrix u = random_unitary(rng, 4);
    CMatrix d = CMatrix::Zero(4, 4);
    for (Index i = 0; i < 4; ++i) d(i, i) = (i + k) % 3 == 0 ? -1.0 : 1.0;
    const CMatrix j = u * d * u.adjoint();
    for (double a : {-0.7, -0.3, 0.3, 0.7}) fsym.add(dev(operator_moebius(PassiveSystem::validate(j, 2, true), a).matrix(), j));
  }
  return {comp.ok() && rt.ok() && wa.ok() && fsym.ok(), join({comp.str(), rt.str(), wa.str(), fsym.str()})};
}

Outcome c7_jacobi() {
  const CutPlanePoint z(cdouble(0, 0.5));
  bool decreasing = true, minimal = true;
  double prev = 1e300;
  for (Index n : {1, 2, 4, 8, 16, 32}) {
    const double e = std::abs(jacobi_error(n, z));
    if (!(e < prev)) decreasing = false;
    prev = e;
    if (!krylov_analysis(jacobi_system(n, 1)).minimal) minimal = false;
  }
  Index n_star = -1;
  for (Index n = 0; n <= 64; ++n) {
    if (!krylov_analysis(jacobi_system(n, 1)).minimal) minimal = false;
    if (std::abs(jacobi_error(n, z)) < 1e-8) {
      n_star = n;
      break;
    }
  }
  const auto pin = nlohmann::json::parse(read_file((kFixtures / "pins" / "jacobi_nstar.json").string()));
  const Index pinned = pin.at("n_star").get<Index>();
  const PassiveSystem fixture = load_system((kFixtures / pin.at("system").get<std::string>()).string());
  const double fixture_err = std::abs(transfer(fixture, z)(0, 0) - omega0_scalar(z));
  std::ostringstream s;
  s << "decreasing=" << decreasing << " minimal=" << minimal << " n_star=" << n_star << " pinned=" << pinned
    << " fixture_err=" << fixture_err;
  return {decreasing && minimal && n_star == pinned && fixture_err < 1e-8 && fixture.dim_state() == pinned, s.str()};
}

Outcome c8_dilation() {
  Worst rec("reconstruction", 1e-9), tot("total", 1e-9), meas("measure", 1e-9), zero("zero_atoms", 1e-10);
  int used = 0;
  for (auto& [name, s] : corpus()) {
    if (!s.selfadjoint()) continue;
    ++used;
    const InnerDilation d = inner_dilate(s);
    rec.add(d.reconstruction_residual);
    const SpectralMeasure mu = spectral_measure(d);
    tot.add(dev(mu.total(), identity(s.dim_input())));
    for (cdouble z : grids::similarity()) meas.add(dev(mu.eval(CutPlanePoint(z)), transfer(s, CutPlanePoint(z))));
  }
  CMatrix z0 = CMatrix::Zero(1, 1);
  const SpectralMeasure mz = spectral_measure(inner_dilate(PassiveSystem::validate(z0, 1, true)));
  bool zero_ok = mz.atoms.size() == 2;
  if (zero_ok) {
    zero.add(std::abs(mz.atoms[0].t + 1.0));
    zero.add(std::abs(mz.atoms[1].t - 1.0));
    zero.add(std::abs(mz.atoms[0].weight(0, 0) - 0.5));
    zero.add(std::abs(mz.atoms[1].weight(0, 0) - 0.5));
  }
  return {rec.ok() && tot.ok() && meas.ok() && zero_ok && zero.ok(),
          join({rec.str(), tot.str(), meas.str(), zero.str(), "fixtures=" + std::to_string(used)})};
}

Outcome c9_inner() {
  std::vector<std::string> bad;
  const std::map<std::string, CMatrix> expected_d = [] {
    std::map<std::string, CMatrix> m;
    m["inner_identity.json"] = CMatrix::Zero(1, 1);
    CMatrix a(1, 1);
    a(0, 0) = 0.3;
    m["inner_d03.json"] = a;
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = -0.5;
    m["inner_diag.json"] = d;
    return m;
  }();
  int inner_count = 0;
  for (auto& [name, s] : corpus()) {
    if (!s.selfadjoint() || !krylov_analysis(s).minimal) continue;
    const InnerReport r = inner_test(s);
    if (!(r.neuvaa[0] == r.neuvaa[1] && r.neuvaa[1] == r.neuvaa[2])) bad.push_back(name + ":neuvaa");
    if (r.unitary_at_probe && !r.is_inner) bad.push_back(name + ":unitary");
    if (r.is_inner) {
      ++inner_count;
      if (!r.commuting || !r.normal) bad.push_back(name + ":normal");
    }
    const auto it = expected_d.find(name);
    if (it != expected_d.end()) {
      if (!r.is_inner || !r.d_fit || dev(*r.d_fit, it->second) > 1e-9) bad.push_back(name + ":fit");
    } else if (name.rfind("jacobi", 0) == 0 && r.is_inner) {
      bad.push_back(name + ":jacobi_inner");
    }
  }
  for (Index n : {1, 2, 4, 8, 16}) {
    if (inner_test(jacobi_system(n, 1)).is_inner) bad.push_back("jacobi" + std::to_string(n));
  }
  return {bad.empty() && inner_count >= 3,
          "inner_fixtures=" + std::to_string(inner_count) + (bad.empty() ? "" : " bad=" + join(bad))};
}

Outcome c10_parametrizations() {
  Rng rng(1010);
  Worst ky("ky", 1e-9), nx("nx", 1e-9), di("defect_identity", 1e-9);
  for (int k = 0; k < 100; ++k) {
    const PassiveSystem s = random_selfadjoint_system(rng, 1 + k % 3, 1 + k % 5);
    const KYExtraction a = extract_ky(s);
    ky.add(dev(assemble_selfadjoint_ky(a.param).matrix(), s.matrix()));
    const NXExtraction b = extract_nx(s);
    nx.add(dev(assemble_selfadjoint_nx(b.param).matrix(), s.matrix()));
  }
  for (int k = 0; k < 100; ++k) {
    const Index a = 1 + k % 3, b = 1 + (k / 3) % 3, c = 1 + k % 4, d = 1 + (k / 4) % 4;
    const GeneralBlockParam p = random_general(rng, a, b, c, d);
    di.add(defect_identity_residual(p, random_matrix(rng, b, 1), random_matrix(rng, d, 1)));
  }
  return {ky.ok() && nx.ok() && di.ok(), join({ky.str(), nx.str(), di.str()})};
}

Outcome c11_simulation() {
  Rng rng(1011);
  double worst = 1e300;
  for (int k = 0; k < 10; ++k) {
    const Index m = 1 + k % 3, n = 1 + k % 5;
    const PassiveSystem s = k % 2 == 0 ? random_selfadjoint_system(rng, m, n)
                                       : PassiveSystem::validate(random_contraction(rng, m + n, m + n), m, false);
    std::vector<CVector> in;
    for (int j = 0; j < 1000; ++j) in.push_back(random_matrix(rng, m, 1));
    worst = std::min(worst, simulate(s, random_matrix(rng, n, 1), in).min_energy_defect());
  }
  std::ostringstream s;
  s << "min_defect=" << worst;
  return {worst >= -1e-12, s.str()};
}

Outcome c12_commutation() {
  Rng rng(1012);
  Worst w("commutation", 1e-9);
  for (int k = 0; k < 50; ++k) {
    const PassiveSystem s = random_selfadjoint_system(rng, 1 + k % 3, 1 + k % 5);
    const PassiveSystem p = phi_realize(s);
    const NFunction nf = to_nfunction(s);
    for (cdouble xi : grids::xi_probe()) w.add(dev(u_eval(p, xi), gamma_transform(nf, xi)));
  }
  return {w.ok(), w.str()};
}

Outcome c13_cli() {
  int mismatched = 0, files = 0;
  for (const auto& e : fs::directory_iterator(kFixtures)) {
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    ++files;
    const std::string bytes = read_file(e.path().string());
    if (serialize_system(parse_system(bytes)) != bytes) ++mismatched;
  }
  const fs::path out = fs::temp_directory_path() / "nevschur_acceptance_out.json";
  const std::map<std::string, std::string> subst = {
      {"{system}", (kFixtures / "random_s3_m2_n3.json").string()},
      {"{other}", (kFixtures / "random_s3_m2_n3.json").string()},
      {"{coupler}", (kFixtures / "coupler_m2.json").string()},
      {"{out}", out.string()},
  };
  int unreachable = 0;
  std::map<std::string, int> seen;
  for (const OperationRoute& r : operation_table()) {
    ++seen[r.module + "." + r.operation];
    std::vector<std::string> args;
    for (const auto& a : r.argv) {
      const auto it = subst.find(a);
      args.push_back(it == subst.end() ? a : it->second);
    }
    std::istringstream in;
    std::ostringstream o, e;
    const int code = run_cli(args, in, o, e);
    const auto j = nlohmann::json::parse(o.str(), nullptr, false);
    if (code != kExitOk || j.is_discarded() || !j.contains(nlohmann::json::json_pointer(r.evidence))) ++unreachable;
  }
  int duplicates = 0;
  for (const auto& [k, c] : seen) duplicates += c != 1;
  auto code_of = [](const std::vector<std::string>& args) {
    std::istringstream in;
    std::ostringstream o, e;
    return run_cli(args, in, o, e);
  };
  const bool codes = code_of({"nonsense"}) == kExitUsage && code_of({"eval", "--bad-flag"}) == kExitUsage &&
                     code_of({"check", "--system", (kFixtures / "invalid" / "not_contraction.json").string()}) ==
                         kExitDomain &&
                     code_of({"jacobi", "--n", "2"}) == kExitOk;
  std::ostringstream s;
  s << "corpus=" << files << " mismatched=" << mismatched << " routes=" << operation_table().size()
    << " unreachable=" << unreachable << " duplicates=" << duplicates << " exit_codes=" << codes;
  return {mismatched == 0 && files > 0 && unreachable == 0 && duplicates == 0 && seen.size() >= 44 && codes, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fixed-point values", c1_fixed_points},
      {"phi involution and realization", c2_phi},
      {"schur-frobenius identity", c3_schur_frobenius},
      {"rs certificates", c4_certificates},
      {"redheffer product", c5_redheffer},
      {"moebius machinery", c6_moebius},
      {"jacobi convergence", c7_jacobi},
      {"dilation and measure", c8_dilation},
      {"inner-function suite", c9_inner},
      {"parametrization round trips", c10_parametrizations},
      {"simulation passivity", c11_simulation},
      {"transform commutation", c12_commutation},
      {"cli contract", c13_cli},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << "\n";
  }
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mslab/closure.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/io.hpp"
#include "mslab/maxa.hpp"
#include "mslab/observer.hpp"
#include "mslab/random.hpp"
#include "mslab/relquant.hpp"
#include "mslab/spin.hpp"
#include "mslab/topology.hpp"

namespace mslab {

// Limits for the acceptance criteria.
namespace limits {
inline constexpr double fragment_seconds = 1.0;
inline constexpr double beta_seconds = 1.0;
inline constexpr double axiom_suite_seconds = 10.0;
inline constexpr double report_seconds = 60.0;
inline constexpr std::size_t closure_depth = 3;
inline constexpr std::size_t random_ambient_samples = 50;
inline constexpr std::size_t partial_isometry_samples = 100;
inline constexpr std::uint64_t seed = 20240611;
} // namespace limits

struct CheckResult {
  CheckResult() = default;
  CheckResult(std::string n, std::string t) : name(std::move(n)), title(std::move(t)) {}

  std::string name;
  std::string title;
  bool passed = false;
  std::vector<std::string> failures;
  Json values = Json::object();
  double seconds = 0.0;
};

struct RunReport {
  std::string command;
  double eps = Tolerance::default_eps;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  Json data = nullptr; // command-specific output

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const auto &c) { return c.passed; });
  }

  /// Checks in alphabetical order. Timing goes under "timing" and is left
  /// out when `with_timing` is false.
  Json to_json(bool with_timing = true) const {
    std::vector<const CheckResult *> sorted;
    for (const auto &c : checks)
      sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(),
              [](auto *a, auto *b) { return a->name < b->name; });
    Json cs = Json::array();
    Json timing = Json::object();
    for (const auto *c : sorted) {
      Json o = {{"name", c->name}, {"passed", c->passed}, {"values", c->values}};
      if (!c->failures.empty())
        o["failures"] = c->failures;
      cs.push_back(o);
      timing[c->name] = round_sig(c->seconds, 3);
    }
    Json j = {{"command", command},
              {"eps", round_sig(eps)},
              {"passed", passed()},
              {"checks", cs}};
    if (!data.is_null())
      j["values"] = data;
    if (with_timing) {
      timing["total"] = round_sig(seconds, 3);
      j["timing"] = timing;
    }
    return j;
  }
};

namespace detail {

// Collects expectations for one criterion.
class Expect {
public:
  explicit Expect(CheckResult &c) : c_(c) {}

  void that(bool ok, const std::string &what) {
    if (!ok)
      c_.failures.push_back(what);
  }

  void laws(const LawReport &r, const std::string &prefix) {
    for (const auto &v : r.verdicts())
      if (!v.passed && v.severity == Severity::required) {
        std::ostringstream os;
        os << prefix << ": " << v;
        c_.failures.push_back(os.str());
      }
  }

  void within(double seconds, double limit, const std::string &what) {
    that(seconds < limit, what + " took " + std::to_string(seconds) + " s (limit " +
                              std::to_string(limit) + " s)");
  }

private:
  CheckResult &c_;
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string set_names(const PointSet &s, const std::vector<std::string> &points) {
  std::string out = "{";
  bool first = true;
  for (std::size_t p = s.find_first(); p != PointSet::npos; p = s.find_next(p)) {
    out += (first ? "" : ",") + points[p];
    first = false;
  }
  return out + "}";
}

} // namespace detail

// ---------------------------------------------------------------------------
// Criteria. Each fills values and failures of its CheckResult.

inline void check_lattice_fragment(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const auto t0 = std::chrono::steady_clock::now();
  const FixtureSet f = spin_half_fixtures(tol);
  const std::vector<std::string> names{"x_down", "x_up", "x", "z_down", "z_up", "z", "0"};
  std::vector<Subspace> elems;
  for (const auto &n : names)
    elems.push_back(f[n]);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto &[lo, hi] : hasse(elems, tol))
    got.emplace(names[lo], names[hi]);
  const std::set<std::pair<std::string, std::string>> want{
      {"x_down", "x"}, {"x_up", "x"}, {"z_down", "z"}, {"z_up", "z"},
      {"0", "x_down"}, {"0", "x_up"}, {"0", "z_down"}, {"0", "z_up"}};
  Json edges = Json::array();
  for (const auto &[lo, hi] : got)
    edges.push_back(lo + " < " + hi);
  c.values["covers"] = edges;
  c.values["x_equals_z"] = equal(f["x"], f["z"], tol);
  expect.that(got == want, "cover relation differs from the fragment diagram");
  expect.that(!equal(f["x"], f["z"], tol), "x = z");
  const double s = detail::seconds_since(t0);
  expect.within(s, limits::fragment_seconds, "fragment");
}

inline void check_non_distributivity(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const FixtureSet f = spin_half_fixtures(tol);
  const auto w = distributivity_witness(f["x"], f["z_down"], f["z_up"], tol);
  c.values["lhs_dim"] = w.lhs.dim();
  c.values["rhs_dim"] = w.rhs.dim();
  c.values["rhs_is_e"] = equal(w.rhs, f["e"], tol);
  c.values["distributive"] = w.distributive;
  expect.that(w.lhs.dim() == 0, "(x ^ z_down) v (x ^ z_up) is not 0");
  expect.that(equal(w.rhs, f["e"], tol), "x ^ (z_down v z_up) is not e");
  expect.that(!w.distributive, "triple reported distributive");
  for (const char *atom : {"z_up", "z_down", "x_up", "x_down"}) {
    const bool zero = meet(f["e"], f[atom], tol).is_zero();
    c.values[std::string("e_meet_") + atom + "_is_0"] = zero;
    expect.that(zero, std::string("e ^ ") + atom + " is not 0");
  }
}

inline void check_spin_half_observer(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const SpinSetup s = spin_setup(Spin::half, tol);
  const auto &f = s.fixtures;
  Json table = Json::object();
  for (const char *m : {"0", "x_down", "x_up", "x", "z_down", "z_up", "z"})
    table[m] = s.describe(s.rz.retraction(f[m]), tol);
  c.values["r_z"] = table;
  for (const char *m : {"x_down", "x_up", "x"})
    expect.that(table[m] == "z", std::string("r_z(") + m + ") is not z");
  for (const char *m : {"0", "z_down", "z_up", "z"})
    expect.that(table[m] == m, std::string("r_z does not fix ") + m);

  const auto af = approximation_map(s.rz, s.ox.elements());
  expect.laws(af.report, "af");
  const Subspace prod_first = s.rz.retraction(product(f["x_up"], f["x_down"], tol));
  const Subspace prod_after = product(s.rz.retraction(f["x_up"]),
                                      s.rz.retraction(f["x_down"]), tol);
  c.values["af(x_up x_down)"] = s.describe(prod_first, tol);
  c.values["af(x_up) af(x_down)"] = s.describe(prod_after, tol);
  expect.that(prod_first.is_zero(), "af(x_up x_down) is not 0");
  expect.that(equal(prod_after, f["z"], tol), "af(x_up) af(x_down) is not z");
  const LawVerdict *note = af.report.find("preserves_products");
  expect.that(note && !note->passed, "product non-preservation not reported");
}

inline void check_spin_one_observer(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const SpinSetup s = spin_setup(Spin::one, tol);
  const auto &f = s.fixtures;
  Json table = Json::object();
  for (const char *m : {"x_minus", "x_zero", "x_plus", "x"})
    table[m] = s.describe(s.rz.retraction(f[m]), tol);
  c.values["r_z"] = table;
  expect.that(table["x_zero"] == "z_minus v z_plus", "r_z(x_zero) is not z_minus v z_plus");
  for (const char *m : {"x_minus", "x_plus", "x"})
    expect.that(table[m] == "z", std::string("r_z(") + m + ") is not z");
  std::size_t fixed = 0;
  for (std::size_t i = 0; i < s.oz.elements().size(); ++i) {
    const bool ok = equal(s.rz.retraction(s.oz.elements()[i]), s.oz.elements()[i], tol);
    fixed += ok;
    expect.that(ok, "r_z does not fix " + s.oz.names()[i]);
  }
  c.values["fixed_oz_elements"] = fixed;
  c.values["oz_elements"] = s.oz.elements().size();
}

inline void check_beta_maps(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [&](const std::string &label, const OpensMap &fm,
                 const std::vector<std::vector<std::size_t>> &want) {
    const BasisChangeMap b = beta(fm);
    expect.laws(b.report, label);
    Json assignment = Json::object();
    for (std::size_t x = 0; x < b.source.size(); ++x) {
      assignment[b.source.points[x]] =
          detail::set_names(b.assignment[x], fm.from.points);
      PointSet w(fm.from.size());
      for (std::size_t y : want[x])
        w.set(y);
      expect.that(b.assignment[x] == w, label + ": beta(" + b.source.points[x] +
                                            ") is " +
                                            detail::set_names(b.assignment[x],
                                                              fm.from.points));
    }
    c.values[label] = assignment;
    return b;
  };
  const SpinSetup half = spin_setup(Spin::half, tol);
  const SpinSetup one = spin_setup(Spin::one, tol);
  const auto bh = run("spin_half", restrict_to_opens(half.rz, half.ox, half.oz),
                      {{0, 1}, {0, 1}});
  run("spin_one", restrict_to_opens(one.rz, one.ox, one.oz),
      {{0, 1, 2}, {0, 2}, {0, 1, 2}});
  const auto bi = run("identity_half", identity_opens_map(half.oz), {{0}, {1}});
  run("identity_one", identity_opens_map(one.oz), {{0}, {1}, {2}});
  c.values["observer_beta_differs_from_identity"] = bh.assignment != bi.assignment;
  expect.that(bh.assignment != bi.assignment,
              "beta from r_z equals beta from the identity");
  expect.within(detail::seconds_since(t0), limits::beta_seconds, "beta maps");
}

inline void check_axiom_suite(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const auto t0 = std::chrono::steady_clock::now();
  const FixtureSet f = spin_half_fixtures(tol);
  const ClosureResult cl =
      bounded_closure(f.elements(), limits::closure_depth, f.names, tol);
  c.values["closure_growth"] = cl.growth;
  expect.that(cl.terminated(), "spin-1/2 closure did not terminate at depth 3");
  if (cl.terminated()) {
    c.values["closure_size"] = cl.quantale->size();
    const LawReport ax = check_axioms(*cl.quantale);
    expect.laws(ax, "closure");
    c.values["closure_axioms_exhaustive"] =
        cl.quantale->size() <= exhaustive_law_limit;
    expect.that(cl.quantale->size() <= exhaustive_law_limit,
                "closure too large for the exhaustive check");
  }

  FiniteQuantale og = groupoid_quantale(pair_groupoid(2));
  og.opens = upper_sets(og.leq);
  c.values["groupoid_quantale_size"] = og.size();
  expect.that(og.size() == 16, "O(pair groupoid on 2) does not have 16 elements");
  expect.laws(check_axioms(og), "O(G)");
  expect.laws(check_continuity(og), "O(G) continuity");
  expect.laws(check_classical(og), "O(G) classical");
  const LawReport local = check_local(og);
  c.values["groupoid_quantale_local"] = local.passed();
  expect.that(!local.passed(), "O(G) reported local");
  for (const auto &v : local.verdicts())
    if (!v.passed) {
      Json w = Json::array();
      for (std::size_t i : v.witness)
        w.push_back(og.name(i));
      c.values["non_local_witness"] = {{"law", v.law}, {"elements", w}};
      break;
    }
  expect.within(detail::seconds_since(t0), limits::axiom_suite_seconds, "axiom suite");
}

inline void check_observer_suite(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  {
    const auto go = groupoid_observer(2, tol);
    std::vector<Subspace> samples = go.carrier;
    Rng rng(limits::seed);
    for (std::size_t i = 0; i < limits::random_ambient_samples; ++i)
      samples.push_back(random_subspace(rng, 2, 3, true, tol));
    expect.laws(check_observer_axioms(go, samples), "groupoid observer");
    c.values["groupoid_samples"] = samples.size();
  }
  {
    const SpinSetup s = spin_setup(Spin::half, tol);
    const ClosureResult cl = bounded_closure(s.fixtures.elements(),
                                             limits::closure_depth, s.fixtures.names, tol);
    expect.that(cl.terminated(), "spin-1/2 closure did not terminate");
    expect.laws(check_observer_axioms(s.rz, cl.elements), "spin-1/2 r_z");
    c.values["spin_half_samples"] = cl.elements.size();
  }
  {
    const SpinSetup s = spin_setup(Spin::one, tol);
    const auto samples = join_involution_closure(s.fixtures.elements(), tol);
    expect.laws(check_observer_axioms(s.rz, samples), "spin-1 r_z");
    c.values["spin_one_samples"] = samples.size();
  }
}

inline void check_sobriety_points(CheckResult &c, Tolerance) {
  detail::Expect expect(c);
  const FiniteSpace z = z_space();
  expect.laws(check_sober(z), "Z-space");
  const SpecializationOrder so = specialization_order(z);
  const bool order_ok = so.leq(0, 2) && so.leq(1, 2) && !so.leq(0, 1) &&
                        !so.leq(1, 0) && !so.leq(2, 0) && !so.leq(2, 1);
  c.values["specialization"] = {"z_down <= z", "z_up <= z", "z_down, z_up incomparable"};
  expect.that(order_ok, "specialization order differs from z_down, z_up < z");

  const FiniteLattice l = topology_lattice(z);
  c.values["topology_lattice_size"] = l.size();
  expect.that(l.size() == 5, "Z-space topology does not have 5 opens");
  const auto pts = points_of_locale(l);
  c.values["locale_points"] = pts.size();
  expect.that(pts.size() == 3, "expected 3 locale points");

  // x -> {U : x in U}
  std::vector<std::size_t> map;
  Json bijection = Json::object();
  for (std::size_t x = 0; x < z.size(); ++x) {
    LocalePoint px(l.size());
    for (std::size_t u = 0; u < l.size(); ++u)
      if (z.opens[u].test(x))
        px.set(u);
    auto it = std::find(pts.begin(), pts.end(), px);
    expect.that(it != pts.end(), z.points[x] + " gives no locale point");
    if (it != pts.end()) {
      map.push_back(std::size_t(it - pts.begin()));
      bijection[z.points[x]] = l.name(it->find_first());
    }
  }
  c.values["point_of"] = bijection;
  const Spectrum sp = spectrum(l, true);
  expect.that(sp.isomorphic, "opens of the spectrum are not isomorphic to the lattice");
  expect.that(map.size() == z.size() && is_homeomorphism(z, sp.space, map),
              "Z-space is not homeomorphic to its spectrum");
}

inline void check_stably_gelfand(CheckResult &c, Tolerance tol) {
  detail::Expect expect(c);
  const FixtureSet f = spin_half_fixtures(tol);
  const ClosureResult cl =
      bounded_closure(f.elements(), limits::closure_depth, f.names, tol);
  expect.that(cl.terminated(), "spin-1/2 closure did not terminate");
  std::size_t premise = 0;
  for (std::size_t i = 0; i < cl.elements.size(); ++i) {
    const Subspace &p = cl.elements[i];
    const Subspace ppp = product(product(p, involution(p, tol), tol), p, tol);
    if (contains(p, ppp, tol)) {
      ++premise;
      expect.that(equal(p, ppp, tol),
                  "closure element " + std::to_string(i) + ": PP*P < P strictly");
    }
  }
  c.values["closure_elements_with_premise"] = premise;
  Rng rng(limits::seed + 1);
  for (std::size_t n : {2u, 3u}) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < limits::partial_isometry_samples; ++i) {
      const ComplexMatrix v = random_partial_isometry(rng, n);
      const Subspace p = canonicalize(n, std::span<const ComplexMatrix>(&v, 1), tol);
      ok += equal(product(product(p, involution(p, tol), tol), p, tol), p, tol);
    }
    c.values["partial_isometries_M" + std::to_string(n)] = ok;
    expect.that(ok == limits::partial_isometry_samples,
                "PP*P != P for a partial isometry span in M_" + std::to_string(n));
  }
}

struct Criterion {
  std::string name;
  std::string title;
  std::function<void(CheckResult &, Tolerance)> run;
};

/// Criteria in their fixed order (the report sorts by name).
inline const std::vector<Criterion> &criteria() {
  static const std::vector<Criterion> all{
      {"lattice_fragment", "spin-1/2 lattice fragment and x != z", check_lattice_fragment},
      {"non_distributivity", "x ^ (z_down v z_up) = e but lhs = 0", check_non_distributivity},
      {"spin_half_observer", "r_z on O_x and product non-preservation", check_spin_half_observer},
      {"spin_one_observer", "r_z(x_zero) = z_minus v z_plus", check_spin_one_observer},
      {"beta_maps", "change-of-basis maps beta", check_beta_maps},
      {"axiom_suite", "closure and O(G) measurement-space axioms", check_axiom_suite},
      {"observer_axioms", "observer axioms for groupoid and diagonal observers", check_observer_suite},
      {"sobriety_points", "Z-space sober with 3 locale points", check_sobriety_points},
      {"stably_gelfand", "PP*P <= P implies equality", check_stably_gelfand},
  };
  return all;
}

inline CheckResult run_criterion(const Criterion &cr, Tolerance tol) {
  CheckResult c{cr.name, cr.title};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    cr.run(c, tol);
  } catch (const std::exception &e) {
    c.failures.push_back(std::string("error: ") + e.what());
  }
  c.seconds = detail::seconds_since(t0);
  c.passed = c.failures.empty();
  return c;
}

/// One check per law verdict; informational verdicts never fail.
inline RunReport report_from_laws(const std::string &command, Tolerance tol,
                                  const LawReport &laws, Json data = nullptr) {
  RunReport r{command, tol.eps(), {}, 0.0, std::move(data)};
  for (const auto &v : laws.verdicts()) {
    CheckResult c{v.law, v.detail};
    c.passed = v.passed || v.severity == Severity::informational;
    if (!v.passed) {
      std::ostringstream os;
      os << v;
      if (v.severity == Severity::informational)
        c.values["note"] = os.str();
      else
        c.failures.push_back(os.str());
    }
    if (!v.witness.empty())
      c.values["witness"] = v.witness;
    r.checks.push_back(std::move(c));
  }
  return r;
}

/// Runs criteria 1-9. With `determinism`, runs them a second time and adds
/// the determinism check comparing the two timing-free reports.
inline RunReport run_report(Tolerance tol = {}, bool determinism = true,
                            const std::string &command = "report") {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r{command, tol.eps(), {}, 0.0, nullptr};
  for (const auto &cr : criteria())
    r.checks.push_back(run_criterion(cr, tol));
  if (determinism) {
    CheckResult d{"determinism", "identical reports on a second run"};
    const auto t1 = std::chrono::steady_clock::now();
    RunReport again{command, tol.eps(), {}, 0.0, nullptr};
    for (const auto &cr : criteria())
      again.checks.push_back(run_criterion(cr, tol));
    const bool same = r.to_json(false).dump() == again.to_json(false).dump();
    d.seconds = detail::seconds_since(t1);
    const double total = detail::seconds_since(t0);
    d.values["identical"] = same;
    if (!same)
      d.failures.push_back("second run produced a different report");
    if (total >= limits::report_seconds)
      d.failures.push_back("suite took " + std::to_string(total) + " s");
    d.passed = d.failures.empty();
    r.checks.push_back(std::move(d));
  }
  r.seconds = detail::seconds_since(t0);
  return r;
}

} // namespace mslab

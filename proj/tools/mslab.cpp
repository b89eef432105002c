// mslab: command-line front end for the measurement-space checkers.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mslab/acceptance.hpp"
#include "mslab/closure.hpp"
#include "mslab/dot.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/io.hpp"
#include "mslab/maxa.hpp"
#include "mslab/observer.hpp"
#include "mslab/relquant.hpp"
#include "mslab/spin.hpp"
#include "mslab/topology.hpp"

using namespace mslab;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Options {
  double eps = Tolerance::default_eps;
  std::string json_path;
  std::string dot_path;
  bool dot = false;
  std::string spin;
  std::string file;
  std::string check;
  bool quantale = false;
  bool run_checks = false;
  bool identity = false;
};

// Human-readable output; moves to stderr when DOT goes to stdout.
std::ostream *human_out = &std::cout;
std::ostream &human() { return *human_out; }

void write_text(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path);
  out << text;
}

int finish(const Options &o, const RunReport &r, bool list_failures = false) {
  if (list_failures)
    for (const auto &c : r.checks)
      for (const auto &f : c.failures)
        human() << "  " << f << '\n';
  if (!o.json_path.empty())
    write_text(o.json_path, r.to_json().dump(2) + "\n");
  human() << (r.passed() ? "result: pass" : "result: FAIL") << '\n';
  return r.passed() ? exit_pass : exit_fail;
}

void emit_dot(const Options &o, const std::string &graph,
              const std::vector<std::string> &labels,
              const std::vector<std::pair<std::size_t, std::size_t>> &covers) {
  write_text(o.dot_path, to_dot(graph, labels, covers));
}

int cmd_fixtures(const Options &o, Tolerance tol) {
  const FixtureSet f = parse_spin(o.spin) == Spin::half ? spin_half_fixtures(tol)
                                                        : spin_one_fixtures(tol);
  Json j = Json::object();
  for (const auto &name : f.names)
    j[name] = subspace_to_json(f[name]);
  const Json doc = {{"n", f.n}, {"names", f.names}, {"fixtures", j}};
  if (!o.json_path.empty())
    write_text(o.json_path, doc.dump(2) + "\n");
  else
    std::cout << doc.dump(2) << '\n';
  return exit_pass;
}

int cmd_check_axioms(const Options &o, Tolerance tol) {
  const FiniteQuantale q = quantale_from_json(load_json(o.file));
  validate_tables(q);
  LawReport laws;
  laws.merge(check_complete_lattice(q), "lattice.");
  if (laws.passed()) {
    laws.merge(check_axioms(q));
    if (q.opens)
      laws.merge(check_continuity(q), "continuity.");
  }
  human() << laws;
  return finish(o, report_from_laws("check-axioms " + o.file, tol, laws,
                                    {{"size", q.size()}}));
}

int cmd_topology(const Options &o, Tolerance tol) {
  const FiniteSpace x = space_from_json(load_json(o.file));
  const SpecializationOrder so = specialization_order(x);
  human() << "specialization order:\n";
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b)
      if (a != b && so.leq(a, b))
        human() << "  " << x.points[a] << " <= " << x.points[b] << '\n';
  LawReport laws;
  if (o.check == "sober") {
    laws = check_sober(x);
  } else if (o.check == "distributive") {
    laws = check_distributive(topology_lattice(x));
  } else {
    const FiniteQuantale q = local_measurement_space(x);
    laws.merge(check_axioms(q));
    laws.merge(check_continuity(q), "continuity.");
    laws.merge(check_classical(q), "classical.");
  }
  human() << laws;
  if (o.dot) {
    const FiniteLattice l = topology_lattice(x);
    emit_dot(o, "opens", l.names(), cover_relation(l.order()));
  }
  Json spec = Json::array();
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b)
      if (a != b && so.leq(a, b))
        spec.push_back(x.points[a] + " <= " + x.points[b]);
  return finish(o, report_from_laws("topology " + o.file + " --check " + o.check, tol,
                                    laws, {{"specialization", spec}}));
}

int cmd_lattice(const Options &o, Tolerance tol) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  LawReport laws;
  Json data = Json::object();
  if (!o.spin.empty()) {
    const FixtureSet f = parse_spin(o.spin) == Spin::half ? spin_half_fixtures(tol)
                                                          : spin_one_fixtures(tol);
    labels = parse_spin(o.spin) == Spin::half
                 ? std::vector<std::string>{"x_down", "x_up", "x", "z_down", "z_up", "z", "0"}
                 : std::vector<std::string>{"x_minus", "x_zero", "x_plus", "x", "z_minus",
                                            "z_zero", "z_plus", "z", "0"};
    std::vector<Subspace> elems;
    for (const auto &n : labels)
      elems.push_back(f[n]);
    covers = hasse(elems, tol);
    const bool half = parse_spin(o.spin) == Spin::half;
    const auto w = half ? distributivity_witness(f["x"], f["z_down"], f["z_up"], tol)
                        : distributivity_witness(f["x"], f["z_minus"],
                                                 join(f["z_zero"], f["z_plus"], tol), tol);
    laws.note("distributive", w.distributive, {},
              "x ^ (z atoms joined): lhs dim " + std::to_string(w.lhs.dim()) +
                  ", rhs dim " + std::to_string(w.rhs.dim()));
  } else {
    const FiniteLattice l = lattice_from_json(load_json(o.file));
    for (std::size_t i = 0; i < l.size(); ++i)
      labels.push_back(l.name(i));
    covers = cover_relation(l.order());
    laws.merge(check_distributive(l));
    data["points"] = points_of_locale(l).size();
  }
  Json edges = Json::array();
  for (const auto &[lo, hi] : covers) {
    human() << labels[lo] << " < " << labels[hi] << '\n';
    edges.push_back(labels[lo] + " < " + labels[hi]);
  }
  data["covers"] = edges;
  human() << laws;
  if (o.dot)
    emit_dot(o, "lattice", labels, covers);
  return finish(o, report_from_laws("lattice", tol, laws, data));
}

int cmd_groupoid(const Options &o, Tolerance tol) {
  const FiniteGroupoid g = groupoid_from_json(load_json(o.file));
  LawReport laws;
  laws.merge(check_groupoid(g), "groupoid.");
  Json data = {{"objects", g.objects.size()}, {"arrows", g.arrows.size()}};
  if (laws.passed() && o.quantale) {
    FiniteQuantale q = groupoid_quantale(g);
    q.opens = upper_sets(q.leq);
    data["quantale_size"] = q.size();
    if (o.run_checks) {
      laws.merge(check_axioms(q), "quantale.");
      laws.merge(check_continuity(q), "continuity.");
      laws.merge(check_classical(q), "classical.");
      const LawReport local = check_local(q);
      laws.note("local", local.passed(), {},
                local.passed() ? "" : "product differs from meet or involution nontrivial");
    }
    if (o.dot)
      emit_dot(o, "O(G)", q.names, cover_relation(q.leq));
  }
  human() << laws;
  return finish(o, report_from_laws("groupoid " + o.file, tol, laws, data));
}

int cmd_observer(const Options &o, Tolerance tol) {
  const SpinSetup s = spin_setup(parse_spin(o.spin), tol);
  Json table = Json::object();
  human() << "r_z on O_x:\n";
  for (std::size_t i = 0; i < s.ox.elements().size(); ++i) {
    const std::string image = s.describe(s.rz.retraction(s.ox.elements()[i]), tol);
    human() << "  r_z(" << s.ox.names()[i] << ") = " << image << '\n';
    table[s.ox.names()[i]] = image;
  }
  human() << "r_z on O_z:\n";
  for (std::size_t i = 0; i < s.oz.elements().size(); ++i) {
    const std::string image = s.describe(s.rz.retraction(s.oz.elements()[i]), tol);
    human() << "  r_z(" << s.oz.names()[i] << ") = " << image << '\n';
    table[s.oz.names()[i]] = image;
  }
  LawReport laws;
  const std::vector<Subspace> samples =
      s.spin == Spin::half
          ? bounded_closure(s.fixtures.elements(), limits::closure_depth, s.fixtures.names, tol)
                .elements
          : join_involution_closure(s.fixtures.elements(), tol);
  laws.merge(check_observer_axioms(s.rz, samples), "observer.");
  laws.merge(approximation_map(s.rz, s.ox.elements()).report, "af.");
  human() << laws;
  return finish(o, report_from_laws("observer --spin " + spin_name(s.spin), tol, laws,
                                    {{"r_z", table}, {"samples", samples.size()}}));
}

int cmd_beta(const Options &o, Tolerance tol) {
  const SpinSetup s = spin_setup(parse_spin(o.spin), tol);
  const OpensMap f = o.identity ? identity_opens_map(s.oz) : restrict_to_opens(s.rz, s.ox, s.oz);
  const BasisChangeMap b = beta(f);
  Json table = Json::object();
  for (std::size_t x = 0; x < b.source.size(); ++x) {
    const std::string v = detail::set_names(b.assignment[x], f.from.points);
    human() << "beta(|" << b.source.points[x] << ">) = " << v << '\n';
    table[b.source.points[x]] = v;
  }
  human() << b.report;
  return finish(o, report_from_laws(std::string("beta --spin ") + spin_name(s.spin) +
                                        (o.identity ? " --identity" : ""),
                                    tol, b.report, {{"beta", table}}));
}

int cmd_report(const Options &o, Tolerance tol) {
  const RunReport r = run_report(tol, true, "report");
  for (const auto &c : r.checks)
    human() << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
  return finish(o, r, true);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"mslab: finite measurement spaces, quantales and observers"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--eps", o.eps, "rank tolerance")->check(CLI::PositiveNumber);
  app.add_option("--json", o.json_path, "write the run report as JSON");
  auto *dot = app.add_option("--dot", o.dot_path, "write a DOT Hasse diagram (stdout if no path)")
                  ->expected(0, 1);

  auto *fixtures = app.add_subcommand("fixtures", "dump the spin fixtures as JSON");
  auto *check_axioms_cmd = app.add_subcommand("check-axioms", "check a quantale document");
  auto *topology = app.add_subcommand("topology", "check a finite space document");
  auto *lattice = app.add_subcommand("lattice", "covers of a lattice or the spin fragment");
  auto *groupoid = app.add_subcommand("groupoid", "check a groupoid document");
  auto *observer = app.add_subcommand("observer", "diagonal observer r_z");
  auto *beta_cmd = app.add_subcommand("beta", "change-of-basis map");
  auto *report = app.add_subcommand("report", "run the acceptance suite");

  for (auto *sub : {fixtures, observer, beta_cmd})
    sub->add_option("--spin", o.spin, "half or one")
        ->required()
        ->check(CLI::IsMember({"half", "one"}));
  lattice->add_option("--spin", o.spin, "half or one")->check(CLI::IsMember({"half", "one"}));
  check_axioms_cmd->add_option("file", o.file, "quantale JSON")->required();
  topology->add_option("file", o.file, "space JSON")->required();
  topology->add_option("--check", o.check, "sober, distributive or classical")
      ->required()
      ->check(CLI::IsMember({"sober", "distributive", "classical"}));
  auto *lattice_file = lattice->add_option("file", o.file, "lattice JSON");
  lattice_file->excludes(lattice->get_option("--spin"));
  groupoid->add_option("file", o.file, "groupoid JSON")->required();
  groupoid->add_flag("--quantale", o.quantale, "build the groupoid quantale O(G)");
  groupoid->add_flag("--check", o.run_checks, "check axioms, continuity and classicality of O(G)");
  beta_cmd->add_flag("--identity", o.identity, "use the identity map on O_z");
  // Global flags are also accepted after the subcommand.
  for (auto *sub : {fixtures, check_axioms_cmd, topology, lattice, groupoid, observer, beta_cmd, report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return exit_usage;
  }
  o.dot = dot->count() > 0;
  if (o.dot && (o.dot_path.empty() || o.dot_path == "-"))
    human_out = &std::cerr;
  if (lattice->parsed() && o.spin.empty() && o.file.empty()) {
    std::cerr << "lattice: give a file or --spin\n";
    return exit_usage;
  }

  try {
    const Tolerance tol(o.eps);
    if (fixtures->parsed())
      return cmd_fixtures(o, tol);
    if (check_axioms_cmd->parsed())
      return cmd_check_axioms(o, tol);
    if (topology->parsed())
      return cmd_topology(o, tol);
    if (lattice->parsed())
      return cmd_lattice(o, tol);
    if (groupoid->parsed())
      return cmd_groupoid(o, tol);
    if (observer->parsed())
      return cmd_observer(o, tol);
    if (beta_cmd->parsed())
      return cmd_beta(o, tol);
    return cmd_report(o, tol);
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_fail;
  }
}

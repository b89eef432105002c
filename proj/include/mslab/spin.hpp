#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/maxa.hpp"
#include "mslab/observer.hpp"
#include "mslab/topology.hpp"

namespace mslab {

enum class Spin { half, one };

inline Spin parse_spin(const std::string &s) {
  if (s == "half" || s == "1/2")
    return Spin::half;
  if (s == "one" || s == "1")
    return Spin::one;
  throw Error("unknown spin '" + s + "' (expected half or one)");
}

inline std::string spin_name(Spin s) { return s == Spin::half ? "half" : "one"; }

/// Fixtures plus the z and x locales (atoms ordered down/-, 0, up/+) and
/// the diagonal observer r_z.
struct SpinSetup {
  Spin spin;
  FixtureSet fixtures;
  AtomicLocale oz;
  AtomicLocale ox;
  ObserverContext<MaxAlgebra> rz;

  /// Fixture name of p, or a description by dimension.
  std::string describe(const Subspace &p, Tolerance tol = {}) const {
    if (auto i = oz.locate(p))
      return oz.names()[*i];
    for (const auto &name : fixtures.names)
      if (equal(fixtures[name], p, tol))
        return name;
    return "<dim " + std::to_string(p.dim()) + ">";
  }
};

inline SpinSetup spin_setup(Spin spin, Tolerance tol = {}) {
  if (spin == Spin::half) {
    FixtureSet f = spin_half_fixtures(tol);
    AtomicLocale oz({"down", "up"}, {f["z_down"], f["z_up"]},
                    {{0, "0"}, {1, "z_down"}, {2, "z_up"}, {3, "z"}}, tol);
    AtomicLocale ox({"down", "up"}, {f["x_down"], f["x_up"]},
                    {{0, "0"}, {1, "x_down"}, {2, "x_up"}, {3, "x"}}, tol);
    auto rz = observer_from_expectation(diag_expectation(2), oz.elements(),
                                        oz.names(), tol);
    return {spin, std::move(f), std::move(oz), std::move(ox), std::move(rz)};
  }
  FixtureSet f = spin_one_fixtures(tol);
  const std::map<std::size_t, std::string> znames{
      {0, "0"},       {1, "z_minus"},          {2, "z_zero"},
      {3, "z_minus v z_zero"}, {4, "z_plus"},  {5, "z_minus v z_plus"},
      {6, "z_zero v z_plus"},  {7, "z"}};
  const std::map<std::size_t, std::string> xnames{
      {0, "0"},       {1, "x_minus"},          {2, "x_zero"},
      {3, "x_minus v x_zero"}, {4, "x_plus"},  {5, "x_minus v x_plus"},
      {6, "x_zero v x_plus"},  {7, "x"}};
  AtomicLocale oz({"-", "0", "+"}, {f["z_minus"], f["z_zero"], f["z_plus"]},
                  znames, tol);
  AtomicLocale ox({"-", "0", "+"}, {f["x_minus"], f["x_zero"], f["x_plus"]},
                  xnames, tol);
  auto rz = observer_from_expectation(diag_expectation(3), oz.elements(),
                                      oz.names(), tol);
  return {spin, std::move(f), std::move(oz), std::move(ox), std::move(rz)};
}

/// Identity opens map on the discrete space of a locale.
inline OpensMap identity_opens_map(const AtomicLocale &l) {
  OpensMap f{l.space(), l.space(), {}};
  f.image = f.from.opens;
  return f;
}

/// Three-point space of the spin-1/2 z measurements: opens are the upper
/// sets of z_down, z_up < z.
inline FiniteSpace z_space() {
  return make_space({"z_down", "z_up", "z"},
                    {point_set(3, {}), point_set(3, {2}), point_set(3, {0, 2}),
                     point_set(3, {1, 2}), point_set(3, {0, 1, 2})});
}

} // namespace mslab

#pragma once

// Parametric builders for the worked scenarios: each bundles the classical
// distribution, the tripartite state it is measured from, the measurement
// frame that connects the two, and a zero-certificate channel where one is
// known.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcka/channel.hpp"
#include "qcka/distribution.hpp"
#include "qcka/errors.hpp"
#include "qcka/qstate.hpp"

namespace qcka {

struct MeasurementFrame {
  LocalBasis alice;
  LocalBasis bob;
  EveMeasurementSet eve;
};

struct KnownFact {
  std::string tag;
  double value = 0.0;
  std::string note;
};

struct Scenario {
  std::string name;
  std::map<std::string, double> params;
  std::optional<JointDistribution> distribution;
  std::optional<PureState> state;
  std::optional<MeasurementFrame> standard_bases;
  // Alternative named frames (e.g. Eve's rotated basis); "standard" mirrors standard_bases.
  std::map<std::string, MeasurementFrame> frames;
  std::optional<Channel> certificate;
  bool certificate_valid = false;
  std::string certificate_region;
  std::vector<KnownFact> known_facts;

  const KnownFact* fact(const std::string& tag) const {
    for (const auto& f : known_facts)
      if (f.tag == tag) return &f;
    return nullptr;
  }
};

namespace detail {

inline MeasurementFrame standard_frame(std::size_t dA, std::size_t dB, std::size_t dE) {
  return {LocalBasis::standard(dA), LocalBasis::standard(dB), EveMeasurementSet::standard(dE)};
}

inline void attach_standard_frame(Scenario& s) {
  const auto& psi = *s.state;
  s.standard_bases = standard_frame(psi.dA(), psi.dB(), psi.dE());
  s.frames.insert_or_assign("standard", *s.standard_bases);
}

inline std::vector<std::string> numbered_labels(std::size_t n, std::size_t first) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::to_string(first + i));
  return v;
}

}  // namespace detail

inline double example1_delta(double D) { return 0.5 + std::sqrt(D * (1.0 - D)); }

inline const double kExample1Threshold = 1.0 - 1.0 / std::sqrt(2.0);

/// Eve's channel for the disturbance-D scenario: flip Z2 with probability
/// eps, then send [0,0] -> u, [0,1] -> v and [1,*] -> u or v uniformly.
/// eps lowers Eve's effective guessing probability to the value where the
/// u- and v-slices factorize; below the threshold no eps >= 0 achieves that
/// and the plain merge (eps = 0) is returned.
inline Channel example1_certificate(double D) {
  const double delta = example1_delta(D);
  const double ratio = D / (1.0 - D);
  double eps = 0.0;
  if (ratio <= 1.0 && delta > 0.5) {
    const double target = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - ratio * ratio)));
    if (target < delta) eps = (delta - target) / (2.0 * delta - 1.0);
  }
  return Channel(4, 2, {1.0 - eps, eps, eps, 1.0 - eps, 0.5, 0.5, 0.5, 0.5});
}

/// Four-state protocol after optimal incoherent eavesdropping, disturbance D.
/// Eve's probe states live in C^4 with xi_ii and xi_ij in orthogonal planes;
/// within each plane they are placed so that Eve's standard basis yields
/// Z = [Z1, Z2] with Z1 = X xor Y and P[Z2 = Y] = delta = 1/2 + sqrt(D(1-D)).
/// Z is flattened as 2*Z1 + Z2.
inline Scenario example1(double D) {
  if (!(D >= 0.0 && D <= 0.5)) throw ValidationError("example1: D must lie in [0, 1/2]");
  const double F = 1.0 - D;
  const double delta = example1_delta(D);
  const double sd = std::sqrt(delta), sn = std::sqrt(1.0 - delta);
  // xi_00 = (sd, sn, 0, 0), xi_11 = (sn, sd, 0, 0), xi_01 = (0, 0, sn, sd), xi_10 = (0, 0, sd, sn)
  const double xi[2][2][4] = {{{sd, sn, 0, 0}, {0, 0, sn, sd}}, {{0, 0, sd, sn}, {sn, sd, 0, 0}}};
  std::vector<cplx> amp(16);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const double w = std::sqrt((a == b ? F : D) / 2.0);
      for (std::size_t e = 0; e < 4; ++e) amp[(a * 2 + b) * 4 + e] = w * xi[a][b][e];
    }

  std::map<Cell, double> m;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const double pxy = (x == y ? F : D) / 2.0;
      const std::size_t z1 = x ^ y;
      m[{x, y, 2 * z1 + y}] += pxy * delta;
      m[{x, y, 2 * z1 + (1 - y)}] += pxy * (1.0 - delta);
    }

  Scenario s;
  s.name = "example1";
  s.params = {{"D", D}};
  s.state = PureState::from_unnormalized(2, 2, 4, std::move(amp));
  s.distribution = JointDistribution::from_weights(2, 2, 4, std::move(m), {{"0", "1"}, {"0", "1"}, {"[0,0]", "[0,1]", "[1,0]", "[1,1]"}});
  detail::attach_standard_frame(s);
  s.certificate = example1_certificate(D);
  s.certificate_valid = D >= kExample1Threshold;
  s.certificate_region = "D >= 1 - 1/sqrt(2)";
  s.known_facts = {{"delta", delta, "P[Z2 = Y]"},
                   {"separability_threshold", kExample1Threshold, "PPT iff D >= threshold"},
                   {"separable", D >= kExample1Threshold ? 1.0 : 0.0, ""}};
  return s;
}

/// Bound entangled 3x3 state with its seven-symbol Eve register.
/// Symbols 1..3 of the tables are indices 0..2 here.
inline Scenario example2_horodecki(double a) {
  if (!(a > 0.0 && a < 1.0)) throw ValidationError("example2: a must lie in (0, 1)");
  const double n = 8.0 * a + 1.0;
  std::vector<cplx> amp(3 * 3 * 7);
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) -> cplx& { return amp[((x - 1) * 3 + (y - 1)) * 7 + z]; };
  for (std::size_t i = 1; i <= 3; ++i) at(i, i, 0) = std::sqrt(3.0 * a / n) / std::sqrt(3.0);
  at(3, 1, 1) = std::sqrt(1.0 / n) * std::sqrt((1.0 + a) / 2.0);
  at(3, 3, 1) = std::sqrt(1.0 / n) * std::sqrt((1.0 - a) / 2.0);
  for (auto [x, y, z] : {Cell{1, 2, 2}, Cell{1, 3, 3}, Cell{2, 1, 4}, Cell{2, 3, 5}, Cell{3, 2, 6}}) at(x, y, z) = std::sqrt(a / n);

  const double d = 16.0 * a + 2.0;
  std::map<Cell, double> m;
  for (auto [x, y, z] : {Cell{1, 1, 0}, Cell{2, 2, 0}, Cell{3, 3, 0}, Cell{1, 2, 2}, Cell{1, 3, 3}, Cell{2, 1, 4},
                         Cell{2, 3, 5}, Cell{3, 2, 6}})
    m[{x - 1, y - 1, z}] = 2.0 * a / d;
  m[{2, 0, 1}] = (1.0 + a) / d;
  m[{2, 2, 1}] = (1.0 - a) / d;

  Scenario s;
  s.name = "example2";
  s.params = {{"a", a}};
  s.state = PureState::from_unnormalized(3, 3, 7, std::move(amp));
  s.distribution = JointDistribution::from_weights(3, 3, 7, std::move(m),
                                                   {detail::numbered_labels(3, 1), detail::numbered_labels(3, 1), detail::numbered_labels(7, 0)});
  detail::attach_standard_frame(s);
  s.known_facts = {{"ppt", 1.0, "PPT for every a in (0,1)"}, {"entangled", 1.0, "bound entangled"}};
  return s;
}

/// Mixing channel: Zbar = {mix, 1..6}; Z = 0 always goes to mix, Z = k goes
/// to mix with probability 2/alpha (k = 1..3) or 2/(5 - alpha) (k = 4..6) and
/// otherwise stays k. The mix slice is then uniform over all nine (x, y)
/// cells. Probabilities above 1 are clamped, so outside alpha in [2, 3] the
/// channel is still defined but no longer a certificate.
inline Channel example3_certificate(double alpha) {
  const double to_mix_a = std::min(1.0, 2.0 / alpha);
  const double to_mix_b = std::min(1.0, 2.0 / (5.0 - alpha));
  std::vector<double> w(7 * 7, 0.0);
  w[0] = 1.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    const double t = k <= 3 ? to_mix_a : to_mix_b;
    w[k * 7 + 0] = t;
    w[k * 7 + k] = 1.0 - t;
  }
  return Channel(7, 7, std::move(w));
}

/// The family that is separable on [2,3], bound entangled on (3,4] and free
/// entangled on (4,5].
inline Scenario example3_alpha(double alpha) {
  if (!(alpha >= 2.0 && alpha <= 5.0)) throw ValidationError("example3: alpha must lie in [2, 5]");
  const Cell diag[] = {{1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
  const Cell heavy[] = {{1, 2, 1}, {2, 3, 2}, {3, 1, 3}};  // weight alpha
  const Cell light[] = {{2, 1, 4}, {3, 2, 5}, {1, 3, 6}};  // weight 5 - alpha
  std::vector<cplx> amp(63);
  std::map<Cell, double> m;
  auto put = [&](Cell c, double weight) {
    amp[((c[0] - 1) * 3 + (c[1] - 1)) * 7 + c[2]] = std::sqrt(weight / 21.0);
    if (weight != 0.0) m[{c[0] - 1, c[1] - 1, c[2]}] = weight / 21.0;
  };
  for (auto c : diag) put(c, 2.0);
  for (auto c : heavy) put(c, alpha);
  for (auto c : light) put(c, 5.0 - alpha);

  Scenario s;
  s.name = "example3";
  s.params = {{"alpha", alpha}};
  s.state = PureState::from_unnormalized(3, 3, 7, std::move(amp));
  s.distribution = JointDistribution::from_weights(3, 3, 7, std::move(m),
                                                   {detail::numbered_labels(3, 1), detail::numbered_labels(3, 1), detail::numbered_labels(7, 0)});
  detail::attach_standard_frame(s);
  s.certificate = example3_certificate(alpha);
  s.certificate_valid = alpha <= 3.0;
  s.certificate_region = "2 <= alpha <= 3";
  const double cls = alpha <= 3.0 ? 0.0 : (alpha <= 4.0 ? 1.0 : 2.0);
  s.known_facts = {{"class", cls, "0 separable, 1 bound entangled, 2 free entangled"}};
  return s;
}

/// Eve's channel for the Werner scenario: 0, 2, 3 fixed; 1 and 4 merged into
/// 0 with probability xi = 2 lambda / (1 - lambda), clamped to 1.
inline Channel werner_certificate(double lambda) {
  const double xi = lambda < 1.0 ? std::min(1.0, 2.0 * lambda / (1.0 - lambda)) : 1.0;
  std::vector<double> w(25, 0.0);
  w[0 * 5 + 0] = 1.0;
  w[2 * 5 + 2] = 1.0;
  w[3 * 5 + 3] = 1.0;
  w[1 * 5 + 0] = xi;
  w[1 * 5 + 1] = 1.0 - xi;
  w[4 * 5 + 0] = xi;
  w[4 * 5 + 4] = 1.0 - xi;
  return Channel(5, 5, std::move(w));
}

/// lambda * singlet + (1 - lambda)/4 * identity, purified with a
/// five-dimensional Eve register.
inline Scenario example4_werner(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("werner: lambda must lie in [0, 1]");
  std::vector<cplx> amp(20);
  auto at = [&](std::size_t a, std::size_t b, std::size_t e) -> cplx& { return amp[(a * 2 + b) * 5 + e]; };
  at(1, 0, 0) = std::sqrt(lambda / 2.0);
  at(0, 1, 0) = -std::sqrt(lambda / 2.0);
  const double r = std::sqrt((1.0 - lambda) / 4.0);
  at(0, 0, 1) = r;
  at(0, 1, 2) = r;
  at(1, 0, 3) = r;
  at(1, 1, 4) = r;

  std::map<Cell, double> m{{{0, 1, 0}, lambda / 2.0},       {{1, 0, 0}, lambda / 2.0},       {{0, 0, 1}, (1.0 - lambda) / 4.0},
                           {{0, 1, 2}, (1.0 - lambda) / 4.0}, {{1, 0, 3}, (1.0 - lambda) / 4.0}, {{1, 1, 4}, (1.0 - lambda) / 4.0}};

  Scenario s;
  s.name = "werner";
  s.params = {{"lambda", lambda}};
  s.state = PureState::from_unnormalized(2, 2, 5, std::move(amp));
  s.distribution = JointDistribution::from_weights(2, 2, 5, std::move(m));
  detail::attach_standard_frame(s);
  s.certificate = werner_certificate(lambda);
  s.certificate_valid = lambda <= 1.0 / 3.0;
  s.certificate_region = "lambda <= 1/3";
  s.known_facts = {{"separable", lambda <= 1.0 / 3.0 ? 1.0 : 0.0, "separable iff lambda <= 1/3"}};
  return s;
}

/// Closed-form PPT condition value for the erasure scenario; the canonical
/// purification is PPT iff this is >= 1.
inline double example5_condition(double alpha, double delta_x, double delta_y) {
  const double c = (1.0 - delta_x) * (1.0 - delta_y);
  return (alpha - alpha * alpha) * (c / delta_x + 2.0) * (c / delta_y + 2.0);
}

inline Scenario example5_erasure(double alpha, double delta_x, double delta_y) {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(alpha) || !open_unit(delta_x) || !open_unit(delta_y))
    throw ValidationError("example5: alpha, deltaX and deltaY must lie in (0, 1)");
  Scenario s;
  s.name = "example5";
  s.params = {{"alpha", alpha}, {"deltaX", delta_x}, {"deltaY", delta_y}};
  s.distribution = erasure_scenario(alpha, delta_x, delta_y);
  s.state = canonical_purification(*s.distribution);
  detail::attach_standard_frame(s);
  const double cond = example5_condition(alpha, delta_x, delta_y);
  s.known_facts = {{"ppt_condition", cond, "PPT iff value >= 1"}, {"ppt", cond >= 1.0 ? 1.0 : 0.0, ""}};
  return s;
}

inline const double kExample6Lambda = (5.0 + std::sqrt(5.0)) / 10.0;
inline const double kExample6Eta = 1.0 / std::sqrt(5.0);

// |+m> and |-m>: sqrt((1 +- eta)/2)|0> +- sqrt((1 -+ eta)/2)|1>.
inline CVector example6_m(int sign) {
  CVector v(2);
  v(0) = std::sqrt((1.0 + sign * kExample6Eta) / 2.0);
  v(1) = sign * std::sqrt((1.0 - sign * kExample6Eta) / 2.0);
  return v;
}

/// Eve's basis in which the conditional states are |m,m> and |-m,-m>.
inline LocalBasis example6_rotated_eve_basis() {
  const double L = kExample6Lambda;
  CMatrix b(2, 2);
  b << std::sqrt(L), -std::sqrt(1.0 - L),
       1.0 / std::sqrt(5.0 * L), 1.0 / std::sqrt(5.0 * (1.0 - L));
  return LocalBasis(b);
}

/// sqrt(L)|m,m>|0~> + sqrt(1-L)|-m,-m>|1~>, built from the rotated-form parameters only.
inline PureState example6_rotated_form() {
  const LocalBasis eve = example6_rotated_eve_basis();
  const CVector mp = example6_m(+1), mm = example6_m(-1);
  std::vector<cplx> amp(8);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t e = 0; e < 2; ++e) {
        const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b), ie = static_cast<Eigen::Index>(e);
        amp[(a * 2 + b) * 2 + e] = std::sqrt(kExample6Lambda) * mp(ia) * mp(ib) * eve.matrix()(ie, 0) +
                                   std::sqrt(1.0 - kExample6Lambda) * mm(ia) * mm(ib) * eve.matrix()(ie, 1);
      }
  return PureState::from_unnormalized(2, 2, 2, std::move(amp));
}

/// Separable two-qubit state where Eve's standard basis is a poor choice.
inline Scenario example6() {
  std::vector<cplx> amp(8);
  const double r = 1.0 / std::sqrt(5.0);
  amp[(0 * 2 + 0) * 2 + 0] = r;
  amp[(0 * 2 + 1) * 2 + 0] = r;
  amp[(1 * 2 + 0) * 2 + 0] = r;
  amp[(0 * 2 + 0) * 2 + 1] = r;
  amp[(1 * 2 + 1) * 2 + 1] = r;

  Scenario s;
  s.name = "example6";
  s.state = PureState::from_unnormalized(2, 2, 2, std::move(amp));
  s.distribution = JointDistribution::from_weights(
      2, 2, 2, {{{0, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}, {{1, 0, 0}, 1.0}, {{0, 0, 1}, 1.0}, {{1, 1, 1}, 1.0}});
  detail::attach_standard_frame(s);
  s.frames.insert_or_assign("rotated", MeasurementFrame{LocalBasis::standard(2), LocalBasis::standard(2),
                                                        EveMeasurementSet::from_basis(example6_rotated_eve_basis())});
  s.known_facts = {{"separable", 1.0, "rho^t = rho"}, {"Lambda", kExample6Lambda, ""}, {"eta", kExample6Eta, ""}};
  return s;
}

/// The (X=1, Y=1, Z=0) cell of the bad-basis table. It is printed once as
/// 0.03928; 0.3928 is the reading under which X and Y are independent.
inline constexpr double kExample7Cell110 = 0.3928;
inline constexpr double kExample7Cell110Misprint = 0.03928;

inline std::map<Cell, double> example7_table(double cell110 = kExample7Cell110) {
  return {{{0, 0, 0}, 0.0082}, {{0, 0, 1}, 0.0006}, {{1, 0, 0}, 0.0219}, {{1, 0, 1}, 0.0202},
          {{0, 1, 0}, 0.0729}, {{0, 1, 1}, 0.0905}, {{1, 1, 0}, cell110}, {{1, 1, 1}, 0.3889204545}};
}

/// Entangled state whose standard-basis distribution has I(X;Y) = 0.
inline Scenario example7(double cell110 = kExample7Cell110) {
  Scenario s;
  s.name = "example7";
  s.distribution = JointDistribution::from_weights(2, 2, 2, example7_table(cell110));
  s.state = canonical_purification(*s.distribution);
  detail::attach_standard_frame(s);
  s.known_facts = {{"entangled", 1.0, "NPT canonical purification"}};
  return s;
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"example1", "example2", "example3", "werner", "example5", "example6", "example7"};
  return names;
}

/// Builds a catalog scenario by name from named parameters.
inline Scenario make_scenario(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) throw ValidationError("scenario " + name + " requires parameter '" + key + "'");
    return it->second;
  };
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw ValidationError("scenario " + name + " does not take parameter '" + k + "'");
    }
  };
  if (name == "example1") {
    allow({"D"});
    return example1(get("D"));
  }
  if (name == "example2") {
    allow({"a"});
    return example2_horodecki(get("a"));
  }
  if (name == "example3") {
    allow({"alpha"});
    return example3_alpha(get("alpha"));
  }
  if (name == "werner" || name == "example4") {
    allow({"lambda"});
    return example4_werner(get("lambda"));
  }
  if (name == "example5") {
    allow({"alpha", "deltaX", "deltaY"});
    return example5_erasure(get("alpha"), get("deltaX"), get("deltaY"));
  }
  if (name == "example6") {
    allow({});
    return example6();
  }
  if (name == "example7") {
    allow({});
    return example7();
  }
  throw ValidationError("unknown scenario '" + name + "'");
}

}  // namespace qcka

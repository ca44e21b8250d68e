#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gqam/means.hpp"
#include "gqam/pwl.hpp"

namespace gqam {

enum class Relation { kLessEq, kGreaterEq, kEqual, kIncomparable };
std::string_view to_string(Relation r);

// f = alpha*g + beta with alpha > 0.
struct AffineRelation {
  Rational alpha;
  Rational beta;

  friend bool operator==(const AffineRelation&, const AffineRelation&) = default;
};

enum class ViolatedDirection { kFLeG, kGLeF };

// Triple x < t < y with t in C_f and C_g whose difference ratios
// r_h = (h(y)-h(t))/(h(y)-h(x)) violate the comparison condition in the
// flagged direction.
struct WitnessTriple {
  Rational x;
  Rational t;
  Rational y;
  ViolatedDirection direction;
  Rational ratio_f;
  Rational ratio_g;
};

struct CompareVerdict {
  Relation relation;
  // Convex bridge for the direction that holds: phi with phi(f(.)) <= g(.)
  // for LESS_EQ / EQUAL, the mirror phi with phi(g(.)) <= f(.) for GREATER_EQ.
  std::optional<ContinuousPwl> bridge;
  std::optional<AffineRelation> affine;          // EQUAL certificate
  std::optional<WitnessTriple> witness_f_le_g;   // violation of A_f <= A_g
  std::optional<WitnessTriple> witness_g_le_f;   // violation of A_g <= A_f
};

// Two-point weighted counterexample obtained from a witness triple:
// the means of (x, y) under weights (lambda, 1-lambda) straddle t.
struct Counterexample {
  PointVector points;
  WeightVector weights;
  Rational lambda;
  Rational mean_low;
  Rational mean_high;
  Rational separator;
  ViolatedDirection direction;
};

// Decides f = alpha*g + beta identically (alpha > 0): solved from two
// continuity points, then verified on every refined piece and node.
std::optional<AffineRelation> affine_relation(const MonotonePwl& f,
                                              const MonotonePwl& g);

// Decides the all-n comparability of the generated means.
CompareVerdict compare(const MonotonePwl& f, const MonotonePwl& g);

Counterexample witness_to_counterexample(const MonotonePwl& f,
                                         const MonotonePwl& g,
                                         const WitnessTriple& witness);

struct RatioTriple {
  Rational x;
  Rational t;
  Rational y;
};

struct FloorViolation {
  RatioTriple triple;
  int m;
  Rational floor_f;
  Rational floor_g;
};

struct FloorCheckResult {
  bool holds;
  long checked;
  std::optional<FloorViolation> first_violation;
};

// Necessary condition for A_f <= A_g at arity n:
// floor(m*r_f) <= floor(m*r_g) for all m in 1..n over the given triples.
FloorCheckResult floor_condition(const MonotonePwl& f, const MonotonePwl& g,
                                 int n, const std::vector<RatioTriple>& triples);

// Deterministic triple set over the common refinement: x, y range over
// breakpoints and piece midpoints, t over continuity candidates.
std::vector<RatioTriple> critical_triples(const MonotonePwl& f,
                                          const MonotonePwl& g);

struct ContinuityDiagnosis {
  Rational point;
  int n;
  bool lower_semicontinuous;
  bool upper_semicontinuous;
  // y < point with A[n](point,...,point,y) >= point, when lsc fails.
  std::optional<Rational> lower_witness;
  // y > point with A[n](point,...,point,y) <= point, when usc fails.
  std::optional<Rational> upper_witness;

  bool continuous() const {
    return lower_semicontinuous && upper_semicontinuous;
  }
};

// Decides one-sided semicontinuity at x through the exact piecewise solve of
// the n-variable mean conditions, producing a witness argument on failure.
ContinuityDiagnosis semicontinuity_probe(const MonotonePwl& f,
                                         const Rational& x, int n);

struct EnvelopeOrderWitness {
  PointVector x;
  Rational upper_mean;  // A_{f_+}(x)
  Rational lower_mean;  // A_{f_-}(x)
};

struct StrictnessWitness {
  PointVector x;        // non-diagonal
  Rational mean;
  bool equals_min;      // mean == min(x); otherwise mean == max(x)
};

struct MonotonicityWitness {
  PointVector x_low;
  PointVector x_high;   // one coordinate raised, same mean
  Rational mean;
};

struct KolmogorovProbe {
  int n;
  bool continuous_generator;
  bool envelope_dominance;   // A_{f_+} <= A_{f_-} everywhere
  std::optional<EnvelopeOrderWitness> envelope_witness;
  bool strict;               // min(x) < A(x) < max(x) off the diagonal
  std::optional<StrictnessWitness> strictness_witness;
  bool strictly_increasing;
  std::optional<MonotonicityWitness> monotonicity_witness;
  long grid_checked;
};

// Kolmogorov-condition diagnostics: envelope dominance, strictness and
// strict increasingness of the generated mean, with exact witnesses at the
// first jump when they fail. All three hold iff the generator is continuous.
KolmogorovProbe kolmogorov_probe(const MonotonePwl& f, int n);

// Report emission (all rationals canonical).
std::string verdict_to_text(const CompareVerdict& verdict,
                            const MonotonePwl& f, const MonotonePwl& g);
std::string verdict_to_json(const CompareVerdict& verdict,
                            const MonotonePwl& f, const MonotonePwl& g);
std::string diagnosis_to_text(const ContinuityDiagnosis& d);
std::string diagnosis_to_json(const ContinuityDiagnosis& d);
std::string probe_to_text(const KolmogorovProbe& p);
std::string probe_to_json(const KolmogorovProbe& p);

}  // namespace gqam

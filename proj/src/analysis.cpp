#include "gqam/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "gqam/errors.hpp"
#include "json.hpp"

namespace gqam {

namespace {

using nlohmann::ordered_json;

Rational ratio(const MonotonePwl& h, const Rational& x, const Rational& t,
               const Rational& y) {
  return (h.eval(y) - h.eval(t)) / (h.eval(y) - h.eval(x));
}

Rational pow2(int k) {
  Rational r(1);
  for (int i = 0; i < k; ++i) r *= Rational(2);
  return r;
}

const Segment& segment_left_of(const MonotonePwl& f, const Rational& b) {
  for (const Segment& s : f.segments()) {
    if (s.to == ExtendedRational(b)) return s;
  }
  throw BadParameters("no boundary at x=" + b.str());
}

const Segment& segment_right_of(const MonotonePwl& f, const Rational& b) {
  for (const Segment& s : f.segments()) {
    if (s.from == ExtendedRational(b)) return s;
  }
  throw BadParameters("no boundary at x=" + b.str());
}

// ---------------------------------------------------------------------------
// Common refinement of two functions on the same interval.

struct PointData {
  Rational x;
  Rational f_left, f_val, f_right;
  Rational g_left, g_val, g_right;

  bool f_jump() const { return f_left < f_right; }
  bool g_jump() const { return g_left < g_right; }
  bool both_continuous() const { return !f_jump() && !g_jump(); }
};

struct PieceData {
  ExtendedRational lo, hi;
  Rational f_slope, f_icept;  // f(t) = f_icept + f_slope * t on (lo, hi)
  Rational g_slope, g_icept;
  Rational sample;            // finite interior point

  Rational f_at(const Rational& t) const { return f_icept + f_slope * t; }
  Rational g_at(const Rational& t) const { return g_icept + g_slope * t; }
};

struct Refinement {
  std::vector<PointData> points;
  std::vector<PieceData> pieces;  // points.size() + 1
};

Rational interior_sample(const ExtendedRational& lo, const ExtendedRational& hi) {
  if (lo.is_finite() && hi.is_finite()) return midpoint(lo.finite(), hi.finite());
  if (lo.is_finite()) return lo.finite() + 1;
  if (hi.is_finite()) return hi.finite() - 1;
  return Rational(0);
}

Refinement refine(const MonotonePwl& f, const MonotonePwl& g) {
  std::vector<Rational> xs;
  auto add_boundaries = [&xs](const MonotonePwl& h) {
    for (const JumpNode& j : h.jump_nodes()) xs.push_back(j.x);
    for (const Knot& k : h.knots()) xs.push_back(k.x);
  };
  add_boundaries(f);
  add_boundaries(g);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  Refinement ref;
  for (const Rational& x : xs) {
    ref.points.push_back(PointData{x, f.left_limit(x), f.eval(x),
                                   f.right_limit(x), g.left_limit(x),
                                   g.eval(x), g.right_limit(x)});
  }
  for (std::size_t i = 0; i <= xs.size(); ++i) {
    const ExtendedRational lo =
        i == 0 ? f.interval().left() : ExtendedRational(xs[i - 1]);
    const ExtendedRational hi =
        i == xs.size() ? f.interval().right() : ExtendedRational(xs[i]);
    const Rational sample = interior_sample(lo, hi);
    const AffinePiece fa = f.affine_at(sample);
    const AffinePiece ga = g.affine_at(sample);
    ref.pieces.push_back(PieceData{lo, hi, fa.slope,
                                   fa.anchor_y - fa.slope * fa.anchor_x,
                                   ga.slope,
                                   ga.anchor_y - ga.slope * ga.anchor_x,
                                   sample});
  }
  return ref;
}

Refinement swapped(const Refinement& ref) {
  Refinement out = ref;
  for (PointData& p : out.points) {
    std::swap(p.f_left, p.g_left);
    std::swap(p.f_val, p.g_val);
    std::swap(p.f_right, p.g_right);
  }
  for (PieceData& p : out.pieces) {
    std::swap(p.f_slope, p.g_slope);
    std::swap(p.f_icept, p.g_icept);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratio test for condition "A_f <= A_g" over the finite critical set.
//
// The comparison condition is equivalent to
//   (f(t)-f(x))/(g(t)-g(x)) >= (f(y)-f(t))/(g(y)-g(t))
// for all x < t < y with t in C_f and C_g. Both sides are monotone Moebius
// functions of x resp. y on each refined piece, so their extrema sit at
// one-sided limits and node values at refinement points ("value slots") or
// degenerate into piece slope ratios ("slope slots": the same-piece
// configuration and the unbounded ends). After clearing the two positive
// denominators each slot pair yields a condition affine in t on the piece,
// so checking the piece ends decides it.

struct Slot {
  enum class Kind { kValue, kSlope };
  enum class Pos { kAtPoint, kLeftOf, kRightOf, kSamePiece, kMinusInf, kPlusInf };
  Kind kind;
  Pos pos;
  Rational a, b;   // (f, g) values, or (f, g) slopes for kSlope
  Rational point;  // defined for kAtPoint / kLeftOf / kRightOf
};

struct AffineForm {
  Rational c0, c1;  // c0 + c1 * t
  Rational at(const Rational& t) const { return c0 + c1 * t; }
};

// Cleared form of "rho(x-slot, t) >= rho(t, y-slot)" on a piece.
AffineForm cleared_condition(const PieceData& piece, const Slot& xs,
                             const Slot& ys) {
  // A(t) = f(t) - Fx, B(t) = Gy - g(t), C(t) = Fy - f(t), D(t) = g(t) - Gx.
  // Value/value: Q = A*B - C*D (the quadratic terms cancel).
  if (xs.kind == Slot::Kind::kValue && ys.kind == Slot::Kind::kValue) {
    const Rational a0 = piece.f_icept - xs.a;
    const Rational a1 = piece.f_slope;
    const Rational b0 = ys.b - piece.g_icept;
    const Rational b1 = -piece.g_slope;
    const Rational c0 = ys.a - piece.f_icept;
    const Rational c1 = -piece.f_slope;
    const Rational d0 = piece.g_icept - xs.b;
    const Rational d1 = piece.g_slope;
    return AffineForm{a0 * b0 - c0 * d0,
                      a0 * b1 + a1 * b0 - (c0 * d1 + c1 * d0)};
  }
  if (xs.kind == Slot::Kind::kSlope && ys.kind == Slot::Kind::kValue) {
    // Q = bf*B(t) - bg*C(t)
    return AffineForm{xs.a * (ys.b - piece.g_icept) - xs.b * (ys.a - piece.f_icept),
                      xs.a * (-piece.g_slope) - xs.b * (-piece.f_slope)};
  }
  if (xs.kind == Slot::Kind::kValue && ys.kind == Slot::Kind::kSlope) {
    // Q = A(t)*cg - cf*D(t)
    return AffineForm{(piece.f_icept - xs.a) * ys.b - ys.a * (piece.g_icept - xs.b),
                      piece.f_slope * ys.b - ys.a * piece.g_slope};
  }
  // Q = bf*cg - bg*cf, constant.
  return AffineForm{xs.a * ys.b - xs.b * ys.a, Rational(0)};
}

struct Failure {
  std::size_t piece;
  Slot xslot, yslot;
  enum class Where { kLowEnd, kHighEnd } where;
};

// Nonnegativity of an affine form on an open piece, reported with the
// violated end (the direction to walk when concretizing a witness).
std::optional<Failure::Where> affine_nonneg(const AffineForm& q,
                                            const PieceData& piece) {
  if (piece.lo.is_finite()) {
    if (q.at(piece.lo.finite()).is_negative()) return Failure::Where::kLowEnd;
  } else if (q.c1.is_positive()) {
    return Failure::Where::kLowEnd;
  }
  if (piece.hi.is_finite()) {
    if (q.at(piece.hi.finite()).is_negative()) return Failure::Where::kHighEnd;
  } else if (q.c1.is_negative()) {
    return Failure::Where::kHighEnd;
  }
  if (!piece.lo.is_finite() && !piece.hi.is_finite() &&
      q.at(Rational(0)).is_negative()) {
    return Failure::Where::kLowEnd;
  }
  return std::nullopt;
}

std::vector<Slot> x_slots(const Refinement& ref, std::size_t piece,
                          const OpenInterval& interval) {
  std::vector<Slot> slots;
  if (interval.left().is_finite()) {
    const Rational l = interval.left().finite();
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kRightOf,
                         ref.pieces[0].f_at(l), ref.pieces[0].g_at(l), l});
  } else {
    slots.push_back(Slot{Slot::Kind::kSlope, Slot::Pos::kMinusInf,
                         ref.pieces[0].f_slope, ref.pieces[0].g_slope, {}});
  }
  for (std::size_t j = 0; j < piece; ++j) {
    const PointData& p = ref.points[j];
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kLeftOf, p.f_left,
                         p.g_left, p.x});
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kAtPoint, p.f_val,
                         p.g_val, p.x});
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kRightOf, p.f_right,
                         p.g_right, p.x});
  }
  slots.push_back(Slot{Slot::Kind::kSlope, Slot::Pos::kSamePiece,
                       ref.pieces[piece].f_slope, ref.pieces[piece].g_slope,
                       {}});
  return slots;
}

std::vector<Slot> y_slots(const Refinement& ref, std::size_t piece,
                          const OpenInterval& interval) {
  std::vector<Slot> slots;
  slots.push_back(Slot{Slot::Kind::kSlope, Slot::Pos::kSamePiece,
                       ref.pieces[piece].f_slope, ref.pieces[piece].g_slope,
                       {}});
  for (std::size_t j = piece; j < ref.points.size(); ++j) {
    const PointData& p = ref.points[j];
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kLeftOf, p.f_left,
                         p.g_left, p.x});
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kAtPoint, p.f_val,
                         p.g_val, p.x});
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kRightOf, p.f_right,
                         p.g_right, p.x});
  }
  const std::size_t last = ref.pieces.size() - 1;
  if (interval.right().is_finite()) {
    const Rational r = interval.right().finite();
    slots.push_back(Slot{Slot::Kind::kValue, Slot::Pos::kLeftOf,
                         ref.pieces[last].f_at(r), ref.pieces[last].g_at(r), r});
  } else {
    slots.push_back(Slot{Slot::Kind::kSlope, Slot::Pos::kPlusInf,
                         ref.pieces[last].f_slope, ref.pieces[last].g_slope,
                         {}});
  }
  return slots;
}

std::optional<Failure> ratio_test(const Refinement& ref,
                                  const OpenInterval& interval) {
  for (std::size_t p = 0; p < ref.pieces.size(); ++p) {
    const std::vector<Slot> xs = x_slots(ref, p, interval);
    const std::vector<Slot> ys = y_slots(ref, p, interval);
    for (const Slot& sx : xs) {
      for (const Slot& sy : ys) {
        const AffineForm q = cleared_condition(ref.pieces[p], sx, sy);
        if (const auto where = affine_nonneg(q, ref.pieces[p])) {
          return Failure{p, sx, sy, *where};
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Witness concretization: walk the failing limit configuration into concrete
// points by halving offsets until the exact ratio violation re-verifies.

Rational prev_coordinate(const Refinement& ref, const OpenInterval& interval,
                         const Rational& point) {
  Rational best = point - 2;
  if (interval.left().is_finite() && interval.left().finite() > best) {
    best = interval.left().finite();
  }
  for (const PointData& p : ref.points) {
    if (p.x < point && p.x > best) best = p.x;
  }
  return best;
}

Rational next_coordinate(const Refinement& ref, const OpenInterval& interval,
                         const Rational& point) {
  Rational best = point + 2;
  if (interval.right().is_finite() && interval.right().finite() < best) {
    best = interval.right().finite();
  }
  for (const PointData& p : ref.points) {
    if (p.x > point && p.x < best) best = p.x;
  }
  return best;
}

Rational pick_t(const PieceData& piece, Failure::Where where, int k) {
  if (where == Failure::Where::kLowEnd) {
    if (piece.lo.is_finite()) {
      const Rational len = piece.hi.is_finite()
                               ? piece.hi.finite() - piece.lo.finite()
                               : Rational(2);
      return piece.lo.finite() + len / pow2(k);
    }
    return (piece.hi.is_finite() ? piece.hi.finite() : Rational(0)) - pow2(k);
  }
  if (piece.hi.is_finite()) {
    const Rational len = piece.lo.is_finite()
                             ? piece.hi.finite() - piece.lo.finite()
                             : Rational(2);
    return piece.hi.finite() - len / pow2(k);
  }
  return (piece.lo.is_finite() ? piece.lo.finite() : Rational(0)) + pow2(k);
}

Rational pick_x(const Slot& slot, const Refinement& ref,
                const OpenInterval& interval, const PieceData& piece,
                const Rational& t, int k) {
  switch (slot.pos) {
    case Slot::Pos::kAtPoint:
      return slot.point;
    case Slot::Pos::kLeftOf:
      return slot.point -
             (slot.point - prev_coordinate(ref, interval, slot.point)) / pow2(k);
    case Slot::Pos::kRightOf: {
      const Rational hi = min(next_coordinate(ref, interval, slot.point), t);
      return slot.point + (hi - slot.point) / pow2(k + 1);
    }
    case Slot::Pos::kSamePiece:
      return piece.lo.is_finite() ? midpoint(piece.lo.finite(), t) : t - 1;
    case Slot::Pos::kMinusInf: {
      const Rational base =
          ref.points.empty() ? t : min(ref.points.front().x, t);
      return base - pow2(k);
    }
    case Slot::Pos::kPlusInf:
      break;
  }
  throw Error("internal: bad x slot");
}

Rational pick_y(const Slot& slot, const Refinement& ref,
                const OpenInterval& interval, const PieceData& piece,
                const Rational& t, int k) {
  switch (slot.pos) {
    case Slot::Pos::kAtPoint:
      return slot.point;
    case Slot::Pos::kRightOf:
      return slot.point +
             (next_coordinate(ref, interval, slot.point) - slot.point) / pow2(k);
    case Slot::Pos::kLeftOf: {
      const Rational lo = max(prev_coordinate(ref, interval, slot.point), t);
      return slot.point - (slot.point - lo) / pow2(k + 1);
    }
    case Slot::Pos::kSamePiece:
      return piece.hi.is_finite() ? midpoint(t, piece.hi.finite()) : t + 1;
    case Slot::Pos::kPlusInf: {
      const Rational base = ref.points.empty() ? t : max(ref.points.back().x, t);
      return base + pow2(k);
    }
    case Slot::Pos::kMinusInf:
      break;
  }
  throw Error("internal: bad y slot");
}

// Concrete triple with r_a > r_b; (a, b) in test order.
RatioTriple concretize(const MonotonePwl& a, const MonotonePwl& b,
                       const Refinement& ref, const Failure& fail) {
  const PieceData& piece = ref.pieces[fail.piece];
  const OpenInterval& interval = a.interval();
  for (int k = 1; k <= 200; ++k) {
    const Rational t = pick_t(piece, fail.where, k);
    if (!(piece.lo < ExtendedRational(t) && ExtendedRational(t) < piece.hi)) {
      continue;
    }
    const Rational x = pick_x(fail.xslot, ref, interval, piece, t, k);
    const Rational y = pick_y(fail.yslot, ref, interval, piece, t, k);
    if (!(x < t && t < y)) continue;
    if (!interval.contains(x) || !interval.contains(y)) continue;
    if (ratio(b, x, t, y) < ratio(a, x, t, y)) return RatioTriple{x, t, y};
  }
  throw NotAWitness("internal: could not concretize a comparison violation");
}

bool same_jump_abscissas(const MonotonePwl& f, const MonotonePwl& g) {
  const auto& a = f.jump_nodes();
  const auto& b = g.jump_nodes();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].x == b[i].x)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Convex bridge: the curve t -> (f(t), g(t)) over continuity pieces, with
// chords across the (coinciding) jump gaps. Validated before release.

ContinuousPwl build_bridge(const MonotonePwl& f, const MonotonePwl& g,
                           const Refinement& ref) {
  std::vector<Rational> breaks;
  std::vector<AffinePiece> pieces;
  for (std::size_t p = 0; p < ref.pieces.size(); ++p) {
    const PieceData& piece = ref.pieces[p];
    const Rational u0 = piece.f_at(piece.sample);
    pieces.push_back(AffinePiece{piece.g_slope / piece.f_slope, u0,
                                 piece.g_at(piece.sample)});
    if (p < ref.points.size()) {
      const PointData& b = ref.points[p];
      if (b.f_jump()) {
        if (!b.g_jump()) {
          throw Error("internal: bridge over mismatched jump sets");
        }
        breaks.push_back(b.f_left);
        pieces.push_back(AffinePiece{
            (b.g_right - b.g_left) / (b.f_right - b.f_left), b.f_left,
            b.g_left});
        breaks.push_back(b.f_right);
      } else {
        breaks.push_back(b.f_left);
      }
    }
  }
  ContinuousPwl bridge(f.conv_range(), std::move(breaks), std::move(pieces));

  if (!bridge.is_convex() || !bridge.strictly_increasing()) {
    throw Error("internal: bridge failed the convexity check");
  }
  if (!(bridge.range() == g.conv_range())) {
    throw Error("internal: bridge range mismatch");
  }
  for (const PointData& p : ref.points) {
    const Rational v = bridge.eval(p.f_val);
    if (p.both_continuous() ? !(v == p.g_val) : v > p.g_val) {
      throw Error("internal: bridge support check failed at x=" + p.x.str());
    }
  }
  for (const PieceData& piece : ref.pieces) {
    if (!(bridge.eval(piece.f_at(piece.sample)) == piece.g_at(piece.sample))) {
      throw Error("internal: bridge misses the curve at t=" +
                  piece.sample.str());
    }
  }
  return bridge;
}

WitnessTriple make_witness(const MonotonePwl& f, const MonotonePwl& g,
                           const RatioTriple& triple, ViolatedDirection dir) {
  WitnessTriple w{triple.x, triple.t, triple.y, dir,
                  ratio(f, triple.x, triple.t, triple.y),
                  ratio(g, triple.x, triple.t, triple.y)};
  const bool ok = dir == ViolatedDirection::kFLeG ? w.ratio_g < w.ratio_f
                                                  : w.ratio_f < w.ratio_g;
  if (!ok) throw Error("internal: witness fails its own ratio check");
  return w;
}

void check_same_interval(const MonotonePwl& f, const MonotonePwl& g) {
  if (!(f.interval() == g.interval())) {
    throw DomainMismatch("intervals differ: " + f.interval().str() + " vs " +
                         g.interval().str());
  }
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::kLessEq: return "LESS_EQ";
    case Relation::kGreaterEq: return "GREATER_EQ";
    case Relation::kEqual: return "EQUAL";
    case Relation::kIncomparable: return "INCOMPARABLE";
  }
  return "?";
}

std::optional<AffineRelation> affine_relation(const MonotonePwl& f,
                                              const MonotonePwl& g) {
  check_same_interval(f, g);
  const Refinement ref = refine(f, g);

  const PieceData& first = ref.pieces.front();
  Rational t0 = first.sample;
  Rational t1 = ref.pieces.back().sample;
  if (t0 == t1) {
    t1 = first.hi.is_finite() ? midpoint(t0, first.hi.finite()) : t0 + 1;
  }
  const Rational dg = g.eval(t1) - g.eval(t0);
  const Rational alpha = (f.eval(t1) - f.eval(t0)) / dg;
  if (!alpha.is_positive()) return std::nullopt;
  const Rational beta = f.eval(t0) - alpha * g.eval(t0);

  for (const PieceData& p : ref.pieces) {
    if (!(p.f_slope == alpha * p.g_slope) ||
        !(p.f_icept == alpha * p.g_icept + beta)) {
      return std::nullopt;
    }
  }
  for (const PointData& p : ref.points) {
    if (!(p.f_left == alpha * p.g_left + beta) ||
        !(p.f_val == alpha * p.g_val + beta) ||
        !(p.f_right == alpha * p.g_right + beta)) {
      return std::nullopt;
    }
  }
  return AffineRelation{alpha, beta};
}

CompareVerdict compare(const MonotonePwl& f, const MonotonePwl& g) {
  check_same_interval(f, g);
  const Refinement fg = refine(f, g);
  const Refinement gf = swapped(fg);

  const std::optional<Failure> fail_fg = ratio_test(fg, f.interval());
  const std::optional<Failure> fail_gf = ratio_test(gf, f.interval());
  if (!same_jump_abscissas(f, g) && (!fail_fg || !fail_gf)) {
    throw Error("internal: differing jump sets must fail both directions");
  }

  CompareVerdict verdict;
  if (!fail_fg && !fail_gf) {
    verdict.relation = Relation::kEqual;
    verdict.affine = affine_relation(f, g);
    if (!verdict.affine) {
      throw Error("internal: equal verdict without an affine certificate");
    }
    verdict.bridge = build_bridge(f, g, fg);
    return verdict;
  }
  if (!fail_fg) {
    verdict.relation = Relation::kLessEq;
    verdict.bridge = build_bridge(f, g, fg);
    verdict.witness_g_le_f = make_witness(
        f, g, concretize(g, f, gf, *fail_gf), ViolatedDirection::kGLeF);
    return verdict;
  }
  if (!fail_gf) {
    verdict.relation = Relation::kGreaterEq;
    verdict.bridge = build_bridge(g, f, gf);
    verdict.witness_f_le_g = make_witness(
        f, g, concretize(f, g, fg, *fail_fg), ViolatedDirection::kFLeG);
    return verdict;
  }
  verdict.relation = Relation::kIncomparable;
  verdict.witness_f_le_g = make_witness(
      f, g, concretize(f, g, fg, *fail_fg), ViolatedDirection::kFLeG);
  verdict.witness_g_le_f = make_witness(
      f, g, concretize(g, f, gf, *fail_gf), ViolatedDirection::kGLeF);
  return verdict;
}

Counterexample witness_to_counterexample(const MonotonePwl& f,
                                         const MonotonePwl& g,
                                         const WitnessTriple& witness) {
  check_same_interval(f, g);
  const Rational &x = witness.x, &t = witness.t, &y = witness.y;
  if (!(x < t && t < y) || !f.interval().contains(x) ||
      !f.interval().contains(t) || !f.interval().contains(y)) {
    throw NotAWitness("triple is not ordered inside the interval");
  }
  if (!f.continuous_at(t) || !g.continuous_at(t)) {
    throw NotAWitness("separator t=" + t.str() +
                      " is not a common continuity point");
  }
  const Rational rf = ratio(f, x, t, y);
  const Rational rg = ratio(g, x, t, y);

  const bool f_side = witness.direction == ViolatedDirection::kFLeG;
  const Rational& r_low = f_side ? rg : rf;   // mean of this function sinks below t
  const Rational& r_high = f_side ? rf : rg;
  if (!(r_low < r_high)) {
    throw NotAWitness("ratios do not violate the claimed direction: r_f=" +
                      rf.str() + ", r_g=" + rg.str());
  }
  const Rational lambda = midpoint(r_low, r_high);
  const WeightVector weights(std::vector<Rational>{lambda, Rational(1) - lambda});
  const PointVector points{x, y};
  const Rational mean_low = weighted_quasi_mean(f_side ? g : f, points, weights);
  const Rational mean_high = weighted_quasi_mean(f_side ? f : g, points, weights);
  if (!(mean_low < t && t < mean_high)) {
    throw NotAWitness("internal: counterexample failed verification at t=" +
                      t.str());
  }
  return Counterexample{points,   weights, lambda,
                        mean_low, mean_high, t, witness.direction};
}

FloorCheckResult floor_condition(const MonotonePwl& f, const MonotonePwl& g,
                                 int n, const std::vector<RatioTriple>& triples) {
  check_same_interval(f, g);
  if (n < 2) throw BadParameters("floor condition needs n >= 2");
  FloorCheckResult result{true, 0, std::nullopt};
  for (const RatioTriple& triple : triples) {
    const Rational &x = triple.x, &t = triple.t, &y = triple.y;
    if (!(x < t && t < y)) {
      throw OutOfDomain("triple is not ordered: x=" + x.str() + ", t=" +
                        t.str() + ", y=" + y.str());
    }
    if (!f.continuous_at(t) || !g.continuous_at(t)) {
      throw OutOfDomain("t=" + t.str() + " is not a common continuity point");
    }
    const Rational rf = ratio(f, x, t, y);
    const Rational rg = ratio(g, x, t, y);
    for (int m = 1; m <= n; ++m) {
      const Rational ff = (Rational(m) * rf).floor();
      const Rational fg = (Rational(m) * rg).floor();
      ++result.checked;
      if (fg < ff) {
        result.holds = false;
        result.first_violation = FloorViolation{triple, m, ff, fg};
        return result;
      }
    }
  }
  return result;
}

std::vector<RatioTriple> critical_triples(const MonotonePwl& f,
                                          const MonotonePwl& g) {
  check_same_interval(f, g);
  const Refinement ref = refine(f, g);
  std::vector<Rational> ends;
  for (const PointData& p : ref.points) ends.push_back(p.x);
  for (const PieceData& p : ref.pieces) ends.push_back(p.sample);
  std::sort(ends.begin(), ends.end());

  std::vector<Rational> ts;
  for (const PieceData& p : ref.pieces) ts.push_back(p.sample);
  for (const PointData& p : ref.points) {
    if (p.both_continuous()) ts.push_back(p.x);
  }
  std::sort(ts.begin(), ts.end());

  std::vector<RatioTriple> triples;
  for (const Rational& t : ts) {
    for (const Rational& x : ends) {
      if (!(x < t)) continue;
      for (const Rational& y : ends) {
        if (t < y) triples.push_back(RatioTriple{x, t, y});
      }
    }
  }
  return triples;
}

ContinuityDiagnosis semicontinuity_probe(const MonotonePwl& f,
                                         const Rational& x, int n) {
  if (n < 2) throw BadParameters("semicontinuity probe needs n >= 2");
  const Rational fx = f.eval(x);
  const Rational l = f.left_limit(x);
  const Rational r = f.right_limit(x);
  const Rational count(n);
  const Rational head(n - 1);

  ContinuityDiagnosis d{x, n, fx == l, fx == r, std::nullopt, std::nullopt};
  if (!d.lower_semicontinuous) {
    // Mean condition A(x,..,x,y) < x solved for f(y): fails iff some y < x
    // reaches f(y) >= n f_-(x) - (n-1) f(x), a value strictly below f_-(x).
    const Rational bound = count * l - head * fx;
    const Segment& left = segment_left_of(f, x);
    Rational lo = bound;
    if (left.value_from.is_finite() && left.value_from.finite() > lo) {
      lo = left.value_from.finite();
    }
    d.lower_witness = left.abscissa_for(midpoint(lo, l));
  }
  if (!d.upper_semicontinuous) {
    const Rational bound = count * r - head * fx;
    const Segment& right = segment_right_of(f, x);
    Rational hi = bound;
    if (right.value_to.is_finite() && right.value_to.finite() < hi) {
      hi = right.value_to.finite();
    }
    d.upper_witness = right.abscissa_for(midpoint(r, hi));
  }
  return d;
}

KolmogorovProbe kolmogorov_probe(const MonotonePwl& f, int n) {
  if (n < 2) throw BadParameters("kolmogorov probe needs n >= 2");
  KolmogorovProbe p{n,    f.is_continuous(), f.is_continuous(), std::nullopt,
                    f.is_continuous(), std::nullopt, f.is_continuous(),
                    std::nullopt, 0};

  // Critical grid for the envelope comparison: two-level vectors over the
  // breakpoints and piece samples.
  std::vector<Rational> samples;
  for (const JumpNode& j : f.jump_nodes()) samples.push_back(j.x);
  for (const Knot& k : f.knots()) samples.push_back(k.x);
  for (const Segment& s : f.segments()) {
    samples.push_back(interior_sample(s.from, s.to));
  }
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  for (const Rational& u : samples) {
    for (const Rational& v : samples) {
      if (u == v) continue;
      for (int k = 1; k < n; ++k) {
        PointVector x(static_cast<std::size_t>(k), u);
        x.insert(x.end(), static_cast<std::size_t>(n - k), v);
        const auto [lower, upper] = envelope_means(f, x);
        ++p.grid_checked;
        if (upper > lower && !p.envelope_witness) {
          p.envelope_witness = EnvelopeOrderWitness{std::move(x), upper, lower};
        }
      }
    }
  }
  if (f.is_continuous()) {
    if (p.envelope_witness) {
      throw Error("internal: envelope violation for a continuous generator");
    }
    return p;
  }

  const JumpNode& jump = f.jump_nodes().front();
  const Rational &b = jump.x, &l = jump.left_limit, &r = jump.right_limit;
  const Rational head(n - 1);
  const Rational count(n);

  // (v): steer the last coordinate so the upper average stays inside the gap
  // while the lower average drops below it.
  {
    const Segment& left = segment_left_of(f, b);
    Rational lo = l - head * (r - l);
    if (left.value_from.is_finite() && left.value_from.finite() > lo) {
      lo = left.value_from.finite();
    }
    const Rational y = left.abscissa_for(midpoint(lo, l));
    PointVector x(static_cast<std::size_t>(n - 1), b);
    x.push_back(y);
    const auto [lower, upper] = envelope_means(f, x);
    if (!(lower < upper)) {
      throw Error("internal: envelope witness failed at the jump x=" + b.str());
    }
    p.envelope_witness = EnvelopeOrderWitness{std::move(x), upper, lower};
  }

  // (vii): capture the average inside the gap with a non-diagonal vector.
  const Rational fb = jump.value;
  StrictnessWitness strict_w{{}, Rational(0), true};
  Rational second_target;
  const Segment* witness_seg = nullptr;
  if (fb < r) {
    const Segment& right = segment_right_of(f, b);
    Rational hi = count * r - head * fb;
    if (right.value_to.is_finite() && right.value_to.finite() < hi) {
      hi = right.value_to.finite();
    }
    const Rational u1 = r + (hi - r) / Rational(2);
    second_target = r + (hi - r) / Rational(4);
    witness_seg = &right;
    PointVector x(static_cast<std::size_t>(n - 1), b);
    x.push_back(right.abscissa_for(u1));
    strict_w = StrictnessWitness{std::move(x), Rational(0), true};
  } else {
    const Segment& left = segment_left_of(f, b);
    Rational lo = count * l - head * fb;
    if (left.value_from.is_finite() && left.value_from.finite() > lo) {
      lo = left.value_from.finite();
    }
    const Rational u1 = l - (l - lo) / Rational(2);
    second_target = l - (l - lo) / Rational(4);
    witness_seg = &left;
    PointVector x(static_cast<std::size_t>(n - 1), b);
    x.push_back(left.abscissa_for(u1));
    strict_w = StrictnessWitness{std::move(x), Rational(0), false};
  }
  strict_w.mean = quasi_mean(f, strict_w.x);
  if (!(strict_w.mean == b)) {
    throw Error("internal: strictness witness failed at the jump x=" + b.str());
  }
  p.strictness_witness = strict_w;

  // (vi): raising the steered coordinate keeps the mean pinned at the jump.
  {
    PointVector x2 = strict_w.x;
    x2.back() = witness_seg->abscissa_for(second_target);
    if (!(quasi_mean(f, x2) == b)) {
      throw Error("internal: monotonicity witness failed at the jump x=" +
                  b.str());
    }
    const bool raised = strict_w.x.back() < x2.back();
    p.monotonicity_witness =
        MonotonicityWitness{raised ? strict_w.x : x2, raised ? x2 : strict_w.x,
                            b};
  }
  return p;
}

// ---------------------------------------------------------------------------
// Report emission

namespace {

ordered_json witness_json(const MonotonePwl& f, const MonotonePwl& g,
                          const WitnessTriple& w) {
  ordered_json out;
  out["direction"] =
      w.direction == ViolatedDirection::kFLeG ? "f_le_g" : "g_le_f";
  out["x"] = w.x.str();
  out["t"] = w.t.str();
  out["y"] = w.y.str();
  out["ratio_f"] = w.ratio_f.str();
  out["ratio_g"] = w.ratio_g.str();
  const Counterexample ce = witness_to_counterexample(f, g, w);
  ordered_json cj;
  cj["lambda"] = ce.lambda.str();
  cj["points"] = {ce.points[0].str(), ce.points[1].str()};
  cj["weights"] = {ce.weights[0].str(), ce.weights[1].str()};
  cj["mean_low"] = ce.mean_low.str();
  cj["separator"] = ce.separator.str();
  cj["mean_high"] = ce.mean_high.str();
  out["counterexample"] = cj;
  return out;
}

ordered_json bridge_json(const ContinuousPwl& bridge) {
  ordered_json out;
  out["domain"] = {{"left", bridge.domain().left().str()},
                   {"right", bridge.domain().right().str()}};
  out["breakpoints"] = ordered_json::array();
  for (const Rational& b : bridge.breakpoints()) {
    out["breakpoints"].push_back(b.str());
  }
  out["pieces"] = ordered_json::array();
  for (const AffinePiece& p : bridge.pieces()) {
    out["pieces"].push_back({{"slope", p.slope.str()},
                             {"anchor_x", p.anchor_x.str()},
                             {"anchor_y", p.anchor_y.str()}});
  }
  return out;
}

void witness_text(std::ostringstream& out, const MonotonePwl& f,
                  const MonotonePwl& g, const WitnessTriple& w) {
  const bool f_side = w.direction == ViolatedDirection::kFLeG;
  out << "witness violating " << (f_side ? "A_f <= A_g" : "A_g <= A_f")
      << ": x=" << w.x << " t=" << w.t << " y=" << w.y
      << "  r_f=" << w.ratio_f << " r_g=" << w.ratio_g << "\n";
  const Counterexample ce = witness_to_counterexample(f, g, w);
  out << "  counterexample: points=(" << ce.points[0] << ", " << ce.points[1]
      << ") weights=(" << ce.weights[0] << ", " << ce.weights[1] << ")  "
      << (f_side ? "A_g" : "A_f") << "=" << ce.mean_low << " < t="
      << ce.separator << " < " << (f_side ? "A_f" : "A_g") << "="
      << ce.mean_high << "\n";
}

}  // namespace

std::string verdict_to_text(const CompareVerdict& verdict, const MonotonePwl& f,
                            const MonotonePwl& g) {
  std::ostringstream out;
  out << "relation: " << to_string(verdict.relation) << "\n";
  if (verdict.affine) {
    out << "certificate: f = alpha*g + beta with alpha=" << verdict.affine->alpha
        << " beta=" << verdict.affine->beta << "\n";
  }
  if (verdict.bridge) {
    const ContinuousPwl& br = *verdict.bridge;
    out << "certificate: convex bridge " << br.domain().str() << " -> "
        << br.range().str() << ", breakpoints [";
    for (std::size_t i = 0; i < br.breakpoints().size(); ++i) {
      out << (i ? ", " : "") << br.breakpoints()[i];
    }
    out << "], slopes [";
    for (std::size_t i = 0; i < br.pieces().size(); ++i) {
      out << (i ? ", " : "") << br.pieces()[i].slope;
    }
    out << "]\n";
  }
  if (verdict.witness_f_le_g) witness_text(out, f, g, *verdict.witness_f_le_g);
  if (verdict.witness_g_le_f) witness_text(out, f, g, *verdict.witness_g_le_f);
  return out.str();
}

std::string verdict_to_json(const CompareVerdict& verdict, const MonotonePwl& f,
                            const MonotonePwl& g) {
  ordered_json out;
  out["relation"] = std::string(to_string(verdict.relation));
  if (verdict.affine) {
    out["affine"] = {{"alpha", verdict.affine->alpha.str()},
                     {"beta", verdict.affine->beta.str()}};
  }
  if (verdict.bridge) out["bridge"] = bridge_json(*verdict.bridge);
  out["witnesses"] = ordered_json::array();
  if (verdict.witness_f_le_g) {
    out["witnesses"].push_back(witness_json(f, g, *verdict.witness_f_le_g));
  }
  if (verdict.witness_g_le_f) {
    out["witnesses"].push_back(witness_json(f, g, *verdict.witness_g_le_f));
  }
  return out.dump(2) + "\n";
}

std::string diagnosis_to_text(const ContinuityDiagnosis& d) {
  std::ostringstream out;
  out << "point: " << d.point << " (n=" << d.n << ")\n";
  out << "lower semicontinuous: " << (d.lower_semicontinuous ? "yes" : "no");
  if (d.lower_witness) out << "  witness y=" << *d.lower_witness;
  out << "\n";
  out << "upper semicontinuous: " << (d.upper_semicontinuous ? "yes" : "no");
  if (d.upper_witness) out << "  witness y=" << *d.upper_witness;
  out << "\n";
  out << "continuous: " << (d.continuous() ? "yes" : "no") << "\n";
  return out.str();
}

std::string diagnosis_to_json(const ContinuityDiagnosis& d) {
  ordered_json out;
  out["point"] = d.point.str();
  out["n"] = d.n;
  out["lower_semicontinuous"] = d.lower_semicontinuous;
  if (d.lower_witness) out["lower_witness"] = d.lower_witness->str();
  out["upper_semicontinuous"] = d.upper_semicontinuous;
  if (d.upper_witness) out["upper_witness"] = d.upper_witness->str();
  out["continuous"] = d.continuous();
  return out.dump(2) + "\n";
}

namespace {

ordered_json points_json(const PointVector& x) {
  ordered_json out = ordered_json::array();
  for (const Rational& v : x) out.push_back(v.str());
  return out;
}

std::string points_text(const PointVector& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += (i ? ", " : "") + x[i].str();
  }
  return out + ")";
}

}  // namespace

std::string probe_to_text(const KolmogorovProbe& p) {
  std::ostringstream out;
  out << "generator continuous: " << (p.continuous_generator ? "yes" : "no")
      << " (n=" << p.n << ", grid checks: " << p.grid_checked << ")\n";
  out << "envelope dominance A_{f+} <= A_{f-}: "
      << (p.envelope_dominance ? "holds" : "fails");
  if (p.envelope_witness) {
    out << "  witness x=" << points_text(p.envelope_witness->x)
        << " A_{f+}=" << p.envelope_witness->upper_mean
        << " > A_{f-}=" << p.envelope_witness->lower_mean;
  }
  out << "\n";
  out << "strict mean: " << (p.strict ? "holds" : "fails");
  if (p.strictness_witness) {
    out << "  witness x=" << points_text(p.strictness_witness->x) << " mean="
        << p.strictness_witness->mean << " = "
        << (p.strictness_witness->equals_min ? "min(x)" : "max(x)");
  }
  out << "\n";
  out << "strictly increasing mean: "
      << (p.strictly_increasing ? "holds" : "fails");
  if (p.monotonicity_witness) {
    out << "  witness " << points_text(p.monotonicity_witness->x_low) << " and "
        << points_text(p.monotonicity_witness->x_high)
        << " share mean=" << p.monotonicity_witness->mean;
  }
  out << "\n";
  return out.str();
}

std::string probe_to_json(const KolmogorovProbe& p) {
  ordered_json out;
  out["n"] = p.n;
  out["continuous_generator"] = p.continuous_generator;
  out["grid_checked"] = p.grid_checked;
  out["envelope_dominance"] = p.envelope_dominance;
  if (p.envelope_witness) {
    out["envelope_witness"] = {{"x", points_json(p.envelope_witness->x)},
                               {"upper_mean", p.envelope_witness->upper_mean.str()},
                               {"lower_mean", p.envelope_witness->lower_mean.str()}};
  }
  out["strict"] = p.strict;
  if (p.strictness_witness) {
    out["strictness_witness"] = {
        {"x", points_json(p.strictness_witness->x)},
        {"mean", p.strictness_witness->mean.str()},
        {"equals", p.strictness_witness->equals_min ? "min" : "max"}};
  }
  out["strictly_increasing"] = p.strictly_increasing;
  if (p.monotonicity_witness) {
    out["monotonicity_witness"] = {
        {"x_low", points_json(p.monotonicity_witness->x_low)},
        {"x_high", points_json(p.monotonicity_witness->x_high)},
        {"mean", p.monotonicity_witness->mean.str()}};
  }
  return out.dump(2) + "\n";
}

}  // namespace gqam

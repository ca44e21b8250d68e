#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gqam/extended.hpp"
#include "gqam/rational.hpp"

namespace gqam {

// Interior breakpoint where the one-sided limits differ. Carries the triple
// (f_-(x), f(x), f_+(x)); the value may coincide with either limit or sit
// strictly between them.
struct JumpNode {
  Rational x;
  Rational left_limit;
  Rational value;
  Rational right_limit;

  friend bool operator==(const JumpNode&, const JumpNode&) = default;
};

// Interior breakpoint where the limits agree: a continuity point with a
// possible slope change.
struct Knot {
  Rational x;
  Rational value;

  friend bool operator==(const Knot&, const Knot&) = default;
};

// Affine piece on the open interval (from, to). value_from/value_to are the
// one-sided limits at the ends; they are infinite exactly when the
// corresponding abscissa is. The anchor pins the affine extension and is
// canonicalized by MonotonePwl.
struct Segment {
  ExtendedRational from;
  ExtendedRational to;
  ExtendedRational value_from;
  ExtendedRational value_to;
  Rational slope;
  Rational anchor_x;
  Rational anchor_y;

  // Affine extension, valid for any finite abscissa.
  Rational value_at(const Rational& x) const {
    return anchor_y + slope * (x - anchor_x);
  }
  // Inverse of the affine extension.
  Rational abscissa_for(const Rational& u) const {
    return anchor_x + (u - anchor_y) / slope;
  }

  static Segment bounded(const Rational& from, const Rational& to,
                         const Rational& value_from, const Rational& value_to);
  static Segment anchored(const ExtendedRational& from,
                          const ExtendedRational& to, const Rational& anchor_x,
                          const Rational& anchor_y, const Rational& slope);

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct AffinePiece {
  Rational slope;
  Rational anchor_x;
  Rational anchor_y;

  Rational at(const Rational& u) const {
    return anchor_y + slope * (u - anchor_x);
  }

  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

// Continuous increasing piecewise-linear function (slopes >= 0, plateaus
// allowed). Normalized on construction: collinear neighbours merged, anchors
// canonical, so operator== is semantic equality.
class ContinuousPwl {
 public:
  ContinuousPwl(OpenInterval domain, std::vector<Rational> breakpoints,
                std::vector<AffinePiece> pieces);

  const OpenInterval& domain() const { return domain_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  Rational eval(const Rational& u) const;
  Rational operator()(const Rational& u) const { return eval(u); }
  // Slope of the piece governing u (the right piece at a breakpoint).
  Rational slope_at(const Rational& u) const;

  // One-sided limits at the domain ends; finite for bounded ends, and for
  // unbounded ends finite only when the outer piece is flat.
  ExtendedRational limit_at_left() const;
  ExtendedRational limit_at_right() const;
  OpenInterval range() const;

  bool is_convex() const;
  bool is_concave() const;
  bool strictly_increasing() const;

  // Inverse function; requires strictly_increasing().
  ContinuousPwl inverse() const;

  friend bool operator==(const ContinuousPwl&, const ContinuousPwl&) = default;

 private:
  const AffinePiece& piece_for(const Rational& u) const;

  OpenInterval domain_;
  std::vector<Rational> breakpoints_;
  std::vector<AffinePiece> pieces_;  // breakpoints_.size() + 1 entries
};

// Strictly increasing piecewise-linear function on an open interval with
// finitely many jumps. Immutable after construction; every constructor
// validates the full invariant set and throws InvariantViolation naming the
// violated invariant and its location.
class MonotonePwl {
 public:
  MonotonePwl(OpenInterval interval, std::vector<Segment> segments,
              std::vector<JumpNode> jumps, std::vector<Knot> knots);

  const OpenInterval& interval() const { return interval_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<JumpNode>& jump_nodes() const { return jumps_; }
  const std::vector<Knot>& knots() const { return knots_; }

  bool is_continuous() const { return jumps_.empty(); }
  bool continuous_at(const Rational& x) const;

  Rational eval(const Rational& x) const;
  Rational operator()(const Rational& x) const { return eval(x); }
  Rational left_limit(const Rational& x) const;
  Rational right_limit(const Rational& x) const;

  MonotonePwl lower_envelope() const;
  MonotonePwl upper_envelope() const;

  // conv(f(I)): the open interval of one-sided range limits.
  OpenInterval conv_range() const;

  ContinuousPwl generalized_inverse() const;
  // Value of the generalized inverse at u without materializing it.
  Rational inverse_value(const Rational& u) const;

  // alpha * f + beta with alpha > 0.
  MonotonePwl affine_image(const Rational& alpha, const Rational& beta) const;

  // Affine extension of the segment whose open piece contains x; x must not
  // be a boundary abscissa.
  AffinePiece affine_at(const Rational& x) const;

  friend bool operator==(const MonotonePwl& a, const MonotonePwl& b) {
    return a.interval_ == b.interval_ && a.segments_ == b.segments_ &&
           a.jumps_ == b.jumps_ && a.knots_ == b.knots_;
  }

 private:
  struct Boundary {
    Rational x;
    Rational left;
    Rational value;
    Rational right;
    bool jump;
  };

  void validate_and_index();
  const Boundary* find_boundary(const Rational& x) const;
  const Segment& segment_containing(const Rational& x) const;
  void check_in_domain(const Rational& x) const;

  OpenInterval interval_;
  std::vector<Segment> segments_;
  std::vector<JumpNode> jumps_;
  std::vector<Knot> knots_;
  std::vector<Boundary> boundaries_;  // derived, sorted
};

// Incremental construction mirroring the function-spec file format: segments
// in order, nodes wherever the adjacent limits differ. build() derives knots
// and validates everything.
class PwlBuilder {
 public:
  PwlBuilder& interval(ExtendedRational left, ExtendedRational right);
  PwlBuilder& bounded_segment(const Rational& from, const Rational& to,
                              const Rational& value_from,
                              const Rational& value_to);
  PwlBuilder& anchored_segment(const ExtendedRational& from,
                               const ExtendedRational& to,
                               const Rational& anchor_x,
                               const Rational& anchor_y, const Rational& slope);
  PwlBuilder& node(const Rational& x, const Rational& value);
  MonotonePwl build() const;

 private:
  std::optional<OpenInterval> interval_;
  std::vector<Segment> segments_;
  std::vector<std::pair<Rational, Rational>> nodes_;
};

// Lemma-ineq verdict on the relation between f^(-1)(u) and x, decided from
// the one-sided limits alone. Exact arithmetic always resolves the
// trichotomy, so the weak verdicts are never returned; they are retained for
// the one-sided predicates below.
enum class PositionVerdict {
  kInverseEq,
  kInverseLt,
  kInverseLe,
  kInverseGt,
  kInverseGe,
};
std::string_view to_string(PositionVerdict v);

PositionVerdict classify_position(const MonotonePwl& f, const Rational& x,
                                  const Rational& u);

// One-sided equivalences: f^(-1)(u) < x iff u < f_-(x), and so on.
bool inverse_lt(const MonotonePwl& f, const Rational& x, const Rational& u);
bool inverse_le(const MonotonePwl& f, const Rational& x, const Rational& u);
bool inverse_gt(const MonotonePwl& f, const Rational& x, const Rational& u);
bool inverse_ge(const MonotonePwl& f, const Rational& x, const Rational& u);

// phi o f for a strictly increasing continuous phi defined on conv(f(I));
// phi's interior kinks pull back to knots of the composite.
MonotonePwl compose_increasing(const ContinuousPwl& phi, const MonotonePwl& f);

// Copy of f with the node value at jump abscissa x replaced (revalidated).
MonotonePwl replace_node_value(const MonotonePwl& f, const Rational& x,
                               const Rational& new_value);

}  // namespace gqam

#include "gqam/pwl.hpp"

#include <algorithm>
#include <utility>

#include "gqam/errors.hpp"

namespace gqam {

namespace {

Rational finite_or_throw(const ExtendedRational& e, const char* what) {
  if (!e.is_finite()) {
    throw InvariantViolation(std::string(what) + " must be finite, got " +
                             e.str());
  }
  return e.finite();
}

}  // namespace

Segment Segment::bounded(const Rational& from, const Rational& to,
                         const Rational& value_from, const Rational& value_to) {
  if (!(from < to)) {
    throw InvariantViolation("segment (" + from.str() + ", " + to.str() +
                             "): from < to required");
  }
  if (!(value_from < value_to)) {
    throw InvariantViolation("segment (" + from.str() + ", " + to.str() +
                             "): values must increase, got " +
                             value_from.str() + " .. " + value_to.str());
  }
  Segment s;
  s.from = from;
  s.to = to;
  s.value_from = value_from;
  s.value_to = value_to;
  s.slope = (value_to - value_from) / (to - from);
  s.anchor_x = from;
  s.anchor_y = value_from;
  return s;
}

Segment Segment::anchored(const ExtendedRational& from,
                          const ExtendedRational& to, const Rational& anchor_x,
                          const Rational& anchor_y, const Rational& slope) {
  if (!(from < to)) {
    throw InvariantViolation("segment (" + from.str() + ", " + to.str() +
                             "): from < to required");
  }
  if (!slope.is_positive()) {
    throw InvariantViolation("segment (" + from.str() + ", " + to.str() +
                             "): slope must be positive, got " + slope.str());
  }
  Segment s;
  s.from = from;
  s.to = to;
  s.slope = slope;
  s.anchor_x = anchor_x;
  s.anchor_y = anchor_y;
  s.value_from = from.is_finite() ? ExtendedRational(s.value_at(from.finite()))
                                  : ExtendedRational::neg_infinity();
  s.value_to = to.is_finite() ? ExtendedRational(s.value_at(to.finite()))
                              : ExtendedRational::pos_infinity();
  return s;
}

// ---------------------------------------------------------------------------
// ContinuousPwl

ContinuousPwl::ContinuousPwl(OpenInterval domain,
                             std::vector<Rational> breakpoints,
                             std::vector<AffinePiece> pieces)
    : domain_(std::move(domain)),
      breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)) {
  if (pieces_.size() != breakpoints_.size() + 1) {
    throw InvariantViolation("continuous pwl: need breakpoints+1 pieces");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw InvariantViolation("continuous pwl: breakpoints not increasing at " +
                               breakpoints_[i].str());
    }
    if (!domain_.contains(breakpoints_[i])) {
      throw InvariantViolation("continuous pwl: breakpoint " +
                               breakpoints_[i].str() + " outside domain " +
                               domain_.str());
    }
    if (pieces_[i].at(breakpoints_[i]) != pieces_[i + 1].at(breakpoints_[i])) {
      throw InvariantViolation("continuous pwl: discontinuity at breakpoint " +
                               breakpoints_[i].str());
    }
  }
  for (const AffinePiece& p : pieces_) {
    if (p.slope.is_negative()) {
      throw InvariantViolation("continuous pwl: decreasing piece, slope " +
                               p.slope.str());
    }
  }
  // Merge collinear neighbours.
  std::vector<Rational> nb;
  std::vector<AffinePiece> np;
  np.push_back(pieces_[0]);
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (pieces_[i + 1].slope == np.back().slope) continue;
    nb.push_back(breakpoints_[i]);
    np.push_back(pieces_[i + 1]);
  }
  breakpoints_ = std::move(nb);
  pieces_ = std::move(np);
  // Canonical anchors: each piece anchored at its left breakpoint, the first
  // at its right breakpoint (or 0 when there is none).
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    Rational ax = breakpoints_.empty()
                      ? Rational(0)
                      : breakpoints_[i == 0 ? 0 : i - 1];
    pieces_[i] = AffinePiece{pieces_[i].slope, ax, pieces_[i].at(ax)};
  }
}

const AffinePiece& ContinuousPwl::piece_for(const Rational& u) const {
  const auto it =
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u,
                       [](const Rational& a, const Rational& b) { return a < b; });
  return pieces_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

Rational ContinuousPwl::eval(const Rational& u) const {
  if (!domain_.contains(u)) {
    throw OutOfDomain("argument " + u.str() + " outside domain " +
                      domain_.str());
  }
  return piece_for(u).at(u);
}

Rational ContinuousPwl::slope_at(const Rational& u) const {
  return piece_for(u).slope;
}

ExtendedRational ContinuousPwl::limit_at_left() const {
  const AffinePiece& p = pieces_.front();
  if (domain_.left().is_finite()) return p.at(domain_.left().finite());
  return p.slope.is_zero() ? ExtendedRational(p.anchor_y)
                           : ExtendedRational::neg_infinity();
}

ExtendedRational ContinuousPwl::limit_at_right() const {
  const AffinePiece& p = pieces_.back();
  if (domain_.right().is_finite()) return p.at(domain_.right().finite());
  return p.slope.is_zero() ? ExtendedRational(p.anchor_y)
                           : ExtendedRational::pos_infinity();
}

OpenInterval ContinuousPwl::range() const {
  return OpenInterval(limit_at_left(), limit_at_right());
}

bool ContinuousPwl::is_convex() const {
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].slope < pieces_[i - 1].slope) return false;
  }
  return true;
}

bool ContinuousPwl::is_concave() const {
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].slope > pieces_[i - 1].slope) return false;
  }
  return true;
}

bool ContinuousPwl::strictly_increasing() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const AffinePiece& p) { return p.slope.is_positive(); });
}

ContinuousPwl ContinuousPwl::inverse() const {
  if (!strictly_increasing()) {
    throw BadParameters("inverse requires a strictly increasing function");
  }
  std::vector<Rational> nb;
  nb.reserve(breakpoints_.size());
  std::vector<AffinePiece> np;
  np.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    np.push_back(AffinePiece{pieces_[i].slope.reciprocal(),
                             pieces_[i].anchor_y, pieces_[i].anchor_x});
    if (i < breakpoints_.size()) nb.push_back(pieces_[i].at(breakpoints_[i]));
  }
  return ContinuousPwl(range(), std::move(nb), std::move(np));
}

// ---------------------------------------------------------------------------
// MonotonePwl

MonotonePwl::MonotonePwl(OpenInterval interval, std::vector<Segment> segments,
                         std::vector<JumpNode> jumps, std::vector<Knot> knots)
    : interval_(std::move(interval)),
      segments_(std::move(segments)),
      jumps_(std::move(jumps)),
      knots_(std::move(knots)) {
  validate_and_index();
}

void MonotonePwl::validate_and_index() {
  if (segments_.empty()) {
    throw InvariantViolation("function needs at least one segment");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    Segment& s = segments_[i];
    const std::string where = "segment " + std::to_string(i) + " (" +
                              s.from.str() + ", " + s.to.str() + ")";
    if (!(s.from < s.to)) throw InvariantViolation(where + ": from < to required");
    if (!s.slope.is_positive()) {
      throw InvariantViolation(where + ": slope must be positive, got " +
                               s.slope.str());
    }
    if (s.from.is_finite() != s.value_from.is_finite() ||
        (!s.from.is_finite() && !s.value_from.is_neg_infinity())) {
      throw InvariantViolation(where + ": value_from inconsistent with from");
    }
    if (s.to.is_finite() != s.value_to.is_finite() ||
        (!s.to.is_finite() && !s.value_to.is_pos_infinity())) {
      throw InvariantViolation(where + ": value_to inconsistent with to");
    }
    if (s.from.is_finite() && s.value_at(s.from.finite()) != s.value_from.finite()) {
      throw InvariantViolation(where + ": value_from does not lie on the piece");
    }
    if (s.to.is_finite() && s.value_at(s.to.finite()) != s.value_to.finite()) {
      throw InvariantViolation(where + ": value_to does not lie on the piece");
    }
    if (!(s.value_from < s.value_to)) {
      throw InvariantViolation(where + ": values must increase");
    }
    // Canonical anchor.
    if (s.from.is_finite()) {
      s.anchor_x = s.from.finite();
      s.anchor_y = s.value_from.finite();
    } else if (s.to.is_finite()) {
      s.anchor_x = s.to.finite();
      s.anchor_y = s.value_to.finite();
    } else {
      s.anchor_y = s.value_at(Rational(0));
      s.anchor_x = Rational(0);
    }
  }
  if (!(segments_.front().from == interval_.left())) {
    throw InvariantViolation("segments must start at the interval's left end " +
                             interval_.left().str());
  }
  if (!(segments_.back().to == interval_.right())) {
    throw InvariantViolation("segments must end at the interval's right end " +
                             interval_.right().str());
  }
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    if (!(segments_[i].to == segments_[i + 1].from)) {
      throw InvariantViolation("segments " + std::to_string(i) + " and " +
                               std::to_string(i + 1) +
                               " do not share a boundary");
    }
  }

  std::sort(jumps_.begin(), jumps_.end(),
            [](const JumpNode& a, const JumpNode& b) { return a.x < b.x; });
  std::sort(knots_.begin(), knots_.end(),
            [](const Knot& a, const Knot& b) { return a.x < b.x; });

  boundaries_.clear();
  std::size_t ji = 0;
  std::size_t ki = 0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const Rational b = finite_or_throw(segments_[i].to, "interior boundary");
    const Rational left = segments_[i].value_to.finite();
    const Rational right = segments_[i + 1].value_from.finite();
    const std::string where = "boundary x=" + b.str();
    if (right < left) {
      throw InvariantViolation(where + ": limits decrease across the boundary");
    }
    if (left < right) {
      if (ji >= jumps_.size() || !(jumps_[ji].x == b)) {
        throw InvariantViolation(where + ": limits differ (" + left.str() +
                                 " vs " + right.str() + ") but no node given");
      }
      const JumpNode& node = jumps_[ji++];
      if (node.left_limit != left || node.right_limit != right) {
        throw InvariantViolation(where + ": node limits (" +
                                 node.left_limit.str() + ", " +
                                 node.right_limit.str() +
                                 ") disagree with segment limits");
      }
      if (node.value < left || right < node.value) {
        throw InvariantViolation(where + ": node value " + node.value.str() +
                                 " outside [" + left.str() + ", " +
                                 right.str() + "]");
      }
      boundaries_.push_back(Boundary{b, left, node.value, right, true});
    } else {
      if (ki >= knots_.size() || !(knots_[ki].x == b)) {
        throw InvariantViolation(where + ": knot record missing");
      }
      const Knot& knot = knots_[ki++];
      if (knot.value != left) {
        throw InvariantViolation(where + ": knot value " + knot.value.str() +
                                 " differs from the common limit " + left.str());
      }
      boundaries_.push_back(Boundary{b, left, left, left, false});
    }
  }
  if (ji != jumps_.size()) {
    throw InvariantViolation("node at x=" + jumps_[ji].x.str() +
                             " is not an interior boundary with a jump");
  }
  if (ki != knots_.size()) {
    throw InvariantViolation("knot at x=" + knots_[ki].x.str() +
                             " is not an interior continuity boundary");
  }
}

const MonotonePwl::Boundary* MonotonePwl::find_boundary(const Rational& x) const {
  const auto it = std::lower_bound(
      boundaries_.begin(), boundaries_.end(), x,
      [](const Boundary& b, const Rational& v) { return b.x < v; });
  if (it != boundaries_.end() && it->x == x) return &*it;
  return nullptr;
}

const Segment& MonotonePwl::segment_containing(const Rational& x) const {
  const auto it = std::upper_bound(
      boundaries_.begin(), boundaries_.end(), x,
      [](const Rational& v, const Boundary& b) { return v < b.x; });
  return segments_[static_cast<std::size_t>(it - boundaries_.begin())];
}

void MonotonePwl::check_in_domain(const Rational& x) const {
  if (!interval_.contains(x)) {
    throw OutOfDomain("argument " + x.str() + " outside interval " +
                      interval_.str());
  }
}

bool MonotonePwl::continuous_at(const Rational& x) const {
  check_in_domain(x);
  const Boundary* b = find_boundary(x);
  return b == nullptr || !b->jump;
}

Rational MonotonePwl::eval(const Rational& x) const {
  check_in_domain(x);
  if (const Boundary* b = find_boundary(x)) return b->value;
  return segment_containing(x).value_at(x);
}

Rational MonotonePwl::left_limit(const Rational& x) const {
  check_in_domain(x);
  if (const Boundary* b = find_boundary(x)) return b->left;
  return segment_containing(x).value_at(x);
}

Rational MonotonePwl::right_limit(const Rational& x) const {
  check_in_domain(x);
  if (const Boundary* b = find_boundary(x)) return b->right;
  return segment_containing(x).value_at(x);
}

MonotonePwl MonotonePwl::lower_envelope() const {
  std::vector<JumpNode> jumps = jumps_;
  for (JumpNode& j : jumps) j.value = j.left_limit;
  return MonotonePwl(interval_, segments_, std::move(jumps), knots_);
}

MonotonePwl MonotonePwl::upper_envelope() const {
  std::vector<JumpNode> jumps = jumps_;
  for (JumpNode& j : jumps) j.value = j.right_limit;
  return MonotonePwl(interval_, segments_, std::move(jumps), knots_);
}

OpenInterval MonotonePwl::conv_range() const {
  return OpenInterval(segments_.front().value_from, segments_.back().value_to);
}

ContinuousPwl MonotonePwl::generalized_inverse() const {
  std::vector<Rational> breaks;
  std::vector<AffinePiece> pieces;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    pieces.push_back(
        AffinePiece{s.slope.reciprocal(), s.anchor_y, s.anchor_x});
    if (i + 1 < segments_.size()) {
      const Boundary& b = boundaries_[i];
      if (b.jump) {
        breaks.push_back(b.left);
        pieces.push_back(AffinePiece{Rational(0), b.left, b.x});
        breaks.push_back(b.right);
      } else {
        breaks.push_back(b.left);
      }
    }
  }
  return ContinuousPwl(conv_range(), std::move(breaks), std::move(pieces));
}

Rational MonotonePwl::inverse_value(const Rational& u) const {
  const OpenInterval range = conv_range();
  if (!range.contains(u)) {
    throw OutOfDomain("argument " + u.str() + " outside conv(f(I)) = " +
                      range.str());
  }
  const ExtendedRational ue(u);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (ue <= s.value_to) {
      // Below the segment's image the argument sits in the preceding gap.
      if (ue <= s.value_from) return s.from.finite();
      return s.abscissa_for(u);
    }
  }
  return segments_.back().abscissa_for(u);  // unreachable: range is open
}

AffinePiece MonotonePwl::affine_at(const Rational& x) const {
  check_in_domain(x);
  if (find_boundary(x) != nullptr) {
    throw BadParameters("x=" + x.str() + " is a boundary abscissa");
  }
  const Segment& s = segment_containing(x);
  return AffinePiece{s.slope, s.anchor_x, s.anchor_y};
}

MonotonePwl MonotonePwl::affine_image(const Rational& alpha,
                                      const Rational& beta) const {
  if (!alpha.is_positive()) {
    throw BadParameters("affine image requires alpha > 0, got " + alpha.str());
  }
  auto map_value = [&](const ExtendedRational& v) {
    return v.is_finite() ? ExtendedRational(alpha * v.finite() + beta) : v;
  };
  std::vector<Segment> segments = segments_;
  for (Segment& s : segments) {
    s.value_from = map_value(s.value_from);
    s.value_to = map_value(s.value_to);
    s.slope = alpha * s.slope;
    s.anchor_y = alpha * s.anchor_y + beta;
  }
  std::vector<JumpNode> jumps = jumps_;
  for (JumpNode& j : jumps) {
    j.left_limit = alpha * j.left_limit + beta;
    j.value = alpha * j.value + beta;
    j.right_limit = alpha * j.right_limit + beta;
  }
  std::vector<Knot> knots = knots_;
  for (Knot& k : knots) k.value = alpha * k.value + beta;
  return MonotonePwl(interval_, std::move(segments), std::move(jumps),
                     std::move(knots));
}

// ---------------------------------------------------------------------------
// PwlBuilder

PwlBuilder& PwlBuilder::interval(ExtendedRational left, ExtendedRational right) {
  interval_ = OpenInterval(std::move(left), std::move(right));
  return *this;
}

PwlBuilder& PwlBuilder::bounded_segment(const Rational& from, const Rational& to,
                                        const Rational& value_from,
                                        const Rational& value_to) {
  segments_.push_back(Segment::bounded(from, to, value_from, value_to));
  return *this;
}

PwlBuilder& PwlBuilder::anchored_segment(const ExtendedRational& from,
                                         const ExtendedRational& to,
                                         const Rational& anchor_x,
                                         const Rational& anchor_y,
                                         const Rational& slope) {
  segments_.push_back(Segment::anchored(from, to, anchor_x, anchor_y, slope));
  return *this;
}

PwlBuilder& PwlBuilder::node(const Rational& x, const Rational& value) {
  nodes_.push_back({x, value});
  return *this;
}

MonotonePwl PwlBuilder::build() const {
  if (!interval_) throw MalformedSpec("no interval given");
  if (segments_.empty()) throw MalformedSpec("no segments given");

  std::vector<std::pair<Rational, Rational>> nodes = nodes_;
  std::sort(nodes.begin(), nodes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i - 1].first == nodes[i].first) {
      throw MalformedSpec("duplicate node at x=" + nodes[i].first.str());
    }
  }

  std::vector<JumpNode> jumps;
  std::vector<Knot> knots;
  std::size_t ni = 0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    if (!segments_[i].to.is_finite()) {
      throw MalformedSpec("interior boundary after segment " +
                          std::to_string(i) + " must be finite");
    }
    const Rational b = segments_[i].to.finite();
    if (!(segments_[i].to == segments_[i + 1].from)) {
      throw MalformedSpec("segments " + std::to_string(i) + " and " +
                          std::to_string(i + 1) + " do not share a boundary");
    }
    const Rational left = segments_[i].value_to.finite();
    const Rational right = segments_[i + 1].value_from.finite();
    std::optional<Rational> given;
    if (ni < nodes.size() && nodes[ni].first == b) given = nodes[ni++].second;
    if (left < right) {
      if (!given) {
        throw MalformedSpec("node required at x=" + b.str() +
                            ": adjacent limits differ (" + left.str() + " vs " +
                            right.str() + ")");
      }
      jumps.push_back(JumpNode{b, left, *given, right});
    } else {
      knots.push_back(Knot{b, given.value_or(left)});
    }
  }
  if (ni != nodes.size()) {
    throw MalformedSpec("node at x=" + nodes[ni].first.str() +
                        " is not an interior segment boundary");
  }
  return MonotonePwl(*interval_, segments_, std::move(jumps), std::move(knots));
}

// ---------------------------------------------------------------------------
// Lemma-ineq position classification

std::string_view to_string(PositionVerdict v) {
  switch (v) {
    case PositionVerdict::kInverseEq: return "INVERSE_EQ";
    case PositionVerdict::kInverseLt: return "INVERSE_LT";
    case PositionVerdict::kInverseLe: return "INVERSE_LE";
    case PositionVerdict::kInverseGt: return "INVERSE_GT";
    case PositionVerdict::kInverseGe: return "INVERSE_GE";
  }
  return "?";
}

PositionVerdict classify_position(const MonotonePwl& f, const Rational& x,
                                  const Rational& u) {
  if (!f.conv_range().contains(u)) {
    throw OutOfDomain("argument " + u.str() + " outside conv(f(I)) = " +
                      f.conv_range().str());
  }
  if (u < f.left_limit(x)) return PositionVerdict::kInverseLt;
  if (f.right_limit(x) < u) return PositionVerdict::kInverseGt;
  return PositionVerdict::kInverseEq;
}

bool inverse_lt(const MonotonePwl& f, const Rational& x, const Rational& u) {
  return u < f.left_limit(x);
}
bool inverse_le(const MonotonePwl& f, const Rational& x, const Rational& u) {
  return u <= f.right_limit(x);
}
bool inverse_gt(const MonotonePwl& f, const Rational& x, const Rational& u) {
  return f.right_limit(x) < u;
}
bool inverse_ge(const MonotonePwl& f, const Rational& x, const Rational& u) {
  return f.left_limit(x) <= u;
}

// ---------------------------------------------------------------------------
// Composition and node surgery

MonotonePwl compose_increasing(const ContinuousPwl& phi, const MonotonePwl& f) {
  if (!phi.strictly_increasing()) {
    throw BadParameters("composition requires a strictly increasing outer map");
  }
  const OpenInterval values = f.conv_range();
  if (phi.domain().left() > values.left() ||
      values.right() > phi.domain().right()) {
    throw DomainMismatch("outer map domain " + phi.domain().str() +
                         " does not cover conv(f(I)) = " + values.str());
  }

  PwlBuilder builder;
  builder.interval(f.interval().left(), f.interval().right());
  for (const Segment& s : f.segments()) {
    // Kinks of phi strictly inside this segment's image become knots.
    std::vector<Rational> cuts;
    for (const Rational& u : phi.breakpoints()) {
      if (s.value_from < u && ExtendedRational(u) < s.value_to) {
        cuts.push_back(s.abscissa_for(u));
      }
    }
    ExtendedRational lo = s.from;
    for (std::size_t c = 0; c <= cuts.size(); ++c) {
      const ExtendedRational hi = c < cuts.size() ? ExtendedRational(cuts[c]) : s.to;
      // Sample an interior point to pick the governing pieces.
      Rational sample;
      if (lo.is_finite() && hi.is_finite()) {
        sample = midpoint(lo.finite(), hi.finite());
      } else if (lo.is_finite()) {
        sample = lo.finite() + 1;
      } else if (hi.is_finite()) {
        sample = hi.finite() - 1;
      } else {
        sample = 0;
      }
      const Rational u_sample = s.value_at(sample);
      const Rational v_sample = phi.eval(u_sample);
      builder.anchored_segment(lo, hi, sample, v_sample,
                               phi.slope_at(u_sample) * s.slope);
      lo = hi;
    }
  }
  for (const JumpNode& j : f.jump_nodes()) {
    builder.node(j.x, phi.eval(j.value));
  }
  return builder.build();
}

MonotonePwl replace_node_value(const MonotonePwl& f, const Rational& x,
                               const Rational& new_value) {
  std::vector<JumpNode> jumps = f.jump_nodes();
  for (JumpNode& j : jumps) {
    if (j.x == x) {
      j.value = new_value;
      return MonotonePwl(f.interval(), f.segments(), std::move(jumps),
                         f.knots());
    }
  }
  throw BadParameters("no jump node at x=" + x.str());
}

}  // namespace gqam

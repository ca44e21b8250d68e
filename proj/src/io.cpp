#include "gqam/io.hpp"

#include <fstream>
#include <sstream>

#include "gqam/errors.hpp"
#include "json.hpp"

namespace gqam {

namespace {

using nlohmann::ordered_json;

Rational parse_rational_field(const ordered_json& j, const std::string& where) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) {
    return Rational::parse(std::to_string(j.get<long long>()));
  }
  throw MalformedSpec(where + ": expected a rational string or integer");
}

ExtendedRational parse_endpoint_field(const ordered_json& j,
                                      const std::string& where) {
  if (j.is_string()) return ExtendedRational::parse(j.get<std::string>());
  return parse_rational_field(j, where);
}

const ordered_json& require(const ordered_json& j, const char* key,
                            const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw MalformedSpec(where + ": missing \"" + key + "\"");
  }
  return *it;
}

ordered_json endpoint_json(const ExtendedRational& e) {
  return ordered_json(e.str());
}

ordered_json segment_json(const Segment& s) {
  ordered_json out;
  out["from"] = endpoint_json(s.from);
  out["to"] = endpoint_json(s.to);
  auto anchor = [&] {
    ordered_json a;
    a["anchor_x"] = s.anchor_x.str();
    a["anchor_value"] = s.anchor_y.str();
    a["slope"] = s.slope.str();
    return a;
  };
  out["value_from"] = s.value_from.is_finite()
                          ? ordered_json(s.value_from.finite().str())
                          : anchor();
  out["value_to"] = s.value_to.is_finite()
                        ? ordered_json(s.value_to.finite().str())
                        : anchor();
  return out;
}

}  // namespace

MonotonePwl parse_function(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSpec(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MalformedSpec("top level must be an object");

  PwlBuilder builder;
  const ordered_json& interval = require(doc, "interval", "document");
  builder.interval(
      parse_endpoint_field(require(interval, "left", "interval"), "interval.left"),
      parse_endpoint_field(require(interval, "right", "interval"),
                           "interval.right"));

  const ordered_json& segments = require(doc, "segments", "document");
  if (!segments.is_array() || segments.empty()) {
    throw MalformedSpec("\"segments\" must be a nonempty array");
  }
  int index = 0;
  for (const ordered_json& seg : segments) {
    const std::string where = "segment " + std::to_string(index++);
    const ExtendedRational from =
        parse_endpoint_field(require(seg, "from", where), where + ".from");
    const ExtendedRational to =
        parse_endpoint_field(require(seg, "to", where), where + ".to");
    const ordered_json& vf = require(seg, "value_from", where);
    const ordered_json& vt = require(seg, "value_to", where);

    const bool unbounded = !from.is_finite() || !to.is_finite();
    if (!unbounded) {
      if (vf.is_object() || vt.is_object()) {
        throw MalformedSpec(where + ": anchor form is only for segments with an infinite endpoint");
      }
      builder.bounded_segment(from.finite(), to.finite(),
                              parse_rational_field(vf, where + ".value_from"),
                              parse_rational_field(vt, where + ".value_to"));
      continue;
    }
    const ordered_json* anchor = nullptr;
    if (!from.is_finite()) {
      if (!vf.is_object()) {
        throw MalformedSpec(where + ": infinite endpoint requires the anchor form for value_from");
      }
      anchor = &vf;
    }
    if (!to.is_finite()) {
      if (!vt.is_object()) {
        throw MalformedSpec(where + ": infinite endpoint requires the anchor form for value_to");
      }
      if (anchor == nullptr) anchor = &vt;
    }
    const Rational ax =
        parse_rational_field(require(*anchor, "anchor_x", where), where + ".anchor_x");
    const Rational ay = parse_rational_field(require(*anchor, "anchor_value", where),
                                             where + ".anchor_value");
    const Rational slope =
        parse_rational_field(require(*anchor, "slope", where), where + ".slope");
    builder.anchored_segment(from, to, ax, ay, slope);
    // A finite end still pins its value; cross-check when given as a literal.
    if (from.is_finite() && !vf.is_object()) {
      const Rational stated = parse_rational_field(vf, where + ".value_from");
      if (stated != ay + slope * (from.finite() - ax)) {
        throw MalformedSpec(where + ": value_from disagrees with the anchor line");
      }
    }
    if (to.is_finite() && !vt.is_object()) {
      const Rational stated = parse_rational_field(vt, where + ".value_to");
      if (stated != ay + slope * (to.finite() - ax)) {
        throw MalformedSpec(where + ": value_to disagrees with the anchor line");
      }
    }
  }

  if (const auto nodes = doc.find("nodes"); nodes != doc.end()) {
    if (!nodes->is_array()) throw MalformedSpec("\"nodes\" must be an array");
    int nindex = 0;
    for (const ordered_json& node : *nodes) {
      const std::string where = "node " + std::to_string(nindex++);
      builder.node(parse_rational_field(require(node, "x", where), where + ".x"),
                   parse_rational_field(require(node, "value", where),
                                        where + ".value"));
    }
  }
  return builder.build();
}

MonotonePwl load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedSpec("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_function(buf.str());
}

std::string emit_function(const MonotonePwl& f) {
  ordered_json doc;
  doc["interval"] = {{"left", f.interval().left().str()},
                     {"right", f.interval().right().str()}};
  doc["segments"] = ordered_json::array();
  for (const Segment& s : f.segments()) {
    doc["segments"].push_back(segment_json(s));
  }
  if (!f.jump_nodes().empty()) {
    doc["nodes"] = ordered_json::array();
    for (const JumpNode& j : f.jump_nodes()) {
      doc["nodes"].push_back({{"x", j.x.str()}, {"value", j.value.str()}});
    }
  }
  return doc.dump(2) + "\n";
}

ContinuousPwl parse_continuous(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSpec(std::string("invalid JSON: ") + e.what());
  }
  const ordered_json& domain = require(doc, "domain", "document");
  OpenInterval dom(
      parse_endpoint_field(require(domain, "left", "domain"), "domain.left"),
      parse_endpoint_field(require(domain, "right", "domain"), "domain.right"));

  std::vector<Rational> breaks;
  for (const ordered_json& b : require(doc, "breakpoints", "document")) {
    breaks.push_back(parse_rational_field(b, "breakpoint"));
  }
  std::vector<AffinePiece> pieces;
  int index = 0;
  for (const ordered_json& p : require(doc, "pieces", "document")) {
    const std::string where = "piece " + std::to_string(index++);
    pieces.push_back(AffinePiece{
        parse_rational_field(require(p, "slope", where), where + ".slope"),
        parse_rational_field(require(p, "anchor_x", where), where + ".anchor_x"),
        parse_rational_field(require(p, "anchor_y", where), where + ".anchor_y")});
  }
  return ContinuousPwl(dom, std::move(breaks), std::move(pieces));
}

std::string emit_continuous(const ContinuousPwl& g) {
  ordered_json doc;
  doc["domain"] = {{"left", g.domain().left().str()},
                   {"right", g.domain().right().str()}};
  doc["breakpoints"] = ordered_json::array();
  for (const Rational& b : g.breakpoints()) {
    doc["breakpoints"].push_back(b.str());
  }
  doc["pieces"] = ordered_json::array();
  for (const AffinePiece& p : g.pieces()) {
    doc["pieces"].push_back({{"slope", p.slope.str()},
                             {"anchor_x", p.anchor_x.str()},
                             {"anchor_y", p.anchor_y.str()}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace gqam

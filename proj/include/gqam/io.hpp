#pragma once

#include <string>

#include "gqam/pwl.hpp"

namespace gqam {

// Function-spec document (UTF-8 JSON):
//   "interval": {"left": <rational or "-inf">, "right": <rational or "inf">}
//   "segments": ordered [{"from","to","value_from","value_to"}]; an infinite
//     endpoint replaces its value by {"anchor_x","anchor_value","slope"}
//   "nodes": [{"x","value"}], required where adjacent segment limits differ,
//     optional (defaulting to the common limit) where they agree
// Rationals are "p/q" / "n" strings or JSON integers; parsing is
// locale-independent and exact.
MonotonePwl parse_function(const std::string& text);
MonotonePwl load_function(const std::string& path);
std::string emit_function(const MonotonePwl& f);

// Continuous counterpart (generalized inverses, bridges): plateaus are legal,
// so the document stores explicit pieces instead of strictly increasing
// segments:
//   "domain": {"left","right"}, "breakpoints": [...],
//   "pieces": [{"slope","anchor_x","anchor_y"}]
ContinuousPwl parse_continuous(const std::string& text);
std::string emit_continuous(const ContinuousPwl& g);

}  // namespace gqam

#pragma once

// Text interchange for point-normal polygons:
//
//   closed: true
//   v 1 0 0
//   vn 1 0 0
//   v 0 1 0
//
// A `vn` line attaches to the preceding `v`; vertices without one carry the
// zero normal. `#` starts a comment.

#include <pnsubd/curve.hpp>

#include <iosfwd>
#include <string>

namespace pnsubd {

PNPolygon load_polyline(std::istream& in);
PNPolygon load_polyline_file(const std::string& path);

/// Writes 17 significant digits so values round-trip bit-exactly.
void save_polyline(const PNPolygon& poly, std::ostream& out);
void save_polyline_file(const PNPolygon& poly, const std::string& path);

}  // namespace pnsubd

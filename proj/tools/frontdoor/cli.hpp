#pragma once

#include <iosfwd>

namespace pnsubd::frontdoor {

/// Entry point shared by the executable and the in-process tests. `in` and
/// `out` stand in for stdin/stdout when a path is "-".
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pnsubd::frontdoor

#pragma once

#include <iosfwd>

namespace klreg::selftest {

// Runs the full acceptance matrix, printing one PASS/FAIL line per criterion.
// Returns true iff every criterion passed.
bool run_all(std::ostream& os);

} // namespace klreg::selftest

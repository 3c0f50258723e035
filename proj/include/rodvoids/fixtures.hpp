#ifndef RODVOIDS_FIXTURES_HPP
#define RODVOIDS_FIXTURES_HPP

#include <string>

#include "rodvoids/rod1d.hpp"

namespace rodvoids {

// Named limit configurations used by the CLI (`limit.source = fixture:<name>`)
// and the verification suites:
//   straight            identity rod
//   straight-with-void  identity rod, one interior void interval
//   boundary-void       identity rod, void (0, 7/12) touching the left end
//   kink                straight pieces with one breakpoint at 7/12
//   arc                 circular arc, constant bending about e3
//   helix               constant torsion + bending
LimitConfig make_fixture(const std::string& name, double L, double ds, double M);

} // namespace rodvoids

#endif

#pragma once

#include <iosfwd>

namespace homcw {

/// Entry point of the `homcw` tool. Exit codes: 0 yes/success, 1 no,
/// 2 usage or input error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace homcw

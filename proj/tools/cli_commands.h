#ifndef P4P_TOOLS_CLI_COMMANDS_H_
#define P4P_TOOLS_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "p4p/geometry.h"
#include "p4p/pipeline.h"

namespace p4p::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 1;
inline constexpr int kExitRejected = 2;

// Parses {"points3d": [[x,y,z],...], "points2d": [[u,v],...]}. Throws
// Error(kInvalidArgument) on malformed JSON, mismatched or short arrays, or
// non-finite values.
CorrespondenceSet ParseProblem(std::string_view json_text);

std::string ProblemToJson(const CorrespondenceSet& corr);

// The JSON printed by `solve`.
std::string SolveResultToJson(const PnPResult& result);

// Entry point for `p4p <subcommand> ...`; argv[0] is the program name.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace p4p::cli

#endif  // P4P_TOOLS_CLI_COMMANDS_H_

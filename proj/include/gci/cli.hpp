#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gci::cli {

// Stable exit codes.
inline constexpr int kValid = 0;
inline constexpr int kFalsified = 1;
inline constexpr int kInconclusive = 2;
inline constexpr int kUsage = 64;
inline constexpr int kData = 65;
inline constexpr int kSemantic = 66;

// Runs one command. args excludes the program name. Shipped data (witnesses)
// are looked up in --data-dir, else $GCI_DATA_DIR, else the build default.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gci::cli

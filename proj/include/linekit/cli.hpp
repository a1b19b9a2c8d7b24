#pragma once

#include <string>
#include <vector>

namespace linekit {

// Batch entry point. args excludes the program name. Exit status:
//   0  success
//   1  check failure (gradient or golden-checksum mismatch)
//   2  usage or I/O error
int run_cli(const std::vector<std::string>& args);

}  // namespace linekit

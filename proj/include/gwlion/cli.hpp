#ifndef GWLION_CLI_HPP
#define GWLION_CLI_HPP

namespace gwlion {

/// Full command-line entry point (synth/train/evaluate/compare/crossval/
/// forecast). Returns the process exit code: 0 success, 2 config or usage
/// error, 3 data error, 4 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace gwlion

#endif

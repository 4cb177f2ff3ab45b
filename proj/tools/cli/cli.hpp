#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace seqclt::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitTolerance = 1,   // a statistical check missed its tolerance
  kExitConfig = 2,      // bad flags, unreadable input, out-of-range parameters
  kExitExhausted = 3,   // a finite source ran out of bits
  kExitMismatch = 4,    // exact moment formula disagrees with enumeration
};

// Everything that determines a run. After defaults are resolved every field is
// echoed into the metadata block of the output.
struct RunConfig {
  std::string command;
  std::string source = "prng:seed=1";
  std::string scheme = "tri";
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  unsigned m_max = 0;
  std::string x = "-1,0,1";
  std::string grid = "-3,-2.5,-2,-1.5,-1,-0.5,0,0.5,1,1.5,2,2.5,3";
  std::string seeds;
  double sigma2 = 1.0;
  unsigned level = 1;
  unsigned lmax = 8;
  std::string weights;
  bool variance_study = false;
  std::string ns = "100,1000,10000";
  std::string f = "clip";
  double tol = 0.25;       // asclt, per path
  double mean_tol = 0.10;  // asclt, mean over seeds
  std::string out;
  std::string format;
};

// Runs one command line, `args` excluding the program name. Results go to
// `out` unless --out names a file; diagnostics go to `err`. Returns an ExitCode.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace seqclt::cli

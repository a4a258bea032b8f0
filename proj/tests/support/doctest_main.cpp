#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>

#include "sameval/log.hpp"

int main(int argc, char** argv) {
  // keep expected-warning noise out of test output unless explicitly asked
  if (std::getenv("SAME_EVAL_LOG") == nullptr) {
    sameval::set_log_level(sameval::LogLevel::Error);
  }
  doctest::Context context;
  context.applyCommandLine(argc, argv);
  return context.run();
}

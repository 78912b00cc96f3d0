// Runs the acceptance checks and prints one PASS/FAIL line per criterion.
// Usage: acceptance_test [ID...]   (no arguments runs every check)

#include <iostream>
#include <set>
#include <string>

#include "mereology/acceptance.hpp"

int main(int argc, char** argv) {
  namespace acc = mereology::acceptance;
  std::set<std::string> wanted(argv + 1, argv + argc);
  const acc::Options options;
  bool all = true;
  int ran = 0;
  for (const auto& check : acc::checks()) {
    if (!wanted.empty() && !wanted.count(check.id)) continue;
    const acc::CheckResult r = acc::run(check, options);
    std::cout << acc::summary_line(r) << '\n' << "    " << r.details.dump() << std::endl;
    all = all && r.pass;
    ++ran;
  }
  if (ran == 0) {
    std::cerr << "no matching checks\n";
    return 2;
  }
  return all ? 0 : 1;
}

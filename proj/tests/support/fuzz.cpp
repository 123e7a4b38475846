#include "fuzz.hpp"

#include <vector>

namespace ctxgen::testkit {

std::string SpecFuzzer::scalar() {
  static const char* names[] = {"a", "b", "n", "g"};
  return names[pick(4)];
}

std::string SpecFuzzer::pointer() {
  static const char* names[] = {"p", "q", "buf"};
  return names[pick(3)];
}

std::string SpecFuzzer::term() {
  switch (pick(10)) {
    case 0:
    case 1: return scalar();
    case 2: return std::to_string(pick(24) - 4);
    case 3: return scalar() + " + " + std::to_string(pick(5));
    case 4: return scalar() + " - " + scalar();
    case 5: return std::to_string(1 + pick(3)) + " * " + scalar();
    case 6: return scalar() + " % " + std::to_string(2 + pick(3));
    case 7: return std::string(pick(2) ? "*p" : "*q");
    case 8: return pointer() + "[" + std::to_string(pick(4)) + "]";
    default: return "(" + scalar() + " + " + scalar() + ") / 2";
  }
}

std::string SpecFuzzer::memory() {
  std::string p = pointer();
  switch (pick(6)) {
    case 0: return p;
    case 1: return p + " + " + std::to_string(pick(4));
    case 2: return p + " + (0 .. " + std::to_string(pick(5)) + ")";
    case 3: return p + " + (" + std::to_string(pick(3)) + " .. " + std::to_string(pick(6)) + ")";
    case 4: return p + " + (0 .. " + scalar() + " - 1)";
    default: return p + " + (" + scalar() + " .. " + std::to_string(pick(6)) + ")";
  }
}

std::string SpecFuzzer::literal() {
  static const char* cmps[] = {"==", "!=", "<", "<=", ">", ">="};
  static const char* kinds[] = {"\\valid", "\\valid_read", "\\initialized"};
  switch (pick(12)) {
    case 0:
    case 1:
    case 2:
    case 3: return term() + " " + cmps[pick(6)] + " " + term();
    case 4:
    case 5:
    case 6: return std::string(kinds[pick(3)]) + "(" + memory() + ")";
    case 7: return pick(2) ? "p == q" : "p == q + " + std::to_string(pick(4));
    case 8: return pick(2) ? "p != q" : "q != p + " + std::to_string(pick(3));
    case 9: return std::string("!") + kinds[pick(3)] + "(" + memory() + ")";
    case 10: return "0 <= " + scalar() + " <= " + std::to_string(pick(20));
    default: return scalar() + " " + cmps[pick(6)] + " " + std::to_string(pick(20) - 2);
  }
}

std::string SpecFuzzer::next() {
  int n = 1 + pick(5);
  std::vector<std::string> parts;
  for (int i = 0; i < n; ++i) parts.push_back(literal());
  if (pick(4) == 0) parts[pick(n)] = "(" + literal() + " || " + literal() + ")";
  std::string pre;
  for (std::size_t i = 0; i < parts.size(); ++i) pre += (i ? " && " : "") + parts[i];
  return "int g;\n/*@ requires " + pre +
         ";\n*/\nint f(int a, int b, unsigned int n, int *p, int *q, unsigned char *buf);\n";
}

}  // namespace ctxgen::testkit

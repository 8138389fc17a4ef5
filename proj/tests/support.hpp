#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kanopt/error.hpp"
#include "kanopt/fincat.hpp"
#include "kanopt/ordmon.hpp"

namespace kanopt::test {

inline FinCategoryPtr terminal_category() {
  return std::make_shared<const FinCategory>(
      make_category("one", {"star"}, {}));
}

inline FinCategoryPtr discrete_category(int n) {
  std::vector<std::string> objects;
  for (int i = 0; i < n; ++i) objects.push_back("d" + std::to_string(i));
  return std::make_shared<const FinCategory>(
      make_category("disc" + std::to_string(n), objects, {}));
}

// d0 --f--> d1
inline FinCategoryPtr chain2() {
  return std::make_shared<const FinCategory>(make_category(
      "chain2", {"d0", "d1"}, {{"f", ObjId{0}, ObjId{1}}}));
}

// d0 --f--> d1 --g--> d2, with h = g∘f
inline FinCategoryPtr chain3() {
  auto C = make_category("chain3", {"d0", "d1", "d2"},
                         {{"f", ObjId{0}, ObjId{1}},
                          {"g", ObjId{1}, ObjId{2}},
                          {"h", ObjId{0}, ObjId{2}}});
  set_composite(C, *C.find_morphism("g"), *C.find_morphism("f"),
                *C.find_morphism("h"));
  return std::make_shared<const FinCategory>(std::move(C));
}

inline MonoidalPreorderPtr max_carrier() {
  return std::make_shared<const MonoidalPreorder>(
      MonoidalPreorder{"max", MonoidalPreorder::Kind::max_rational, {}});
}

inline MonoidalPreorderPtr plus_carrier() {
  return std::make_shared<const MonoidalPreorder>(
      MonoidalPreorder{"plus", MonoidalPreorder::Kind::plus_rational, {}});
}

inline MonoidalPreorderPtr boolor_carrier() {
  return std::make_shared<const MonoidalPreorder>(
      MonoidalPreorder{"boolor", MonoidalPreorder::Kind::bool_or, {}});
}

// The two-element group {e, a} with the discrete order.
inline MonoidalPreorderPtr z2_carrier() {
  FiniteCarrier c;
  c.elements = {"e", "a"};
  c.unit = 0;
  c.op = {{0, 1}, {1, 0}};
  c.leq = {{true, false}, {false, true}};
  return std::make_shared<const MonoidalPreorder>(
      MonoidalPreorder{"z2", MonoidalPreorder::Kind::finite, std::move(c)});
}

inline ErrorValue rat(long long num, long long den = 1) {
  return ErrorValue{Rational(num, den)};
}

inline LaxErrorAssignment lax_error(FinCategoryPtr C, MonoidalPreorderPtr S,
                                    std::vector<ErrorValue> non_identity) {
  LaxErrorAssignment E;
  E.name = C->name + "_E";
  E.category = C;
  E.values = S;
  E.table.assign(C->morphism_count(), unit_value(*S));
  E.declared.assign(C->morphism_count(), true);
  for (std::size_t i = 0; i < non_identity.size(); ++i) {
    E.table[C->object_count() + i] = non_identity[i];
  }
  return E;
}

inline std::string fixture_path(const std::string& file) {
#ifdef KANOPT_FIXTURE_DIR
  return std::string(KANOPT_FIXTURE_DIR) + "/" + file;
#else
  return "fixtures/" + file;
#endif
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace kanopt::test

#include "jtsankov/model.hpp"

namespace jts {

const std::vector<std::string>& m14_labels() {
  static const std::vector<std::string> labels{"a1",  "a2",  "a3",  "a1*", "a2*", "a3*", "b11",
                                               "b12", "b21", "b22", "b31", "b32", "b41", "b42"};
  return labels;
}

Model0<Rational> build_M14() {
  const int n = 14;
  BilinearForm<Rational> g(n, n);
  for (int i = 1; i <= 3; ++i) {
    g(m14_alpha(i), m14_alpha_star(i)) = g(m14_alpha_star(i), m14_alpha(i)) = 1;
    g(m14_beta(i, 1), m14_beta(i, 2)) = g(m14_beta(i, 2), m14_beta(i, 1)) = 1;
  }
  const int b41 = m14_beta(4, 1), b42 = m14_beta(4, 2);
  g(b41, b41) = g(b42, b42) = Rational(-1, 2);
  g(b41, b42) = g(b42, b41) = Rational(1, 4);

  auto a = [](int i) { return m14_alpha(i); };
  auto b = [](int i, int j) { return m14_beta(i, j); };
  CurvatureTensor<Rational> t(n);
  t.set({a(2), a(1), a(1), b(2, 1)}, 1);
  t.set({a(3), a(1), a(1), b(3, 1)}, 1);
  t.set({a(3), a(2), a(2), b(3, 2)}, 1);
  t.set({a(1), a(2), a(2), b(1, 2)}, 1);
  t.set({a(1), a(3), a(3), b(1, 1)}, 1);
  t.set({a(2), a(3), a(3), b(2, 2)}, 1);
  const Rational mh(-1, 2);
  t.set({a(1), a(2), a(3), b41}, mh);
  t.set({a(1), a(3), a(2), b41}, mh);
  t.set({a(2), a(3), a(1), b42}, mh);
  t.set({a(2), a(1), a(3), b42}, mh);
  return Model0<Rational>(std::move(g), std::move(t), m14_labels());
}

}  // namespace jts

#pragma once

#include <doctest.h>

// Relative comparison. doctest::Approx alone adds an absolute slack of
// epsilon * 1, which hides errors in small quantities.
inline doctest::Approx near(double value, double rel = 1e-12) {
  return doctest::Approx(value).epsilon(rel).scale(0.0);
}

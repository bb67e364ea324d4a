#pragma once

#include <random>

#include "unimorph/geometry.hpp"

namespace testsupport {

using unimorph::Point;
using unimorph::Rational;
using unimorph::Vector;

inline long randInt(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational randRational(std::mt19937_64& rng, long maxAbsNum = 50,
                             long maxDen = 12) {
  return Rational(randInt(rng, -maxAbsNum, maxAbsNum), randInt(rng, 1, maxDen));
}

inline Point randPoint(std::mt19937_64& rng, long range = 40) {
  return {randRational(rng, range), randRational(rng, range)};
}

inline Vector randVector(std::mt19937_64& rng, long range = 40) {
  return {randRational(rng, range), randRational(rng, range)};
}

}  // namespace testsupport

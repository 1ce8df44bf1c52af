#pragma once

#include <doctest.h>

#include <algorithm>
#include <cmath>

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

#define CHECK_REL(a, b, tol) CHECK_MESSAGE(rel_diff((a), (b)) <= (tol), (a), " vs ", (b))
#define CHECK_ABS(a, b, tol) CHECK_MESSAGE(std::abs((a) - (b)) <= (tol), (a), " vs ", (b))

#pragma once

#include "bhxy/error.hpp"
#include "bhxy/graph.hpp"

#include <doctest.h>

#include <initializer_list>

// Checks that `expr` throws bhxy::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected)                          \
  do {                                                            \
    bool thrown_ = false;                                         \
    try {                                                         \
      (void)(expr);                                               \
    } catch (const bhxy::Error& e_) {                             \
      thrown_ = true;                                             \
      CHECK_MESSAGE(e_.kind() == (expected), e_.what());          \
    }                                                             \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);      \
  } while (0)

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline bhxy::Graph path2() { return bhxy::new_graph(mat({{0, 1}, {1, 0}})); }

inline bhxy::Graph complete(int k) {
  return bhxy::new_graph(Eigen::MatrixXd(Eigen::MatrixXd::Ones(k, k) - Eigen::MatrixXd::Identity(k, k)));
}

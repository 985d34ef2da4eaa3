#pragma once

#include <stdexcept>
#include <string>

namespace spmex {

/** Uniform radial grid on [0, R_p] with nodes r_i = i*dr, i = 0..n_shells. */
struct RadialGrid {
  int n_shells = 0;
  double R_p = 0;

  RadialGrid() = default;
  RadialGrid(int n_shells_, double R_p_) : n_shells(n_shells_), R_p(R_p_) {
    if (n_shells < 8)
      throw std::invalid_argument("n_shells = " + std::to_string(n_shells) +
                                  " must be at least 8");
    if (!(R_p > 0))
      throw std::invalid_argument("R_p must be positive");
  }

  int n_nodes() const { return n_shells + 1; }
  double dr() const { return R_p / n_shells; }
  double r(int i) const { return i * dr(); }
};

enum class Region { Neg, Sep, Pos };

/** Three-region planar grid on [0, l_neg+l_sep+l_pos], uniform within each
 *  region, nodes shared at the region interfaces.  n_* count intervals. */
struct PlanarGrid {
  int n_neg = 0, n_sep = 0, n_pos = 0;
  double l_neg = 0, l_sep = 0, l_pos = 0;

  PlanarGrid() = default;
  PlanarGrid(int n_neg_, int n_sep_, int n_pos_, double l_neg_, double l_sep_, double l_pos_)
      : n_neg(n_neg_), n_sep(n_sep_), n_pos(n_pos_),
        l_neg(l_neg_), l_sep(l_sep_), l_pos(l_pos_) {
    auto check = [](int n, const char* name) {
      if (n < 4)
        throw std::invalid_argument(std::string(name) + " = " + std::to_string(n) +
                                    " must be at least 4");
    };
    check(n_neg, "n_neg");
    check(n_sep, "n_sep");
    check(n_pos, "n_pos");
    if (!(l_neg > 0) || !(l_sep > 0) || !(l_pos > 0))
      throw std::invalid_argument("region thicknesses must be positive");
  }

  int n_intervals() const { return n_neg + n_sep + n_pos; }
  int n_nodes() const { return n_intervals() + 1; }

  Region region_of_interval(int k) const {
    if (k < n_neg) return Region::Neg;
    if (k < n_neg + n_sep) return Region::Sep;
    return Region::Pos;
  }

  double dx(int k) const {
    switch (region_of_interval(k)) {
      case Region::Neg: return l_neg / n_neg;
      case Region::Sep: return l_sep / n_sep;
      default: return l_pos / n_pos;
    }
  }

  // node index ranges per region (interface nodes belong to both neighbours)
  int first_node(Region r) const {
    if (r == Region::Neg) return 0;
    if (r == Region::Sep) return n_neg;
    return n_neg + n_sep;
  }
  int last_node(Region r) const {
    if (r == Region::Neg) return n_neg;
    if (r == Region::Sep) return n_neg + n_sep;
    return n_intervals();
  }
};

} // namespace spmex

#pragma once

#include <optional>
#include <vector>

#include "posethdx/poset.hpp"

namespace posethdx {

// Integer structure constant observed over a family of configurations.
struct CountStat {
  long long configs = 0;
  long long lo = 0;
  long long hi = 0;

  void add(long long v) {
    if (configs == 0) {
      lo = hi = v;
    } else {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    ++configs;
  }
  bool uniform() const { return configs > 0 && lo == hi; }
  void merge(const CountStat& o) {
    if (o.configs == 0) return;
    if (configs == 0) {
      *this = o;
    } else {
      lo = std::min(lo, o.lo);
      hi = std::max(hi, o.hi);
      configs += o.configs;
    }
  }
};

// Real-valued constant reported as midpoint +/- half-range over the scan.
struct IntervalConstant {
  long long configs = 0;
  double lo = 0.0;
  double hi = 0.0;

  void add(double v) {
    if (configs == 0) {
      lo = hi = v;
    } else {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    ++configs;
  }
  double value() const { return 0.5 * (lo + hi); }
  double deviation() const { return 0.5 * (hi - lo); }
};

// Tolerance separating "exact" constants from approximate ones.
inline constexpr double kExactTol = 1e-9;

struct RegularityReport {
  int d = -1;
  std::vector<CountStat> lower;   // index i = 0..d: children per element of P(i)
  std::vector<CountStat> middle;  // index i = 0..d-1: elements between P(i-1) and P(i+1)
  std::vector<CountStat> wedge;   // index i = 0..d-1: common children of sibling pairs
  CountStat wye;                  // chains between vertex pairs under a rank-2 element

  bool lower_regular = false;
  bool middle_regular = false;
  bool wedge_regular = false;
  bool wye_regular = false;
  bool regular = false;               // lower + middle + wedge
  bool two_skeleton_regular = false;  // lower at 1,2 + middle at 1 + wye

  struct LocalRow {
    int level = 0;  // rank of the link bases, -1..d-3
    CountStat lower1, lower2, middle1, wye;
  };
  std::vector<LocalRow> local;
  bool locally_two_skeleton_regular = false;
};

RegularityReport detect_regularity(const GradedPoset& poset);

struct ULReport {
  int d = -1;
  // Per level l = 0..d-1. "single" couples a cover pair (y, x) through the
  // children of y; "pair" couples two siblings through their common
  // children; "square" is the squared-transition mass ratio.
  std::vector<IntervalConstant> single;
  std::vector<IntervalConstant> pair;
  std::vector<IntervalConstant> square;
  bool exact = false;

  double unified_eps(int l) const {
    return std::max({single[l].deviation(), pair[l].deviation(), square[l].deviation()});
  }
};

ULReport check_UL(const GradedPoset& poset, const WeightScheme& weights);

struct ALReport {
  int d = -1;
  std::vector<long long> configs;             // per level l = 0..d-1
  std::vector<double> max_relative_deviation;  // per level
  double worst = 0.0;
  bool exact = false;
};

ALReport check_AL(const GradedPoset& poset, const WeightScheme& weights);

struct TLReport {
  IntervalConstant same;      // one base vertex
  IntervalConstant diff;      // two distinct base vertices
  IntervalConstant same2;     // one base vertex, rank-2 configurations
  IntervalConstant diff2;     // two base vertices, rank-2 configurations
  bool exact = false;
};

TLReport check_TL(const GradedPoset& poset, const WeightScheme& weights);

struct PredictedConstants {
  // Per level 0..d-1, derived from the regularity constants.
  std::vector<double> c_single;
  std::vector<double> c_pair;
  std::vector<double> c_square;
  std::optional<double> c_same, c_diff, c_same2, c_diff2;
};

PredictedConstants constants_from_regularity(const RegularityReport& report);

}  // namespace posethdx
